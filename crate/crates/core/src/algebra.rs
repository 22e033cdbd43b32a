//! Finite algebras over a finite signature, stored as flat operation tables,
//! and the line-oriented `.alg` text format.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

/// One operation symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols. The position of a symbol is its
/// operation index everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

fn valid_identifier(name: &str) -> bool {
    !name.is_empty()
        && name != "x"
        && name != "_"
        && !name
            .chars()
            .any(|c| c.is_whitespace() || "(),#|@".contains(c))
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if !valid_identifier(&name) {
                return Err(Error::input(format!("invalid operation name {name:?}")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::input(format!("duplicate operation name {name:?}")));
            }
            out.push(Symbol { name, arity });
        }
        Ok(Signature { symbols: out })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, op: usize) -> usize {
        self.symbols[op].arity
    }

    pub fn name(&self, op: usize) -> &str {
        &self.symbols[op].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        Ok(())
    }
}

/// A unary self-map induced by an elementary term: operation `op` with the
/// distinguished variable in slot `pos` and the remaining slots filled by
/// `params` in left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryMap {
    pub op: usize,
    pub pos: usize,
    pub params: Vec<usize>,
    pub map: Vec<usize>,
}

/// A finite algebra on the carrier `{0, .., size-1}`.
///
/// Immutable after construction. The deduplicated elementary translations
/// are computed once here since every closure algorithm iterates over them.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    elementary: Vec<ElementaryMap>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.size == other.size && self.tables == other.tables
    }
}

impl Eq for FiniteAlgebra {}

pub(crate) fn table_len(size: usize, arity: usize) -> Option<usize> {
    let mut len = 1usize;
    for _ in 0..arity {
        len = len.checked_mul(size)?;
    }
    Some(len)
}

/// Decodes a table index into its argument tuple (first argument most
/// significant).
pub(crate) fn decode_tuple(mut index: usize, size: usize, arity: usize, out: &mut [usize]) {
    for slot in (0..arity).rev() {
        out[slot] = index % size;
        index /= size;
    }
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::input("carrier must be nonempty"));
        }
        if tables.len() != signature.len() {
            return Err(Error::input(format!(
                "{} tables for {} operations",
                tables.len(),
                signature.len()
            )));
        }
        for (op, table) in tables.iter().enumerate() {
            let arity = signature.arity(op);
            let expected = table_len(size, arity).ok_or_else(|| {
                Error::input(format!("table for {} is too large", signature.name(op)))
            })?;
            if table.len() != expected {
                return Err(Error::input(format!(
                    "table for {} has {} entries, expected {}",
                    signature.name(op),
                    table.len(),
                    expected
                )));
            }
            if let Some(v) = table.iter().find(|&&v| v >= size) {
                return Err(Error::input(format!(
                    "table for {} contains {v}, outside the carrier",
                    signature.name(op)
                )));
            }
        }
        let mut algebra = FiniteAlgebra {
            name: name.into(),
            signature,
            size,
            tables,
            labels: None,
            elementary: Vec::new(),
        };
        algebra.elementary = algebra.compute_elementary();
        Ok(algebra)
    }

    fn compute_elementary(&self) -> Vec<ElementaryMap> {
        let n = self.size;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out = Vec::new();
        let mut args = vec![0; 8];
        for op in 0..self.signature.len() {
            let k = self.signature.arity(op);
            if k == 0 {
                continue;
            }
            args.resize(k, 0);
            let assignments = table_len(n, k - 1).expect("table size already validated");
            let mut params = vec![0; k - 1];
            for pos in 0..k {
                for code in 0..assignments {
                    decode_tuple(code, n, k - 1, &mut params);
                    let mut map = Vec::with_capacity(n);
                    for a in 0..n {
                        fill_args(&mut args, pos, a, &params);
                        map.push(self.apply(op, &args));
                    }
                    if seen.insert(map.clone()) {
                        out.push(ElementaryMap {
                            op,
                            pos,
                            params: params.clone(),
                            map,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    /// Applies operation `op` to `args`.
    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.signature.arity(op));
        let mut index = 0;
        for &a in args {
            index = index * self.size + a;
        }
        self.tables[op][index]
    }

    /// Deduplicated translations induced by the depth-one terms, in the order
    /// (operation, slot, parameters) of first occurrence.
    pub fn elementary_maps(&self) -> &[ElementaryMap] {
        &self.elementary
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::input("label count does not match the carrier size"));
        }
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::input("labels must be distinct"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Element name for reports: the label when one is attached.
    pub fn element_name(&self, e: usize) -> String {
        match &self.labels {
            Some(l) => l[e].clone(),
            None => e.to_string(),
        }
    }

    /// Parses an element token: a label, when labels are attached, or a
    /// decimal index.
    pub fn parse_element(&self, token: &str) -> Result<usize> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == token) {
                return Ok(i);
            }
        }
        let e: usize = token
            .parse()
            .map_err(|_| Error::input(format!("unknown element {token:?}")))?;
        if e >= self.size {
            return Err(Error::input(format!(
                "element {e} outside carrier of size {}",
                self.size
            )));
        }
        Ok(e)
    }

    /// Index of the first nullary operation's value, if any.
    pub fn first_constant(&self) -> Option<usize> {
        (0..self.signature.len())
            .find(|&op| self.signature.arity(op) == 0)
            .map(|op| self.tables[op][0])
    }

    /// Serializes to the `.alg` text format.
    pub fn to_alg(&self) -> String {
        let mut out = String::new();
        writeln!(out, "algebra {}", self.name).unwrap();
        writeln!(out, "size {}", self.size).unwrap();
        for (op, sym) in self.signature.symbols().iter().enumerate() {
            writeln!(out, "op {} {}", sym.name, sym.arity).unwrap();
            let row = if sym.arity == 0 { 1 } else { self.size };
            for chunk in self.tables[op].chunks(row) {
                let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}", line.join(" ")).unwrap();
            }
        }
        out
    }

    /// Parses the `.alg` text format.
    pub fn parse_alg(text: &str) -> Result<Self> {
        parse_alg(text)
    }
}

#[inline]
pub(crate) fn fill_args(args: &mut [usize], pos: usize, x: usize, params: &[usize]) {
    let (before, after) = params.split_at(pos);
    args[..pos].copy_from_slice(before);
    args[pos] = x;
    args[pos + 1..].copy_from_slice(after);
}

fn parse_alg(text: &str) -> Result<FiniteAlgebra> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    // (line number, token)
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        tokens.extend(content.split_whitespace().map(|t| (i + 1, t)));
    }
    let last_line = text.lines().count().max(1);
    let mut it = tokens.into_iter().peekable();

    let expect_word = |it: &mut std::iter::Peekable<std::vec::IntoIter<(usize, &str)>>,
                       word: &str|
     -> Result<usize> {
        match it.next() {
            Some((l, t)) if t == word => Ok(l),
            Some((l, t)) => Err(err(l, format!("expected `{word}`, found `{t}`"))),
            None => Err(err(
                last_line,
                format!("expected `{word}`, found end of input"),
            )),
        }
    };

    expect_word(&mut it, "algebra")?;
    let name = match it.next() {
        Some((l, t)) if t == "size" || t == "op" => {
            return Err(err(l, "missing algebra name".into()))
        }
        Some((_, t)) => t.to_string(),
        None => return Err(err(last_line, "missing algebra name".into())),
    };
    expect_word(&mut it, "size")?;
    let size = match it.next() {
        Some((l, t)) => match t.parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                return Err(err(
                    l,
                    format!("size must be a positive integer, found `{t}`"),
                ))
            }
        },
        None => return Err(err(last_line, "missing size".into())),
    };

    let mut symbols = Vec::new();
    let mut tables = Vec::new();
    while let Some((line, word)) = it.next() {
        if word != "op" {
            return Err(err(line, format!("expected `op`, found `{word}`")));
        }
        let (l, op_name) = it
            .next()
            .ok_or_else(|| err(line, "missing operation name".into()))?;
        if !valid_identifier(op_name) {
            return Err(err(l, format!("invalid operation name `{op_name}`")));
        }
        let (l, arity_tok) = it.next().ok_or_else(|| err(line, "missing arity".into()))?;
        let arity: usize = arity_tok.parse().map_err(|_| {
            err(
                l,
                format!("arity must be a non-negative integer, found `{arity_tok}`"),
            )
        })?;
        let count = table_len(size, arity)
            .filter(|&c| c <= 1 << 28)
            .ok_or_else(|| err(l, format!("table for `{op_name}` is too large")))?;
        let mut table = Vec::with_capacity(count);
        for _ in 0..count {
            match it.peek() {
                Some(&(l, "op")) => {
                    return Err(err(
                        l,
                        format!(
                            "table for `{op_name}` has {} entries, expected {count}",
                            table.len()
                        ),
                    ))
                }
                Some(&(l, t)) => {
                    let v: usize = t
                        .parse()
                        .map_err(|_| err(l, format!("expected a table entry, found `{t}`")))?;
                    if v >= size {
                        return Err(err(
                            l,
                            format!("table entry {v} outside carrier of size {size}"),
                        ));
                    }
                    table.push(v);
                    it.next();
                }
                None => {
                    return Err(err(
                        last_line,
                        format!(
                            "table for `{op_name}` has {} entries, expected {count}",
                            table.len()
                        ),
                    ))
                }
            }
        }
        symbols.push((op_name.to_string(), arity));
        tables.push(table);
    }
    let signature = Signature::new(symbols).map_err(|e| err(last_line, e.to_string()))?;
    FiniteAlgebra::new(name, signature, size, tables)
}
