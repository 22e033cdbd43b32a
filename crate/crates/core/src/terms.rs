//! Terms with one distinguished variable `x` and fresh parameter slots.
//!
//! A term is a spine: every operation node has exactly one child that
//! contains `x`; all other children are parameter slots, each a distinct
//! variable. Slots are therefore implicit and a node only records which
//! argument position holds the spine.

use std::cmp::Ordering;
use std::fmt;

use crate::algebra::Signature;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermX {
    X,
    App {
        op: usize,
        arity: usize,
        pos: usize,
        child: Box<TermX>,
    },
}

impl TermX {
    pub fn app(op: usize, arity: usize, pos: usize, child: TermX) -> TermX {
        assert!(pos < arity, "x slot {pos} out of range for arity {arity}");
        TermX::App {
            op,
            arity,
            pos,
            child: Box::new(child),
        }
    }

    /// Number of operation nodes between the root and `x`.
    pub fn depth(&self) -> usize {
        let mut d = 0;
        let mut t = self;
        while let TermX::App { child, .. } = t {
            d += 1;
            t = child;
        }
        d
    }

    pub fn param_count(&self) -> usize {
        let mut c = 0;
        let mut t = self;
        while let TermX::App { arity, child, .. } = t {
            c += arity - 1;
            t = child;
        }
        c
    }

    /// Replaces `x` by `inner`. Parameters of `inner` stay distinct from the
    /// outer ones because slots are positional.
    pub fn substitute(&self, inner: &TermX) -> TermX {
        match self {
            TermX::X => inner.clone(),
            TermX::App {
                op,
                arity,
                pos,
                child,
            } => TermX::app(*op, *arity, *pos, child.substitute(inner)),
        }
    }

    /// Evaluates the term at `x` with parameters in left-to-right textual
    /// order.
    pub fn eval(&self, algebra: &crate::FiniteAlgebra, x: usize, params: &[usize]) -> usize {
        debug_assert_eq!(params.len(), self.param_count());
        let mut args = Vec::new();
        self.eval_inner(algebra, x, params, &mut args)
    }

    fn eval_inner(
        &self,
        algebra: &crate::FiniteAlgebra,
        x: usize,
        params: &[usize],
        args: &mut Vec<usize>,
    ) -> usize {
        match self {
            TermX::X => x,
            TermX::App {
                op,
                arity,
                pos,
                child,
            } => {
                let inner_len = child.param_count();
                let (before, rest) = params.split_at(*pos);
                let (inner, after) = rest.split_at(inner_len);
                let v = child.eval_inner(algebra, x, inner, args);
                args.clear();
                args.extend_from_slice(before);
                args.push(v);
                args.extend_from_slice(after);
                debug_assert_eq!(args.len(), *arity);
                algebra.apply(*op, args)
            }
        }
    }

    /// Checks that every node names an operation of `sig` with its arity.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        let mut t = self;
        while let TermX::App {
            op, arity, child, ..
        } = t
        {
            if *op >= sig.len() || sig.arity(*op) != *arity || *arity == 0 {
                return Err(Error::input(format!(
                    "term uses operation #{op}/{arity}, not in signature {sig}"
                )));
            }
            t = child;
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }

    /// Parses the literal syntax `op(_, x)`, `op(op2(x,_),_)`, `x`.
    pub fn parse(sig: &Signature, text: &str) -> Result<TermX> {
        let mut p = TermParser {
            sig,
            src: text,
            at: 0,
        };
        let (t, has_x) = p.node()?;
        p.skip_ws();
        if p.at != text.len() {
            return Err(p.error("trailing input"));
        }
        if !has_x {
            return Err(Error::input(format!("term {text:?} does not contain x")));
        }
        Ok(t.expect("spine"))
    }
}

/// Canonical order: depth, then root operation, then x slot, then the
/// child in the same order.
impl Ord for TermX {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth()
            .cmp(&other.depth())
            .then_with(|| self.cmp_shape(other))
    }
}

impl PartialOrd for TermX {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TermX {
    fn cmp_shape(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TermX::X, TermX::X) => Ordering::Equal,
            (TermX::X, _) => Ordering::Less,
            (_, TermX::X) => Ordering::Greater,
            (
                TermX::App {
                    op: o1,
                    arity: a1,
                    pos: p1,
                    child: c1,
                },
                TermX::App {
                    op: o2,
                    arity: a2,
                    pos: p2,
                    child: c2,
                },
            ) => o1
                .cmp(o2)
                .then(a1.cmp(a2))
                .then(p1.cmp(p2))
                .then_with(|| c1.cmp_shape(c2)),
        }
    }
}

pub struct TermDisplay<'a> {
    term: &'a TermX,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            TermX::X => f.write_str("x"),
            TermX::App {
                op,
                arity,
                pos,
                child,
            } => {
                write!(f, "{}(", self.sig.name(*op))?;
                for i in 0..*arity {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    if i == *pos {
                        write!(f, "{}", child.display(self.sig))?;
                    } else {
                        f.write_str("_")?;
                    }
                }
                f.write_str(")")
            }
        }
    }
}

struct TermParser<'a> {
    sig: &'a Signature,
    src: &'a str,
    at: usize,
}

impl TermParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::input(format!("term {:?} at offset {}: {msg}", self.src, self.at))
    }

    fn skip_ws(&mut self) {
        while self.src[self.at..].starts_with(char::is_whitespace) {
            self.at += self.src[self.at..].chars().next().unwrap().len_utf8();
        }
    }

    /// Returns the subterm (None for a parameter slot) and whether it
    /// contains x.
    fn node(&mut self) -> Result<(Option<TermX>, bool)> {
        self.skip_ws();
        let rest = &self.src[self.at..];
        let end = rest
            .find(|c: char| c == '(' || c == ')' || c == ',' || c.is_whitespace())
            .unwrap_or(rest.len());
        let word = &rest[..end];
        if word.is_empty() {
            return Err(self.error("expected a term"));
        }
        self.at += end;
        self.skip_ws();
        let opens = self.src[self.at..].starts_with('(');
        if !opens {
            return match word {
                "x" => Ok((Some(TermX::X), true)),
                "_" => Ok((None, false)),
                _ => Err(self.error(&format!("`{word}` is neither x, _ nor an application"))),
            };
        }
        let op = self
            .sig
            .index_of(word)
            .ok_or_else(|| self.error(&format!("unknown operation `{word}`")))?;
        self.at += 1;
        let mut spine = None;
        let mut count = 0;
        loop {
            let (child, has_x) = self.node()?;
            if has_x {
                if spine.is_some() {
                    return Err(self.error("x occurs more than once"));
                }
                spine = Some((count, child.expect("spine")));
            }
            count += 1;
            self.skip_ws();
            if self.src[self.at..].starts_with(',') {
                self.at += 1;
            } else if self.src[self.at..].starts_with(')') {
                self.at += 1;
                break;
            } else {
                return Err(self.error("expected `,` or `)`"));
            }
        }
        let arity = self.sig.arity(op);
        if count != arity {
            return Err(self.error(&format!("`{word}` takes {arity} arguments, got {count}")));
        }
        match spine {
            Some((pos, child)) => Ok((Some(TermX::app(op, arity, pos, child)), true)),
            None => Err(self.error(&format!("application of `{word}` does not contain x"))),
        }
    }
}

/// A duplicate-free set of terms in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TermSet {
    terms: Vec<TermX>,
}

impl TermSet {
    pub fn new(terms: impl IntoIterator<Item = TermX>) -> Self {
        let mut terms: Vec<TermX> = terms.into_iter().collect();
        terms.sort();
        terms.dedup();
        TermSet { terms }
    }

    pub fn x() -> Self {
        TermSet {
            terms: vec![TermX::X],
        }
    }

    pub fn terms(&self) -> &[TermX] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &TermX) -> bool {
        self.terms.binary_search(t).is_ok()
    }

    pub fn is_subset(&self, other: &TermSet) -> bool {
        self.terms.iter().all(|t| other.contains(t))
    }

    pub fn union(&self, other: &TermSet) -> TermSet {
        TermSet::new(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn max_depth(&self) -> usize {
        self.terms.last().map_or(0, TermX::depth)
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.terms.iter().try_for_each(|t| t.check(sig))
    }

    /// Parses literals separated by `;`.
    pub fn parse(sig: &Signature, text: &str) -> Result<TermSet> {
        let terms = text
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| TermX::parse(sig, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(TermSet::new(terms))
    }

    pub fn render(&self, sig: &Signature) -> String {
        self.terms
            .iter()
            .map(|t| t.display(sig).to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl FromIterator<TermX> for TermSet {
    fn from_iter<I: IntoIterator<Item = TermX>>(iter: I) -> Self {
        TermSet::new(iter)
    }
}

/// One depth-one term per (operation of positive arity, x slot).
pub fn elementary_terms(sig: &Signature) -> TermSet {
    let mut out = Vec::new();
    for (op, s) in sig.symbols().iter().enumerate() {
        for pos in 0..s.arity {
            out.push(TermX::app(op, s.arity, pos, TermX::X));
        }
    }
    TermSet::new(out)
}

/// All terms of depth at most `max_depth`.
pub fn enumerate_terms(sig: &Signature, max_depth: usize) -> TermSet {
    let elementary = elementary_terms(sig);
    let mut layer = vec![TermX::X];
    let mut all = layer.clone();
    for _ in 0..max_depth {
        let mut next = Vec::with_capacity(layer.len() * elementary.len());
        for e in elementary.terms() {
            for t in &layer {
                next.push(e.substitute(t));
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    TermSet::new(all)
}

/// `F∘G`: every G-term substituted for the x of every F-term.
pub fn compose_sets(outer: &TermSet, inner: &TermSet) -> TermSet {
    let mut out = Vec::with_capacity(outer.len() * inner.len());
    for s in outer.terms() {
        for t in inner.terms() {
            out.push(s.substitute(t));
        }
    }
    TermSet::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dot() -> Signature {
        Signature::new([(".", 2)]).unwrap()
    }

    fn q_sig() -> Signature {
        Signature::new([("meet", 2), ("prod", 2), ("zero", 0)]).unwrap()
    }

    fn lit(sig: &Signature, s: &str) -> TermX {
        TermX::parse(sig, s).unwrap()
    }

    #[test]
    fn elementary_examples() {
        let sig = dot();
        let e = elementary_terms(&sig);
        assert_eq!(e.render(&sig), ".(x,_); .(_,x)");
        let q = q_sig();
        assert_eq!(
            elementary_terms(&q).render(&q),
            "meet(x,_); meet(_,x); prod(x,_); prod(_,x)"
        );
        let c = Signature::new([("c", 0)]).unwrap();
        assert!(elementary_terms(&c).is_empty());
    }

    #[test]
    fn enumeration_counts() {
        let sig = dot();
        assert_eq!(enumerate_terms(&sig, 0), TermSet::x());
        assert_eq!(enumerate_terms(&sig, 1).render(&sig), "x; .(x,_); .(_,x)");
        let d2 = enumerate_terms(&sig, 2);
        // oracle: 1 + 2 + 2·2
        assert_eq!(d2.len(), 1 + 2 + 2 * 2);
        for s in [".(.(x,_),_)", ".(.(_,x),_)", ".(_,.(x,_))", ".(_,.(_,x))"] {
            assert!(d2.contains(&lit(&sig, s)), "{s}");
        }
        assert_eq!(enumerate_terms(&q_sig(), 3).len(), 1 + 4 + 16 + 64);
        assert_eq!(
            enumerate_terms(&Signature::new([("c", 0)]).unwrap(), 5),
            TermSet::x()
        );
    }

    #[test]
    fn canonical_order() {
        let sig = q_sig();
        let set = enumerate_terms(&sig, 2);
        let terms = set.terms();
        assert!(terms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(terms[0], TermX::X);
        assert_eq!(terms[1].display(&sig).to_string(), "meet(x,_)");
        assert_eq!(terms[5].display(&sig).to_string(), "meet(meet(x,_),_)");
    }

    #[test]
    fn composition_examples() {
        let sig = Signature::new([(".", 2), ("meet", 2)]).unwrap();
        let g = TermSet::new([lit(&sig, "meet(_,x)"), lit(&sig, ".(x,_)")]);
        assert_eq!(compose_sets(&TermSet::x(), &g), g);
        let f = TermSet::new([lit(&sig, ".(x,_)")]);
        let g = TermSet::new([lit(&sig, ".(_,x)")]);
        assert_eq!(
            compose_sets(&f, &g),
            TermSet::new([lit(&sig, ".(.(_,x),_)")])
        );
        let f = TermSet::new([lit(&sig, ".(x,_)"), lit(&sig, ".(_,x)")]);
        let g = TermSet::new([lit(&sig, "meet(x,_)")]);
        let fg = compose_sets(&f, &g);
        assert_eq!(fg.render(&sig), ".(meet(x,_),_); .(_,meet(x,_))");
    }

    #[test]
    fn literal_parsing() {
        let sig = q_sig();
        let t = lit(&sig, " prod( meet(x,_) , _ )");
        assert_eq!(t.depth(), 2);
        assert_eq!(t.param_count(), 2);
        assert_eq!(t.display(&sig).to_string(), "prod(meet(x,_),_)");
        for bad in [
            "",
            "_",
            "y",
            "meet(x,x)",
            "meet(_,_)",
            "meet(x)",
            "nope(x,_)",
            "meet(x,_) z",
            "zero()",
        ] {
            assert!(TermX::parse(&sig, bad).is_err(), "{bad:?}");
        }
        let set = TermSet::parse(&sig, "x; meet(_,x);x").unwrap();
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn signature_check() {
        let sig = q_sig();
        let t = lit(&sig, "prod(x,_)");
        assert!(t.check(&sig).is_ok());
        let other = Signature::new([("prod", 1)]).unwrap();
        assert!(t.check(&other).is_err());
    }

    proptest! {
        #[test]
        fn enumeration_is_increasing(d in 0usize..4) {
            let sig = Signature::new([("f", 1), ("g", 2), ("h", 3)]).unwrap();
            let lo = enumerate_terms(&sig, d);
            let hi = enumerate_terms(&sig, d + 1);
            prop_assert!(lo.is_subset(&hi));
            for t in hi.terms() {
                prop_assert!(t.depth() <= d + 1);
                prop_assert_eq!(TermX::parse(&sig, &t.display(&sig).to_string()).unwrap(), t.clone());
            }
        }
    }
}
