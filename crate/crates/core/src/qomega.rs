//! Finite truncations `Q_n` of the algebra on `{0, a_0, b_0, a_1, b_1, ...}`
//! with the diagonal meet and the cascade product `a_i · b_{i+1} = b_i`.

use std::fmt::{self, Write as _};

use crate::algebra::{FiniteAlgebra, Signature};
use crate::analysis::{theta_upper_graph, verify_witness, MalcevWitness};
use crate::congruence::{generate_congruence, principal_congruences};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::terms::enumerate_terms;
use crate::translations::TranslationTable;

/// The element denoted by a label of `Q_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QLabel {
    Zero,
    A(usize),
    B(usize),
}

impl QLabel {
    pub fn index(self) -> usize {
        match self {
            QLabel::Zero => 0,
            QLabel::A(i) => 2 * i + 1,
            QLabel::B(i) => 2 * i + 2,
        }
    }

    pub fn of_index(e: usize) -> QLabel {
        match e {
            0 => QLabel::Zero,
            e if e % 2 == 1 => QLabel::A((e - 1) / 2),
            e => QLabel::B((e - 2) / 2),
        }
    }
}

impl fmt::Display for QLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QLabel::Zero => f.write_str("0"),
            QLabel::A(i) => write!(f, "a_{i}"),
            QLabel::B(i) => write!(f, "b_{i}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QOmegaTruncation {
    pub n: usize,
    pub algebra: FiniteAlgebra,
}

impl QOmegaTruncation {
    pub fn meet(&self) -> usize {
        0
    }

    pub fn prod(&self) -> usize {
        1
    }

    pub fn label(&self, e: usize) -> QLabel {
        QLabel::of_index(e)
    }

    pub fn element(&self, label: QLabel) -> usize {
        label.index()
    }
}

fn meet_rule(x: QLabel, y: QLabel) -> QLabel {
    if x == y {
        x
    } else {
        QLabel::Zero
    }
}

fn prod_rule(x: QLabel, y: QLabel) -> QLabel {
    match (x, y) {
        (QLabel::A(i), QLabel::B(j)) if j == i + 1 => QLabel::B(i),
        _ => QLabel::Zero,
    }
}

pub fn labels(n: usize) -> Vec<String> {
    (0..2 * n + 1)
        .map(|e| QLabel::of_index(e).to_string())
        .collect()
}

pub fn signature() -> Signature {
    Signature::new([("meet", 2), ("prod", 2), ("zero", 0)]).expect("fixed signature")
}

/// Builds `Q_n` with carrier `0, a_0, b_0, ..., a_{n-1}, b_{n-1}` laid out as
/// `0 ↦ 0, a_i ↦ 2i+1, b_i ↦ 2i+2`. The product `a_{n-1}·b_n` has no target
/// in the truncation and falls to 0.
pub fn make_qn(n: usize) -> Result<QOmegaTruncation> {
    if n == 0 {
        return Err(Error::input("Q_n needs n >= 1"));
    }
    let size = 2 * n + 1;
    let mut meet = vec![0; size * size];
    let mut prod = vec![0; size * size];
    for x in 0..size {
        meet[x * size + x] = x;
    }
    for i in 0..n - 1 {
        prod[(2 * i + 1) * size + (2 * (i + 1) + 2)] = 2 * i + 2;
    }
    let algebra = FiniteAlgebra::new(
        format!("Q{n}"),
        signature(),
        size,
        vec![meet, prod, vec![0]],
    )?
    .with_labels(labels(n))?;
    Ok(QOmegaTruncation { n, algebra })
}

/// Attaches `Q_n` labels to an algebra whose tables are exactly those of
/// some `Q_n`.
pub fn attach_labels(algebra: FiniteAlgebra) -> FiniteAlgebra {
    let size = algebra.size();
    if size % 2 == 1 && algebra.signature() == &signature() {
        let n = size / 2;
        if n >= 1 && make_qn(n).map(|q| q.algebra == algebra).unwrap_or(false) {
            return algebra.clone().with_labels(labels(n)).unwrap_or(algebra);
        }
    }
    algebra
}

/// Table entries that disagree with the defining case splits, evaluated on
/// labels. Empty for a correct `Q_n`.
pub fn audit_tables(q: &QOmegaTruncation) -> Vec<(String, usize, usize)> {
    let a = &q.algebra;
    let size = a.size();
    let mut bad = Vec::new();
    for x in 0..size {
        for y in 0..size {
            let (lx, ly) = (QLabel::of_index(x), QLabel::of_index(y));
            if QLabel::of_index(a.apply(q.meet(), &[x, y])) != meet_rule(lx, ly) {
                bad.push(("meet".to_string(), x, y));
            }
            if QLabel::of_index(a.apply(q.prod(), &[x, y])) != prod_rule(lx, ly) {
                bad.push(("prod".to_string(), x, y));
            }
        }
    }
    if a.table(2) != [0] {
        bad.push(("zero".to_string(), 0, 0));
    }
    bad
}

/// Result of comparing `Q_n` with `Q_{n+1}` on labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingAudit {
    /// Label pairs of `Q_n` on which the two algebras disagree.
    pub disagreements: Vec<(String, QLabel, QLabel)>,
    /// Pairs with an argument outside `Q_n` whose value in `Q_{n+1}` is a
    /// nonzero element of `Q_n`.
    pub reaching_back: Vec<(String, QLabel, QLabel)>,
}

pub fn audit_embedding(n: usize) -> Result<EmbeddingAudit> {
    let small = make_qn(n)?;
    let big = make_qn(n + 1)?;
    let s = small.algebra.size();
    let b = big.algebra.size();
    let mut audit = EmbeddingAudit {
        disagreements: Vec::new(),
        reaching_back: Vec::new(),
    };
    for (op, name) in [(0, "meet"), (1, "prod")] {
        for x in 0..b {
            for y in 0..b {
                let v = big.algebra.apply(op, &[x, y]);
                let (lx, ly) = (QLabel::of_index(x), QLabel::of_index(y));
                if x < s && y < s {
                    if small.algebra.apply(op, &[x, y]) != v {
                        audit.disagreements.push((name.into(), lx, ly));
                    }
                } else if v != 0 && v < s {
                    audit.reaching_back.push((name.into(), lx, ly));
                }
            }
        }
    }
    Ok(audit)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceViolation(pub Vec<usize>);

fn zero_and_binary(algebra: &FiniteAlgebra, op: &str) -> Result<(usize, usize)> {
    let index = algebra
        .signature()
        .index_of(op)
        .ok_or_else(|| Error::input(format!("no operation named {op:?}")))?;
    if algebra.signature().arity(index) != 2 {
        return Err(Error::input(format!("{op} is not binary")));
    }
    let zero = algebra
        .first_constant()
        .ok_or_else(|| Error::input("no constant declared"))?;
    Ok((index, zero))
}

/// `x∘y ≠ 0 → (x ≠ 0 ∧ y ≠ 0)` over all pairs.
pub fn check_sentence_1(algebra: &FiniteAlgebra, op: &str) -> Result<Option<SentenceViolation>> {
    let (op, zero) = zero_and_binary(algebra, op)?;
    let n = algebra.size();
    for x in 0..n {
        for y in 0..n {
            if algebra.apply(op, &[x, y]) != zero && (x == zero || y == zero) {
                return Ok(Some(SentenceViolation(vec![x, y])));
            }
        }
    }
    Ok(None)
}

/// `(x∘y = x'∘y' ∧ x∘y ≠ 0) → (x = x' ∧ y = y' ∧ x ≠ 0 ∧ y ≠ 0)` over all
/// quadruples.
pub fn check_sentence_2(algebra: &FiniteAlgebra, op: &str) -> Result<Option<SentenceViolation>> {
    let (op, zero) = zero_and_binary(algebra, op)?;
    let n = algebra.size();
    let table = algebra.table(op);
    for x in 0..n {
        for y in 0..n {
            let v = table[x * n + y];
            if v == zero {
                continue;
            }
            for x2 in 0..n {
                for y2 in 0..n {
                    if table[x2 * n + y2] == v && !(x == x2 && y == y2 && x != zero && y != zero) {
                        return Ok(Some(SentenceViolation(vec![x, y, x2, y2])));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// One row of the depth-growth experiment: in `Q_{i+2}`, the least depth
/// `d` such that `(0, b_0)` lies in the closure of the pair `(0, a_i)` under
/// the terms of depth at most `d`.
#[derive(Debug, Clone)]
pub struct DepthRow {
    pub i: usize,
    pub outcome: std::result::Result<(usize, MalcevWitness), String>,
}

#[derive(Debug, Clone)]
pub struct DepthGrowth {
    pub rows: Vec<DepthRow>,
}

impl DepthGrowth {
    pub fn depths(&self) -> Vec<Option<usize>> {
        self.rows
            .iter()
            .map(|r| r.outcome.as_ref().ok().map(|(d, _)| *d))
            .collect()
    }

    pub fn strictly_increasing(&self) -> bool {
        let d = self.depths();
        d.iter().all(Option::is_some) && d.windows(2).all(|w| w[0] < w[1])
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("i\tn\tdepth\tsteps\n");
        for r in &self.rows {
            match &r.outcome {
                Ok((d, w)) => writeln!(out, "{}\t{}\t{}\t{}", r.i, r.i + 2, d, w.steps.len()),
                Err(e) => writeln!(out, "{}\t{}\t-\t{}", r.i, r.i + 2, e),
            }
            .unwrap();
        }
        out
    }
}

fn minimal_depth(i: usize, budget: u64) -> std::result::Result<(usize, MalcevWitness), String> {
    let q = make_qn(i + 2).map_err(|e| e.to_string())?;
    let a = &q.algebra;
    let zero = 0;
    let ai = QLabel::A(i).index();
    let b0 = QLabel::B(0).index();
    let mut previous = None;
    for d in 0.. {
        let terms = enumerate_terms(a.signature(), d);
        let table =
            TranslationTable::build(a, &terms, budget).map_err(|e| format!("depth {d}: {e}"))?;
        let graph = theta_upper_graph(a, &table, zero, ai);
        if let Some(w) = graph.witness(zero, b0) {
            if !verify_witness(a, &w).is_ok() {
                return Err(format!("depth {d}: witness failed verification"));
            }
            return Ok((d, w));
        }
        let maps = table.maps();
        if previous.as_ref() == Some(&maps) {
            return Err(format!("unreachable; translations stable at depth {d}"));
        }
        previous = Some(maps);
    }
    unreachable!()
}

/// Runs the experiment for `i = 1..=max_i`.
pub fn depth_growth_experiment(max_i: usize, budget: u64) -> Result<DepthGrowth> {
    if max_i == 0 {
        return Err(Error::input("max_i must be positive"));
    }
    let rows = (1..=max_i)
        .map(|i| DepthRow {
            i,
            outcome: minimal_depth(i, budget),
        })
        .collect();
    Ok(DepthGrowth { rows })
}

#[derive(Debug, Clone)]
pub struct QnReport {
    pub n: usize,
    pub principal: Vec<((usize, usize), Partition)>,
    pub intersection: Partition,
    pub monolith: Option<Partition>,
}

/// Principal congruences of `Q_n`, their intersection and the monolith.
pub fn qn_congruence_report(n: usize) -> Result<QnReport> {
    let q = make_qn(n)?;
    let principal = principal_congruences(&q.algebra);
    let size = q.algebra.size();
    let intersection = principal
        .iter()
        .fold(Partition::full(size), |acc, (_, p)| acc.meet(p));
    let monolith = (!intersection.is_identity()).then(|| intersection.clone());
    debug_assert_eq!(monolith, crate::congruence::monolith(&q.algebra));
    Ok(QnReport {
        n,
        principal,
        intersection,
        monolith,
    })
}

/// Block summary listing only nontrivial blocks.
pub fn block_summary(p: &Partition, name: impl Fn(usize) -> String) -> String {
    let blocks: Vec<String> = p
        .blocks()
        .into_iter()
        .filter(|b| b.len() > 1)
        .map(|b| {
            format!(
                "{{{}}}",
                b.iter().map(|&e| name(e)).collect::<Vec<_>>().join(", ")
            )
        })
        .collect();
    if blocks.is_empty() {
        "identity".to_string()
    } else {
        blocks.join(" ")
    }
}

impl QnReport {
    pub fn to_text(&self) -> String {
        let name = |e: usize| QLabel::of_index(e).to_string();
        let mut out = String::new();
        writeln!(out, "Q{} ({} elements)", self.n, 2 * self.n + 1).unwrap();
        for ((a, b), p) in &self.principal {
            writeln!(
                out,
                "theta({}, {}): {}",
                name(*a),
                name(*b),
                block_summary(p, name)
            )
            .unwrap();
        }
        writeln!(
            out,
            "intersection: {}",
            block_summary(&self.intersection, name)
        )
        .unwrap();
        match &self.monolith {
            Some(m) => writeln!(out, "monolith: {}", block_summary(m, name)).unwrap(),
            None => writeln!(out, "monolith: absent").unwrap(),
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let name = |e: usize| QLabel::of_index(e).to_string();
        let mut out = String::from("a\tb\tblocks\n");
        for ((a, b), p) in &self.principal {
            writeln!(out, "{}\t{}\t{}", name(*a), name(*b), p.render(name)).unwrap();
        }
        writeln!(out, "*\t*\t{}", self.intersection.render(name)).unwrap();
        out
    }
}

/// `θ(0, a_0)` in `Q_1`, the control case of the experiment.
pub fn q1_control() -> Partition {
    let q = make_qn(1).expect("Q_1");
    generate_congruence(&q.algebra, &[(0, QLabel::A(0).index())]).expect("valid pair")
}
