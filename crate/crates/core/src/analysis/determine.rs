//! Checkers for whether a term set determines principal or syntactic
//! congruences on one algebra, and the subcongruence variants.

use crate::algebra::FiniteAlgebra;
use crate::congruence::generate_congruence;
use crate::error::{Error, Result};
use crate::partition::{all_partitions, Partition};
use crate::relation::Relation;
use crate::terms::TermSet;
use crate::translations::TranslationTable;

use super::lower::theta_lower_maps;
use super::syn::PairGraph;
use super::upper::theta_upper_graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<C> {
    Holds,
    Refuted(C),
}

impl<C> Verdict<C> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&C> {
        match self {
            Verdict::Holds => None,
            Verdict::Refuted(c) => Some(c),
        }
    }
}

/// `θ(a,b) ≠ θ^F(a,b)`, shown by a pair of one and not the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalFailure {
    pub pair: (usize, usize),
    pub missing: (usize, usize),
}

/// An equivalence relation `θ` with `syn(θ) ≠ θ_F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntacticFailure {
    pub theta: Partition,
    pub syn: Partition,
    pub lower: Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntacticMode {
    /// Compare `syn(θ)` with `θ_F` for every partition of the carrier.
    Exhaustive,
    /// Compare principal congruences, which decides the same question.
    Principal,
}

fn first_difference(x: &Relation, y: &Relation) -> Option<(usize, usize)> {
    x.pairs()
        .chain(y.pairs())
        .filter(|&(c, d)| x.contains(c, d) != y.contains(c, d))
        .min_by_key(|&(c, d)| (c.min(d), c.max(d), c > d))
}

/// Whether `θ(a,b) = θ^F(a,b)` for all pairs. Pairs are tried in ascending
/// order; the first failure is reported.
pub fn determines_principal(
    algebra: &FiniteAlgebra,
    terms: &TermSet,
    budget: u64,
) -> Result<Verdict<PrincipalFailure>> {
    let table = TranslationTable::build(algebra, terms, budget)?;
    Ok(determines_principal_with(algebra, &table))
}

pub(crate) fn determines_principal_with(
    algebra: &FiniteAlgebra,
    table: &TranslationTable,
) -> Verdict<PrincipalFailure> {
    let n = algebra.size();
    for a in 0..n {
        for b in a + 1..n {
            let upper = theta_upper_graph(algebra, table, a, b).closure();
            let full = Relation::from_partition(&generate_congruence(algebra, &[(a, b)]).unwrap());
            if let Some(missing) = first_difference(&full, &upper) {
                return Verdict::Refuted(PrincipalFailure {
                    pair: (a, b),
                    missing,
                });
            }
        }
    }
    Verdict::Holds
}

/// Whether `syn(θ) = θ_F` for every equivalence relation `θ`.
///
/// In principal mode a failing pair `(a,b)` is turned into a failing `θ`:
/// `θ = θ^F(a,b)` contains every `F`-image of `(a,b)`, so `(a,b) ∈ θ_F`,
/// while no congruence inside `θ` contains `(a,b)`.
pub fn determines_syntactic(
    algebra: &FiniteAlgebra,
    terms: &TermSet,
    mode: SyntacticMode,
    cap: usize,
    budget: u64,
) -> Result<Verdict<SyntacticFailure>> {
    let table = TranslationTable::build(algebra, terms, budget)?;
    let graph = PairGraph::new(algebra);
    match mode {
        SyntacticMode::Exhaustive => {
            if algebra.size() > cap {
                return Err(Error::AboveCap {
                    size: algebra.size(),
                    cap,
                });
            }
            Ok(determines_syntactic_exhaustive(algebra, &table, &graph))
        }
        SyntacticMode::Principal => Ok(match determines_principal_with(algebra, &table) {
            Verdict::Holds => Verdict::Holds,
            Verdict::Refuted(f) => {
                let (a, b) = f.pair;
                let theta = theta_upper_graph(algebra, &table, a, b)
                    .closure()
                    .to_partition()
                    .expect("closure is an equivalence");
                let syn = graph.syn(&theta);
                let lower = theta_lower_maps(&table.maps(), &theta);
                debug_assert_ne!(syn, lower);
                Verdict::Refuted(SyntacticFailure { theta, syn, lower })
            }
        }),
    }
}

pub(crate) fn determines_syntactic_exhaustive(
    algebra: &FiniteAlgebra,
    table: &TranslationTable,
    graph: &PairGraph,
) -> Verdict<SyntacticFailure> {
    let maps = table.maps();
    for theta in all_partitions(algebra.size()) {
        let syn = graph.syn(&theta);
        let lower = theta_lower_maps(&maps, &theta);
        if syn != lower {
            return Verdict::Refuted(SyntacticFailure { theta, syn, lower });
        }
    }
    Verdict::Holds
}

/// For each pair `c < d`, whether `θ(c,d) = θ^G(c,d)`.
fn principal_determined(algebra: &FiniteAlgebra, table: &TranslationTable) -> Vec<bool> {
    let n = algebra.size();
    let mut ok = vec![false; n * n];
    for c in 0..n {
        for d in c + 1..n {
            let upper = theta_upper_graph(algebra, table, c, d).closure();
            let full = Relation::from_partition(&generate_congruence(algebra, &[(c, d)]).unwrap());
            ok[c * n + d] = upper == full;
            ok[d * n + c] = ok[c * n + d];
        }
    }
    ok
}

/// For every `a ≠ b` there are `c ≠ d` with `(c,d) ∈ θ^F(a,b)` and
/// `θ(c,d) = θ^G(c,d)`. Reports the first `(a,b)` with no such pair.
pub fn determines_principal_subcongruences(
    algebra: &FiniteAlgebra,
    f: &TermSet,
    g: &TermSet,
    budget: u64,
) -> Result<Verdict<(usize, usize)>> {
    let ft = TranslationTable::build(algebra, f, budget)?;
    let gt = TranslationTable::build(algebra, g, budget)?;
    Ok(determines_principal_subcongruences_with(algebra, &ft, &gt))
}

pub(crate) fn determines_principal_subcongruences_with(
    algebra: &FiniteAlgebra,
    ft: &TranslationTable,
    gt: &TranslationTable,
) -> Verdict<(usize, usize)> {
    let n = algebra.size();
    let good = principal_determined(algebra, gt);
    for a in 0..n {
        for b in a + 1..n {
            let upper = theta_upper_graph(algebra, ft, a, b).closure();
            if subcongruence_pair(&upper, &good, n).is_none() {
                return Verdict::Refuted((a, b));
            }
        }
    }
    Verdict::Holds
}

/// First `c < d` in `rel` that `good` accepts.
pub(crate) fn subcongruence_pair(
    rel: &Relation,
    good: &[bool],
    n: usize,
) -> Option<(usize, usize)> {
    (0..n)
        .flat_map(|c| (c + 1..n).map(move |d| (c, d)))
        .find(|&(c, d)| rel.contains(c, d) && good[c * n + d])
}

/// A family of congruence formulas: terms from a set, at most
/// `max_steps` chain steps.
#[derive(Debug, Clone)]
pub struct FormulaFamily {
    pub terms: TermSet,
    pub max_steps: usize,
}

/// The DPSC condition restricted to the given formula families: for every
/// `a ≠ b` some `c ≠ d` is reachable from `(a,b)` by a `P`-formula and
/// `θ(c,d)` is exactly the union of what the `R`-formulas give for `(c,d)`.
pub fn check_dpsc_witness(
    algebra: &FiniteAlgebra,
    p: &[FormulaFamily],
    r: &[FormulaFamily],
    budget: u64,
) -> Result<Verdict<(usize, usize)>> {
    if p.iter().chain(r).any(|fam| fam.max_steps == 0) {
        return Err(Error::input("chain length bounds must be at least 1"));
    }
    let n = algebra.size();
    let build = |fams: &[FormulaFamily]| -> Result<Vec<(TranslationTable, usize)>> {
        fams.iter()
            .map(|fam| {
                Ok((
                    TranslationTable::build(algebra, &fam.terms, budget)?,
                    fam.max_steps,
                ))
            })
            .collect()
    };
    let p_tables = build(p)?;
    let r_tables = build(r)?;
    let mut good = vec![false; n * n];
    for c in 0..n {
        for d in c + 1..n {
            let mut reached = Relation::diagonal(n);
            for (t, len) in &r_tables {
                reached = reached.union(&theta_upper_graph(algebra, t, c, d).bounded_closure(*len));
            }
            let full = Relation::from_partition(&generate_congruence(algebra, &[(c, d)])?);
            good[c * n + d] = reached == full;
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let found = p_tables.iter().any(|(t, len)| {
                let rel = theta_upper_graph(algebra, t, a, b).bounded_closure(*len);
                subcongruence_pair(&rel, &good, n).is_some()
            });
            if !found {
                return Ok(Verdict::Refuted((a, b)));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Recomputes `θ(a,b)` and `θ^F(a,b)` and confirms they disagree on the
/// reported pair.
pub fn confirm_principal_failure(
    algebra: &FiniteAlgebra,
    terms: &TermSet,
    failure: &PrincipalFailure,
    budget: u64,
) -> Result<bool> {
    let (a, b) = failure.pair;
    let (c, d) = failure.missing;
    let n = algebra.size();
    if [a, b, c, d].iter().any(|&e| e >= n) {
        return Err(Error::input(format!("pair outside carrier of size {n}")));
    }
    let table = TranslationTable::build(algebra, terms, budget)?;
    let upper = theta_upper_graph(algebra, &table, a, b).closure();
    let full = generate_congruence(algebra, &[(a, b)])?;
    Ok(full.related(c, d) != upper.contains(c, d))
}

/// Recomputes `syn(θ)` and `θ_F` and confirms they differ.
pub fn confirm_syntactic_failure(
    algebra: &FiniteAlgebra,
    terms: &TermSet,
    theta: &Partition,
    budget: u64,
) -> Result<bool> {
    if theta.size() != algebra.size() {
        return Err(Error::input(format!(
            "partition of {} elements for a carrier of size {}",
            theta.size(),
            algebra.size()
        )));
    }
    let maps = TranslationTable::build(algebra, terms, budget)?.maps();
    Ok(PairGraph::new(algebra).syn(theta) != theta_lower_maps(&maps, theta))
}

/// Confirms that no pair of `θ^F(a,b)` has its principal congruence
/// determined by `G`.
pub fn confirm_subcongruence_failure(
    algebra: &FiniteAlgebra,
    f: &TermSet,
    g: &TermSet,
    pair: (usize, usize),
    budget: u64,
) -> Result<bool> {
    let n = algebra.size();
    let (a, b) = pair;
    if a >= n || b >= n {
        return Err(Error::input(format!(
            "pair ({a}, {b}) outside carrier of size {n}"
        )));
    }
    if a == b {
        return Ok(false);
    }
    let ft = TranslationTable::build(algebra, f, budget)?;
    let gt = TranslationTable::build(algebra, g, budget)?;
    let upper = theta_upper_graph(algebra, &ft, a, b).closure();
    for (c, d) in upper.pairs().filter(|&(c, d)| c < d) {
        let full = Relation::from_partition(&generate_congruence(algebra, &[(c, d)])?);
        if theta_upper_graph(algebra, &gt, c, d).closure() == full {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;
    use crate::congruence::DEFAULT_EXHAUSTIVE_CAP;
    use crate::qomega::{make_qn, QLabel};
    use crate::terms::enumerate_terms;
    use crate::translations::{stabilized_terms, DEFAULT_TRANSLATION_BUDGET};

    const BUDGET: u64 = DEFAULT_TRANSLATION_BUDGET;
    const CAP: usize = DEFAULT_EXHAUSTIVE_CAP;

    fn bare(n: usize) -> FiniteAlgebra {
        let sig = Signature::new([("c", 0)]).unwrap();
        FiniteAlgebra::new("bare", sig, n, vec![vec![0]]).unwrap()
    }

    fn semilattice() -> FiniteAlgebra {
        let sig = Signature::new([("meet", 2)]).unwrap();
        FiniteAlgebra::new("sl2", sig, 2, vec![vec![0, 0, 0, 1]]).unwrap()
    }

    #[test]
    fn no_operations_identity_term_suffices() {
        let a = bare(4);
        assert!(determines_principal(&a, &TermSet::x(), BUDGET)
            .unwrap()
            .holds());
        for mode in [SyntacticMode::Exhaustive, SyntacticMode::Principal] {
            assert!(determines_syntactic(&a, &TermSet::x(), mode, CAP, BUDGET)
                .unwrap()
                .holds());
        }
    }

    #[test]
    fn q4_depth_one_fails() {
        let a = make_qn(4).unwrap().algebra;
        let f = enumerate_terms(a.signature(), 1);
        let v = determines_principal(&a, &f, BUDGET).unwrap();
        let fail = v.counterexample().unwrap();
        // first failing pair in ascending order
        assert_eq!(fail.pair, (0, QLabel::A(1).index()));
        assert_eq!(fail.missing, (0, QLabel::B(0).index()));
        // the pair (0, a_2) fails in the same way
        let a2 = QLabel::A(2).index();
        let table = TranslationTable::build(&a, &f, BUDGET).unwrap();
        let upper = theta_upper_graph(&a, &table, 0, a2).closure();
        let full = generate_congruence(&a, &[(0, a2)]).unwrap();
        assert!(full.related(0, QLabel::B(0).index()));
        assert!(!upper.contains(0, QLabel::B(0).index()));

        let s = determines_syntactic(&a, &f, SyntacticMode::Principal, CAP, BUDGET).unwrap();
        let fail = s.counterexample().unwrap();
        assert_ne!(fail.syn, fail.lower);
        assert!(matches!(
            determines_syntactic(&a, &f, SyntacticMode::Exhaustive, CAP, BUDGET),
            Err(Error::AboveCap { .. })
        ));
        let e = determines_syntactic(&a, &f, SyntacticMode::Exhaustive, 9, BUDGET).unwrap();
        assert!(!e.holds());
    }

    #[test]
    fn stabilized_terms_determine_everything() {
        for a in [make_qn(2).unwrap().algebra, semilattice(), bare(3)] {
            let f = stabilized_terms(&a).unwrap();
            assert!(determines_principal(&a, &f, BUDGET).unwrap().holds());
            for mode in [SyntacticMode::Exhaustive, SyntacticMode::Principal] {
                assert!(determines_syntactic(&a, &f, mode, CAP, BUDGET)
                    .unwrap()
                    .holds());
            }
            assert!(determines_principal_subcongruences(&a, &f, &f, BUDGET)
                .unwrap()
                .holds());
        }
    }

    #[test]
    fn semilattice_with_meet_terms() {
        let a = semilattice();
        let f = TermSet::parse(a.signature(), "x; meet(x,_)").unwrap();
        assert!(
            determines_syntactic(&a, &f, SyntacticMode::Exhaustive, CAP, BUDGET)
                .unwrap()
                .holds()
        );
        assert!(
            determines_syntactic(&a, &f, SyntacticMode::Principal, CAP, BUDGET)
                .unwrap()
                .holds()
        );
    }

    #[test]
    fn one_element_is_vacuous() {
        let a = bare(1);
        let f = TermSet::x();
        assert!(determines_principal_subcongruences(&a, &f, &f, BUDGET)
            .unwrap()
            .holds());
    }

    /// Oracle: the defining quantifiers evaluated literally.
    fn sweep_subcongruences(a: &FiniteAlgebra, f: &TermSet, g: &TermSet) -> Option<(usize, usize)> {
        let n = a.size();
        let upper = |t: &TermSet, x, y| {
            crate::analysis::theta_upper(a, t, x, y, false, BUDGET)
                .unwrap()
                .relation
        };
        for x in 0..n {
            for y in x + 1..n {
                let rel = upper(f, x, y);
                let ok = (0..n).any(|c| {
                    (0..n).any(|d| {
                        c != d
                            && rel.contains(c, d)
                            && Relation::from_partition(&generate_congruence(a, &[(c, d)]).unwrap())
                                == upper(g, c, d)
                    })
                });
                if !ok {
                    return Some((x, y));
                }
            }
        }
        None
    }

    #[test]
    fn q4_subcongruences_depth_one() {
        let a = make_qn(4).unwrap().algebra;
        let f = enumerate_terms(a.signature(), 1);
        let v = determines_principal_subcongruences(&a, &f, &f, BUDGET).unwrap();
        assert_eq!(
            v.counterexample().copied(),
            sweep_subcongruences(&a, &f, &f)
        );
    }

    #[test]
    fn dpsc_bounds() {
        let a = bare(3);
        let fam = |len| {
            vec![FormulaFamily {
                terms: TermSet::x(),
                max_steps: len,
            }]
        };
        assert!(check_dpsc_witness(&a, &fam(1), &fam(1), BUDGET)
            .unwrap()
            .holds());
        assert!(check_dpsc_witness(&a, &fam(0), &fam(1), BUDGET).is_err());

        let q = make_qn(3).unwrap().algebra;
        let f = enumerate_terms(q.signature(), 2);
        let big = vec![FormulaFamily {
            terms: f.clone(),
            max_steps: 49,
        }];
        assert_eq!(
            check_dpsc_witness(&q, &big, &big, BUDGET).unwrap(),
            determines_principal_subcongruences(&q, &f, &f, BUDGET).unwrap()
        );
    }

    #[test]
    fn printed_counterexamples_recheck() {
        let a = make_qn(4).unwrap().algebra;
        let f = enumerate_terms(a.signature(), 1);
        let fail = determines_principal(&a, &f, BUDGET).unwrap();
        let fail = fail.counterexample().unwrap();
        assert!(confirm_principal_failure(&a, &f, fail, BUDGET).unwrap());
        let bogus = PrincipalFailure {
            pair: fail.pair,
            missing: (0, 0),
        };
        assert!(!confirm_principal_failure(&a, &f, &bogus, BUDGET).unwrap());

        match determines_syntactic(&a, &f, SyntacticMode::Principal, CAP, BUDGET).unwrap() {
            Verdict::Refuted(s) => {
                assert!(confirm_syntactic_failure(&a, &f, &s.theta, BUDGET).unwrap());
                assert!(
                    !confirm_syntactic_failure(&a, &f, &Partition::identity(9), BUDGET).unwrap()
                );
            }
            Verdict::Holds => panic!("depth 1 does not suffice on Q4"),
        }

        let x = TermSet::x();
        match determines_principal_subcongruences(&a, &x, &x, BUDGET).unwrap() {
            Verdict::Refuted(pair) => {
                assert!(confirm_subcongruence_failure(&a, &x, &x, pair, BUDGET).unwrap())
            }
            Verdict::Holds => panic!("the identity term cannot determine Q4"),
        }
        let full = stabilized_terms(&a).unwrap();
        assert!(!confirm_subcongruence_failure(&a, &x, &full, (0, 1), BUDGET).unwrap());
    }
}
