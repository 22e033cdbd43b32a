//! Executable checks of the identities relating `θ_F`, `θ^F`, `syn` and
//! quotients. Each returns `Ok(false)` when the identity fails on the given
//! instance, which would indicate a bug.

use crate::algebra::FiniteAlgebra;
use crate::congruence::{all_congruences, quotient};
use crate::error::Result;
use crate::partition::Partition;
use crate::terms::{compose_sets, TermSet};
use crate::translations::TranslationTable;

use super::determine::{
    determines_principal_subcongruences_with, determines_syntactic_exhaustive, Verdict,
};
use super::lower::theta_lower_maps;
use super::syn::PairGraph;
use super::upper::theta_upper_graph;

/// `θ_{F∘G} = (θ_F)_G`.
pub fn verify_composition_law(
    algebra: &FiniteAlgebra,
    f: &TermSet,
    g: &TermSet,
    theta: &Partition,
    budget: u64,
) -> Result<bool> {
    let fg = TranslationTable::build(algebra, &compose_sets(f, g), budget)?.maps();
    let fm = TranslationTable::build(algebra, f, budget)?.maps();
    let gm = TranslationTable::build(algebra, g, budget)?.maps();
    let left = theta_lower_maps(&fg, theta);
    let right = theta_lower_maps(&gm, &theta_lower_maps(&fm, theta));
    Ok(left == right)
}

/// For every `(a,b) ∈ θ_F`, `θ^F(a,b) ⊆ θ`.
pub fn verify_upper_within_theta(
    algebra: &FiniteAlgebra,
    f: &TermSet,
    theta: &Partition,
    budget: u64,
) -> Result<bool> {
    let table = TranslationTable::build(algebra, f, budget)?;
    Ok(upper_within_theta_with(algebra, &table, theta))
}

pub(crate) fn upper_within_theta_with(
    algebra: &FiniteAlgebra,
    table: &TranslationTable,
    theta: &Partition,
) -> bool {
    let n = algebra.size();
    let lower = theta_lower_maps(&table.maps(), theta);
    let theta_rel = crate::relation::Relation::from_partition(theta);
    (0..n).all(|a| {
        (a + 1..n).filter(|&b| lower.related(a, b)).all(|b| {
            theta_upper_graph(algebra, table, a, b)
                .closure()
                .is_subset(&theta_rel)
        })
    })
}

/// With `B = A/syn(θ)` and `η = θ/syn(θ)`: `(a,b) ∈ θ_F` iff
/// `(a/syn, b/syn) ∈ η_F`, and `syn(η)` is the identity on `B`.
pub fn verify_quotient_transfer(
    algebra: &FiniteAlgebra,
    f: &TermSet,
    theta: &Partition,
    budget: u64,
) -> Result<bool> {
    let maps = TranslationTable::build(algebra, f, budget)?.maps();
    verify_quotient_transfer_with(algebra, &PairGraph::new(algebra), &maps, f, theta, budget)
}

pub(crate) fn verify_quotient_transfer_with(
    algebra: &FiniteAlgebra,
    graph: &PairGraph,
    maps: &[Vec<usize>],
    f: &TermSet,
    theta: &Partition,
    budget: u64,
) -> Result<bool> {
    let n = algebra.size();
    let s = graph.syn(theta);
    let (b, to_b) = quotient(algebra, &s)?;
    // η relates two blocks when their members are θ-related
    let mut member = vec![0; b.size()];
    for e in 0..n {
        member[to_b[e]] = e;
    }
    let eta_keys: Vec<usize> = member.iter().map(|&e| theta.rep(e)).collect();
    let eta = Partition::from_labels(&eta_keys);

    let lower_a = theta_lower_maps(maps, theta);
    let b_maps = TranslationTable::build(&b, f, budget)?.maps();
    let lower_b = theta_lower_maps(&b_maps, &eta);
    let transfers =
        (0..n).all(|x| (0..n).all(|y| lower_a.related(x, y) == lower_b.related(to_b[x], to_b[y])));
    let reduced = PairGraph::new(&b).syn(&eta).is_identity();
    Ok(transfers && reduced)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Implication {
    /// The hypothesis fails on the algebra or one of its quotients.
    Vacuous,
    Confirmed,
    /// Hypothesis holds, conclusion fails.
    Refuted,
}

impl Implication {
    pub fn holds(self) -> bool {
        self != Implication::Refuted
    }
}

/// If `F, G` determine principal subcongruences on `A` and on every
/// quotient of `A`, then `G∘F` determines syntactic congruences on `A`.
pub fn verify_subcongruence_implication(
    algebra: &FiniteAlgebra,
    f: &TermSet,
    g: &TermSet,
    cap: usize,
    budget: u64,
) -> Result<Implication> {
    let congruences = all_congruences(algebra, cap)?;
    for c in &congruences {
        let (q, _) = quotient(algebra, c)?;
        let ft = TranslationTable::build(&q, f, budget)?;
        let gt = TranslationTable::build(&q, g, budget)?;
        if !determines_principal_subcongruences_with(&q, &ft, &gt).holds() {
            return Ok(Implication::Vacuous);
        }
    }
    let gf = TranslationTable::build(algebra, &compose_sets(g, f), budget)?;
    Ok(
        match determines_syntactic_exhaustive(algebra, &gf, &PairGraph::new(algebra)) {
            Verdict::Holds => Implication::Confirmed,
            Verdict::Refuted(_) => Implication::Refuted,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::DEFAULT_EXHAUSTIVE_CAP;
    use crate::partition::all_partitions;
    use crate::qomega::make_qn;
    use crate::terms::{elementary_terms, enumerate_terms};
    use crate::translations::{stabilized_terms, DEFAULT_TRANSLATION_BUDGET};

    const BUDGET: u64 = DEFAULT_TRANSLATION_BUDGET;

    #[test]
    fn composition_degenerate_cases() {
        let a = make_qn(2).unwrap().algebra;
        let e = elementary_terms(a.signature());
        for theta in all_partitions(5) {
            assert!(verify_composition_law(&a, &TermSet::x(), &e, &theta, BUDGET).unwrap());
            assert!(verify_composition_law(&a, &e, &TermSet::x(), &theta, BUDGET).unwrap());
            assert!(verify_composition_law(&a, &e, &e, &theta, BUDGET).unwrap());
        }
    }

    #[test]
    fn quotient_transfer_on_q2() {
        let a = make_qn(2).unwrap().algebra;
        let f = enumerate_terms(a.signature(), 1);
        for theta in all_partitions(5) {
            assert!(
                verify_quotient_transfer(&a, &f, &theta, BUDGET).unwrap(),
                "{theta}"
            );
            assert!(
                verify_upper_within_theta(&a, &f, &theta, BUDGET).unwrap(),
                "{theta}"
            );
        }
    }

    #[test]
    fn quotient_transfer_for_congruence_theta() {
        let a = make_qn(2).unwrap().algebra;
        for c in all_congruences(&a, DEFAULT_EXHAUSTIVE_CAP).unwrap() {
            assert!(verify_quotient_transfer(&a, &TermSet::x(), &c, BUDGET).unwrap());
        }
    }

    #[test]
    fn implication_confirmed_and_vacuous() {
        let a = make_qn(2).unwrap().algebra;
        let full = stabilized_terms(&a).unwrap();
        assert_eq!(
            verify_subcongruence_implication(&a, &TermSet::x(), &full, 6, BUDGET).unwrap(),
            Implication::Confirmed
        );
        // prod(x,_) alone sends most pairs to (0,0): hypothesis fails
        let weak = TermSet::parse(a.signature(), "prod(x,_)").unwrap();
        assert_eq!(
            verify_subcongruence_implication(&a, &weak, &weak, 6, BUDGET).unwrap(),
            Implication::Vacuous
        );
    }

    #[test]
    fn enlarging_the_term_set_is_monotone() {
        use crate::corpus::{binary_algebras, sampled_term_sets, DEFAULT_SEED};
        let mut algebras: Vec<FiniteAlgebra> = binary_algebras(DEFAULT_SEED)
            .into_iter()
            .step_by(50)
            .collect();
        algebras.push(make_qn(2).unwrap().algebra);
        for a in &algebras {
            let fam = sampled_term_sets(a.signature(), DEFAULT_SEED, 12);
            let n = a.size();
            for (f, g) in fam.iter().zip(fam.iter().skip(1)) {
                let big = f.union(g);
                let (ft, bt) = (
                    TranslationTable::build(a, f, BUDGET).unwrap(),
                    TranslationTable::build(a, &big, BUDGET).unwrap(),
                );
                for theta in all_partitions(n) {
                    assert!(theta_lower_maps(&bt.maps(), &theta)
                        .refines(&theta_lower_maps(&ft.maps(), &theta)));
                }
                for x in 0..n {
                    for y in 0..n {
                        let small = theta_upper_graph(a, &ft, x, y).closure();
                        assert!(small.is_subset(&theta_upper_graph(a, &bt, x, y).closure()));
                    }
                }
            }
        }
    }
}
