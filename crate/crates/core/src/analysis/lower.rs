use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::relation::Relation;
use crate::terms::TermSet;
use crate::translations::TranslationTable;

/// `θ_F` from a precomputed list of distinct translations. Two elements are
/// related when every translation sends them into one block of `theta`.
pub fn theta_lower_maps(maps: &[Vec<usize>], theta: &Partition) -> Partition {
    let n = theta.size();
    let keys: Vec<Vec<usize>> = (0..n)
        .map(|e| maps.iter().map(|f| theta.rep(f[e])).collect())
        .collect();
    Partition::from_labels(&keys)
}

/// `θ_F = {(a,b) | (f(a), f(b)) ∈ θ for every f ∈ F^A}`.
pub fn theta_lower(
    algebra: &FiniteAlgebra,
    terms: &TermSet,
    theta: &Partition,
    budget: u64,
) -> Result<Relation> {
    Ok(Relation::from_partition(&theta_lower_partition(
        algebra, terms, theta, budget,
    )?))
}

/// `θ_F` as a partition; it is always an equivalence relation.
pub fn theta_lower_partition(
    algebra: &FiniteAlgebra,
    terms: &TermSet,
    theta: &Partition,
    budget: u64,
) -> Result<Partition> {
    if theta.size() != algebra.size() {
        return Err(Error::input("partition size does not match the algebra"));
    }
    let maps = TranslationTable::build(algebra, terms, budget)?.maps();
    Ok(theta_lower_maps(&maps, theta))
}
