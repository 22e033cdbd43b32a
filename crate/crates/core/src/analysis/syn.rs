//! The syntactic congruence `syn(θ)`: the largest congruence inside an
//! equivalence relation.

use std::collections::VecDeque;

use crate::algebra::FiniteAlgebra;
use crate::congruence::{all_congruences, is_congruence};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Reverse adjacency of the pair graph `(u,v) → (f(u), f(v))` over the
/// elementary translations `f`, stored factored: per map, the preimage of
/// every element. The predecessors of `(x,y)` under `f` are
/// `f⁻¹(x) × f⁻¹(y)`.
///
/// Built once per algebra and reused across any number of `θ`.
pub struct PairGraph {
    n: usize,
    /// per map: CSR offsets into `preimage`, length n + 1
    offsets: Vec<Vec<u32>>,
    preimage: Vec<Vec<u32>>,
}

impl PairGraph {
    pub fn new(algebra: &FiniteAlgebra) -> Self {
        let n = algebra.size();
        let mut offsets = Vec::new();
        let mut preimage = Vec::new();
        for f in algebra.elementary_maps() {
            let mut count = vec![0u32; n + 1];
            for &v in &f.map {
                count[v + 1] += 1;
            }
            for i in 0..n {
                count[i + 1] += count[i];
            }
            let mut fill = count.clone();
            let mut pre = vec![0u32; n];
            for (u, &v) in f.map.iter().enumerate() {
                pre[fill[v] as usize] = u as u32;
                fill[v] += 1;
            }
            offsets.push(count);
            preimage.push(pre);
        }
        PairGraph {
            n,
            offsets,
            preimage,
        }
    }

    fn pre(&self, f: usize, x: usize) -> &[u32] {
        let o = &self.offsets[f];
        &self.preimage[f][o[x] as usize..o[x + 1] as usize]
    }

    /// Marks every pair that some composite of elementary translations
    /// sends outside `theta`; the unmarked pairs form `syn(theta)`.
    pub fn syn(&self, theta: &Partition) -> Partition {
        let n = self.n;
        assert_eq!(theta.size(), n, "partition size does not match the algebra");
        let mut bad = vec![false; n * n];
        let mut queue = VecDeque::new();
        for x in 0..n {
            for y in x + 1..n {
                if !theta.related(x, y) {
                    bad[x * n + y] = true;
                    queue.push_back((x, y));
                }
            }
        }
        while let Some((x, y)) = queue.pop_front() {
            for f in 0..self.offsets.len() {
                let px = self.pre(f, x);
                if px.is_empty() {
                    continue;
                }
                let py = self.pre(f, y);
                for &u in px {
                    for &v in py {
                        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
                        let i = lo as usize * n + hi as usize;
                        if !bad[i] {
                            bad[i] = true;
                            queue.push_back((lo as usize, hi as usize));
                        }
                    }
                }
            }
        }
        let keys: Vec<usize> = (0..n)
            .map(|e| (0..e).find(|&u| !bad[u * n + e]).unwrap_or(e))
            .collect();
        let p = Partition::from_labels(&keys);
        debug_assert!(
            (0..n).all(|x| (x + 1..n).all(|y| p.related(x, y) == !bad[x * n + y])),
            "unmarked pairs are not an equivalence relation"
        );
        p
    }
}

/// `syn(θ)` by backward reachability over the pair graph.
pub fn syn(algebra: &FiniteAlgebra, theta: &Partition) -> Result<Partition> {
    if theta.size() != algebra.size() {
        return Err(Error::input("partition size does not match the algebra"));
    }
    let p = PairGraph::new(algebra).syn(theta);
    debug_assert!(p.refines(theta));
    debug_assert!(is_congruence(algebra, &p)?.compatible);
    Ok(p)
}

/// `syn(θ)` as the largest member of the congruence lattice below `θ`.
/// Congruences below an equivalence relation are closed under join, so the
/// largest one exists. Independent of the pair graph; limited to algebras
/// within the exhaustive cap.
pub fn syn_oracle(algebra: &FiniteAlgebra, theta: &Partition, cap: usize) -> Result<Partition> {
    if theta.size() != algebra.size() {
        return Err(Error::input("partition size does not match the algebra"));
    }
    let below: Vec<Partition> = all_congruences(algebra, cap)?
        .into_iter()
        .filter(|c| c.refines(theta))
        .collect();
    let top = below
        .iter()
        .find(|c| below.iter().all(|d| d.refines(c)))
        .expect("the identity is always below theta and joins stay below");
    Ok(top.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::DEFAULT_EXHAUSTIVE_CAP;
    use crate::partition::all_partitions;
    use crate::qomega::make_qn;

    const CAP: usize = DEFAULT_EXHAUSTIVE_CAP;

    #[test]
    fn congruences_are_fixed() {
        let a = make_qn(2).unwrap().algebra;
        for c in all_congruences(&a, CAP).unwrap() {
            assert_eq!(syn(&a, &c).unwrap(), c);
        }
    }

    #[test]
    fn q2_examples() {
        let a = make_qn(2).unwrap().algebra;
        let theta = Partition::parse(5, "1 2").unwrap();
        assert!(syn(&a, &theta).unwrap().is_identity());
        assert_eq!(
            syn_oracle(&a, &theta, CAP).unwrap(),
            syn(&a, &theta).unwrap()
        );

        // {0, b_0, a_1} is θ(0, b_0) ∨ θ(0, a_1), already a congruence
        let theta = Partition::parse(5, "0 2 3").unwrap();
        let oracle = syn_oracle(&a, &theta, CAP).unwrap();
        assert_eq!(oracle, theta);
        assert_eq!(syn(&a, &theta).unwrap(), oracle);
    }

    #[test]
    fn agrees_with_oracle_exhaustively_on_q2() {
        let a = make_qn(2).unwrap().algebra;
        let graph = PairGraph::new(&a);
        for theta in all_partitions(5) {
            let s = graph.syn(&theta);
            assert_eq!(s, syn_oracle(&a, &theta, CAP).unwrap(), "{theta}");
            assert_eq!(graph.syn(&s), s);
        }
    }

    #[test]
    fn oracle_respects_cap() {
        let a = make_qn(3).unwrap().algebra;
        assert!(matches!(
            syn_oracle(&a, &Partition::full(7), CAP),
            Err(Error::AboveCap { .. })
        ));
        assert!(syn(&a, &Partition::full(7)).unwrap().is_full());
    }
}
