//! Congruence tests, congruence generation, enumeration, quotients and the
//! monolith.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::algebra::{decode_tuple, FiniteAlgebra, Signature};
use crate::error::{Error, Result};
use crate::partition::{all_partitions, Partition, UnionFind};

/// Default largest carrier for which all partitions are enumerated.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 6;

/// Two argument tuples that differ in one coordinate, with related entries
/// there, whose images under `op` are not related.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityViolation {
    pub op: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceCertificate {
    pub partition: Partition,
    pub compatible: bool,
    pub counterexample: Option<CompatibilityViolation>,
}

impl fmt::Display for CongruenceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{} is a congruence", self.partition),
            Some(v) => write!(
                f,
                "operation #{} maps {:?} and {:?} into different blocks of {}",
                v.op, v.left, v.right, self.partition
            ),
        }
    }
}

impl CompatibilityViolation {
    pub fn describe(&self, sig: &Signature, name: impl Fn(usize) -> String) -> String {
        let fmt_tuple = |t: &[usize]| t.iter().map(|&e| name(e)).collect::<Vec<_>>().join(",");
        format!(
            "{}({}) and {}({}) land in different blocks",
            sig.name(self.op),
            fmt_tuple(&self.left),
            sig.name(self.op),
            fmt_tuple(&self.right)
        )
    }
}

fn check_size(algebra: &FiniteAlgebra, p: &Partition) -> Result<()> {
    if p.size() != algebra.size() {
        return Err(Error::input(format!(
            "partition on {} elements given for an algebra of size {}",
            p.size(),
            algebra.size()
        )));
    }
    Ok(())
}

/// Tests whether `p` is compatible with every operation. Only tuples that
/// differ in a single coordinate are examined; the first violation in
/// (operation, tuple, coordinate, replacement) order is reported.
pub fn is_congruence(algebra: &FiniteAlgebra, p: &Partition) -> Result<CongruenceCertificate> {
    check_size(algebra, p)?;
    let n = algebra.size();
    let blocks = p.blocks();
    let block_of: Vec<usize> = {
        let mut b = vec![0; n];
        for (i, block) in blocks.iter().enumerate() {
            for &e in block {
                b[e] = i;
            }
        }
        b
    };
    let sig = algebra.signature();
    for op in 0..sig.len() {
        let k = sig.arity(op);
        let table = algebra.table(op);
        let mut u = vec![0; k];
        for (index, &out) in table.iter().enumerate() {
            decode_tuple(index, n, k, &mut u);
            for i in 0..k {
                let stride = n.pow((k - 1 - i) as u32);
                for &w in &blocks[block_of[u[i]]] {
                    if w <= u[i] {
                        continue;
                    }
                    let other = table[index + (w - u[i]) * stride];
                    if !p.related(out, other) {
                        let mut v = u.clone();
                        v[i] = w;
                        return Ok(CongruenceCertificate {
                            partition: p.clone(),
                            compatible: false,
                            counterexample: Some(CompatibilityViolation {
                                op,
                                left: u,
                                right: v,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(CongruenceCertificate {
        partition: p.clone(),
        compatible: true,
        counterexample: None,
    })
}

/// The smallest congruence containing `pairs`.
///
/// Union-find seeded with the pairs; every successful merge is queued and
/// pushed through each elementary translation until nothing new merges.
pub fn generate_congruence(algebra: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Partition> {
    let n = algebra.size();
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::input(format!(
            "pair ({a}, {b}) outside carrier of size {n}"
        )));
    }
    let mut uf = UnionFind::new(n);
    let mut queue = VecDeque::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    let maps = algebra.elementary_maps();
    while let Some((u, v)) = queue.pop_front() {
        for f in maps {
            let (fu, fv) = (f.map[u], f.map[v]);
            if uf.union(fu, fv) {
                queue.push_back((fu, fv));
            }
        }
    }
    let p = uf.into_partition();
    debug_assert!(is_congruence(algebra, &p).unwrap().compatible);
    Ok(p)
}

/// Principal congruences θ(a,b) for all a < b, in ascending pair order.
pub fn principal_congruences(algebra: &FiniteAlgebra) -> Vec<((usize, usize), Partition)> {
    let n = algebra.size();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push(((a, b), generate_congruence(algebra, &[(a, b)]).unwrap()));
        }
    }
    out
}

fn check_cap(algebra: &FiniteAlgebra, cap: usize) -> Result<()> {
    if algebra.size() > cap {
        return Err(Error::AboveCap {
            size: algebra.size(),
            cap,
        });
    }
    Ok(())
}

/// All congruences, by filtering every partition of the carrier.
pub fn congruences_by_enumeration(algebra: &FiniteAlgebra, cap: usize) -> Result<Vec<Partition>> {
    check_cap(algebra, cap)?;
    let mut out: Vec<Partition> = all_partitions(algebra.size())
        .filter(|p| is_congruence(algebra, p).unwrap().compatible)
        .collect();
    out.sort();
    Ok(out)
}

/// All congruences, as the join-closure of the principal congruences and
/// the identity. Every congruence is the join of the principal congruences
/// of its pairs, so this needs no partition enumeration.
pub fn congruences_by_joins(algebra: &FiniteAlgebra) -> Vec<Partition> {
    let mut found: BTreeSet<Partition> = BTreeSet::new();
    found.insert(Partition::identity(algebra.size()));
    let principals: BTreeSet<Partition> = principal_congruences(algebra)
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    let mut frontier: Vec<Partition> = principals.iter().cloned().collect();
    found.extend(principals.iter().cloned());
    while let Some(c) = frontier.pop() {
        for p in &principals {
            let j = c.join(p);
            if found.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    found.into_iter().collect()
}

/// All congruences of an algebra of size at most `cap`, sorted canonically.
/// Both enumeration routes are run in debug builds and must agree.
pub fn all_congruences(algebra: &FiniteAlgebra, cap: usize) -> Result<Vec<Partition>> {
    let out = congruences_by_enumeration(algebra, cap)?;
    debug_assert_eq!(out, congruences_by_joins(algebra));
    Ok(out)
}

/// The quotient by a congruence. Blocks are renumbered by ascending minimum;
/// the returned vector maps each old element to its block.
pub fn quotient(algebra: &FiniteAlgebra, c: &Partition) -> Result<(FiniteAlgebra, Vec<usize>)> {
    let cert = is_congruence(algebra, c)?;
    if !cert.compatible {
        return Err(Error::NotCongruence(Box::new(cert)));
    }
    let n = algebra.size();
    let mut block_index = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for (e, index) in block_index.iter_mut().enumerate() {
        if c.rep(e) == e {
            *index = reps.len();
            reps.push(e);
        }
    }
    let to_new: Vec<usize> = (0..n).map(|e| block_index[c.rep(e)]).collect();
    let m = reps.len();
    let sig = algebra.signature().clone();
    let mut tables = Vec::with_capacity(sig.len());
    for op in 0..sig.len() {
        let k = sig.arity(op);
        let len = m.pow(k as u32);
        let mut table = Vec::with_capacity(len);
        let mut tuple = vec![0; k];
        let mut args = vec![0; k];
        for index in 0..len {
            decode_tuple(index, m, k, &mut tuple);
            for (a, &t) in args.iter_mut().zip(&tuple) {
                *a = reps[t];
            }
            table.push(to_new[algebra.apply(op, &args)]);
        }
        tables.push(table);
    }
    let q = FiniteAlgebra::new(format!("{}/c", algebra.name()), sig, m, tables)?;
    if cfg!(debug_assertions) {
        // every representative choice gives the same block
        for op in 0..q.signature().len() {
            let k = q.signature().arity(op);
            let mut args = vec![0; k];
            for index in 0..n.pow(k as u32) {
                decode_tuple(index, n, k, &mut args);
                let image: Vec<usize> = args.iter().map(|&a| to_new[a]).collect();
                debug_assert_eq!(to_new[algebra.apply(op, &args)], q.apply(op, &image));
            }
        }
    }
    Ok((q, to_new))
}

/// The intersection of all θ(a,b) with a ≠ b, when it is not the identity.
/// A returned partition is the monolith of a subdirectly irreducible algebra.
pub fn monolith(algebra: &FiniteAlgebra) -> Option<Partition> {
    let n = algebra.size();
    let mut acc = Partition::full(n);
    for (_, p) in principal_congruences(algebra) {
        acc = acc.meet(&p);
        if acc.is_identity() {
            return None;
        }
    }
    (!acc.is_identity()).then_some(acc)
}
