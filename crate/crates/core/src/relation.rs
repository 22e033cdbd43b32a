use std::fmt;

use crate::partition::Partition;

/// A binary relation on `{0, .., n-1}` as an `n × n` bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![0; (n * n).div_ceil(64)],
        }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn from_partition(p: &Partition) -> Self {
        let n = p.size();
        let mut r = Relation::empty(n);
        for a in 0..n {
            for b in 0..n {
                if p.related(a, b) {
                    r.insert(a, b);
                }
            }
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        let i = a * self.n + b;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        let i = a * self.n + b;
        let mask = 1u64 << (i % 64);
        let fresh = self.bits[i / 64] & mask == 0;
        self.bits[i / 64] |= mask;
        fresh
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(move |&i| self.bits[i / 64] >> (i % 64) & 1 == 1)
            .map(move |i| (i / n, i % n))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn is_equivalence(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| self.contains(a, a))
            && self.pairs().all(|(a, b)| self.contains(b, a))
            && self
                .pairs()
                .all(|(a, b)| (0..n).all(|c| !self.contains(b, c) || self.contains(a, c)))
    }

    /// The partition with the same pairs, if this is an equivalence relation.
    pub fn to_partition(&self) -> Option<Partition> {
        let n = self.n;
        let keys: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| self.contains(a, b)).unwrap_or(a))
            .collect();
        let p = Partition::from_labels(&keys);
        (Relation::from_partition(&p) == *self).then_some(p)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}
