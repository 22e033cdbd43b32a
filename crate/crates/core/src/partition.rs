//! Equivalence relations on `{0, .., n-1}` in minimum-representative form.

use std::fmt;

use crate::error::{Error, Result};

/// Union-find with path compression. Unions keep the smaller root so the
/// root of every class is its minimum element.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let rep = (0..n).map(|i| self.find(i)).collect();
        Partition { rep }
    }
}

/// A partition of the carrier, stored as the block minimum of every element.
/// Equality and hashing therefore compare partitions as relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rep: Vec<usize>,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition {
            rep: (0..n).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Partition { rep: vec![0; n] }
    }

    /// Builds a partition from blocks; elements not mentioned become
    /// singletons. Every element may be listed at most once.
    pub fn from_blocks<B: AsRef<[usize]>>(n: usize, blocks: &[B]) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut uf = UnionFind::new(n);
        for block in blocks {
            let block = block.as_ref();
            for &e in block {
                if e >= n {
                    return Err(Error::input(format!(
                        "element {e} outside carrier of size {n}"
                    )));
                }
                if seen[e] {
                    return Err(Error::input(format!("element {e} listed twice")));
                }
                seen[e] = true;
                uf.union(block[0], e);
            }
        }
        Ok(uf.into_partition())
    }

    /// Builds the partition whose classes are the level sets of `key`.
    pub fn from_labels<K: Eq + std::hash::Hash>(keys: &[K]) -> Self {
        let mut first = std::collections::HashMap::new();
        let rep = keys
            .iter()
            .enumerate()
            .map(|(i, k)| *first.entry(k).or_insert(i))
            .collect();
        Partition { rep }
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    /// Minimum element of the block containing `e`.
    #[inline]
    pub fn rep(&self, e: usize) -> usize {
        self.rep[e]
    }

    pub fn reps(&self) -> &[usize] {
        &self.rep
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rep[a] == self.rep[b]
    }

    pub fn block_count(&self) -> usize {
        self.rep
            .iter()
            .enumerate()
            .filter(|&(i, &r)| i == r)
            .count()
    }

    /// Blocks in ascending order of their minimum, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut index = vec![usize::MAX; self.rep.len()];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (e, &r) in self.rep.iter().enumerate() {
            if r == e {
                index[e] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index[r]].push(e);
        }
        blocks
    }

    pub fn is_identity(&self) -> bool {
        self.rep.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn is_full(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    /// Relation inclusion: every pair related here is related in `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.size(), other.size());
        self.rep
            .iter()
            .enumerate()
            .all(|(e, &r)| other.rep[e] == other.rep[r])
    }

    /// Intersection of the two relations.
    pub fn meet(&self, other: &Partition) -> Partition {
        let keys: Vec<(usize, usize)> = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(&a, &b)| (a, b))
            .collect();
        Partition::from_labels(&keys)
    }

    /// Smallest equivalence relation containing both.
    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.size());
        for (e, (&a, &b)) in self.rep.iter().zip(&other.rep).enumerate() {
            uf.union(e, a);
            uf.union(e, b);
        }
        uf.into_partition()
    }

    /// Parses the literal format `0 2 | 1 | 3 4`. `element` resolves tokens,
    /// which lets callers accept labels.
    pub fn parse_with(
        n: usize,
        text: &str,
        mut element: impl FnMut(&str) -> Result<usize>,
    ) -> Result<Self> {
        let mut blocks = Vec::new();
        for chunk in text.split('|') {
            let block: Vec<usize> = chunk
                .split_whitespace()
                .map(&mut element)
                .collect::<Result<_>>()?;
            if !block.is_empty() {
                blocks.push(block);
            }
        }
        Partition::from_blocks(n, &blocks)
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        Partition::parse_with(n, text, |t| {
            t.parse::<usize>()
                .map_err(|_| Error::input(format!("bad element {t:?} in partition literal")))
        })
    }

    /// Renders the literal format with a custom element printer, singletons
    /// included.
    pub fn render(&self, mut name: impl FnMut(usize) -> String) -> String {
        self.blocks()
            .iter()
            .map(|b| b.iter().map(|&e| name(e)).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|e| e.to_string()))
    }
}

/// Iterator over all partitions of `{0, .., n-1}` via restricted growth
/// strings, in lexicographic order of the strings.
pub struct Partitions {
    rgs: Vec<usize>,
    max: Vec<usize>,
    done: bool,
}

pub fn all_partitions(n: usize) -> Partitions {
    Partitions {
        rgs: vec![0; n],
        max: vec![0; n],
        done: false,
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_labels(&self.rgs);
        // advance: max[i] = max(rgs[0..i])
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.max[i] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.max[j] = self.max[j - 1].max(self.rgs[j - 1]);
                }
                break;
            }
        }
        Some(out)
    }
}
