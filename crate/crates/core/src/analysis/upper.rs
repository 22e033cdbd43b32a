//! `θ^F(a,b)`: pairs linked to each other by chains of translated images of
//! `(a,b)` under terms of `F`, with Mal'cev chain witnesses.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::partition::UnionFind;
use crate::relation::Relation;
use crate::terms::{TermSet, TermX};
use crate::translations::TranslationTable;

/// One link of a chain: the pair `(t(a,ē), t(b,ē))`, reversed if `swapped`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub term: TermX,
    pub assignment: Vec<usize>,
    pub swapped: bool,
}

/// A chain certifying `(c,d) ∈ θ^F(a,b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalcevWitness {
    pub steps: Vec<WitnessStep>,
    pub endpoints: (usize, usize),
    pub generators: (usize, usize),
}

impl MalcevWitness {
    /// The pair realized by step `i`.
    pub fn step_pair(&self, algebra: &FiniteAlgebra, i: usize) -> Option<(usize, usize)> {
        let s = &self.steps[i];
        if s.term.check(algebra.signature()).is_err()
            || s.assignment.len() != s.term.param_count()
            || s.assignment.iter().any(|&e| e >= algebra.size())
        {
            return None;
        }
        let (a, b) = self.generators;
        let l = s.term.eval(algebra, a, &s.assignment);
        let r = s.term.eval(algebra, b, &s.assignment);
        Some(if s.swapped { (r, l) } else { (l, r) })
    }

    pub fn render(&self, algebra: &FiniteAlgebra) -> String {
        let name = |e: usize| algebra.element_name(e);
        let sig = algebra.signature();
        let mut out = format!(
            "({}, {}) from ({}, {}):",
            name(self.endpoints.0),
            name(self.endpoints.1),
            name(self.generators.0),
            name(self.generators.1)
        );
        for (i, s) in self.steps.iter().enumerate() {
            let params: Vec<String> = s.assignment.iter().map(|&e| name(e)).collect();
            let (l, r) = self
                .step_pair(algebra, i)
                .unwrap_or((usize::MAX, usize::MAX));
            let show = |e: usize| {
                if e == usize::MAX {
                    "?".to_string()
                } else {
                    name(e)
                }
            };
            out.push_str(&format!(
                "\n  {} [{}]{} : {} ~ {}",
                s.term.display(sig),
                params.join(","),
                if s.swapped { " swapped" } else { "" },
                show(l),
                show(r)
            ));
        }
        out
    }
}

/// Index of the first link that fails to re-evaluate. Link 0 joins `c` to
/// the first step, link `i` joins step `i-1` to step `i`, and the last link
/// joins the final step to `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrokenLink(pub usize);

impl fmt::Display for BrokenLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "link {} does not hold", self.0)
    }
}

pub fn verify_witness(
    algebra: &FiniteAlgebra,
    w: &MalcevWitness,
) -> std::result::Result<(), BrokenLink> {
    let n = algebra.size();
    let (c, d) = w.endpoints;
    let (a, b) = w.generators;
    if w.steps.is_empty() || [a, b, c, d].iter().any(|&e| e >= n) {
        return Err(BrokenLink(0));
    }
    let mut current = c;
    for i in 0..w.steps.len() {
        match w.step_pair(algebra, i) {
            Some((l, r)) if l == current => current = r,
            _ => return Err(BrokenLink(i)),
        }
    }
    if current != d {
        return Err(BrokenLink(w.steps.len()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    to: usize,
    term: usize,
    induced: usize,
    swapped: bool,
}

/// The undirected step graph on the carrier for one generator pair: an edge
/// `u — v` for every translated image `(t(a,ē), t(b,ē))` with `u ≠ v`.
/// Edges are kept in (term, assignment, orientation) order, first
/// occurrence only.
pub struct StepGraph<'a> {
    table: &'a TranslationTable,
    generators: (usize, usize),
    adjacency: Vec<Vec<Edge>>,
}

pub fn theta_upper_graph<'a>(
    algebra: &FiniteAlgebra,
    table: &'a TranslationTable,
    a: usize,
    b: usize,
) -> StepGraph<'a> {
    let n = algebra.size();
    let mut seen = vec![false; n * n];
    let mut adjacency: Vec<Vec<Edge>> = vec![Vec::new(); n];
    for term in 0..table.terms().len() {
        for (induced, ind) in table.term_maps(term).iter().enumerate() {
            let (u, v) = (ind.map[a], ind.map[b]);
            if u == v {
                continue;
            }
            for (from, to, swapped) in [(u, v, false), (v, u, true)] {
                if !seen[from * n + to] {
                    seen[from * n + to] = true;
                    adjacency[from].push(Edge {
                        to,
                        term,
                        induced,
                        swapped,
                    });
                }
            }
        }
    }
    StepGraph {
        table,
        generators: (a, b),
        adjacency,
    }
}

impl StepGraph<'_> {
    pub fn size(&self) -> usize {
        self.adjacency.len()
    }

    /// Diagonal plus the transitive closure of the step pairs.
    pub fn closure(&self) -> Relation {
        let n = self.size();
        let mut uf = UnionFind::new(n);
        for (u, edges) in self.adjacency.iter().enumerate() {
            for e in edges {
                uf.union(u, e.to);
            }
        }
        Relation::from_partition(&uf.into_partition())
    }

    /// Diagonal plus pairs joined by a chain of at most `max_steps` steps.
    pub fn bounded_closure(&self, max_steps: usize) -> Relation {
        let n = self.size();
        let mut rel = Relation::diagonal(n);
        for c in 0..n {
            let dist = self.distances(c);
            for (d, &k) in dist.iter().enumerate() {
                if k <= max_steps {
                    rel.insert(c, d);
                }
            }
        }
        rel
    }

    fn bfs(&self, c: usize) -> (Vec<usize>, Vec<Option<(usize, Edge)>>) {
        let n = self.size();
        let mut dist = vec![usize::MAX; n];
        let mut parent: Vec<Option<(usize, Edge)>> = vec![None; n];
        dist[c] = 0;
        let mut queue = VecDeque::from([c]);
        while let Some(u) = queue.pop_front() {
            for e in &self.adjacency[u] {
                if dist[e.to] == usize::MAX {
                    dist[e.to] = dist[u] + 1;
                    parent[e.to] = Some((u, *e));
                    queue.push_back(e.to);
                }
            }
        }
        (dist, parent)
    }

    fn distances(&self, c: usize) -> Vec<usize> {
        self.bfs(c).0
    }

    fn path(&self, c: usize, d: usize, parent: &[Option<(usize, Edge)>]) -> Option<MalcevWitness> {
        if c == d {
            return None;
        }
        let mut edges = Vec::new();
        let mut v = d;
        while v != c {
            let (u, e) = parent[v]?;
            edges.push(e);
            v = u;
        }
        edges.reverse();
        let steps = edges
            .into_iter()
            .map(|e| {
                let ind = &self.table.term_maps(e.term)[e.induced];
                WitnessStep {
                    term: self.table.terms().terms()[e.term].clone(),
                    assignment: ind.assignment.clone(),
                    swapped: e.swapped,
                }
            })
            .collect();
        Some(MalcevWitness {
            steps,
            endpoints: (c, d),
            generators: self.generators,
        })
    }

    /// A chain of minimal length from `c` to `d`, if `c ≠ d` are linked.
    pub fn witness(&self, c: usize, d: usize) -> Option<MalcevWitness> {
        let (_, parent) = self.bfs(c);
        self.path(c, d, &parent)
    }

    /// Witnesses for every linked pair `c ≠ d`.
    pub fn all_witnesses(&self) -> BTreeMap<(usize, usize), MalcevWitness> {
        let n = self.size();
        let mut out = BTreeMap::new();
        for c in 0..n {
            let (_, parent) = self.bfs(c);
            for d in 0..n {
                if let Some(w) = self.path(c, d, &parent) {
                    out.insert((c, d), w);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct UpperClosure {
    pub relation: Relation,
    pub witnesses: Option<BTreeMap<(usize, usize), MalcevWitness>>,
}

/// `θ^F(a,b)`, optionally with a minimal-length witness for every
/// non-diagonal pair.
pub fn theta_upper(
    algebra: &FiniteAlgebra,
    terms: &TermSet,
    a: usize,
    b: usize,
    with_witness: bool,
    budget: u64,
) -> Result<UpperClosure> {
    if terms.is_empty() {
        return Err(Error::input("term set must be nonempty"));
    }
    let n = algebra.size();
    if a >= n || b >= n {
        return Err(Error::input(format!(
            "pair ({a}, {b}) outside carrier of size {n}"
        )));
    }
    let table = TranslationTable::build(algebra, terms, budget)?;
    let graph = theta_upper_graph(algebra, &table, a, b);
    Ok(UpperClosure {
        relation: graph.closure(),
        witnesses: with_witness.then(|| graph.all_witnesses()),
    })
}
