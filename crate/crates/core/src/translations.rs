//! Unary translations induced by term sets, and the translation monoid.

use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;

use crate::algebra::{decode_tuple, fill_args, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::terms::{enumerate_terms, TermSet, TermX};

/// Default bound on evaluated (term node × parameter assignment)
/// combinations.
pub const DEFAULT_TRANSLATION_BUDGET: u64 = 1_000_000;

/// Default bound on the number of maps in a translation monoid.
pub const DEFAULT_MONOID_CAP: usize = 200_000;

/// A unary map `a ↦ t(a, ē)` with the lexicographically first assignment
/// that induces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub map: Vec<usize>,
    pub assignment: Vec<usize>,
}

/// A distinct translation together with one term and assignment inducing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub map: Vec<usize>,
    pub term: TermX,
    pub assignment: Vec<usize>,
}

/// The maps induced by every term of a term set on one algebra.
///
/// Each term is evaluated structurally: a node's maps are built from its
/// spine child's distinct maps and the assignments of its own slots, so the
/// cost grows with the number of distinct maps rather than with `n^params`.
/// Subterms shared between terms are evaluated once.
#[derive(Debug, Clone)]
pub struct TranslationTable {
    terms: TermSet,
    per_term: Vec<Rc<Vec<Induced>>>,
    work: u64,
}

struct Evaluator<'a> {
    algebra: &'a FiniteAlgebra,
    memo: HashMap<TermX, Rc<Vec<Induced>>>,
    budget: u64,
    work: u64,
}

impl Evaluator<'_> {
    fn eval(&mut self, term: &TermX) -> Result<Rc<Vec<Induced>>> {
        if let Some(hit) = self.memo.get(term) {
            return Ok(hit.clone());
        }
        let n = self.algebra.size();
        let out = match term {
            TermX::X => vec![Induced {
                map: (0..n).collect(),
                assignment: Vec::new(),
            }],
            TermX::App {
                op,
                arity,
                pos,
                child,
            } => {
                let inner = self.eval(child)?;
                let before = n.pow(*pos as u32);
                let after = n.pow((*arity - 1 - *pos) as u32);
                let cost = (before as u64)
                    .saturating_mul(after as u64)
                    .saturating_mul(inner.len() as u64);
                self.work = self.work.saturating_add(cost);
                if self.work > self.budget {
                    return Err(Error::Budget {
                        what: "translation evaluation",
                        cap: self.budget,
                    });
                }
                let mut seen: HashSet<Vec<usize>> = HashSet::new();
                let mut out = Vec::new();
                let mut pre = vec![0; *pos];
                let mut post = vec![0; *arity - 1 - *pos];
                let mut params = vec![0; *arity - 1];
                let mut args = vec![0; *arity];
                for b in 0..before {
                    decode_tuple(b, n, *pos, &mut pre);
                    for ind in inner.iter() {
                        for c in 0..after {
                            decode_tuple(c, n, post.len(), &mut post);
                            params[..*pos].copy_from_slice(&pre);
                            params[*pos..].copy_from_slice(&post);
                            let map: Vec<usize> = ind
                                .map
                                .iter()
                                .map(|&v| {
                                    fill_args(&mut args, *pos, v, &params);
                                    self.algebra.apply(*op, &args)
                                })
                                .collect();
                            if seen.insert(map.clone()) {
                                let mut assignment = pre.clone();
                                assignment.extend_from_slice(&ind.assignment);
                                assignment.extend_from_slice(&post);
                                out.push(Induced { map, assignment });
                            }
                        }
                    }
                }
                out
            }
        };
        let out = Rc::new(out);
        self.memo.insert(term.clone(), out.clone());
        Ok(out)
    }
}

impl TranslationTable {
    pub fn build(algebra: &FiniteAlgebra, terms: &TermSet, budget: u64) -> Result<Self> {
        terms.check(algebra.signature())?;
        let mut ev = Evaluator {
            algebra,
            memo: HashMap::new(),
            budget,
            work: 0,
        };
        let per_term = terms
            .terms()
            .iter()
            .map(|t| ev.eval(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(TranslationTable {
            terms: terms.clone(),
            per_term,
            work: ev.work,
        })
    }

    pub fn terms(&self) -> &TermSet {
        &self.terms
    }

    /// Distinct maps of the `i`-th term, ascending by assignment.
    pub fn term_maps(&self, i: usize) -> &[Induced] {
        &self.per_term[i]
    }

    /// Evaluation work spent, in budget units.
    pub fn work(&self) -> u64 {
        self.work
    }

    /// Distinct maps over all terms, keeping the first (term, assignment)
    /// witness in canonical order, sorted by map vector.
    pub fn translations(&self) -> Vec<Translation> {
        let mut seen: HashSet<&[usize]> = HashSet::new();
        let mut out = Vec::new();
        for (t, maps) in self.terms.terms().iter().zip(&self.per_term) {
            for ind in maps.iter() {
                if seen.insert(&ind.map) {
                    out.push(Translation {
                        map: ind.map.clone(),
                        term: t.clone(),
                        assignment: ind.assignment.clone(),
                    });
                }
            }
        }
        out.sort_by(|a, b| a.map.cmp(&b.map));
        out
    }

    /// Distinct maps only.
    pub fn maps(&self) -> Vec<Vec<usize>> {
        self.translations().into_iter().map(|t| t.map).collect()
    }
}

/// `F^A`: the distinct translations induced by the terms of `terms`.
pub fn translations(
    algebra: &FiniteAlgebra,
    terms: &TermSet,
    budget: u64,
) -> Result<Vec<Translation>> {
    Ok(TranslationTable::build(algebra, terms, budget)?.translations())
}

/// The closure of the identity and the elementary translations under
/// composition, sorted.
pub fn translation_monoid(algebra: &FiniteAlgebra, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = algebra.size();
    let identity: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    let gens = algebra.elementary_maps();
    while let Some(g) = queue.pop_front() {
        for f in gens {
            let fg: Vec<usize> = g.iter().map(|&v| f.map[v]).collect();
            if !seen.contains(&fg) {
                if seen.len() >= cap {
                    return Err(Error::Budget {
                        what: "translation monoid size",
                        cap: cap as u64,
                    });
                }
                seen.insert(fg.clone());
                queue.push_back(fg);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Least `d` such that the terms of depth at most `d` induce the whole
/// translation monoid. Works on map layers only: depth-`k` maps are the
/// elementary maps composed with depth-`(k-1)` maps, so once a layer adds
/// nothing new no later layer can.
pub fn stabilization_depth(algebra: &FiniteAlgebra, cap: usize) -> Result<usize> {
    let n = algebra.size();
    let identity: Vec<usize> = (0..n).collect();
    let mut all: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
    let mut layer: HashSet<Vec<usize>> = HashSet::from([identity]);
    let gens = algebra.elementary_maps();
    let mut depth = 0;
    loop {
        let next: HashSet<Vec<usize>> = layer
            .iter()
            .flat_map(|g| {
                gens.iter()
                    .map(move |f| g.iter().map(|&v| f.map[v]).collect())
            })
            .collect();
        let before = all.len();
        all.extend(next.iter().cloned());
        if all.len() == before {
            return Ok(depth);
        }
        if all.len() > cap {
            return Err(Error::Budget {
                what: "translation monoid size",
                cap: cap as u64,
            });
        }
        layer = next;
        depth += 1;
    }
}

/// The terms of depth at most the stabilization depth. Their translations
/// are the whole translation monoid.
pub fn stabilized_terms(algebra: &FiniteAlgebra) -> Result<TermSet> {
    let d = stabilization_depth(algebra, DEFAULT_MONOID_CAP)?;
    Ok(enumerate_terms(algebra.signature(), d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;
    use crate::qomega::make_qn;
    use crate::terms::{compose_sets, elementary_terms};
    use std::collections::BTreeSet;

    const A0: usize = 1;
    const B0: usize = 2;
    const A1: usize = 3;
    const B1: usize = 4;

    fn map_set(t: &[Translation]) -> BTreeSet<Vec<usize>> {
        t.iter().map(|t| t.map.clone()).collect()
    }

    /// Oracle: every term evaluated at every assignment, directly.
    fn brute_translations(a: &FiniteAlgebra, f: &TermSet) -> BTreeSet<Vec<usize>> {
        let n = a.size();
        let mut out = BTreeSet::new();
        for t in f.terms() {
            let p = t.param_count();
            let mut params = vec![0; p];
            for code in 0..n.pow(p as u32) {
                decode_tuple(code, n, p, &mut params);
                out.insert((0..n).map(|x| t.eval(a, x, &params)).collect());
            }
        }
        out
    }

    fn q2() -> FiniteAlgebra {
        make_qn(2).unwrap().algebra
    }

    fn lit(a: &FiniteAlgebra, s: &str) -> TermSet {
        TermSet::parse(a.signature(), s).unwrap()
    }

    #[test]
    fn identity_term() {
        let a = q2();
        let t = translations(&a, &TermSet::x(), DEFAULT_TRANSLATION_BUDGET).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].map, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn q2_product_translation() {
        let a = q2();
        let t = translations(&a, &lit(&a, "prod(x,_)"), DEFAULT_TRANSLATION_BUDGET).unwrap();
        let by_b1 = t.iter().find(|t| t.map[A0] == B0).unwrap();
        assert_eq!(by_b1.map, vec![0, B0, 0, 0, 0]);
        assert_eq!(by_b1.assignment, vec![B1]);
        assert_eq!(map_set(&t), brute_translations(&a, &lit(&a, "prod(x,_)")));
    }

    #[test]
    fn q2_meet_translation() {
        let a = q2();
        let t = translations(&a, &lit(&a, "meet(x,_)"), DEFAULT_TRANSLATION_BUDGET).unwrap();
        for c in 0..5 {
            let expected: Vec<usize> = (0..5).map(|e| if e == c { c } else { 0 }).collect();
            assert!(t.iter().any(|t| t.map == expected));
        }
        // c = 0 gives the constant map
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn provenance_is_lexicographically_first() {
        let a = q2();
        let f = enumerate_terms(a.signature(), 2);
        let n = a.size();
        for t in translations(&a, &f, DEFAULT_TRANSLATION_BUDGET).unwrap() {
            let got: Vec<usize> = (0..n).map(|x| t.term.eval(&a, x, &t.assignment)).collect();
            assert_eq!(got, t.map);
            // no earlier term induces the map
            for s in f.terms().iter().take_while(|s| **s < t.term) {
                assert!(!brute_translations(&a, &TermSet::new([s.clone()])).contains(&t.map));
            }
        }
    }

    #[test]
    fn matches_brute_force_and_union_law() {
        let a = q2();
        let all = enumerate_terms(a.signature(), 2);
        let f = TermSet::new(all.terms()[..7].iter().cloned());
        let g = TermSet::new(all.terms()[7..].iter().cloned());
        let tf = map_set(&translations(&a, &f, DEFAULT_TRANSLATION_BUDGET).unwrap());
        let tg = map_set(&translations(&a, &g, DEFAULT_TRANSLATION_BUDGET).unwrap());
        let tfg = map_set(&translations(&a, &f.union(&g), DEFAULT_TRANSLATION_BUDGET).unwrap());
        assert_eq!(tf, brute_translations(&a, &f));
        assert_eq!(tg, brute_translations(&a, &g));
        assert_eq!(tfg, tf.union(&tg).cloned().collect());
    }

    #[test]
    fn composition_law() {
        let a = q2();
        let e = elementary_terms(a.signature());
        let f = TermSet::new(e.terms()[..2].iter().cloned());
        let g = TermSet::new(e.terms()[1..].iter().cloned());
        let tf = map_set(&translations(&a, &f, DEFAULT_TRANSLATION_BUDGET).unwrap());
        let tg = map_set(&translations(&a, &g, DEFAULT_TRANSLATION_BUDGET).unwrap());
        let composed: BTreeSet<Vec<usize>> = tf
            .iter()
            .flat_map(|s| tg.iter().map(move |t| t.iter().map(|&v| s[v]).collect()))
            .collect();
        let fg =
            map_set(&translations(&a, &compose_sets(&f, &g), DEFAULT_TRANSLATION_BUDGET).unwrap());
        assert_eq!(fg, composed);
    }

    #[test]
    fn budget_is_enforced() {
        let a = make_qn(4).unwrap().algebra;
        let f = enumerate_terms(a.signature(), 3);
        assert!(matches!(
            translations(&a, &f, 100),
            Err(Error::Budget { cap: 100, .. })
        ));
        let table = TranslationTable::build(&a, &f, DEFAULT_TRANSLATION_BUDGET).unwrap();
        assert!(table.work() > 100);
    }

    #[test]
    fn foreign_symbols_are_rejected() {
        let a = q2();
        let other = Signature::new([("meet", 2), ("prod", 2), ("zero", 0), ("extra", 1)]).unwrap();
        let f = TermSet::parse(&other, "extra(x)").unwrap();
        assert!(matches!(translations(&a, &f, 1000), Err(Error::Input(_))));
    }

    #[test]
    fn monoid_examples() {
        let sig = Signature::new([("zero", 0)]).unwrap();
        let a = FiniteAlgebra::new("z", sig, 3, vec![vec![0]]).unwrap();
        assert_eq!(translation_monoid(&a, 10).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(stabilization_depth(&a, 10).unwrap(), 0);

        let sig = Signature::new([("f", 1)]).unwrap();
        let a = FiniteAlgebra::new("c", sig, 2, vec![vec![0, 0]]).unwrap();
        assert_eq!(
            translation_monoid(&a, 10).unwrap(),
            vec![vec![0, 0], vec![0, 1]]
        );

        let a = q2();
        let m = translation_monoid(&a, DEFAULT_MONOID_CAP).unwrap();
        assert!(m.contains(&vec![0, B0, 0, 0, 0]));
        // a ↦ a0·(a·b1) sends every element, a1 included, to 0
        let t = TermX::parse(a.signature(), "prod(_,prod(x,_))").unwrap();
        let composite: Vec<usize> = (0..5).map(|x| t.eval(&a, x, &[A0, B1])).collect();
        assert_eq!(composite[A1], 0);
        assert!(m.contains(&composite));
    }

    #[test]
    fn monoid_equals_stabilized_depth_union() {
        for a in [q2(), make_qn(3).unwrap().algebra] {
            let m: BTreeSet<Vec<usize>> = translation_monoid(&a, DEFAULT_MONOID_CAP)
                .unwrap()
                .into_iter()
                .collect();
            let d = stabilization_depth(&a, DEFAULT_MONOID_CAP).unwrap();
            let at = |d| {
                map_set(
                    &translations(
                        &a,
                        &enumerate_terms(a.signature(), d),
                        DEFAULT_TRANSLATION_BUDGET,
                    )
                    .unwrap(),
                )
            };
            assert_eq!(at(d), m);
            assert_eq!(at(d + 1), m);
            if d > 0 {
                assert!(at(d - 1).len() < m.len());
            }
        }
    }

    #[test]
    fn too_small_monoid_cap_is_an_error() {
        assert!(matches!(
            translation_monoid(&q2(), 3),
            Err(Error::Budget { cap: 3, .. })
        ));
    }
}
