//! The built-in corpus of small algebras and the sampled term-set family
//! used by the property suites. Everything is a function of the seed.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{decode_tuple, FiniteAlgebra, Signature};
use crate::partition::Partition;
use crate::qomega::make_qn;
use crate::terms::{enumerate_terms, TermSet};

pub const DEFAULT_SEED: u64 = 0x5EED_2024;

/// Number of one-binary-operation algebras of size at most 3 in the corpus.
pub const BINARY_SAMPLE: usize = 500;

/// Target size of the sampled term-set family per signature.
pub const FAMILY_SIZE: usize = 200;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn binary(size: usize, code: usize) -> FiniteAlgebra {
    let sig = Signature::new([("op", 2)]).expect("fixed signature");
    let mut table = vec![0; size * size];
    decode_tuple(code, size, size * size, &mut table);
    FiniteAlgebra::new(format!("bin{size}-{code}"), sig, size, vec![table]).expect("valid table")
}

/// Every one-binary-operation table on 1 and 2 elements, then distinct
/// size-3 tables drawn without replacement up to [`BINARY_SAMPLE`] in total.
pub fn binary_algebras(seed: u64) -> Vec<FiniteAlgebra> {
    let mut out = vec![binary(1, 0)];
    out.extend((0..16).map(|code| binary(2, code)));
    let space = 3usize.pow(9);
    let mut codes = index::sample(&mut rng(seed, 1), space, BINARY_SAMPLE - out.len()).into_vec();
    codes.sort_unstable();
    out.extend(codes.into_iter().map(|code| binary(3, code)));
    out
}

pub fn semilattice2() -> FiniteAlgebra {
    let sig = Signature::new([("meet", 2)]).expect("fixed signature");
    FiniteAlgebra::new("semilattice2", sig, 2, vec![vec![0, 0, 0, 1]]).expect("valid")
}

/// Two elements, the constant 0 and negation.
pub fn constant_unary2() -> FiniteAlgebra {
    let sig = Signature::new([("zero", 0), ("neg", 1)]).expect("fixed signature");
    FiniteAlgebra::new("zero-neg2", sig, 2, vec![vec![0], vec![1, 0]]).expect("valid")
}

/// The full corpus: sampled binary algebras, the two-element semilattice,
/// the constant-and-unary algebra and `Q_2 .. Q_5`.
pub fn corpus(seed: u64) -> Vec<FiniteAlgebra> {
    let mut out = binary_algebras(seed);
    out.push(semilattice2());
    out.push(constant_unary2());
    out.extend((2..=5).map(|n| make_qn(n).expect("n >= 1").algebra));
    out
}

fn subset_count(m: usize) -> usize {
    m + m * m.saturating_sub(1) / 2 + m * m.saturating_sub(1) * m.saturating_sub(2) / 6
}

/// Subsets of size 1 to 3 of the terms of depth at most `d`, shuffled with
/// the seed, first `count` kept. `d` starts at 2 and grows while there are
/// fewer than `count` subsets and deeper terms exist.
pub fn sampled_term_sets(sig: &Signature, seed: u64, count: usize) -> Vec<TermSet> {
    let mut depth = 2;
    let mut terms = enumerate_terms(sig, depth);
    while subset_count(terms.len()) < count {
        let deeper = enumerate_terms(sig, depth + 1);
        if deeper.len() == terms.len() {
            break;
        }
        depth += 1;
        terms = deeper;
    }
    let t = terms.terms();
    let m = t.len();
    let mut subsets: Vec<TermSet> = Vec::with_capacity(subset_count(m));
    for i in 0..m {
        subsets.push(TermSet::new([t[i].clone()]));
        for j in i + 1..m {
            subsets.push(TermSet::new([t[i].clone(), t[j].clone()]));
            for k in j + 1..m {
                subsets.push(TermSet::new([t[i].clone(), t[j].clone(), t[k].clone()]));
            }
        }
    }
    subsets.shuffle(&mut rng(seed, 2));
    subsets.truncate(count);
    subsets
}

pub fn random_partition(n: usize, rng: &mut impl Rng) -> Partition {
    let blocks = rng.gen_range(1..=n);
    let keys: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    Partition::from_labels(&keys)
}
