//! Property sweeps over the corpus. Each suite reports how many instances
//! it checked and describes every refutation; any refutation is a bug.

use std::fmt;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::algebra::FiniteAlgebra;
use crate::analysis::{
    determines_principal_with, determines_syntactic_exhaustive, syn_oracle, theta_upper_graph,
    upper_within_theta_with, verify_composition_law, verify_quotient_transfer_with,
    verify_subcongruence_implication, verify_witness, Implication, PairGraph,
};
use crate::congruence::{generate_congruence, DEFAULT_EXHAUSTIVE_CAP};
use crate::corpus::{random_partition, rng, sampled_term_sets, DEFAULT_SEED, FAMILY_SIZE};
use crate::error::Result;
use crate::partition::{all_partitions, Partition};
use crate::relation::Relation;
use crate::terms::TermSet;
use crate::translations::{stabilized_terms, TranslationTable, DEFAULT_TRANSLATION_BUDGET};

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub family_size: usize,
    pub cap: usize,
    pub budget: u64,
    /// Largest carrier swept over every partition; larger ones are sampled.
    pub exhaustive_partitions: usize,
    pub sampled_partitions: usize,
    /// Random (F, G) pairs per algebra in the subcongruence implication
    /// suite, besides the fixed ({x}, full) pair.
    pub implication_pairs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            family_size: FAMILY_SIZE,
            cap: DEFAULT_EXHAUSTIVE_CAP,
            budget: DEFAULT_TRANSLATION_BUDGET,
            exhaustive_partitions: 5,
            sampled_partitions: 10,
            implication_pairs: 5,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub name: String,
    pub algebras: usize,
    pub checked: usize,
    pub refutations: Vec<String>,
    pub note: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.refutations.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} algebras, {} instances, {} refutations)",
            self.name,
            if self.passed() { "pass" } else { "FAIL" },
            self.algebras,
            self.checked,
            self.refutations.len()
        )?;
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        for r in self.refutations.iter().take(10) {
            write!(f, "\n  {r}")?;
        }
        Ok(())
    }
}

/// Per-algebra outcome: instances checked, refutations, free counters.
type Tally = (usize, Vec<String>, [usize; 3]);

fn collect(
    name: &str,
    algebras: usize,
    parts: Vec<Result<Tally>>,
) -> Result<(SuiteReport, [usize; 3])> {
    let mut report = SuiteReport {
        name: name.to_string(),
        algebras,
        ..Default::default()
    };
    let mut counters = [0; 3];
    for p in parts {
        let (checked, refs, c) = p?;
        report.checked += checked;
        report.refutations.extend(refs);
        for i in 0..3 {
            counters[i] += c[i];
        }
    }
    Ok((report, counters))
}

fn partitions_for(a: &FiniteAlgebra, cfg: &SuiteConfig, stream: u64) -> Vec<Partition> {
    if a.size() <= cfg.exhaustive_partitions {
        all_partitions(a.size()).collect()
    } else {
        let mut r = rng(cfg.seed, stream);
        (0..cfg.sampled_partitions)
            .map(|_| random_partition(a.size(), &mut r))
            .collect()
    }
}

fn family(a: &FiniteAlgebra, cfg: &SuiteConfig) -> Vec<TermSet> {
    sampled_term_sets(a.signature(), cfg.seed, cfg.family_size)
}

/// Pair-graph `syn` against the congruence-lattice oracle, every partition.
pub fn syn_oracle_suite(corpus: &[FiniteAlgebra], cfg: &SuiteConfig) -> Result<SuiteReport> {
    let algebras: Vec<&FiniteAlgebra> = corpus.iter().filter(|a| a.size() <= 5).collect();
    let parts = algebras
        .par_iter()
        .map(|a| -> Result<Tally> {
            let graph = PairGraph::new(a);
            let mut checked = 0;
            let mut refs = Vec::new();
            for theta in all_partitions(a.size()) {
                let fast = graph.syn(&theta);
                let slow = syn_oracle(a, &theta, cfg.cap)?;
                checked += 1;
                if fast != slow {
                    refs.push(format!(
                        "{}: theta {theta}: pair graph {fast}, oracle {slow}",
                        a.name()
                    ));
                }
            }
            Ok((checked, refs, [0; 3]))
        })
        .collect();
    Ok(collect("syn-oracle", algebras.len(), parts)?.0)
}

/// `θ^F` at the stabilization depth equals `θ(a,b)` for every pair, and
/// every emitted witness re-verifies with terms drawn from the set.
pub fn malcev_suite(corpus: &[FiniteAlgebra], cfg: &SuiteConfig) -> Result<SuiteReport> {
    let parts = corpus
        .par_iter()
        .map(|a| -> Result<Tally> {
            let terms = stabilized_terms(a)?;
            let table = TranslationTable::build(a, &terms, cfg.budget)?;
            let n = a.size();
            let mut checked = 0;
            let mut witnesses = 0;
            let mut refs = Vec::new();
            for x in 0..n {
                for y in 0..n {
                    let graph = theta_upper_graph(a, &table, x, y);
                    let full = Relation::from_partition(&generate_congruence(a, &[(x, y)])?);
                    checked += 1;
                    if graph.closure() != full {
                        refs.push(format!(
                            "{}: theta^F({x},{y}) differs from theta({x},{y})",
                            a.name()
                        ));
                    }
                    for (pair, w) in graph.all_witnesses() {
                        witnesses += 1;
                        if let Err(link) = verify_witness(a, &w) {
                            refs.push(format!(
                                "{}: witness for {pair:?} from ({x},{y}): {link}",
                                a.name()
                            ));
                        }
                        if !w.steps.iter().all(|s| terms.contains(&s.term)) {
                            refs.push(format!(
                                "{}: witness for {pair:?} uses a foreign term",
                                a.name()
                            ));
                        }
                    }
                }
            }
            Ok((checked, refs, [witnesses, 0, 0]))
        })
        .collect();
    let (mut report, c) = collect("malcev", corpus.len(), parts)?;
    report.note = format!("[{} witnesses verified]", c[0]);
    Ok(report)
}

/// Exhaustive and principal modes of the syntactic check agree.
pub fn mode_agreement_suite(corpus: &[FiniteAlgebra], cfg: &SuiteConfig) -> Result<SuiteReport> {
    let algebras: Vec<&FiniteAlgebra> = corpus
        .iter()
        .filter(|a| a.size() <= 5 && a.size() <= cfg.cap)
        .collect();
    let parts = algebras
        .par_iter()
        .map(|a| -> Result<Tally> {
            let graph = PairGraph::new(a);
            let mut refs = Vec::new();
            let mut positive = 0;
            let fam = family(a, cfg);
            for f in &fam {
                let table = TranslationTable::build(a, f, cfg.budget)?;
                let exhaustive = determines_syntactic_exhaustive(a, &table, &graph).holds();
                let principal = determines_principal_with(a, &table).holds();
                positive += usize::from(exhaustive);
                if exhaustive != principal {
                    refs.push(format!(
                        "{}: F = {{{}}}: exhaustive {exhaustive}, principal {principal}",
                        a.name(),
                        f.render(a.signature())
                    ));
                }
            }
            Ok((
                fam.len(),
                refs,
                [positive, usize::from(fam.len() < cfg.family_size), 0],
            ))
        })
        .collect();
    let (mut report, c) = collect("mode-agreement", algebras.len(), parts)?;
    report.note = format!(
        "[{} term sets determine syntactic congruences; {} algebras with a short family]",
        c[0], c[1]
    );
    Ok(report)
}

/// `θ_{F∘G} = (θ_F)_G`: three random instances per algebra plus the
/// degenerate `F = {x}` and `G = {x}` cases.
pub fn comp_suite(corpus: &[FiniteAlgebra], cfg: &SuiteConfig) -> Result<SuiteReport> {
    let parts = corpus
        .par_iter()
        .enumerate()
        .map(|(i, a)| -> Result<Tally> {
            let fam = family(a, cfg);
            let mut r = rng(cfg.seed, 1000 + i as u64);
            let mut refs = Vec::new();
            let mut checked = 0;
            let pick =
                |r: &mut rand_chacha::ChaCha8Rng| fam.choose(r).expect("nonempty family").clone();
            let mut instances = Vec::new();
            for _ in 0..3 {
                instances.push((pick(&mut r), pick(&mut r)));
            }
            instances.push((TermSet::x(), pick(&mut r)));
            instances.push((pick(&mut r), TermSet::x()));
            for (f, g) in instances {
                let theta = random_partition(a.size(), &mut r);
                checked += 1;
                if !verify_composition_law(a, &f, &g, &theta, cfg.budget)? {
                    refs.push(format!(
                        "{}: F = {{{}}}, G = {{{}}}, theta {theta}",
                        a.name(),
                        f.render(a.signature()),
                        g.render(a.signature())
                    ));
                }
            }
            Ok((checked, refs, [0; 3]))
        })
        .collect();
    Ok(collect("comp", corpus.len(), parts)?.0)
}

/// `(a,b) ∈ θ_F` implies `θ^F(a,b) ⊆ θ`, over the family and partitions.
pub fn upper_within_suite(corpus: &[FiniteAlgebra], cfg: &SuiteConfig) -> Result<SuiteReport> {
    let parts = corpus
        .par_iter()
        .enumerate()
        .map(|(i, a)| -> Result<Tally> {
            let thetas = partitions_for(a, cfg, 2000 + i as u64);
            let mut refs = Vec::new();
            let mut checked = 0;
            for f in family(a, cfg) {
                let table = TranslationTable::build(a, &f, cfg.budget)?;
                for theta in &thetas {
                    checked += 1;
                    if !upper_within_theta_with(a, &table, theta) {
                        refs.push(format!(
                            "{}: F = {{{}}}, theta {theta}",
                            a.name(),
                            f.render(a.signature())
                        ));
                    }
                }
            }
            Ok((checked, refs, [0; 3]))
        })
        .collect();
    Ok(collect("upper-within", corpus.len(), parts)?.0)
}

/// `θ_F` transfers to `A/syn(θ)` and `syn(θ/syn(θ))` is the identity.
pub fn quotient_suite(corpus: &[FiniteAlgebra], cfg: &SuiteConfig) -> Result<SuiteReport> {
    let parts = corpus
        .par_iter()
        .enumerate()
        .map(|(i, a)| -> Result<Tally> {
            let thetas = partitions_for(a, cfg, 3000 + i as u64);
            let graph = PairGraph::new(a);
            let mut refs = Vec::new();
            let mut checked = 0;
            for f in family(a, cfg) {
                let maps = TranslationTable::build(a, &f, cfg.budget)?.maps();
                for theta in &thetas {
                    checked += 1;
                    if !verify_quotient_transfer_with(a, &graph, &maps, &f, theta, cfg.budget)? {
                        refs.push(format!(
                            "{}: F = {{{}}}, theta {theta}",
                            a.name(),
                            f.render(a.signature())
                        ));
                    }
                }
            }
            Ok((checked, refs, [0; 3]))
        })
        .collect();
    Ok(collect("quotient", corpus.len(), parts)?.0)
}

/// If `F, G` determine principal subcongruences on `A` and all its
/// quotients then `G∘F` determines syntactic congruences on `A`.
pub fn subcongruence_implication_suite(
    corpus: &[FiniteAlgebra],
    cfg: &SuiteConfig,
) -> Result<SuiteReport> {
    let algebras: Vec<&FiniteAlgebra> = corpus.iter().filter(|a| a.size() <= cfg.cap).collect();
    let parts = algebras
        .par_iter()
        .enumerate()
        .map(|(i, a)| -> Result<Tally> {
            let fam = family(a, cfg);
            let mut r = rng(cfg.seed, 4000 + i as u64);
            let mut pairs = vec![(TermSet::x(), stabilized_terms(a)?)];
            for _ in 0..cfg.implication_pairs {
                let f = fam.choose(&mut r).expect("nonempty family").clone();
                let g = fam.choose(&mut r).expect("nonempty family").clone();
                pairs.push((f, g));
            }
            let mut refs = Vec::new();
            let mut counts = [0; 3];
            for (f, g) in &pairs {
                match verify_subcongruence_implication(a, f, g, cfg.cap, cfg.budget)? {
                    Implication::Confirmed => counts[0] += 1,
                    Implication::Vacuous => counts[1] += 1,
                    Implication::Refuted => {
                        counts[2] += 1;
                        refs.push(format!(
                            "{}: F = {{{}}}, G = {{{}}}",
                            a.name(),
                            f.render(a.signature()),
                            g.render(a.signature())
                        ));
                    }
                }
            }
            Ok((pairs.len(), refs, counts))
        })
        .collect();
    let (mut report, c) = collect("subcongruence-implication", algebras.len(), parts)?;
    report.note = format!("[{} confirmed, {} vacuous]", c[0], c[1]);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    SynOracle,
    Malcev,
    ModeAgreement,
    Comp,
    UpperWithin,
    Quotient,
    SubcongruenceImplication,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::SynOracle,
        Suite::Malcev,
        Suite::ModeAgreement,
        Suite::Comp,
        Suite::UpperWithin,
        Suite::Quotient,
        Suite::SubcongruenceImplication,
    ];

    pub fn run(self, corpus: &[FiniteAlgebra], cfg: &SuiteConfig) -> Result<SuiteReport> {
        match self {
            Suite::SynOracle => syn_oracle_suite(corpus, cfg),
            Suite::Malcev => malcev_suite(corpus, cfg),
            Suite::ModeAgreement => mode_agreement_suite(corpus, cfg),
            Suite::Comp => comp_suite(corpus, cfg),
            Suite::UpperWithin => upper_within_suite(corpus, cfg),
            Suite::Quotient => quotient_suite(corpus, cfg),
            Suite::SubcongruenceImplication => subcongruence_implication_suite(corpus, cfg),
        }
    }
}
