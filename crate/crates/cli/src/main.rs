//! `syncong`: command-line front end for congruence computations on finite
//! algebras given in the `.alg` text format.
//!
//! Exit codes: 0 success or verdict true, 1 verdict false, 2 input error,
//! 3 resource cap or budget exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use syncong::analysis::{
    confirm_principal_failure, confirm_subcongruence_failure, confirm_syntactic_failure,
    determines_principal, determines_principal_subcongruences, determines_syntactic, syn,
    syn_oracle, theta_upper, SyntacticMode, Verdict,
};
use syncong::congruence::{generate_congruence, DEFAULT_EXHAUSTIVE_CAP};
use syncong::corpus::{corpus, DEFAULT_SEED};
use syncong::qomega::{
    attach_labels, check_sentence_1, check_sentence_2, depth_growth_experiment, make_qn,
    qn_congruence_report,
};
use syncong::suites::{Suite, SuiteConfig};
use syncong::terms::enumerate_terms;
use syncong::translations::{
    stabilization_depth, stabilized_terms, DEFAULT_MONOID_CAP, DEFAULT_TRANSLATION_BUDGET,
};
use syncong::{Error, FiniteAlgebra, Partition, Signature, TermSet};

#[derive(Parser, Debug)]
#[command(
    name = "syncong",
    version,
    about = "Congruences, syntactic congruences and term-set checks on finite algebras"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Largest carrier for exhaustive partition enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_EXHAUSTIVE_CAP, value_parser = positive_usize)]
    cap: usize,
    /// Work budget for evaluating translations of a term set.
    #[arg(long, global = true, default_value_t = DEFAULT_TRANSLATION_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads for the verification suites (default: all cores).
    #[arg(long, global = true, value_parser = positive_usize)]
    threads: Option<usize>,
    /// Seed for the sampled corpus and term-set family.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signature, size and per-table SHA-256 checksums.
    Info { file: PathBuf },
    /// The principal congruence generated by a pair, e.g. `a_0@b_0` or `1@2`.
    Principal {
        file: PathBuf,
        pair: String,
        /// Print a shortest Mal'cev chain for every pair of the congruence.
        #[arg(long)]
        witness: bool,
    },
    /// The largest congruence inside a partition, e.g. `"0 2 | 1 | 3 4"`.
    Syn {
        file: PathBuf,
        partition: String,
        /// Cross-check against the congruence-lattice oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Whether a term set determines principal, syntactic or principal
    /// sub-congruences on the algebra.
    Check(CheckArgs),
    /// Truncations Q_n of the cascade algebra.
    Qomega(QomegaArgs),
    /// Run the property suites over the built-in corpus.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteName::All)]
        suite: SuiteName,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    file: PathBuf,
    /// Term literals separated by `;`, e.g. `prod(meet(x,_),_); x`.
    #[arg(long, conflicts_with = "depth", required_unless_present = "depth")]
    terms: Option<String>,
    /// Use every term of depth at most this.
    #[arg(long)]
    depth: Option<usize>,
    /// Second term set (G) for the subcongruence mode.
    #[arg(long, conflicts_with = "depth2")]
    terms2: Option<String>,
    #[arg(long)]
    depth2: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Principal)]
    mode: Mode,
    /// Re-check a counterexample printed by an earlier run of this mode.
    #[arg(long)]
    recheck: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// θ^F(a,b) = θ(a,b) for every pair.
    Principal,
    /// θ_F = syn(θ) for every partition θ (carrier within the cap).
    Syntactic,
    /// The syntactic question decided through principal congruences.
    SyntacticPrincipal,
    /// Every θ^F(a,b) contains a pair whose congruence G determines.
    Subcongruence,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("action").required(true).args(["emit", "sentences", "report", "depth_growth"])))]
struct QomegaArgs {
    /// Truncation index; the carrier has 2n+1 elements.
    #[arg(default_value_t = 2, value_parser = positive_usize)]
    n: usize,
    /// Print Q_n in the `.alg` format.
    #[arg(long)]
    emit: bool,
    /// Check both universal sentences for meet and prod.
    #[arg(long)]
    sentences: bool,
    /// Principal congruences, their intersection and the monolith.
    #[arg(long)]
    report: bool,
    /// Minimal term depth reaching (0, b_0) from (0, a_i), i = 1..=MAX_I.
    #[arg(long, value_name = "MAX_I", value_parser = positive_usize)]
    depth_growth: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    /// Pair-graph syn equals the congruence-lattice oracle.
    Syn,
    /// Chains at the stabilization depth reproduce every θ(a,b).
    Malcev,
    /// Exhaustive and principal syntactic checks agree.
    #[value(name = "mode-agreement", alias = "lemma22")]
    ModeAgreement,
    /// θ_{F∘G} equals (θ_F)_G.
    Comp,
    /// (a,b) ∈ θ_F implies θ^F(a,b) ⊆ θ.
    Upper,
    /// θ_F transfers to A/syn(θ), where syn becomes the identity.
    Quotient,
    /// Subcongruence determination on all quotients implies syntactic
    /// determination by the composite.
    #[value(name = "subcongruence", alias = "prop32")]
    Subcongruence,
    /// Every suite above.
    All,
}

impl SuiteName {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteName::Syn => vec![Suite::SynOracle],
            SuiteName::Malcev => vec![Suite::Malcev],
            SuiteName::ModeAgreement => vec![Suite::ModeAgreement],
            SuiteName::Comp => vec![Suite::Comp],
            SuiteName::Upper => vec![Suite::UpperWithin],
            SuiteName::Quotient => vec![Suite::Quotient],
            SuiteName::Subcongruence => vec![Suite::SubcongruenceImplication],
            SuiteName::All => Suite::ALL.to_vec(),
        }
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// A finished command: report text and whether its verdict held.
struct Output {
    text: String,
    holds: bool,
}

/// Key/value report rendered as `key: value` lines or tab-separated rows.
#[derive(Default)]
struct Report {
    rows: Vec<(String, String)>,
}

impl Report {
    fn row(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.rows.push((key.into(), value.into()));
        self
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for (k, v) in &self.rows {
            match format {
                Format::Text if v.contains('\n') => writeln!(out, "{k}:\n{v}"),
                Format::Text => writeln!(out, "{k}: {v}"),
                Format::Tsv => writeln!(out, "{k}\t{}", v.replace('\n', "\\n").replace('\t', " ")),
            }
            .expect("writing to a String");
        }
        out
    }

    fn finish(&self, format: Format, holds: bool) -> Output {
        Output {
            text: self.render(format),
            holds,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_resource() => 3,
            _ => 2,
        }
    }
}

type CmdResult = Result<Output, Failure>;

fn load(path: &Path) -> Result<FiniteAlgebra, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let algebra = FiniteAlgebra::parse_alg(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(attach_labels(algebra))
}

fn parse_pair(algebra: &FiniteAlgebra, text: &str) -> Result<(usize, usize), Failure> {
    let (a, b) = text
        .split_once('@')
        .ok_or_else(|| Failure::Usage(format!("pair literal `{text}` must look like a@b")))?;
    Ok((
        algebra.parse_element(a.trim())?,
        algebra.parse_element(b.trim())?,
    ))
}

fn parse_partition(algebra: &FiniteAlgebra, text: &str) -> Result<Partition, Failure> {
    Ok(Partition::parse_with(algebra.size(), text, |t| {
        algebra.parse_element(t)
    })?)
}

/// Accepts `.(` and `·(` for `prod(` and `⊓(` for `meet(` when the
/// signature uses those names and not the symbols themselves.
fn normalize_term_literal(sig: &Signature, text: &str) -> String {
    let mut out = text.to_string();
    if sig.index_of("prod").is_some() && sig.index_of(".").is_none() {
        out = out.replace(".(", "prod(").replace("·(", "prod(");
    }
    if sig.index_of("meet").is_some() {
        out = out.replace("⊓(", "meet(");
    }
    out
}

fn term_set(
    algebra: &FiniteAlgebra,
    literal: Option<&str>,
    depth: Option<usize>,
    which: &str,
) -> Result<TermSet, Failure> {
    let sig = algebra.signature();
    match (literal, depth) {
        (Some(t), _) => Ok(TermSet::parse(sig, &normalize_term_literal(sig, t))?),
        (None, Some(d)) => Ok(enumerate_terms(sig, d)),
        (None, None) => Err(Failure::Usage(format!("{which} needs --terms or --depth"))),
    }
}

fn table_checksum(table: &[usize]) -> String {
    let text: Vec<String> = table.iter().map(ToString::to_string).collect();
    Sha256::digest(text.join(" ").as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            write!(s, "{b:02x}").expect("writing to a String");
            s
        })
}

fn cmd_info(g: &Global, file: &Path) -> CmdResult {
    let a = load(file)?;
    let mut r = Report::default();
    r.row("algebra", a.name()).row(
        "summary",
        format!("size {}, ops {}", a.size(), a.signature()),
    );
    if a.labels().is_some() {
        r.row(
            "labels",
            (0..a.size())
                .map(|e| a.element_name(e))
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        r.row(format!("sha256 {}", sym.name), table_checksum(a.table(op)));
    }
    Ok(r.finish(g.format, true))
}

fn cmd_principal(g: &Global, file: &Path, pair: &str, witness: bool) -> CmdResult {
    let a = load(file)?;
    let (x, y) = parse_pair(&a, pair)?;
    let name = |e: usize| a.element_name(e);
    let theta = generate_congruence(&a, &[(x, y)])?;
    let mut r = Report::default();
    r.row(
        format!("theta({}, {})", name(x), name(y)),
        theta.render(name),
    );
    if !witness {
        return Ok(r.finish(g.format, true));
    }
    let depth = stabilization_depth(&a, DEFAULT_MONOID_CAP)?;
    let terms = stabilized_terms(&a)?;
    let upper = theta_upper(&a, &terms, x, y, true, g.budget)?;
    let agrees = upper.relation == syncong::Relation::from_partition(&theta);
    r.row("term depth", format!("{depth} ({} terms)", terms.len()))
        .row("chains reproduce theta", agrees.to_string());
    for w in upper.witnesses.unwrap_or_default().values() {
        let (c, d) = w.endpoints;
        if c < d {
            r.row(format!("witness {}@{}", name(c), name(d)), w.render(&a));
        }
    }
    Ok(r.finish(g.format, agrees))
}

fn cmd_syn(g: &Global, file: &Path, partition: &str, oracle: bool) -> CmdResult {
    let a = load(file)?;
    let theta = parse_partition(&a, partition)?;
    let name = |e: usize| a.element_name(e);
    let s = syn(&a, &theta)?;
    let mut r = Report::default();
    r.row("theta", theta.render(name))
        .row("syn", s.render(name));
    let mut holds = true;
    if oracle {
        let o = syn_oracle(&a, &theta, g.cap)?;
        holds = o == s;
        r.row("oracle", o.render(name))
            .row("oracle agrees", holds.to_string());
    }
    Ok(r.finish(g.format, holds))
}

fn cmd_check(g: &Global, args: &CheckArgs) -> CmdResult {
    let a = load(&args.file)?;
    let f = term_set(&a, args.terms.as_deref(), args.depth, "F")?;
    let sig = a.signature();
    let name = |e: usize| a.element_name(e);
    let second = || {
        term_set(
            &a,
            args.terms2.as_deref(),
            args.depth2,
            "the subcongruence mode's G (--terms2/--depth2)",
        )
    };
    let mut r = Report::default();
    r.row(
        "mode",
        args.mode
            .to_possible_value()
            .expect("no skipped variants")
            .get_name(),
    )
    .row("terms", f.render(sig));

    if let Some(token) = &args.recheck {
        let confirmed = match args.mode {
            Mode::Principal => {
                let mut pairs = token.split_whitespace();
                let (Some(p), Some(m), None) = (pairs.next(), pairs.next(), pairs.next()) else {
                    return Err(Failure::Usage(
                        "principal recheck token is `a@b c@d`".into(),
                    ));
                };
                let failure = syncong::analysis::PrincipalFailure {
                    pair: parse_pair(&a, p)?,
                    missing: parse_pair(&a, m)?,
                };
                confirm_principal_failure(&a, &f, &failure, g.budget)?
            }
            Mode::Syntactic | Mode::SyntacticPrincipal => {
                confirm_syntactic_failure(&a, &f, &parse_partition(&a, token)?, g.budget)?
            }
            Mode::Subcongruence => {
                let g2 = second()?;
                confirm_subcongruence_failure(&a, &f, &g2, parse_pair(&a, token)?, g.budget)?
            }
        };
        r.row("recheck", token.as_str())
            .row("counterexample confirmed", confirmed.to_string());
        return Ok(r.finish(g.format, confirmed));
    }

    let refuted_with = |r: &mut Report, counterexample: String, token: String| {
        r.row("verdict", "refuted")
            .row("counterexample", counterexample)
            .row("recheck", format!("--recheck '{token}'"));
    };
    let holds = match args.mode {
        Mode::Principal => match determines_principal(&a, &f, g.budget)? {
            Verdict::Holds => true,
            Verdict::Refuted(fail) => {
                let ((x, y), (c, d)) = (fail.pair, fail.missing);
                let side = if generate_congruence(&a, &[(x, y)])?.related(c, d) {
                    "theta(a,b) contains it, theta^F(a,b) does not"
                } else {
                    "theta^F(a,b) contains it, theta(a,b) does not"
                };
                refuted_with(
                    &mut r,
                    format!(
                        "(a,b) = ({}, {}), pair ({}, {}): {side}",
                        name(x),
                        name(y),
                        name(c),
                        name(d)
                    ),
                    format!("{}@{} {}@{}", name(x), name(y), name(c), name(d)),
                );
                false
            }
        },
        Mode::Syntactic | Mode::SyntacticPrincipal => {
            let mode = if args.mode == Mode::Syntactic {
                SyntacticMode::Exhaustive
            } else {
                SyntacticMode::Principal
            };
            match determines_syntactic(&a, &f, mode, g.cap, g.budget)? {
                Verdict::Holds => true,
                Verdict::Refuted(fail) => {
                    let theta = fail.theta.render(name);
                    refuted_with(
                        &mut r,
                        format!(
                            "theta = {theta}; syn(theta) = {}; theta_F = {}",
                            fail.syn.render(name),
                            fail.lower.render(name)
                        ),
                        theta,
                    );
                    false
                }
            }
        }
        Mode::Subcongruence => {
            let g2 = second()?;
            r.row("terms2", g2.render(sig));
            match determines_principal_subcongruences(&a, &f, &g2, g.budget)? {
                Verdict::Holds => true,
                Verdict::Refuted((x, y)) => {
                    refuted_with(
                        &mut r,
                        format!(
                            "no pair of theta^F({}, {}) has its principal congruence determined by G",
                            name(x),
                            name(y)
                        ),
                        format!("{}@{}", name(x), name(y)),
                    );
                    false
                }
            }
        }
    };
    if holds {
        r.row("verdict", "holds");
    }
    Ok(r.finish(g.format, holds))
}

fn cmd_qomega(g: &Global, args: &QomegaArgs) -> CmdResult {
    let n = args.n;
    if let Some(max_i) = args.depth_growth {
        let table = depth_growth_experiment(max_i, g.budget)?;
        let holds = table.strictly_increasing();
        let text = match g.format {
            Format::Tsv => table.to_tsv(),
            Format::Text => {
                let q = |i: usize| make_qn(i + 2).map(|q| q.algebra);
                let mut out = String::new();
                for row in &table.rows {
                    match &row.outcome {
                        Ok((d, w)) => {
                            let a = q(row.i)?;
                            writeln!(
                                out,
                                "i = {} in Q{}: depth {d}, {} steps",
                                row.i,
                                row.i + 2,
                                w.steps.len()
                            )
                            .and_then(|_| writeln!(out, "  {}", w.render(&a).replace('\n', "\n  ")))
                        }
                        Err(e) => writeln!(out, "i = {} in Q{}: {e}", row.i, row.i + 2),
                    }
                    .expect("writing to a String");
                }
                writeln!(out, "strictly increasing: {holds}").expect("writing to a String");
                out
            }
        };
        return Ok(Output { text, holds });
    }
    let q = make_qn(n)?;
    if args.emit {
        return Ok(Output {
            text: q.algebra.to_alg(),
            holds: true,
        });
    }
    if args.report {
        let report = qn_congruence_report(n)?;
        let text = match g.format {
            Format::Text => report.to_text(),
            Format::Tsv => report.to_tsv(),
        };
        return Ok(Output { text, holds: true });
    }
    let mut r = Report::default();
    let mut holds = true;
    for op in ["meet", "prod"] {
        for (k, result) in [
            (1, check_sentence_1(&q.algebra, op)?),
            (2, check_sentence_2(&q.algebra, op)?),
        ] {
            let value = match result {
                None => "holds".to_string(),
                Some(v) => {
                    holds = false;
                    let names: Vec<String> =
                        v.0.iter().map(|&e| q.algebra.element_name(e)).collect();
                    format!("violated at ({})", names.join(", "))
                }
            };
            r.row(format!("Q{n} sentence {k} {op}"), value);
        }
    }
    Ok(r.finish(g.format, holds))
}

fn cmd_verify(g: &Global, suite: SuiteName) -> CmdResult {
    let cfg = SuiteConfig {
        seed: g.seed,
        cap: g.cap,
        budget: g.budget,
        ..SuiteConfig::default()
    };
    let algebras = corpus(g.seed);
    let mut text = String::new();
    let mut holds = true;
    for s in suite.suites() {
        let report = s.run(&algebras, &cfg)?;
        holds &= report.passed();
        match g.format {
            Format::Text => writeln!(text, "{report}"),
            Format::Tsv => writeln!(
                text,
                "{}\t{}\t{}\t{}\t{}",
                report.name,
                report.algebras,
                report.checked,
                report.refutations.len(),
                report.note
            ),
        }
        .expect("writing to a String");
    }
    Ok(Output { text, holds })
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start {t} threads: {e}")))?;
    }
    match &cli.command {
        Command::Info { file } => cmd_info(g, file),
        Command::Principal {
            file,
            pair,
            witness,
        } => cmd_principal(g, file, pair, *witness),
        Command::Syn {
            file,
            partition,
            oracle,
        } => cmd_syn(g, file, partition, *oracle),
        Command::Check(args) => cmd_check(g, args),
        Command::Qomega(args) => cmd_qomega(g, args),
        Command::Verify { suite } => cmd_verify(g, *suite),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
