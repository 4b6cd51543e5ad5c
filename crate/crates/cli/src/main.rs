use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ordered_ramsey::constructions::{random_labeling, stepup_coloring, verify_no_blue_clique, CliqueVerdict, StepUpParams};
use ordered_ramsey::density::{
    falsify_tri_density, is_bi_dense, sample_bi_dense, BiDensity, BipartiteGraph, ExactCap, FalsifyStrategy,
    SampleVerdict,
};
use ordered_ramsey::embedding::{greedy_embed, DensityCheck, EmbeddingParams};
use ordered_ramsey::hypergraph::{complete_hypergraph, complete_multipartite, monotone_hyperpath};
use ordered_ramsey::ramsey::{ordered_ramsey_exact, RamseyQuery, RamseyResult, SearchConfig};
use ordered_ramsey::{
    count_embeddings, find_embedding, parse_rational, Color, EdgeLabeling, Error, HyperedgeColoring, Hypergraph,
    OrderedHypergraph, Rational, Scalar,
};

mod bound;

#[derive(Parser)]
#[command(name = "oramsey", version, about = "Ordered Ramsey toolkit")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated hypergraph as JSON.
    Gen(GenArgs),
    /// Exit 0 if the host contains the pattern, 1 otherwise.
    Contains(MatchArgs),
    /// Count order-preserving copies of the pattern in the host.
    Count(MatchArgs),
    /// Exact ordered Ramsey number by exhaustive search.
    Ramsey(RamseyArgs),
    /// Step-up coloring from a graph coloring and an edge labeling.
    Stepup(StepupArgs),
    /// Check a 3-uniform coloring for blue cliques.
    Verify(VerifyArgs),
    /// Expected number of red copies in the random step-up coloring.
    Expected(ExpectedArgs),
    /// Bi-density checks and tri-density falsifiers.
    #[command(subcommand)]
    Density(DensityCommand),
    /// Greedy embedding of a 3-uniform pattern.
    Embed(EmbedArgs),
    /// Evaluate a bound in log2 space.
    Bound(bound::BoundArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Complete,
    Multipartite,
    Path,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    #[arg(long)]
    k: usize,
    /// Vertices (complete, path) or part size (multipartite).
    #[arg(long)]
    n: usize,
    /// Number of parts (multipartite).
    #[arg(long)]
    chi: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorArg {
    Red,
    Blue,
}

impl From<ColorArg> for Color {
    fn from(c: ColorArg) -> Color {
        match c {
            ColorArg::Red => Color::Red,
            ColorArg::Blue => Color::Blue,
        }
    }
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    pattern: PathBuf,
    /// Host hypergraph JSON.
    #[arg(long, required_unless_present = "coloring")]
    host: Option<PathBuf>,
    /// Use one color class of an ORC coloring as the host.
    #[arg(long, requires = "color")]
    coloring: Option<PathBuf>,
    #[arg(long)]
    color: Option<ColorArg>,
}

#[derive(Args)]
struct RamseyArgs {
    #[arg(long)]
    blue: PathBuf,
    #[arg(long)]
    red: PathBuf,
    /// Largest N tried.
    #[arg(long)]
    cap: usize,
    /// Largest number of k-subsets searched (at most 128).
    #[arg(long, default_value_t = 40)]
    max_bits: u32,
    /// Where to write the avoiding coloring on value - 1 vertices.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Args)]
struct StepupArgs {
    /// Graph coloring (ORC, k = 2) on the label set 1..=R.
    #[arg(long)]
    chi1: PathBuf,
    /// Edge labeling (ORL). Drawn at random from --seed when absent.
    #[arg(long)]
    labeling: Option<PathBuf>,
    /// Vertices of the random labeling.
    #[arg(long, required_unless_present = "labeling")]
    n: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also check for blue cliques of this size.
    #[arg(long)]
    check: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    coloring: PathBuf,
    /// Clique size t + 1.
    #[arg(long, default_value_t = 4)]
    clique: usize,
}

#[derive(Args)]
struct ExpectedArgs {
    /// log2 R.
    #[arg(long)]
    log2_r: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    n: u64,
    /// Blue clique size t (only reported).
    #[arg(long, default_value_t = 3)]
    t: u64,
    /// Length of the monotone path in the argument; at least 2m - 1 with m = ceil(n/4).
    #[arg(long)]
    l: Option<u64>,
    /// log2 N; defaults to the critical value where the bound equals 1.
    #[arg(long)]
    log2_n: Option<f64>,
}

#[derive(Subcommand)]
enum DensityCommand {
    /// Bi-density of a bipartite graph (JSON {left, right, edges}).
    Bi(BiArgs),
    /// Search for a tri-density violation in a 3-uniform hypergraph.
    Tri(TriArgs),
}

#[derive(Args)]
struct BiArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    eps1: String,
    #[arg(long)]
    eps2: String,
    #[arg(long)]
    rho: String,
    /// Random trials instead of the exact check.
    #[arg(long)]
    sampled: Option<u64>,
    #[arg(long, default_value_t = 1 << 20)]
    max_subsets: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    ExhaustiveTiny,
    Induced,
    Random,
}

#[derive(Args)]
struct TriArgs {
    #[arg(long)]
    host: PathBuf,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    rho: String,
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Induced)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    host: PathBuf,
    #[arg(long)]
    rho: String,
    /// Override the default eps = rho^{15d^2} / (64 d^3).
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Trials per check in sampled mode.
    #[arg(long, default_value_t = 256)]
    trials: u64,
    #[arg(long, default_value_t = 1 << 20)]
    max_subsets: u64,
    /// Stop when the size guarantee n >= t / eps or condition (i) fails.
    #[arg(long)]
    enforce_size: bool,
    /// Re-check every pair graph after each step.
    #[arg(long)]
    audit: bool,
    /// Write the step trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

/// Failure of the tool itself, as opposed to a negative answer.
#[derive(Debug)]
pub struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Parse(p) => Failure(format!("[{}] {e}", p.code())),
            _ => Failure(e.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure(s)
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read(path)?).map_err(|_| Failure(format!("{}: not UTF-8", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn hypergraph(path: &Path) -> Result<OrderedHypergraph, Failure> {
    OrderedHypergraph::from_json(&read(path)?).map_err(|e| with_path(path, e))
}

fn coloring(path: &Path) -> Result<HyperedgeColoring, Failure> {
    HyperedgeColoring::from_orc(&read_text(path)?).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: Error) -> Failure {
    let Failure(msg) = e.into();
    Failure(format!("{}: {msg}", path.display()))
}

fn rational(name: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure(format!("--{name}: {e}")))
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn emit_or_write(output: &Option<PathBuf>, text: &str, summary: Value) -> Result<(), Failure> {
    match output {
        Some(p) => {
            write(p, text)?;
            emit(&summary);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn gen(a: &GenArgs) -> Outcome {
    let h = match a.family {
        Family::Complete => complete_hypergraph(a.k, a.n)?,
        Family::Path => monotone_hyperpath(a.k, a.n)?,
        Family::Multipartite => {
            let chi = a.chi.ok_or_else(|| Failure("multipartite needs --chi".into()))?;
            complete_multipartite(a.k, chi, a.n)?
        }
    };
    let text = h.to_json() + "\n";
    let summary = json!({"k": h.k(), "n": h.n(), "edges": h.edge_count()});
    emit_or_write(&a.output, &text, summary)?;
    Ok(true)
}

fn with_host<R>(a: &MatchArgs, f: impl FnOnce(&dyn Hypergraph, &OrderedHypergraph) -> Result<R, Failure>) -> Result<R, Failure> {
    let pattern = hypergraph(&a.pattern)?;
    match (&a.host, &a.coloring, a.color) {
        (Some(h), None, _) => f(&hypergraph(h)?, &pattern),
        (None, Some(c), Some(color)) => {
            let c = coloring(c)?;
            f(&c.view(color.into()), &pattern)
        }
        _ => Err(Failure("give either --host or --coloring with --color".into())),
    }
}

fn contains(a: &MatchArgs) -> Outcome {
    with_host(a, |host, pattern| {
        let found = find_embedding(host, pattern)?;
        emit(&json!({"contains": found.is_some(), "embedding": found.as_ref().map(|e| &e.map)}));
        Ok(found.is_some())
    })
}

fn count(a: &MatchArgs) -> Outcome {
    with_host(a, |host, pattern| {
        let c = count_embeddings(host, pattern)?;
        emit(&json!({"count": c.to_string()}));
        Ok(c.bits() > 0)
    })
}

fn ramsey(a: &RamseyArgs) -> Outcome {
    let query = RamseyQuery { blue: hypergraph(&a.blue)?, red: hypergraph(&a.red)?, n_cap: a.cap };
    let config = SearchConfig { max_bits: a.max_bits, ..SearchConfig::default() };
    let result = ordered_ramsey_exact(&query, config)?;
    if let (Some(path), Some(c)) = (&a.certificate, result.certificate()) {
        write(path, &c.to_orc())?;
    }
    let cert = a.certificate.as_ref().filter(|_| result.certificate().is_some()).map(|p| p.display().to_string());
    let body = match &result {
        RamseyResult::Value { value, certificate } => json!({
            "value": value,
            "certificate_n": certificate.as_ref().map(HyperedgeColoring::n),
            "certificate_file": cert,
        }),
        RamseyResult::LowerBound { at_least, certificate } => json!({
            "lower_bound": at_least,
            "certificate_n": certificate.as_ref().map(HyperedgeColoring::n),
            "certificate_file": cert,
        }),
    };
    emit(&body);
    Ok(result.value().is_some())
}

fn stepup(a: &StepupArgs, seed: u64) -> Outcome {
    let chi1 = coloring(&a.chi1)?;
    let labeling = match (&a.labeling, a.n) {
        (Some(p), _) => EdgeLabeling::from_orl(&read_text(p)?).map_err(|e| with_path(p, e))?,
        (None, Some(n)) => random_labeling(n, chi1.n() as u32, seed)?,
        (None, None) => return Err(Failure("give --labeling or --n".into())),
    };
    let c = stepup_coloring(&chi1, &labeling)?;
    let verdict = match a.check {
        Some(size) => Some(verify_no_blue_clique(&c, size)?),
        None => None,
    };
    let clean = verdict.as_ref().is_none_or(CliqueVerdict::is_clean);
    let summary = json!({
        "n": c.n(),
        "red": c.count(Color::Red),
        "blue": c.count(Color::Blue),
        "clean": verdict.as_ref().map(CliqueVerdict::is_clean),
        "counterexample": verdict.as_ref().and_then(counterexample),
    });
    match &a.output {
        Some(p) => {
            write(p, &c.to_orc())?;
            emit(&summary);
        }
        None if verdict.is_some() => emit(&summary),
        None => print!("{}", c.to_orc()),
    }
    Ok(clean)
}

fn counterexample(v: &CliqueVerdict) -> Option<Value> {
    match v {
        CliqueVerdict::Clean => None,
        CliqueVerdict::Counterexample(s) => Some(json!(s)),
    }
}

fn verify(a: &VerifyArgs) -> Outcome {
    let c = coloring(&a.coloring)?;
    let v = verify_no_blue_clique(&c, a.clique)?;
    emit(&json!({"clean": v.is_clean(), "counterexample": counterexample(&v)}));
    Ok(v.is_clean())
}

fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn log2_json(v: &ordered_ramsey::Log2) -> Value {
    json!({"log2": fmt_f64(v.value), "err": fmt_f64(v.err)})
}

fn expected(a: &ExpectedArgs) -> Outcome {
    let p = StepUpParams::new(a.t, a.n, a.log2_r, a.alpha)?;
    let log2_n = a.log2_n.unwrap_or_else(|| p.critical_log2_n().value);
    let chain = match a.l {
        Some(l) => ordered_ramsey::bounds::expected_red_copies_log2(log2_n, a.log2_r, a.alpha, a.n, l)?,
        None => p.expected_red_copies_log2(log2_n)?,
    };
    emit(&json!({
        "log2_n": fmt_f64(log2_n),
        "valid": p.valid(),
        "stages": chain.stages.iter().map(log2_json).collect::<Vec<_>>(),
        "bound": log2_json(&chain.bound()),
        "terminal": log2_json(&chain.terminal()),
    }));
    Ok(true)
}

fn density_bi(a: &BiArgs, seed: u64) -> Outcome {
    let g = BipartiteGraph::from_json(&read(&a.graph)?).map_err(|e| with_path(&a.graph, e))?;
    let (e1, e2, rho) = (rational("eps1", &a.eps1)?, rational("eps2", &a.eps2)?, rational("rho", &a.rho)?);
    let witness = match a.sampled {
        None => match is_bi_dense(&g, &e1, &e2, &rho, ExactCap { max_subsets: a.max_subsets })? {
            BiDensity::Dense => None,
            BiDensity::Violated(w) => Some(w),
        },
        Some(trials) => match sample_bi_dense(&g, &e1, &e2, &rho, trials, seed)? {
            SampleVerdict::NoViolationFound => None,
            SampleVerdict::Violated { witness, .. } => Some(witness),
        },
    };
    let verdict = match (&witness, a.sampled) {
        (Some(_), _) => "violated",
        (None, None) => "dense",
        (None, Some(_)) => "no-violation-found",
    };
    emit(&json!({"verdict": verdict, "witness": witness.as_ref().map(|w| w.to_json_value())}));
    Ok(witness.is_none())
}

fn density_tri(a: &TriArgs, seed: u64) -> Outcome {
    let h = hypergraph(&a.host)?;
    let (eps, rho) = (rational("eps", &a.eps)?, rational("rho", &a.rho)?);
    let strategy = match a.strategy {
        StrategyArg::ExhaustiveTiny => FalsifyStrategy::ExhaustiveTiny,
        StrategyArg::Induced => FalsifyStrategy::Induced,
        StrategyArg::Random => FalsifyStrategy::Random,
    };
    let out = falsify_tri_density(&h, &eps, &rho, a.m, strategy, a.budget, seed)?;
    emit(&json!({
        "witness": out.witness,
        "examined": out.examined,
        "exhausted": out.exhausted,
    }));
    Ok(out.witness.is_none())
}

fn embed(a: &EmbedArgs, seed: u64) -> Outcome {
    let pattern = hypergraph(&a.pattern)?;
    let host = hypergraph(&a.host)?;
    let mut params = EmbeddingParams::new(&pattern, rational("rho", &a.rho)?)?;
    if let Some(e) = &a.eps {
        params.eps = rational("eps", e)?;
    }
    params.enforce_size_guarantee = a.enforce_size;
    params.audit = a.audit;
    let check = match a.mode {
        ModeArg::Exact => DensityCheck::Exact(ExactCap { max_subsets: a.max_subsets }),
        ModeArg::Sampled => DensityCheck::Sampled { trials: a.trials },
    };
    let report = greedy_embed(&pattern, &host, &params, check, seed)?;
    let mut body = report.to_json_value();
    body["eps"] = json!(params.eps.render());
    body["d"] = json!(params.d);
    if let Some(p) = &a.trace {
        write(p, &(serde_json::to_string_pretty(&body).expect("json") + "\n"))?;
    }
    let ok = report.embedding().is_some();
    emit(&json!({
        "success": ok,
        "map": report.embedding().map(|e| &e.map),
        "outcome": body["outcome"].clone(),
    }));
    Ok(ok)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Contains(a) => contains(a),
        Command::Count(a) => count(a),
        Command::Ramsey(a) => ramsey(a),
        Command::Stepup(a) => stepup(a, cli.seed),
        Command::Verify(a) => verify(a),
        Command::Expected(a) => expected(a),
        Command::Density(DensityCommand::Bi(a)) => density_bi(a, cli.seed),
        Command::Density(DensityCommand::Tri(a)) => density_tri(a, cli.seed),
        Command::Embed(a) => embed(a, cli.seed),
        Command::Bound(a) => bound::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool set once");
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
