use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use marvel_core::bench::{
    self, generate_data, generate_truth, skeleton_metrics, Algorithm, ExperimentConfig, Generator, CSV_HEADER,
};
use marvel_core::ci::{CiOracle, Dataset, DsepOracle, FisherZOracle, GaussianCiConfig};
use marvel_core::graph::{markov_equivalent, parse_dag, parse_pdag, write_dag, write_pdag, Dag};
use marvel_core::marvel::{marvel_learn_with, LearnResult, MarvelOptions};
use marvel_core::mb::total_conditioning;
use marvel_core::synth::{edges_for_density, ScmParams};

#[derive(Parser)]
#[command(name = "marvel", version, about = "Causal structure learning by recursive variable elimination")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random DAG, optionally with Gaussian samples from a random SCM on it
    Generate(GenerateArgs),
    /// Learn an essential graph from a DAG (d-separation oracle) or a CSV dataset
    Learn(LearnArgs),
    /// Run an experiment described by a TOML config and write CSV
    Bench(BenchArgs),
    /// Check whether a learned PDAG is Markov equivalent to a DAG
    OracleCheck(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorKind {
    FixedIndegree,
    ErdosRenyi,
    Cluster,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Marvel,
    Pc,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Marvel => Algorithm::Marvel,
            AlgoArg::Pc => Algorithm::Pc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Dsep,
    FisherZ,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScmArg {
    Default,
    Wide,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "fixed-indegree")]
    generator: GeneratorKind,
    #[arg(long)]
    p: usize,
    /// Maximum in-degree (fixed-indegree) or cluster in-degree (cluster)
    #[arg(long, default_value_t = 2)]
    delta_in: usize,
    /// Edge count (erdos-renyi)
    #[arg(long, conflicts_with = "density")]
    m: Option<usize>,
    /// Edge density in [0, 1] (erdos-renyi)
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list file for the DAG; stdout if absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write this many samples
    #[arg(long, requires = "data")]
    n: Option<usize>,
    /// CSV file for the samples
    #[arg(long, requires = "n")]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "default")]
    scm: ScmArg,
}

#[derive(clap::Args)]
struct LearnArgs {
    /// True DAG; queries are answered by d-separation
    #[arg(long, conflicts_with = "data", required_unless_present = "data")]
    graph: Option<PathBuf>,
    /// Headerless CSV samples; queries use the Fisher-Z test
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, value_enum)]
    oracle: Option<OracleArg>,
    #[arg(long, value_enum, default_value = "marvel")]
    algo: AlgoArg,
    /// Significance level for Fisher-Z; defaults to 2/p²
    #[arg(long)]
    alpha: Option<f64>,
    /// True DAG used for metrics when learning from data
    #[arg(long, requires = "data")]
    truth: Option<PathBuf>,
    /// PDAG output file; stdout if absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Disable cross-round caches and the query memo
    #[arg(long)]
    no_caches: bool,
}

#[derive(clap::Args)]
struct BenchArgs {
    config: PathBuf,
    /// CSV output file; stdout if absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    algo: Option<AlgoArg>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Run this single seed instead of the configured ones
    #[arg(long)]
    seed: Option<u64>,
    /// Record wall-clock time per run
    #[arg(long)]
    timing: bool,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long)]
    pdag: PathBuf,
    #[arg(long)]
    truth: PathBuf,
}

/// Bad input (exit 1) or failure while computing (exit 2).
enum Failure {
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn internal<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Internal(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Learn(a) => learn(a),
        Command::Bench(a) => run_bench(a),
        Command::OracleCheck(a) => oracle_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)
}

fn read_dag(path: &Path) -> Result<Dag, Failure> {
    parse_dag(&read(path)?).with_context(|| format!("parsing {}", path.display())).map_err(usage)
}

/// Runs `f` on a buffered writer to `path`, or to stdout.
fn with_output<F>(path: Option<&Path>, f: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let res = match path {
        Some(p) => File::create(p).and_then(|file| {
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()
        }),
        None => f(&mut io::stdout().lock()),
    };
    res.map_err(|e| internal(anyhow!(e)))
}

fn generate(a: GenerateArgs) -> Result<(), Failure> {
    let generator = match a.generator {
        GeneratorKind::FixedIndegree => Generator::FixedIndegree { p: a.p, delta_in: a.delta_in },
        GeneratorKind::Cluster => Generator::Cluster { p: a.p, d: a.delta_in },
        GeneratorKind::ErdosRenyi => {
            let m = match (a.m, a.density) {
                (Some(m), _) => m,
                (None, Some(d)) => edges_for_density(a.p, d),
                (None, None) => return Err(usage(anyhow!("erdos-renyi needs --m or --density"))),
            };
            Generator::ErdosRenyi { p: a.p, m }
        }
    };
    let dag = generate_truth(&generator, a.seed).map_err(usage)?;
    with_output(a.out.as_deref(), |w| w.write_all(write_dag(&dag).as_bytes()))?;
    if let (Some(n), Some(path)) = (a.n, a.data.as_deref()) {
        let params = match a.scm {
            ScmArg::Default => ScmParams::default(),
            ScmArg::Wide => ScmParams::wide(),
        };
        let data = generate_data(&dag, &params, n, a.seed).map_err(usage)?;
        with_output(Some(path), |w| data.write_csv(w))?;
    }
    Ok(())
}

fn learn(a: LearnArgs) -> Result<(), Failure> {
    let opts = if a.no_caches { MarvelOptions { caches: false, memo: false } } else { MarvelOptions::default() };
    let algo: Algorithm = a.algo.into();
    let (truth, n_samples, mb_tests, result) = if let Some(path) = a.graph.as_deref() {
        if matches!(a.oracle, Some(OracleArg::FisherZ)) || a.alpha.is_some() {
            return Err(usage(anyhow!("--graph uses the d-separation oracle; Fisher-Z needs --data")));
        }
        let dag = read_dag(path)?;
        let (mb, r) = run_learner(algo, opts, &mut DsepOracle::new(dag.clone()))?;
        (Some(dag), None, mb, r)
    } else {
        let path = a.data.as_deref().expect("clap enforces --graph or --data");
        if matches!(a.oracle, Some(OracleArg::Dsep)) {
            return Err(usage(anyhow!("--data uses the Fisher-Z oracle; d-separation needs --graph")));
        }
        let file = File::open(path).with_context(|| format!("opening {}", path.display())).map_err(usage)?;
        let data = Dataset::from_csv(file).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
        let cfg = match a.alpha {
            Some(alpha) => GaussianCiConfig::new(alpha).map_err(usage)?,
            None => GaussianCiConfig::default_for(data.p()),
        };
        let truth = a.truth.as_deref().map(read_dag).transpose()?;
        if truth.as_ref().is_some_and(|t| t.p() != data.p()) {
            return Err(usage(anyhow!("--truth has a different number of variables than --data")));
        }
        let (mb, r) = run_learner(algo, opts, &mut FisherZOracle::new(&data, cfg))?;
        (truth, Some(data.n()), mb, r)
    };

    with_output(a.out.as_deref(), |w| w.write_all(write_pdag(&result.essential).as_bytes()))?;
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    let metrics = match &truth {
        Some(t) => {
            let (pr, rc, f1) = skeleton_metrics(&result.essential, t).map_err(internal)?;
            format!("{pr:.4},{rc:.4},{f1:.4}")
        }
        None => ",,".to_string(),
    };
    let p = result.essential.p();
    let (delta_in, m) = truth.as_ref().map_or((String::new(), String::new()), |t| {
        (t.max_in_degree().to_string(), t.n_edges().to_string())
    });
    let row = format!(
        "{algo},,{p},{delta_in},{m},{},{mb_tests},{},{:.4},{},{metrics},{:.3},{}",
        n_samples.map_or(String::new(), |n| n.to_string()),
        result.ci.n_tests,
        result.ci.asc().unwrap_or(0.0),
        result.ci.max_cond_size,
        result.elapsed.as_secs_f64() * 1e3,
        result.warnings.len(),
    );
    // keep stdout clean for the PDAG when no --out was given
    if a.out.is_some() {
        println!("{CSV_HEADER}\n{row}");
    } else {
        eprintln!("{CSV_HEADER}\n{row}");
    }
    Ok(())
}

fn run_learner<O: CiOracle>(
    algo: Algorithm,
    opts: MarvelOptions,
    oracle: &mut O,
) -> Result<(u64, LearnResult), Failure> {
    let p = oracle.n_vars();
    let mb = total_conditioning(oracle, p);
    let mb_tests = oracle.stats().n_tests;
    let result = match algo {
        Algorithm::Marvel => marvel_learn_with(oracle, mb, opts).map_err(internal)?,
        Algorithm::Pc => bench::pc_baseline(oracle, &mb),
    };
    Ok((mb_tests, result))
}

fn run_bench(a: BenchArgs) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::from_toml(&read(&a.config)?).map_err(usage)?;
    if let Some(algo) = a.algo {
        cfg.algorithm = algo.into();
    }
    if a.alpha.is_some() {
        cfg.alpha = a.alpha;
    }
    if let Some(seed) = a.seed {
        cfg.seeds = vec![seed];
    }
    cfg.timing |= a.timing;
    cfg.validate().map_err(usage)?;
    let rows = bench::run_experiment(&cfg).map_err(internal)?;
    with_output(a.out.as_deref(), |w| bench::write_csv(w, &rows))
}

fn oracle_check(a: CheckArgs) -> Result<(), Failure> {
    let pdag = parse_pdag(&read(&a.pdag)?)
        .with_context(|| format!("parsing {}", a.pdag.display()))
        .map_err(usage)?;
    let truth = read_dag(&a.truth)?;
    if pdag.p() != truth.p() {
        return Err(usage(anyhow!("graphs have {} and {} vertices", pdag.p(), truth.p())));
    }
    println!("equivalent: {}", markov_equivalent(&pdag, &truth));
    Ok(())
}
