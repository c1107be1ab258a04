//! Experiment harness: the PC baseline, skeleton metrics and seeded runs
//! written out as CSV.

mod config;
mod pc;

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use config::{Algorithm, ExperimentConfig, Generator, OracleKind};
pub use pc::pc_baseline;

use crate::ci::{CiOracle, CiStats, Dataset, DsepOracle, FisherZOracle, GaussianCiConfig};
use crate::graph::{Dag, GraphError, Pdag};
use crate::marvel::{marvel_learn, LearnResult, MarvelError};
use crate::mb::total_conditioning;
use crate::synth::{self, SynthError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("seed {seed}: {source}")]
    Synth { seed: u64, source: SynthError },
    #[error("seed {seed}: {source}")]
    Learn { seed: u64, source: MarvelError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const CSV_HEADER: &str =
    "algo,seed,p,delta_in,m,n_samples,mb_tests,post_tests,asc,max_cond,precision,recall,f1,wall_ms,warnings";

/// One learner run against a known truth.
#[derive(Clone, Debug, PartialEq)]
pub struct RunMetrics {
    pub algo: Algorithm,
    pub seed: u64,
    pub p: usize,
    /// Maximum in-degree of the generated DAG.
    pub delta_in: usize,
    /// Edge count of the generated DAG.
    pub m: usize,
    pub n_samples: Option<usize>,
    pub mb_tests: u64,
    pub post_tests: u64,
    /// Mean conditioning-set size over the post-boundary tests; 0 if none.
    pub asc: f64,
    pub max_cond: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub wall_ms: f64,
    pub warnings: usize,
}

impl RunMetrics {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.4},{},{:.4},{:.4},{:.4},{:.3},{}",
            self.algo,
            self.seed,
            self.p,
            self.delta_in,
            self.m,
            self.n_samples.map_or(String::new(), |n| n.to_string()),
            self.mb_tests,
            self.post_tests,
            self.asc,
            self.max_cond,
            self.precision,
            self.recall,
            self.f1,
            self.wall_ms,
            self.warnings,
        )
    }
}

/// Column means over a set of runs.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanMetrics {
    pub algo: Algorithm,
    pub runs: usize,
    pub p: f64,
    pub delta_in: f64,
    pub m: f64,
    pub mb_tests: f64,
    pub post_tests: f64,
    pub asc: f64,
    pub max_cond: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub wall_ms: f64,
    pub warnings: f64,
}

impl MeanMetrics {
    pub fn of(rows: &[RunMetrics]) -> Option<Self> {
        let first = rows.first()?;
        let n = rows.len() as f64;
        let mean = |f: &dyn Fn(&RunMetrics) -> f64| rows.iter().map(f).sum::<f64>() / n;
        Some(Self {
            algo: first.algo,
            runs: rows.len(),
            p: mean(&|r| r.p as f64),
            delta_in: mean(&|r| r.delta_in as f64),
            m: mean(&|r| r.m as f64),
            mb_tests: mean(&|r| r.mb_tests as f64),
            post_tests: mean(&|r| r.post_tests as f64),
            asc: mean(&|r| r.asc),
            max_cond: mean(&|r| r.max_cond as f64),
            precision: mean(&|r| r.precision),
            recall: mean(&|r| r.recall),
            f1: mean(&|r| r.f1),
            wall_ms: mean(&|r| r.wall_ms),
            warnings: mean(&|r| r.warnings as f64),
        })
    }

    pub fn csv_row(&self, n_samples: Option<usize>) -> String {
        format!(
            "{},mean,{:.4},{:.4},{:.4},{},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.3},{:.4}",
            self.algo,
            self.p,
            self.delta_in,
            self.m,
            n_samples.map_or(String::new(), |n| n.to_string()),
            self.mb_tests,
            self.post_tests,
            self.asc,
            self.max_cond,
            self.precision,
            self.recall,
            self.f1,
            self.wall_ms,
            self.warnings,
        )
    }
}

/// Precision, recall and F1 of the learned adjacencies against the truth,
/// ignoring direction.
pub fn skeleton_metrics(learned: &Pdag, truth: &Dag) -> Result<(f64, f64, f64), GraphError> {
    if learned.p() != truth.p() {
        return Err(GraphError::InvalidQuery("learned and true graphs differ in size"));
    }
    let mut l = 0usize;
    let mut hit = 0usize;
    for a in 0..learned.p() {
        for b in learned.adjacents(a).iter().filter(|&b| b > a) {
            l += 1;
            hit += usize::from(truth.adjacent(a, b));
        }
    }
    let t = truth.n_edges();
    let precision = if l == 0 { if t == 0 { 1.0 } else { 0.0 } } else { hit as f64 / l as f64 };
    let recall = if t == 0 { 1.0 } else { hit as f64 / t as f64 };
    let f1 = if precision > 0.0 && recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok((precision, recall, f1))
}

/// Markov boundaries by total conditioning, then the chosen learner. Returns
/// the cost of the boundary phase alongside the learner's result.
pub fn learn<O: CiOracle>(algo: Algorithm, oracle: &mut O) -> Result<(CiStats, LearnResult), MarvelError> {
    let p = oracle.n_vars();
    let before = oracle.stats();
    let mb = total_conditioning(oracle, p);
    let after = oracle.stats();
    let mb_stats = CiStats {
        n_tests: after.n_tests - before.n_tests,
        sum_cond_size: after.sum_cond_size - before.sum_cond_size,
        max_cond_size: p.saturating_sub(2).min(after.max_cond_size),
        degenerate: after.degenerate - before.degenerate,
    };
    let result = match algo {
        Algorithm::Marvel => marvel_learn(oracle, mb)?,
        Algorithm::Pc => pc_baseline(oracle, &mb),
    };
    Ok((mb_stats, result))
}

/// Generates the truth for one seed. Separate streams for graph, SCM and
/// samples are drawn from the seed.
pub fn generate_truth(generator: &Generator, seed: u64) -> Result<Dag, SynthError> {
    let graph_seed = synth::rng(seed).random::<u64>();
    match *generator {
        Generator::FixedIndegree { p, delta_in } => synth::fixed_indegree_dag(p, delta_in, graph_seed),
        Generator::ErdosRenyi { p, m } => synth::erdos_renyi_dag(p, m, graph_seed),
        Generator::Cluster { p, d } => synth::cluster_adversarial_dag(p, d),
    }
}

/// Samples a dataset from a random SCM over `truth`.
pub fn generate_data(
    truth: &Dag,
    params: &synth::ScmParams,
    n: usize,
    seed: u64,
) -> Result<Dataset, SynthError> {
    let mut streams = synth::rng(seed);
    let _graph = streams.random::<u64>();
    let scm_seed = streams.random::<u64>();
    let sample_seed = streams.random::<u64>();
    let spec = synth::random_scm(truth, params, scm_seed)?;
    synth::sample(&spec, n, sample_seed)
}

pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<RunMetrics, BenchError> {
    let truth = generate_truth(&cfg.generator, seed).map_err(|source| BenchError::Synth { seed, source })?;
    let p = truth.p();
    let (mb_stats, result) = match cfg.oracle {
        OracleKind::Dsep => learn(cfg.algorithm, &mut DsepOracle::new(truth.clone())),
        OracleKind::FisherZ => {
            let n = cfg.n_samples.expect("validated config");
            let data = generate_data(&truth, &cfg.scm, n, seed)
                .map_err(|source| BenchError::Synth { seed, source })?;
            let ci_cfg = match cfg.alpha {
                Some(a) => GaussianCiConfig { alpha: a },
                None => GaussianCiConfig::default_for(p),
            };
            learn(cfg.algorithm, &mut FisherZOracle::new(&data, ci_cfg))
        }
    }
    .map_err(|source| BenchError::Learn { seed, source })?;

    let (precision, recall, f1) = skeleton_metrics(&result.essential, &truth)?;
    Ok(RunMetrics {
        algo: cfg.algorithm,
        seed,
        p,
        delta_in: truth.max_in_degree(),
        m: truth.n_edges(),
        n_samples: cfg.n_samples,
        mb_tests: mb_stats.n_tests,
        post_tests: result.ci.n_tests,
        asc: result.ci.asc().unwrap_or(0.0),
        max_cond: result.ci.max_cond_size,
        precision,
        recall,
        f1,
        wall_ms: if cfg.timing { result.elapsed.as_secs_f64() * 1e3 } else { 0.0 },
        warnings: result.warnings.len(),
    })
}

/// One row per seed, in the order given by the config. Seeds run in
/// parallel.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunMetrics>, BenchError> {
    cfg.validate()?;
    cfg.seeds.par_iter().map(|&s| run_seed(cfg, s)).collect()
}

/// Header, one row per run and a trailing `mean` row.
pub fn write_csv<W: Write>(mut w: W, rows: &[RunMetrics]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_row())?;
    }
    if let Some(mean) = MeanMetrics::of(rows) {
        writeln!(w, "{}", mean.csv_row(rows[0].n_samples))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrics_examples() {
        let truth = Dag::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let same = Pdag::from(&truth);
        assert_eq!(skeleton_metrics(&same, &truth).unwrap(), (1.0, 1.0, 1.0));

        let half = Pdag::from_edges(3, [], [(0, 1)]).unwrap();
        let (pr, rc, f1) = skeleton_metrics(&half, &truth).unwrap();
        assert_eq!((pr, rc), (1.0, 0.5));
        assert!((f1 - 2.0 / 3.0).abs() < 1e-12);

        let empty = Pdag::empty(3);
        assert_eq!(skeleton_metrics(&empty, &Dag::empty(3)).unwrap(), (1.0, 1.0, 1.0));
        assert_eq!(skeleton_metrics(&empty, &truth).unwrap(), (0.0, 0.0, 0.0));
        assert!(skeleton_metrics(&Pdag::empty(2), &truth).is_err());
    }

    #[test]
    fn mb_phase_counts_all_pairs() {
        let g = synth::fixed_indegree_dag(10, 2, 4).unwrap();
        let (mb, r) = learn(Algorithm::Marvel, &mut DsepOracle::new(g.clone())).unwrap();
        assert_eq!(mb.n_tests, 45);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn csv_is_reproducible() {
        let cfg = ExperimentConfig::from_toml(
            "generator = \"fixed_indegree\"\np = 12\ndelta_in = 3\nseeds = [3, 1, 2]",
        )
        .unwrap();
        let render = || {
            let rows = run_experiment(&cfg).unwrap();
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("marvel,3,12,"));
        assert!(lines[4].starts_with("marvel,mean,"));
    }
}
