//! Python bindings. Vertices are plain integers, sets are lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use marvel_core::bench::{self, Algorithm, ExperimentConfig};
use marvel_core::ci::{CiOracle, Dataset, DsepOracle, FisherZOracle, GaussianCiConfig};
use marvel_core::graph::{self as g};
use marvel_core::marvel::{self as mv, MarvelOptions};
use marvel_core::mb::total_conditioning;
use marvel_core::synth::{self, ScmParams};
use marvel_core::VarSet;

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn check_vertex(p: usize, v: usize) -> PyResult<()> {
    if v < p {
        Ok(())
    } else {
        Err(PyValueError::new_err(format!("vertex {v} out of range for p = {p}")))
    }
}

#[pyclass(name = "Dag", module = "marvel", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyDag(pub g::Dag);

#[pymethods]
impl PyDag {
    #[new]
    #[pyo3(signature = (p, edges = Vec::new()))]
    fn new(p: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        g::Dag::from_edges(p, edges).map(Self).map_err(value_err)
    }

    /// Parses the edge-list text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        g::parse_dag(text).map(Self).map_err(value_err)
    }

    fn to_text(&self) -> String {
        g::write_dag(&self.0)
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn parents(&self, x: usize) -> PyResult<Vec<usize>> {
        check_vertex(self.0.p(), x)?;
        Ok(self.0.parents(x).to_vec())
    }

    fn children(&self, x: usize) -> PyResult<Vec<usize>> {
        check_vertex(self.0.p(), x)?;
        Ok(self.0.children(x).to_vec())
    }

    fn max_in_degree(&self) -> usize {
        self.0.max_in_degree()
    }

    fn __len__(&self) -> usize {
        self.0.n_edges()
    }

    fn __repr__(&self) -> String {
        format!("Dag(p={}, edges={:?})", self.0.p(), self.edges())
    }
}

#[pyclass(name = "Pdag", module = "marvel", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPdag(pub g::Pdag);

#[pymethods]
impl PyPdag {
    #[new]
    #[pyo3(signature = (p, directed = Vec::new(), undirected = Vec::new()))]
    fn new(p: usize, directed: Vec<(usize, usize)>, undirected: Vec<(usize, usize)>) -> PyResult<Self> {
        g::Pdag::from_edges(p, directed, undirected).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        g::parse_pdag(text).map(Self).map_err(value_err)
    }

    fn to_text(&self) -> String {
        g::write_pdag(&self.0)
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    fn directed_edges(&self) -> Vec<(usize, usize)> {
        self.0.directed_edges().into_iter().collect()
    }

    fn undirected_edges(&self) -> Vec<(usize, usize)> {
        self.0.undirected_edges().into_iter().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Pdag(p={}, directed={:?}, undirected={:?})",
            self.0.p(),
            self.directed_edges(),
            self.undirected_edges()
        )
    }
}

/// Output of a learner run.
#[pyclass(name = "LearnResult", module = "marvel", frozen, get_all)]
pub struct PyLearnResult {
    pub essential: PyPdag,
    pub elimination_order: Vec<usize>,
    pub mb_tests: u64,
    pub post_tests: u64,
    pub asc: f64,
    pub max_cond: usize,
    pub warnings: Vec<String>,
}

#[pymethods]
impl PyLearnResult {
    fn __repr__(&self) -> String {
        format!(
            "LearnResult(mb_tests={}, post_tests={}, asc={:.3}, warnings={})",
            self.mb_tests,
            self.post_tests,
            self.asc,
            self.warnings.len()
        )
    }
}

fn parse_algo(algo: &str) -> PyResult<Algorithm> {
    algo.parse().map_err(PyValueError::new_err)
}

fn run_learner<O: CiOracle>(oracle: &mut O, algo: Algorithm, caches: bool) -> PyResult<PyLearnResult> {
    let p = oracle.n_vars();
    let mb = total_conditioning(oracle, p);
    let mb_tests = oracle.stats().n_tests;
    let opts = if caches { MarvelOptions::default() } else { MarvelOptions { caches: false, memo: false } };
    let r = match algo {
        Algorithm::Marvel => mv::marvel_learn_with(oracle, mb, opts).map_err(value_err)?,
        Algorithm::Pc => bench::pc_baseline(oracle, &mb),
    };
    Ok(PyLearnResult {
        essential: PyPdag(r.essential),
        elimination_order: r.elimination_order,
        mb_tests,
        post_tests: r.ci.n_tests,
        asc: r.ci.asc().unwrap_or(0.0),
        max_cond: r.ci.max_cond_size,
        warnings: r.warnings,
    })
}

/// Learns the essential graph of `dag` with a d-separation oracle.
#[pyfunction]
#[pyo3(signature = (dag, algo = "marvel", caches = true))]
fn learn_from_dag(dag: &PyDag, algo: &str, caches: bool) -> PyResult<PyLearnResult> {
    run_learner(&mut DsepOracle::new(dag.0.clone()), parse_algo(algo)?, caches)
}

/// Learns from samples (rows of equal length) with the Fisher-Z test;
/// `alpha` defaults to 2/p².
#[pyfunction]
#[pyo3(signature = (rows, algo = "marvel", alpha = None, caches = true))]
fn learn_from_data(rows: Vec<Vec<f64>>, algo: &str, alpha: Option<f64>, caches: bool) -> PyResult<PyLearnResult> {
    let data = Dataset::from_rows(rows).map_err(value_err)?;
    let cfg = match alpha {
        Some(a) => GaussianCiConfig::new(a).map_err(value_err)?,
        None => GaussianCiConfig::default_for(data.p()),
    };
    run_learner(&mut FisherZOracle::new(&data, cfg), parse_algo(algo)?, caches)
}

#[pyfunction]
fn d_separated(dag: &PyDag, x: usize, y: usize, s: Vec<usize>) -> PyResult<bool> {
    let s: VarSet = s.into_iter().collect();
    g::d_separated(&dag.0, x, y, &s).map_err(value_err)
}

#[pyfunction]
fn is_removable(dag: &PyDag, x: usize) -> PyResult<bool> {
    check_vertex(dag.0.p(), x)?;
    Ok(g::is_removable_graphical(&dag.0, x))
}

#[pyfunction]
fn markov_boundary(dag: &PyDag, x: usize) -> PyResult<Vec<usize>> {
    check_vertex(dag.0.p(), x)?;
    Ok(g::markov_boundary_graphical(&dag.0, x).to_vec())
}

/// Essential graph of `dag` by exhaustive search (small graphs only).
#[pyfunction]
fn cpdag(dag: &PyDag) -> PyResult<PyPdag> {
    g::cpdag_bruteforce(&dag.0).map(PyPdag).map_err(value_err)
}

#[pyfunction]
fn markov_equivalent(pdag: &PyPdag, dag: &PyDag) -> bool {
    g::markov_equivalent(&pdag.0, &dag.0)
}

#[pyfunction]
fn skeleton_metrics(learned: &PyPdag, truth: &PyDag) -> PyResult<(f64, f64, f64)> {
    bench::skeleton_metrics(&learned.0, &truth.0).map_err(value_err)
}

#[pyfunction]
fn ci_budget_bound(p: usize, delta_in: usize) -> u64 {
    mv::ci_budget_bound(p, delta_in)
}

#[pyfunction]
fn erdos_renyi_dag(p: usize, m: usize, seed: u64) -> PyResult<PyDag> {
    synth::erdos_renyi_dag(p, m, seed).map(PyDag).map_err(value_err)
}

#[pyfunction]
fn fixed_indegree_dag(p: usize, delta_in: usize, seed: u64) -> PyResult<PyDag> {
    synth::fixed_indegree_dag(p, delta_in, seed).map(PyDag).map_err(value_err)
}

#[pyfunction]
fn cluster_adversarial_dag(p: usize, d: usize) -> PyResult<PyDag> {
    synth::cluster_adversarial_dag(p, d).map(PyDag).map_err(value_err)
}

/// `n` samples from a random linear-Gaussian SCM on `dag`, as rows.
/// `scm` is "default" or "wide".
#[pyfunction]
#[pyo3(signature = (dag, n, seed, scm = "default"))]
fn sample_scm(dag: &PyDag, n: usize, seed: u64, scm: &str) -> PyResult<Vec<Vec<f64>>> {
    let params = match scm {
        "default" => ScmParams::default(),
        "wide" => ScmParams::wide(),
        other => return Err(PyValueError::new_err(format!("unknown scm preset `{other}`"))),
    };
    let data = bench::generate_data(&dag.0, &params, n, seed).map_err(value_err)?;
    Ok((0..data.n()).map(|i| (0..data.p()).map(|j| data.value(i, j)).collect()).collect())
}

/// Runs an experiment from TOML config text and returns the CSV.
#[pyfunction]
fn run_bench(py: Python<'_>, config: &str) -> PyResult<String> {
    let cfg = ExperimentConfig::from_toml(config).map_err(value_err)?;
    let rows = py.detach(|| bench::run_experiment(&cfg)).map_err(value_err)?;
    let mut buf = Vec::new();
    bench::write_csv(&mut buf, &rows).map_err(value_err)?;
    String::from_utf8(buf).map_err(value_err)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDag>()?;
    m.add_class::<PyPdag>()?;
    m.add_class::<PyLearnResult>()?;
    m.add_function(wrap_pyfunction!(learn_from_dag, m)?)?;
    m.add_function(wrap_pyfunction!(learn_from_data, m)?)?;
    m.add_function(wrap_pyfunction!(d_separated, m)?)?;
    m.add_function(wrap_pyfunction!(is_removable, m)?)?;
    m.add_function(wrap_pyfunction!(markov_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(cpdag, m)?)?;
    m.add_function(wrap_pyfunction!(markov_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(skeleton_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(ci_budget_bound, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_renyi_dag, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_indegree_dag, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_adversarial_dag, m)?)?;
    m.add_function(wrap_pyfunction!(sample_scm, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    Ok(())
}

#[pymodule]
fn marvel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
