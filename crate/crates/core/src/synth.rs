//! Random DAG generators and linear-Gaussian structural causal models.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::ci::Dataset;
use crate::graph::Dag;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("{m} edges requested but only {max} pairs exist")]
    TooManyEdges { m: usize, max: usize },
    #[error("in-degree {delta_in} needs more than {p} vertices")]
    InDegree { delta_in: usize, p: usize },
    #[error("invalid interval [{lo}, {hi}]")]
    Interval { lo: f64, hi: f64 },
    #[error("at least two samples are needed")]
    TooFewSamples,
    #[error("{0}")]
    Data(String),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of edges giving `density` over the `C(p, 2)` possible pairs,
/// rounded to nearest.
pub fn edges_for_density(p: usize, density: f64) -> usize {
    (density * (p * p.saturating_sub(1) / 2) as f64).round() as usize
}

/// `m` distinct pairs chosen uniformly, oriented along one random vertex
/// ordering.
pub fn erdos_renyi_dag(p: usize, m: usize, seed: u64) -> Result<Dag, SynthError> {
    let max = p * p.saturating_sub(1) / 2;
    if m > max {
        return Err(SynthError::TooManyEdges { m, max });
    }
    let mut rng = rng(seed);
    let mut rank: Vec<usize> = (0..p).collect();
    rank.shuffle(&mut rng);
    let edges = index::sample(&mut rng, max, m).into_iter().map(|k| {
        let (a, b) = unrank_pair(k);
        if rank[a] < rank[b] { (a, b) } else { (b, a) }
    });
    Ok(Dag::from_edges(p, edges.collect::<Vec<_>>()).expect("ordered edges are acyclic"))
}

/// The `k`-th pair `(a, b)`, `a < b`, in the order (0,1), (0,2), (1,2), (0,3), ...
fn unrank_pair(k: usize) -> (usize, usize) {
    let mut b = (((8 * k + 1) as f64).sqrt() as usize + 1) / 2;
    while b * (b - 1) / 2 > k {
        b -= 1;
    }
    while (b + 1) * b / 2 <= k {
        b += 1;
    }
    (k - b * (b - 1) / 2, b)
}

/// Random ordering; every vertex draws `delta_in` distinct potential parents
/// from the others and keeps those that precede it.
pub fn fixed_indegree_dag(p: usize, delta_in: usize, seed: u64) -> Result<Dag, SynthError> {
    if delta_in >= p.max(1) {
        return Err(SynthError::InDegree { delta_in, p });
    }
    let mut rng = rng(seed);
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(&mut rng);
    let mut rank = vec![0; p];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut edges = Vec::new();
    for v in 0..p {
        for k in index::sample(&mut rng, p - 1, delta_in) {
            let u = if k >= v { k + 1 } else { k };
            if rank[u] < rank[v] {
                edges.push((u, v));
            }
        }
    }
    Ok(Dag::from_edges(p, edges).expect("ordered edges are acyclic"))
}

/// Disjoint complete clusters of `d + 1` consecutive vertices, oriented by
/// index; vertices that do not fill a last cluster stay isolated.
pub fn cluster_adversarial_dag(p: usize, d: usize) -> Result<Dag, SynthError> {
    if d + 1 > p {
        return Err(SynthError::InDegree { delta_in: d, p });
    }
    let k = d + 1;
    let mut edges = Vec::new();
    for start in (0..p / k).map(|c| c * k) {
        for a in start..start + k {
            for b in a + 1..start + k {
                edges.push((a, b));
            }
        }
    }
    Ok(Dag::from_edges(p, edges).expect("index-ordered edges are acyclic"))
}

/// Ranges for SCM parameters: coefficient magnitudes and noise standard
/// deviations are uniform on their intervals, coefficient signs are fair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScmParams {
    pub coeff_lo: f64,
    pub coeff_hi: f64,
    pub sd_lo: f64,
    pub sd_hi: f64,
}

impl Default for ScmParams {
    /// `±[0.5, 1]`, noise sd in `[1, √3]`.
    fn default() -> Self {
        Self { coeff_lo: 0.5, coeff_hi: 1.0, sd_lo: 1.0, sd_hi: 3f64.sqrt() }
    }
}

impl ScmParams {
    /// `±[0.5, 2]`, noise sd in `[1, √2]`.
    pub fn wide() -> Self {
        Self { coeff_lo: 0.5, coeff_hi: 2.0, sd_lo: 1.0, sd_hi: 2f64.sqrt() }
    }

    fn validate(&self) -> Result<(), SynthError> {
        for (lo, hi) in [(self.coeff_lo, self.coeff_hi), (self.sd_lo, self.sd_hi)] {
            if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
                return Err(SynthError::Interval { lo, hi });
            }
        }
        if self.sd_lo <= 0.0 {
            return Err(SynthError::Interval { lo: self.sd_lo, hi: self.sd_hi });
        }
        Ok(())
    }
}

/// `X_v = Σ_{u -> v} coeffs[(u, v)]·X_u + N(0, noise_sd[v]²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScmSpec {
    pub dag: Dag,
    pub coeffs: BTreeMap<(usize, usize), f64>,
    pub noise_sd: Vec<f64>,
}

impl ScmSpec {
    /// `(I - B)⁻¹ D (I - B)⁻ᵀ` with `B[v][u]` the weight of `u -> v` and
    /// `D` the noise variances.
    pub fn population_covariance(&self) -> DMatrix<f64> {
        let p = self.dag.p();
        let mut b = DMatrix::zeros(p, p);
        for (&(u, v), &c) in &self.coeffs {
            b[(v, u)] = c;
        }
        let inv = (DMatrix::identity(p, p) - b)
            .try_inverse()
            .expect("I - B is unit triangular up to permutation");
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            p,
            self.noise_sd.iter().map(|s| s * s),
        ));
        &inv * d * inv.transpose()
    }

    pub fn population_correlation(&self) -> Vec<Vec<f64>> {
        let cov = self.population_covariance();
        let p = cov.nrows();
        (0..p)
            .map(|i| (0..p).map(|j| cov[(i, j)] / (cov[(i, i)] * cov[(j, j)]).sqrt()).collect())
            .collect()
    }
}

pub fn random_scm(dag: &Dag, params: &ScmParams, seed: u64) -> Result<ScmSpec, SynthError> {
    params.validate()?;
    let mut rng = rng(seed);
    let mut coeffs = BTreeMap::new();
    for (u, v) in dag.edges() {
        let mag = rng.random_range(params.coeff_lo..=params.coeff_hi);
        let c = if rng.random_bool(0.5) { mag } else { -mag };
        coeffs.insert((u, v), c);
    }
    let noise_sd = (0..dag.p())
        .map(|_| rng.random_range(params.sd_lo..=params.sd_hi))
        .collect();
    Ok(ScmSpec { dag: dag.clone(), coeffs, noise_sd })
}

/// `n` i.i.d. draws, each generated in topological order.
pub fn sample(spec: &ScmSpec, n: usize, seed: u64) -> Result<Dataset, SynthError> {
    if n < 2 {
        return Err(SynthError::TooFewSamples);
    }
    let mut rng = rng(seed);
    let order = spec.dag.topological_order().expect("a Dag is acyclic");
    let p = spec.dag.p();
    let noise: Vec<Normal<f64>> = spec
        .noise_sd
        .iter()
        .map(|&sd| Normal::new(0.0, sd).expect("noise sd is positive"))
        .collect();
    let parents: Vec<Vec<(usize, f64)>> = (0..p)
        .map(|v| spec.dag.parents(v).iter().map(|u| (u, spec.coeffs[&(u, v)])).collect())
        .collect();
    let rows = (0..n)
        .map(|_| {
            let mut row = vec![0.0; p];
            for &v in &order {
                let mean: f64 = parents[v].iter().map(|&(u, c)| c * row[u]).sum();
                row[v] = mean + noise[v].sample(&mut rng);
            }
            row
        })
        .collect();
    Dataset::from_rows(rows).map_err(|e| SynthError::Data(e.to_string()))
}
