use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{CiError, CiOracle, CiStats, Dataset};
use crate::varset::VarSet;

/// Partial correlations are clamped to `[-1 + RHO_CLAMP, 1 - RHO_CLAMP]`
/// before the log transform.
pub const RHO_CLAMP: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianCiConfig {
    pub alpha: f64,
}

impl GaussianCiConfig {
    pub fn new(alpha: f64) -> Result<Self, CiError> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self { alpha })
        } else {
            Err(CiError::Alpha(alpha))
        }
    }

    /// `alpha = 2 / p²`.
    pub fn default_for(p: usize) -> Self {
        Self { alpha: (2.0 / (p as f64 * p as f64)).min(0.5) }
    }
}

/// Partial correlation of `x` and `y` given `s`, from the inverse of the
/// correlation submatrix over `{x, y} ∪ s`.
pub fn partial_correlation(d: &Dataset, x: usize, y: usize, s: &VarSet) -> Result<f64, CiError> {
    let p = d.p();
    if x == y {
        return Err(CiError::InvalidQuery("x and y must differ".into()));
    }
    if x >= p || y >= p || s.last().is_some_and(|m| m >= p) {
        return Err(CiError::InvalidQuery(format!("index out of range for p = {p}")));
    }
    if s.contains(x) || s.contains(y) {
        return Err(CiError::InvalidQuery("conditioning set contains an endpoint".into()));
    }
    let clamp = |r: f64| r.clamp(-1.0 + RHO_CLAMP, 1.0 - RHO_CLAMP);
    if s.is_empty() {
        return Ok(clamp(d.corr(x, y)));
    }

    let idx: Vec<usize> = [x, y].into_iter().chain(s.iter()).collect();
    let k = idx.len();
    let sub = DMatrix::from_fn(k, k, |i, j| d.corr(idx[i], idx[j]));
    let prec = sub.try_inverse().ok_or_else(|| CiError::Singular(idx.clone()))?;
    let (pxx, pyy, pxy) = (prec[(0, 0)], prec[(1, 1)], prec[(0, 1)]);
    if !(pxx > 0.0 && pyy > 0.0 && pxy.is_finite()) {
        return Err(CiError::Singular(idx));
    }
    Ok(clamp(-pxy / (pxx * pyy).sqrt()))
}

/// `sqrt(n - |s| - 3) · atanh(rho)`, or `None` when `n <= |s| + 3`.
pub fn fisher_z_statistic(rho: f64, n: usize, cond_size: usize) -> Option<f64> {
    let dof = n.checked_sub(cond_size + 3).filter(|&d| d > 0)?;
    Some((dof as f64).sqrt() * 0.5 * ((1.0 + rho) / (1.0 - rho)).ln())
}

/// Gaussian CI test on the Fisher z-transform of the partial correlation.
///
/// Declares independence iff `|z| <= Φ⁻¹(1 - alpha/2)`. Queries that cannot be
/// evaluated (too few samples, singular submatrix) are answered "dependent"
/// and counted in [`CiStats::degenerate`], so no edge is ever deleted on
/// numerically meaningless evidence.
#[derive(Clone, Debug)]
pub struct FisherZOracle<'d> {
    data: &'d Dataset,
    threshold: f64,
    stats: CiStats,
}

impl<'d> FisherZOracle<'d> {
    pub fn new(data: &'d Dataset, cfg: GaussianCiConfig) -> Self {
        let threshold = Normal::standard().inverse_cdf(1.0 - cfg.alpha / 2.0);
        Self { data, threshold, stats: CiStats::default() }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

impl CiOracle for FisherZOracle<'_> {
    fn n_vars(&self) -> usize {
        self.data.p()
    }

    fn query(&mut self, x: usize, y: usize, s: &VarSet) -> bool {
        self.stats.record(s.len());
        // fixed endpoint order keeps the answer exactly symmetric
        let (a, b) = (x.min(y), x.max(y));
        let z = partial_correlation(self.data, a, b, s)
            .ok()
            .and_then(|rho| fisher_z_statistic(rho, self.data.n(), s.len()));
        match z {
            Some(z) => z.abs() <= self.threshold,
            None => {
                self.stats.degenerate += 1;
                false
            }
        }
    }

    fn stats(&self) -> CiStats {
        self.stats
    }

    fn take_stats(&mut self) -> CiStats {
        std::mem::take(&mut self.stats)
    }
}
