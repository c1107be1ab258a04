//! Conditional-independence oracles.
//!
//! Every learner talks to the data only through [`CiOracle`]. Oracles count
//! every query they answer; they never deduplicate, so a repeated query costs
//! a second test. Avoiding repeats is the learner's job.

mod data;
mod dsep;
mod fisher_z;

use thiserror::Error;

use crate::varset::VarSet;

pub use data::Dataset;
pub use dsep::DsepOracle;
pub use fisher_z::{fisher_z_statistic, partial_correlation, FisherZOracle, GaussianCiConfig, RHO_CLAMP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CiError {
    #[error("invalid CI query: {0}")]
    InvalidQuery(String),
    #[error("correlation submatrix over {0:?} is singular")]
    Singular(Vec<usize>),
    #[error("dataset: {0}")]
    Data(String),
    #[error("significance level must lie in (0, 1), got {0}")]
    Alpha(f64),
}

/// Running totals over the queries an oracle has answered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CiStats {
    pub n_tests: u64,
    pub sum_cond_size: u64,
    pub max_cond_size: usize,
    /// Queries that could not be evaluated and were declared dependent.
    pub degenerate: u64,
}

impl CiStats {
    pub fn record(&mut self, cond_size: usize) {
        self.n_tests += 1;
        self.sum_cond_size += cond_size as u64;
        self.max_cond_size = self.max_cond_size.max(cond_size);
    }

    /// Average conditioning-set size, `None` before the first test.
    pub fn asc(&self) -> Option<f64> {
        (self.n_tests > 0).then(|| self.sum_cond_size as f64 / self.n_tests as f64)
    }

    pub fn merge(&mut self, other: &CiStats) {
        self.n_tests += other.n_tests;
        self.sum_cond_size += other.sum_cond_size;
        self.max_cond_size = self.max_cond_size.max(other.max_cond_size);
        self.degenerate += other.degenerate;
    }
}

/// A source of answers to "is `x` independent of `y` given `s`?".
pub trait CiOracle {
    fn n_vars(&self) -> usize;

    /// `true` means independent. Symmetric in `x` and `y`; counted once per
    /// call.
    fn query(&mut self, x: usize, y: usize, s: &VarSet) -> bool;

    fn stats(&self) -> CiStats;

    /// Returns the statistics so far and resets them, for per-phase
    /// accounting.
    fn take_stats(&mut self) -> CiStats;
}

impl<O: CiOracle + ?Sized> CiOracle for &mut O {
    fn n_vars(&self) -> usize {
        (**self).n_vars()
    }

    fn query(&mut self, x: usize, y: usize, s: &VarSet) -> bool {
        (**self).query(x, y, s)
    }

    fn stats(&self) -> CiStats {
        (**self).stats()
    }

    fn take_stats(&mut self) -> CiStats {
        (**self).take_stats()
    }
}
