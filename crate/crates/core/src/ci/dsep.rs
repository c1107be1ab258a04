use super::{CiOracle, CiStats};
use crate::graph::{d_separated, Dag};
use crate::varset::VarSet;

/// Answers CI queries by d-separation in a known DAG.
#[derive(Clone, Debug)]
pub struct DsepOracle {
    dag: Dag,
    stats: CiStats,
}

impl DsepOracle {
    pub fn new(dag: Dag) -> Self {
        Self { dag, stats: CiStats::default() }
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }
}

impl CiOracle for DsepOracle {
    fn n_vars(&self) -> usize {
        self.dag.p()
    }

    /// # Panics
    /// On an ill-formed query (index out of range, `x == y`, or an endpoint
    /// inside `s`). Learners never issue one.
    fn query(&mut self, x: usize, y: usize, s: &VarSet) -> bool {
        self.stats.record(s.len());
        d_separated(&self.dag, x, y, s).unwrap_or_else(|e| panic!("bad CI query: {e}"))
    }

    fn stats(&self) -> CiStats {
        self.stats
    }

    fn take_stats(&mut self) -> CiStats {
        std::mem::take(&mut self.stats)
    }
}
