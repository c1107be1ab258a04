//! Markov boundary discovery by total conditioning, and the incremental
//! update applied after a variable is eliminated.

use std::fmt;

use thiserror::Error;

use crate::ci::CiOracle;
use crate::varset::VarSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MbError {
    #[error("variable {0} was already removed")]
    AlreadyRemoved(usize),
    #[error("variable {0} out of range")]
    OutOfRange(usize),
    #[error("neighbour set of {x} is not contained in its Markov boundary")]
    NotInBoundary { x: usize },
    #[error("Markov boundaries are not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
}

/// Markov boundaries of the variables still in play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MbMap {
    mb: Vec<VarSet>,
    removed: VarSet,
}

impl MbMap {
    /// Wraps per-variable boundaries, checking symmetry and irreflexivity.
    pub fn new(mb: Vec<VarSet>) -> Result<Self, MbError> {
        let m = Self { mb, removed: VarSet::new() };
        m.validate()?;
        Ok(m)
    }

    pub fn p(&self) -> usize {
        self.mb.len()
    }

    pub fn get(&self, x: usize) -> &VarSet {
        &self.mb[x]
    }

    pub fn is_removed(&self, x: usize) -> bool {
        self.removed.contains(x)
    }

    pub fn removed(&self) -> &VarSet {
        &self.removed
    }

    pub fn remaining(&self) -> VarSet {
        VarSet::full(self.p()).difference(&self.removed)
    }

    pub fn validate(&self) -> Result<(), MbError> {
        for (x, set) in self.mb.iter().enumerate() {
            for y in set {
                if y >= self.p() {
                    return Err(MbError::OutOfRange(y));
                }
                if y == x || !self.mb[y].contains(x) || self.removed.contains(y) {
                    return Err(MbError::Asymmetric(x, y));
                }
            }
        }
        Ok(())
    }

    /// Deletes `x`, then retests every pair of `n_x` that is still mutually
    /// in each other's boundary, conditioning on the smaller of the two
    /// boundaries (ties go to the smaller index) minus `{x, y, z}`.
    /// Independent pairs leave each other's boundary.
    ///
    /// Returns the number of CI tests performed.
    pub fn update_after_removal<O: CiOracle + ?Sized>(
        &mut self,
        x: usize,
        n_x: &VarSet,
        oracle: &mut O,
    ) -> Result<usize, MbError> {
        if x >= self.p() {
            return Err(MbError::OutOfRange(x));
        }
        if self.removed.contains(x) {
            return Err(MbError::AlreadyRemoved(x));
        }
        if !n_x.is_subset(&self.mb[x]) {
            return Err(MbError::NotInBoundary { x });
        }

        for y in std::mem::take(&mut self.mb[x]).iter() {
            self.mb[y].remove(x);
        }
        self.removed.insert(x);

        let members = n_x.to_vec();
        let mut tests = 0;
        for (i, &y) in members.iter().enumerate() {
            for &z in &members[i + 1..] {
                if !self.mb[y].contains(z) {
                    continue;
                }
                let w = if self.mb[z].len() < self.mb[y].len() { z } else { y };
                let mut cond = self.mb[w].clone();
                cond.remove(y);
                cond.remove(z);
                tests += 1;
                if oracle.query(y, z, &cond) {
                    self.mb[y].remove(z);
                    self.mb[z].remove(y);
                }
            }
        }
        Ok(tests)
    }

    /// One line per remaining variable, `x: {a, b, ...}`.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MbMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.remaining().iter() {
            writeln!(f, "{x}: {}", self.mb[x])?;
        }
        Ok(())
    }
}

/// Markov boundaries of all `p` variables: one test per pair, conditioned on
/// everything else.
pub fn total_conditioning<O: CiOracle + ?Sized>(oracle: &mut O, p: usize) -> MbMap {
    total_conditioning_on(oracle, &VarSet::full(p), p)
}

/// Total conditioning restricted to `active`; variables outside it are
/// marked removed and never tested or conditioned on.
pub fn total_conditioning_on<O: CiOracle + ?Sized>(
    oracle: &mut O,
    active: &VarSet,
    p: usize,
) -> MbMap {
    let mut mb = vec![VarSet::new(); p];
    let vars = active.to_vec();
    for (i, &x) in vars.iter().enumerate() {
        for &y in &vars[i + 1..] {
            let mut rest = active.without(x);
            rest.remove(y);
            if !oracle.query(x, y, &rest) {
                mb[x].insert(y);
                mb[y].insert(x);
            }
        }
    }
    MbMap { mb, removed: VarSet::full(p).difference(active) }
}
