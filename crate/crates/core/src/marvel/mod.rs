//! Recursive structure learning by eliminating removable variables.
//!
//! Each round sorts the remaining variables by Markov boundary size and runs
//! the removability battery on them in that order. The first removable one is
//! eliminated: its edges are recorded, its boundary neighbours' boundaries
//! are updated, and the next round starts. The learned skeleton and
//! v-structures are completed with Meek's rules at the end.
//!
//! Colliders come from two places: v-structures found while testing a
//! variable, and pairs of nonadjacent neighbours of a variable at the moment
//! it is eliminated (condition 1 forces both to be parents). Edge marks left
//! on the working graph by the elimination step itself are not used: an edge
//! into `y` oriented early by a v-structure and another oriented when `y` is
//! eliminated need not form a collider.

mod caches;
mod removability;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

pub use caches::{MarvelCaches, MemoOracle, NeighborInfo, VStructSet};
pub use removability::{
    check_condition1, check_condition2, find_neighbors, find_vpa, is_removable_ci, Removability,
};

use crate::ci::{CiOracle, CiStats};
use crate::graph::{apply_meek_rules_lenient, Pdag};
use crate::mb::{MbError, MbMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarvelError {
    #[error("condition 2 checked for {0} before condition 1 passed")]
    Condition1NotVerified(usize),
    #[error("oracle has {oracle} variables, Markov boundaries have {mb}")]
    SizeMismatch { oracle: usize, mb: usize },
    #[error(transparent)]
    Mb(#[from] MbError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarvelOptions {
    /// Reuse classifications and inseparability results across rounds.
    pub caches: bool,
    /// Never send the same `(x, y, S)` query to the oracle twice.
    pub memo: bool,
}

impl Default for MarvelOptions {
    fn default() -> Self {
        Self { caches: true, memo: true }
    }
}

/// One elimination round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrace {
    /// Variables whose battery ran this round, with their boundary size at
    /// the time, in evaluation order. The last one is the removed variable
    /// unless the round fell back.
    pub examined: Vec<(usize, usize)>,
    pub removed: usize,
    /// No variable passed; the smallest-boundary one was removed anyway.
    pub fallback: bool,
}

#[derive(Clone, Debug)]
pub struct LearnResult {
    pub essential: Pdag,
    pub elimination_order: Vec<usize>,
    /// Tests issued after the initial Markov boundaries were known.
    pub ci: CiStats,
    pub warnings: Vec<String>,
    pub rounds: Vec<RoundTrace>,
    pub elapsed: Duration,
}

/// Upper bound on the post-boundary CI tests of a run on `p` variables with
/// maximum in-degree `delta_in`:
/// `p·C(Δ,2) + p·Δ·(1 + 0.45·Δ)·2^(Δ-1)`, rounded up.
pub fn ci_budget_bound(p: usize, delta_in: usize) -> u64 {
    let (p, d) = (p as u128, delta_in as u128);
    let pairs = p * d * d.saturating_sub(1) / 2;
    // p·Δ·(100 + 45Δ)·2^Δ / 200, kept integral
    let num = p * d * (100 + 45 * d) << delta_in;
    let tail = num.div_ceil(200);
    u64::try_from(pairs + tail).unwrap_or(u64::MAX)
}

pub fn marvel_learn<O: CiOracle>(oracle: &mut O, mb0: MbMap) -> Result<LearnResult, MarvelError> {
    marvel_learn_with(oracle, mb0, MarvelOptions::default())
}

pub fn marvel_learn_with<O: CiOracle>(
    oracle: &mut O,
    mb0: MbMap,
    opts: MarvelOptions,
) -> Result<LearnResult, MarvelError> {
    let start = Instant::now();
    let p = mb0.p();
    if oracle.n_vars() != p {
        return Err(MarvelError::SizeMismatch { oracle: oracle.n_vars(), mb: p });
    }
    let mut oracle = MemoOracle::new(oracle, opts.memo);
    let mut caches = if opts.caches { MarvelCaches::new(p) } else { MarvelCaches::disabled(p) };
    let mut mb = mb0;
    let mut ghat = Pdag::empty(p);
    let mut order = Vec::new();
    let mut rounds = Vec::new();
    let mut warnings = Vec::new();
    let mut colliders = BTreeSet::new();

    while !mb.remaining().is_empty() {
        let mut vars = mb.remaining().to_vec();
        vars.sort_by_key(|&x| (mb.get(x).len(), x));

        let mut examined = Vec::new();
        let mut chosen = None;
        for &x in &vars {
            let mb_x = mb.get(x).clone();
            examined.push((x, mb_x.len()));
            let info = find_neighbors(x, &mb_x, &mut oracle, &mut caches);
            for y in &info.neighbors {
                ghat.add_undirected(x, y);
            }
            if !check_condition1(x, &info, &mb_x, &mut oracle, &mut caches) {
                continue;
            }
            let vpa = find_vpa(x, &info, &mb_x, &mut oracle, &mut caches);
            for &(a, y, t) in vpa.iter() {
                colliders.insert((a.min(t), y, a.max(t)));
                for parent in [a, t] {
                    if !ghat.orient(parent, y) {
                        warnings.push(format!("v-structure {a} -> {y} <- {t} conflicts at {parent} -> {y}"));
                    }
                }
            }
            if check_condition2(x, &info, &vpa, &mb_x, &mut oracle, &mut caches)? {
                chosen = Some((x, info));
                break;
            }
        }

        let fallback = chosen.is_none();
        let (x, info) = match chosen {
            Some(c) => c,
            None => {
                let x = vars[0];
                warnings.push(format!("no removable variable among {} remaining; removing {x}", vars.len()));
                let info = find_neighbors(x, &mb.get(x).clone(), &mut oracle, &mut caches);
                (x, info)
            }
        };

        if !fallback {
            let nbrs = info.neighbors.to_vec();
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    colliders.insert((a, x, b));
                }
            }
        }
        for y in ghat.undirected_neighbors(x).clone().iter() {
            ghat.orient(y, x);
        }
        mb.update_after_removal(x, &info.neighbors, &mut oracle)?;
        caches.on_removed(x);
        order.push(x);
        rounds.push(RoundTrace { examined, removed: x, fallback });
    }

    let essential = complete(&ghat, &colliders, &mut warnings);
    Ok(LearnResult {
        essential,
        elimination_order: order,
        ci: oracle.stats(),
        warnings,
        rounds,
        elapsed: start.elapsed(),
    })
}

/// Skeleton of `ghat` with every collider `(a, c, b)` whose endpoints are
/// nonadjacent, closed under Meek's rules.
fn complete(
    ghat: &Pdag,
    colliders: &BTreeSet<(usize, usize, usize)>,
    warnings: &mut Vec<String>,
) -> Pdag {
    let mut pat = Pdag::empty(ghat.p());
    for (a, b) in ghat.directed_edges().into_iter().chain(ghat.undirected_edges()) {
        pat.add_undirected(a, b);
    }
    for &(a, c, b) in colliders {
        if pat.adjacent(a, b) || !pat.adjacent(a, c) || !pat.adjacent(b, c) {
            continue;
        }
        if !(pat.orient(a, c) & pat.orient(b, c)) {
            warnings.push(format!("conflicting v-structure {a} -> {c} <- {b}"));
        }
    }
    let (out, conflicts) = apply_meek_rules_lenient(&pat);
    if conflicts > 0 {
        warnings.push(format!("{conflicts} inconsistent orientation(s) skipped during completion"));
    }
    out
}
