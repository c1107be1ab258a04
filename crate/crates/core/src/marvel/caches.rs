//! State carried across elimination rounds so that no CI question is asked
//! twice.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::ci::{CiOracle, CiStats};
use crate::varset::VarSet;

/// Neighbours and co-parents of a variable, with the separating set found
/// for each co-parent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NeighborInfo {
    pub neighbors: VarSet,
    pub coparents: VarSet,
    pub sepsets: BTreeMap<usize, VarSet>,
}

/// V-structures `x -> y <- t` in which `x` is a parent, stored as `(x, y, t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VStructSet {
    pub triples: BTreeSet<(usize, usize, usize)>,
}

impl VStructSet {
    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize, usize)> {
        self.triples.iter()
    }
}

/// Cross-round caches.
///
/// * neighbour/co-parent classification is done once per `(x, y)`;
/// * a common-child verdict is computed once per `(x, y, t)`;
/// * pairs `{z, w}` of neighbours of `x` that no set containing `x` separates
///   are remembered and skipped in later rounds;
/// * likewise for `(z, t)` with conditioning sets containing `{x, y}`.
///
/// Entries are only dropped when one of their vertices is eliminated.
#[derive(Clone, Debug)]
pub struct MarvelCaches {
    enabled: bool,
    /// Per `x`: `y -> None` for a neighbour, `y -> Some(S_xy)` for a co-parent.
    classified: Vec<BTreeMap<usize, Option<VarSet>>>,
    /// Per `x`: `(y, t) -> is y a common child of x and t`.
    common_child: Vec<BTreeMap<(usize, usize), bool>>,
    cond1_nosep: HashSet<(usize, usize, usize)>,
    cond2_nosep: HashSet<(usize, usize, usize, usize)>,
    cond1_holds_for: Option<usize>,
}

impl MarvelCaches {
    pub fn new(p: usize) -> Self {
        Self {
            enabled: true,
            classified: vec![BTreeMap::new(); p],
            common_child: vec![BTreeMap::new(); p],
            cond1_nosep: HashSet::new(),
            cond2_nosep: HashSet::new(),
            cond1_holds_for: None,
        }
    }

    /// Caches that never remember anything; every round recomputes.
    pub fn disabled(p: usize) -> Self {
        Self { enabled: false, ..Self::new(p) }
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub(crate) fn classification(&self, x: usize, y: usize) -> Option<&Option<VarSet>> {
        self.classified[x].get(&y)
    }

    pub(crate) fn store_classification(&mut self, x: usize, y: usize, sepset: Option<VarSet>) {
        if self.enabled {
            self.classified[x].insert(y, sepset);
        }
    }

    pub(crate) fn common_child(&self, x: usize, y: usize, t: usize) -> Option<bool> {
        self.common_child[x].get(&(y, t)).copied()
    }

    pub(crate) fn store_common_child(&mut self, x: usize, y: usize, t: usize, verdict: bool) {
        if self.enabled {
            self.common_child[x].insert((y, t), verdict);
        }
    }

    pub(crate) fn cond1_inseparable(&self, x: usize, z: usize, w: usize) -> bool {
        self.cond1_nosep.contains(&(x, z.min(w), z.max(w)))
    }

    pub(crate) fn mark_cond1_inseparable(&mut self, x: usize, z: usize, w: usize) {
        if self.enabled {
            self.cond1_nosep.insert((x, z.min(w), z.max(w)));
        }
    }

    fn cond2_key(z: usize, t: usize, x: usize, y: usize) -> (usize, usize, usize, usize) {
        (z.min(t), z.max(t), x.min(y), x.max(y))
    }

    pub(crate) fn cond2_inseparable(&self, z: usize, t: usize, x: usize, y: usize) -> bool {
        self.cond2_nosep.contains(&Self::cond2_key(z, t, x, y))
    }

    pub(crate) fn mark_cond2_inseparable(&mut self, z: usize, t: usize, x: usize, y: usize) {
        if self.enabled {
            self.cond2_nosep.insert(Self::cond2_key(z, t, x, y));
        }
    }

    pub(crate) fn set_cond1_holds(&mut self, x: Option<usize>) {
        self.cond1_holds_for = x;
    }

    pub(crate) fn cond1_holds(&self, x: usize) -> bool {
        self.cond1_holds_for == Some(x)
    }

    /// Drops every entry that mentions `v`.
    pub fn on_removed(&mut self, v: usize) {
        self.classified[v].clear();
        self.common_child[v].clear();
        for m in &mut self.classified {
            m.remove(&v);
        }
        for m in &mut self.common_child {
            m.retain(|&(y, t), _| y != v && t != v);
        }
        self.cond1_nosep.retain(|&(x, z, w)| x != v && z != v && w != v);
        self.cond2_nosep
            .retain(|&(a, b, c, d)| a != v && b != v && c != v && d != v);
        if self.cond1_holds_for == Some(v) {
            self.cond1_holds_for = None;
        }
    }
}

/// Wraps an oracle with an exact-query memo: a query `(x, y, S)` reaches the
/// inner oracle at most once per run. Also keeps its own statistics over the
/// queries it forwards, so a learner can report its cost without touching
/// the caller's counters.
pub struct MemoOracle<O> {
    inner: O,
    memo: Option<HashMap<(usize, usize, VarSet), bool>>,
    stats: CiStats,
}

impl<O: CiOracle> MemoOracle<O> {
    pub fn new(inner: O, enabled: bool) -> Self {
        Self { inner, memo: enabled.then(HashMap::new), stats: CiStats::default() }
    }

    pub fn into_inner(self) -> O {
        self.inner
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: CiOracle> CiOracle for MemoOracle<O> {
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    fn query(&mut self, x: usize, y: usize, s: &VarSet) -> bool {
        let key = (x.min(y), x.max(y), s.clone());
        if let Some(&hit) = self.memo.as_ref().and_then(|m| m.get(&key)) {
            return hit;
        }
        self.stats.record(s.len());
        let before = self.inner.stats().degenerate;
        let answer = self.inner.query(x, y, s);
        self.stats.degenerate += self.inner.stats().degenerate - before;
        if let Some(m) = self.memo.as_mut() {
            m.insert(key, answer);
        }
        answer
    }

    fn stats(&self) -> CiStats {
        self.stats
    }

    fn take_stats(&mut self) -> CiStats {
        std::mem::take(&mut self.stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::DsepOracle;
    use crate::graph::Dag;

    #[test]
    fn memo_forwards_each_distinct_query_once() {
        let g = Dag::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut inner = DsepOracle::new(g);
        {
            let mut m = MemoOracle::new(&mut inner, true);
            assert!(m.query(0, 2, &VarSet::from([1])));
            assert!(m.query(2, 0, &VarSet::from([1])));
            assert!(!m.query(0, 2, &VarSet::new()));
            assert_eq!(m.stats().n_tests, 2);
        }
        assert_eq!(inner.stats().n_tests, 2);

        let mut m = MemoOracle::new(DsepOracle::new(Dag::empty(2)), false);
        m.query(0, 1, &VarSet::new());
        m.query(0, 1, &VarSet::new());
        assert_eq!(m.stats().n_tests, 2);
        assert_eq!(m.into_inner().stats().n_tests, 2);
    }

    #[test]
    fn pruning_drops_entries_for_removed_vertex() {
        let mut c = MarvelCaches::new(4);
        c.store_classification(0, 1, None);
        c.store_classification(0, 2, Some(VarSet::new()));
        c.store_common_child(0, 3, 2, true);
        c.mark_cond1_inseparable(0, 1, 3);
        c.mark_cond2_inseparable(1, 2, 0, 3);
        c.on_removed(2);
        assert!(c.classification(0, 1).is_some());
        assert!(c.classification(0, 2).is_none());
        assert_eq!(c.common_child(0, 3, 2), None);
        assert!(c.cond1_inseparable(0, 3, 1));
        assert!(!c.cond2_inseparable(1, 2, 0, 3));

        let mut d = MarvelCaches::disabled(3);
        d.store_classification(0, 1, None);
        d.mark_cond1_inseparable(0, 1, 2);
        assert!(d.classification(0, 1).is_none());
        assert!(!d.cond1_inseparable(0, 1, 2));
    }
}
