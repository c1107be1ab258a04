use std::collections::BTreeSet;

use super::{Dag, GraphError};
use crate::varset::VarSet;

/// A partially directed graph: every adjacent pair carries either one
/// directed edge or one undirected edge, never both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pdag {
    parents: Vec<VarSet>,
    children: Vec<VarSet>,
    undirected: Vec<VarSet>,
}

impl Pdag {
    pub fn empty(p: usize) -> Self {
        Self {
            parents: vec![VarSet::new(); p],
            children: vec![VarSet::new(); p],
            undirected: vec![VarSet::new(); p],
        }
    }

    /// Builds a PDAG from explicit directed and undirected edge lists.
    pub fn from_edges<D, U>(p: usize, directed: D, undirected: U) -> Result<Self, GraphError>
    where
        D: IntoIterator<Item = (usize, usize)>,
        U: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(p);
        for (a, b) in directed {
            g.check_pair(a, b)?;
            if g.adjacent(a, b) && !g.has_directed(a, b) {
                return Err(GraphError::ConflictingEdge(a, b));
            }
            g.insert_directed(a, b);
        }
        for (a, b) in undirected {
            g.check_pair(a, b)?;
            if g.has_directed(a, b) || g.has_directed(b, a) {
                return Err(GraphError::ConflictingEdge(a, b));
            }
            g.insert_undirected(a, b);
        }
        Ok(g)
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, x: usize) -> &VarSet {
        &self.parents[x]
    }

    pub fn children(&self, x: usize) -> &VarSet {
        &self.children[x]
    }

    pub fn undirected_neighbors(&self, x: usize) -> &VarSet {
        &self.undirected[x]
    }

    /// Every vertex joined to `x` by any edge.
    pub fn adjacents(&self, x: usize) -> VarSet {
        let mut s = self.parents[x].union(&self.children[x]);
        s.union_with(&self.undirected[x]);
        s
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.children[a].contains(b) || self.parents[a].contains(b) || self.undirected[a].contains(b)
    }

    pub fn has_directed(&self, from: usize, to: usize) -> bool {
        self.children[from].contains(to)
    }

    pub fn has_undirected(&self, a: usize, b: usize) -> bool {
        self.undirected[a].contains(b)
    }

    /// Adds `a - b` unless the pair is already adjacent. Returns whether an
    /// edge was added.
    pub fn add_undirected(&mut self, a: usize, b: usize) -> bool {
        if a == b || self.adjacent(a, b) {
            return false;
        }
        self.insert_undirected(a, b);
        true
    }

    /// Makes the pair `a -> b`. An undirected edge is oriented, a missing edge
    /// is inserted as directed, and an existing `a -> b` is left alone.
    /// Returns `false` without touching the graph when `b -> a` is present.
    pub fn orient(&mut self, a: usize, b: usize) -> bool {
        if a == b || self.has_directed(b, a) {
            return false;
        }
        self.undirected[a].remove(b);
        self.undirected[b].remove(a);
        self.insert_directed(a, b);
        true
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.children[a].remove(b);
        self.parents[b].remove(a);
        self.children[b].remove(a);
        self.parents[a].remove(b);
        self.undirected[a].remove(b);
        self.undirected[b].remove(a);
    }

    /// Turns the edge between `a` and `b` (whatever its mark) into `a - b`.
    pub fn unorient(&mut self, a: usize, b: usize) {
        if self.adjacent(a, b) {
            self.remove_edge(a, b);
            self.insert_undirected(a, b);
        }
    }

    /// Directed edges as `(from, to)` in ascending order.
    pub fn directed_edges(&self) -> BTreeSet<(usize, usize)> {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(a, ch)| ch.iter().map(move |b| (a, b)))
            .collect()
    }

    /// Undirected edges as `(a, b)` with `a < b`.
    pub fn undirected_edges(&self) -> BTreeSet<(usize, usize)> {
        self.undirected
            .iter()
            .enumerate()
            .flat_map(|(a, un)| un.iter().filter(move |&b| a < b).map(move |b| (a, b)))
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.directed_edges().len() + self.undirected_edges().len()
    }

    /// Whether a directed path `from ~> to` exists using directed edges only.
    pub fn has_directed_path(&self, from: usize, to: usize) -> bool {
        let mut seen = VarSet::singleton(from);
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            for c in &self.children[v] {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        false
    }

    fn insert_directed(&mut self, a: usize, b: usize) {
        self.children[a].insert(b);
        self.parents[b].insert(a);
    }

    fn insert_undirected(&mut self, a: usize, b: usize) {
        self.undirected[a].insert(b);
        self.undirected[b].insert(a);
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<(), GraphError> {
        for v in [a, b] {
            if v >= self.p() {
                return Err(GraphError::VertexOutOfRange { vertex: v, p: self.p() });
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        Ok(())
    }
}

impl From<&Dag> for Pdag {
    fn from(g: &Dag) -> Self {
        let p = g.p();
        Self {
            parents: (0..p).map(|x| g.parents(x).clone()).collect(),
            children: (0..p).map(|x| g.children(x).clone()).collect(),
            undirected: vec![VarSet::new(); p],
        }
    }
}
