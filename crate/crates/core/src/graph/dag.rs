use std::collections::VecDeque;

use super::GraphError;
use crate::varset::VarSet;

/// A directed acyclic graph over the dense vertex set `0..p`.
///
/// Parent and child sets are kept as exact mirrors of each other. Values are
/// immutable once built; "removing" a vertex produces a new graph in which the
/// vertex is isolated, so indices stay stable across the elimination loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    parents: Vec<VarSet>,
    children: Vec<VarSet>,
}

impl Dag {
    pub fn empty(p: usize) -> Self {
        Self {
            parents: vec![VarSet::new(); p],
            children: vec![VarSet::new(); p],
        }
    }

    /// Builds a DAG from directed `(from, to)` pairs, rejecting self-loops,
    /// out-of-range indices and cycles. Duplicate edges are merged.
    pub fn from_edges<I>(p: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(p);
        for (a, b) in edges {
            g.check_vertex(a)?;
            g.check_vertex(b)?;
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if g.parents[a].contains(b) {
                return Err(GraphError::Cycle);
            }
            g.parents[b].insert(a);
            g.children[a].insert(b);
        }
        if g.topological_order().is_none() {
            return Err(GraphError::Cycle);
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

    /// Parents and children of `x`.
    pub fn neighbors(&self, x: usize) -> VarSet {
        self.parents[x].union(&self.children[x])
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.children[from].contains(to)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    /// Directed edges in ascending `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(a, ch)| ch.iter().map(move |b| (a, b)))
    }

    pub fn n_edges(&self) -> usize {
        self.children.iter().map(VarSet::len).sum()
    }

    pub fn max_in_degree(&self) -> usize {
        self.parents.iter().map(VarSet::len).max().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.p())
            .map(|x| self.parents[x].len() + self.children[x].len())
            .max()
            .unwrap_or(0)
    }

    /// Kahn's algorithm; ties are broken by smallest index. `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let p = self.p();
        let mut indeg: Vec<usize> = self.parents.iter().map(VarSet::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..p).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(p);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == p).then_some(order)
    }

    /// Vertices reachable from `x` along directed edges, including `x`.
    pub fn descendants(&self, x: usize) -> Result<VarSet, GraphError> {
        self.check_vertex(x)?;
        Ok(self.reach(VarSet::singleton(x), &self.children))
    }

    /// Vertices with a directed path into some member of `set`, including the
    /// members themselves.
    pub fn ancestors_of_set(&self, set: &VarSet) -> VarSet {
        self.reach(set.clone(), &self.parents)
    }

    fn reach(&self, start: VarSet, step: &[VarSet]) -> VarSet {
        let mut seen = start.clone();
        let mut queue: VecDeque<usize> = start.iter().collect();
        while let Some(v) = queue.pop_front() {
            for w in &step[v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Copy of the graph with every edge incident to a member of `removed`
    /// deleted. Removed vertices stay as isolated indices.
    pub fn without(&self, removed: &VarSet) -> Dag {
        let mut g = self.clone();
        for x in removed {
            for pa in self.parents[x].iter() {
                g.children[pa].remove(x);
            }
            for ch in self.children[x].iter() {
                g.parents[ch].remove(x);
            }
            g.parents[x] = VarSet::new();
            g.children[x] = VarSet::new();
        }
        g
    }

    pub(crate) fn check_vertex(&self, x: usize) -> Result<(), GraphError> {
        if x < self.p() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: x, p: self.p() })
        }
    }
}
