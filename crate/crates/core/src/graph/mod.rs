//! Graph representations and purely graphical operations.
//!
//! Everything here works on the true structure: d-separation, the graphical
//! removability test, Markov boundaries, moralization, Meek completion and a
//! brute-force essential-graph oracle. The learners never look at these
//! directly; they only see CI answers. Tests use them as ground truth.

mod dag;
mod equivalence;
mod io;
mod meek;
mod pdag;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::varset::VarSet;

pub use dag::Dag;
pub use equivalence::{cpdag_bruteforce, markov_equivalent, EquivalenceView, BRUTEFORCE_MAX_P};
pub use io::{parse_dag, parse_pdag, write_dag, write_pdag};
pub use meek::{apply_meek_rules, apply_meek_rules_lenient};
pub use pdag::Pdag;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {p} vertices")]
    VertexOutOfRange { vertex: usize, p: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edges form a directed cycle")]
    Cycle,
    #[error("conflicting edge marks between {0} and {1}")]
    ConflictingEdge(usize, usize),
    #[error("invalid d-separation query: {0}")]
    InvalidQuery(&'static str),
    #[error("orientation rules force a directed cycle through {0} -> {1}")]
    InconsistentOrientation(usize, usize),
    #[error("graph has {p} vertices; exhaustive enumeration is limited to {max}")]
    TooLarge { p: usize, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Whether `x` and `y` are d-separated by `s` in `g`.
///
/// Uses the ancestral moral graph: restrict to ancestors of `{x, y} ∪ s`,
/// marry co-parents, drop directions, delete `s`, and test reachability.
pub fn d_separated(g: &Dag, x: usize, y: usize, s: &VarSet) -> Result<bool, GraphError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if let Some(m) = s.last() {
        g.check_vertex(m)?;
    }
    if x == y {
        return Err(GraphError::InvalidQuery("x and y must differ"));
    }
    if s.contains(x) || s.contains(y) {
        return Err(GraphError::InvalidQuery("conditioning set contains an endpoint"));
    }

    let mut seeds = s.with(x);
    seeds.insert(y);
    let ancestral = g.ancestors_of_set(&seeds);

    let mut seen = VarSet::singleton(x);
    let mut stack = vec![x];
    while let Some(v) = stack.pop() {
        // moral neighbours of v inside the ancestral set
        let mut next = g.parents(v).clone();
        for c in g.children(v).iter().filter(|&c| ancestral.contains(c)) {
            next.insert(c);
            next.union_with(g.parents(c));
        }
        for w in &next {
            if w == v || s.contains(w) || !seen.insert(w) {
                continue;
            }
            if w == y {
                return Ok(false);
            }
            stack.push(w);
        }
    }
    Ok(true)
}

/// Graphical removability test: for every child `z` of `x`,
/// (1) `N_x ⊆ N_z ∪ {z}` and (2) `Pa_y ⊆ Pa_z` for every `y ∈ Ch_x ∩ Pa_z`.
///
/// Containment is non-strict, so every sink is removable.
pub fn is_removable_graphical(g: &Dag, x: usize) -> bool {
    let nx = g.neighbors(x);
    g.children(x).iter().all(|z| {
        let cond1 = nx.is_subset(&g.neighbors(z).with(z));
        let cond2 = g
            .children(x)
            .intersection(g.parents(z))
            .iter()
            .all(|y| g.parents(y).is_subset(g.parents(z)));
        cond1 && cond2
    })
}

/// Parents, children and co-parents of `x`.
pub fn markov_boundary_graphical(g: &Dag, x: usize) -> VarSet {
    let mut mb = g.neighbors(x);
    for c in g.children(x) {
        mb.union_with(g.parents(c));
    }
    mb.remove(x);
    mb
}

/// Undirected graph joining every vertex to its Markov boundary.
pub fn moralized_graph(g: &Dag) -> Pdag {
    let mut m = Pdag::empty(g.p());
    for x in 0..g.p() {
        for y in &markov_boundary_graphical(g, x) {
            m.add_undirected(x, y);
        }
    }
    m
}

/// The DAG with all directions erased.
pub fn skeleton(g: &Dag) -> Pdag {
    let mut s = Pdag::empty(g.p());
    for (a, b) in g.edges() {
        s.add_undirected(a, b);
    }
    s
}

/// Colliders `a -> c <- b` with `a`, `b` nonadjacent, as `(a, c, b)`, `a < b`.
pub fn v_structures(g: &Dag) -> BTreeSet<(usize, usize, usize)> {
    EquivalenceView::v_structures(g)
}

/// Skeleton plus v-structures of `g`; all other edges undirected.
pub fn pattern(g: &Dag) -> Pdag {
    let mut pd = skeleton(g);
    for (a, c, b) in v_structures(g) {
        pd.orient(a, c);
        pd.orient(b, c);
    }
    pd
}
