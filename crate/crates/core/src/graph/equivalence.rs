//! Markov equivalence: skeleton/v-structure views and an exhaustive
//! essential-graph oracle.

use std::collections::BTreeSet;

use super::{Dag, GraphError, Pdag};
use crate::varset::VarSet;

/// Largest graph [`cpdag_bruteforce`] accepts.
pub const BRUTEFORCE_MAX_P: usize = 12;

/// What Markov equivalence looks at: adjacencies and unshielded colliders.
pub trait EquivalenceView {
    fn n_vertices(&self) -> usize;

    /// Adjacent pairs `(a, b)` with `a < b`.
    fn skeleton_pairs(&self) -> BTreeSet<(usize, usize)>;

    /// Directed colliders `a -> c <- b` with `a`, `b` nonadjacent, as
    /// `(a, c, b)` with `a < b`.
    fn v_structures(&self) -> BTreeSet<(usize, usize, usize)>;
}

fn colliders<'a>(
    p: usize,
    parents: impl Fn(usize) -> &'a VarSet,
    adjacent: impl Fn(usize, usize) -> bool,
) -> BTreeSet<(usize, usize, usize)> {
    let mut out = BTreeSet::new();
    for c in 0..p {
        let pa = parents(c).to_vec();
        for (i, &a) in pa.iter().enumerate() {
            for &b in &pa[i + 1..] {
                if !adjacent(a, b) {
                    out.insert((a, c, b));
                }
            }
        }
    }
    out
}

impl EquivalenceView for Dag {
    fn n_vertices(&self) -> usize {
        self.p()
    }

    fn skeleton_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.edges().map(|(a, b)| (a.min(b), a.max(b))).collect()
    }

    fn v_structures(&self) -> BTreeSet<(usize, usize, usize)> {
        colliders(self.p(), |c| self.parents(c), |a, b| self.adjacent(a, b))
    }
}

impl EquivalenceView for Pdag {
    fn n_vertices(&self) -> usize {
        self.p()
    }

    fn skeleton_pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut s: BTreeSet<_> = self
            .directed_edges()
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        s.extend(self.undirected_edges());
        s
    }

    fn v_structures(&self) -> BTreeSet<(usize, usize, usize)> {
        colliders(self.p(), |c| self.parents(c), |a, b| self.adjacent(a, b))
    }
}

/// Same vertex count, skeleton and v-structures.
pub fn markov_equivalent<A, B>(a: &A, b: &B) -> bool
where
    A: EquivalenceView + ?Sized,
    B: EquivalenceView + ?Sized,
{
    a.n_vertices() == b.n_vertices()
        && a.skeleton_pairs() == b.skeleton_pairs()
        && a.v_structures() == b.v_structures()
}

/// Essential graph of `g` by exhaustive search over its equivalence class.
///
/// Every member of the class has a topological order, and a vertex `v` can be
/// appended to an order prefix `S` exactly when the parents it would receive,
/// `N(v) ∩ S`, produce `g`'s v-structures at `v` and no others. Validity only
/// depends on `S`, so the set of order prefixes is explored as a DP over
/// subsets rather than over permutations. An edge `a - b` is directed `a -> b`
/// in the output iff no member of the class orients it `b -> a`.
pub fn cpdag_bruteforce(g: &Dag) -> Result<Pdag, GraphError> {
    let p = g.p();
    if p > BRUTEFORCE_MAX_P {
        return Err(GraphError::TooLarge { p, max: BRUTEFORCE_MAX_P });
    }
    let full: usize = (1 << p) - 1;
    let nb: Vec<usize> = (0..p).map(|v| mask(&g.neighbors(v))).collect();
    let vs = g.v_structures();

    let can_place = |s: usize, v: usize| -> bool {
        let pa = nb[v] & s;
        let pa_list: Vec<usize> = (0..p).filter(|&u| pa >> u & 1 == 1).collect();
        for (i, &a) in pa_list.iter().enumerate() {
            for &b in &pa_list[i + 1..] {
                if nb[a] >> b & 1 == 0 && !vs.contains(&(a, v, b)) {
                    return false;
                }
            }
        }
        vs.iter()
            .filter(|&&(_, c, _)| c == v)
            .all(|&(a, _, b)| s >> a & 1 == 1 && s >> b & 1 == 1)
    };

    let mut valid = vec![0usize; 1 << p];
    for (s, row) in valid.iter_mut().enumerate() {
        for v in (0..p).filter(|&v| s >> v & 1 == 0) {
            if can_place(s, v) {
                *row |= 1 << v;
            }
        }
    }

    let mut forward = vec![false; 1 << p];
    forward[0] = true;
    for s in 0..=full {
        if forward[s] {
            for v in (0..p).filter(|&v| valid[s] >> v & 1 == 1) {
                forward[s | 1 << v] = true;
            }
        }
    }
    let mut backward = vec![false; 1 << p];
    backward[full] = true;
    for s in (0..full).rev() {
        backward[s] = (0..p).any(|v| valid[s] >> v & 1 == 1 && backward[s | 1 << v]);
    }

    // a placed before b somewhere along a complete valid order
    let can_precede = |a: usize, b: usize| -> bool {
        (0..=full).any(|s| {
            s >> a & 1 == 0
                && s >> b & 1 == 0
                && forward[s]
                && valid[s] >> a & 1 == 1
                && backward[s | 1 << a]
        })
    };

    let mut out = Pdag::empty(p);
    for (a, b) in g.skeleton_pairs() {
        match (can_precede(a, b), can_precede(b, a)) {
            (true, true) => {
                out.add_undirected(a, b);
            }
            (true, false) => {
                out.orient(a, b);
            }
            (false, true) => {
                out.orient(b, a);
            }
            (false, false) => unreachable!("g itself is a member of its class"),
        }
    }
    Ok(out)
}

fn mask(s: &VarSet) -> usize {
    s.iter().fold(0, |m, v| m | 1 << v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    /// Permutation enumeration: each order of the vertices orients the
    /// skeleton; keep the orientations with the same v-structures.
    fn class_by_permutations(g: &Dag) -> BTreeSet<BTreeSet<(usize, usize)>> {
        let skel = g.skeleton_pairs();
        let target = g.v_structures();
        let mut members = BTreeSet::new();
        for order in (0..g.p()).permutations(g.p()) {
            let mut pos = vec![0; g.p()];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            let edges: Vec<(usize, usize)> = skel
                .iter()
                .map(|&(a, b)| if pos[a] < pos[b] { (a, b) } else { (b, a) })
                .collect();
            let h = Dag::from_edges(g.p(), edges.iter().copied()).unwrap();
            if h.v_structures() == target {
                members.insert(edges.into_iter().collect());
            }
        }
        members
    }

    fn cpdag_by_permutations(g: &Dag) -> Pdag {
        let members = class_by_permutations(g);
        let mut out = Pdag::empty(g.p());
        for (a, b) in g.skeleton_pairs() {
            let fwd = members.iter().all(|m| m.contains(&(a, b)));
            let bwd = members.iter().all(|m| m.contains(&(b, a)));
            match (fwd, bwd) {
                (true, _) => out.orient(a, b),
                (_, true) => out.orient(b, a),
                _ => out.add_undirected(a, b),
            };
        }
        out
    }

    #[test]
    fn chain_class_has_three_members() {
        let g = Dag::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(class_by_permutations(&g).len(), 3);
        let c = cpdag_bruteforce(&g).unwrap();
        assert!(c.directed_edges().is_empty());
        assert_eq!(c.undirected_edges(), BTreeSet::from([(0, 1), (1, 2)]));
    }

    #[test]
    fn collider_and_single_edge() {
        let g = Dag::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(
            cpdag_bruteforce(&g).unwrap().directed_edges(),
            BTreeSet::from([(0, 2), (1, 2)])
        );
        let g = Dag::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(
            cpdag_bruteforce(&g).unwrap().undirected_edges(),
            BTreeSet::from([(0, 1)])
        );
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            cpdag_bruteforce(&Dag::empty(BRUTEFORCE_MAX_P + 1)),
            Err(GraphError::TooLarge { .. })
        ));
    }

    #[test]
    fn subset_dp_agrees_with_permutations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let p = rng.random_range(1..=6);
            let mut edges = vec![];
            for a in 0..p {
                for b in a + 1..p {
                    if rng.random_bool(0.5) {
                        edges.push((a, b));
                    }
                }
            }
            let g = Dag::from_edges(p, edges).unwrap();
            assert_eq!(cpdag_bruteforce(&g).unwrap(), cpdag_by_permutations(&g), "{g:?}");
        }
    }

    #[test]
    fn equivalence_examples() {
        let chain = Dag::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let rev = Dag::from_edges(3, [(2, 1), (1, 0)]).unwrap();
        let coll = Dag::from_edges(3, [(0, 1), (2, 1)]).unwrap();
        assert!(markov_equivalent(&chain, &rev));
        assert!(!markov_equivalent(&chain, &coll));
        assert!(markov_equivalent(&chain, &cpdag_bruteforce(&chain).unwrap()));
        assert!(!markov_equivalent(&chain, &Dag::empty(4)));
    }
}
