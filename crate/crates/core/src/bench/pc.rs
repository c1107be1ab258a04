use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;

use crate::ci::CiOracle;
use crate::graph::{apply_meek_rules_lenient, Pdag};
use crate::marvel::{LearnResult, MemoOracle};
use crate::mb::MbMap;
use crate::varset::VarSet;

/// PC started from the moral graph given by `mb0` instead of the complete
/// graph.
///
/// Level `l` visits `x` in ascending order and each current neighbour `y`
/// in ascending order, trying size-`l` subsets of `adj(x) \ {y}` in
/// lexicographic order; adjacencies are updated as soon as an edge goes.
/// Colliders come from the separating sets; a pair that was never adjacent
/// has no separating set and never forms a collider. A query repeated from
/// the other endpoint is answered from memory, not re-counted.
pub fn pc_baseline<O: CiOracle>(oracle: &mut O, mb0: &MbMap) -> LearnResult {
    let start = Instant::now();
    let p = mb0.p();
    let mut oracle = MemoOracle::new(oracle, true);
    let mut adj: Vec<VarSet> = (0..p).map(|x| mb0.get(x).clone()).collect();
    let mut sepsets: BTreeMap<(usize, usize), VarSet> = BTreeMap::new();

    let mut level = 0;
    while (0..p).any(|x| adj[x].len() > level) {
        for x in 0..p {
            for y in adj[x].to_vec() {
                if !adj[x].contains(y) {
                    continue;
                }
                let rest = adj[x].without(y);
                if rest.len() < level {
                    continue;
                }
                let found = rest
                    .iter()
                    .combinations(level)
                    .map(VarSet::from_iter)
                    .find(|s| oracle.query(x, y, s));
                if let Some(s) = found {
                    adj[x].remove(y);
                    adj[y].remove(x);
                    sepsets.insert((x.min(y), x.max(y)), s);
                }
            }
        }
        level += 1;
    }

    let mut pd = Pdag::empty(p);
    for (x, nbrs) in adj.iter().enumerate() {
        for y in nbrs.iter().filter(|&y| y > x) {
            pd.add_undirected(x, y);
        }
    }
    let mut warnings = Vec::new();
    for (&(a, b), s) in &sepsets {
        for c in adj[a].intersection(&adj[b]).iter() {
            if !s.contains(c) && !(pd.orient(a, c) & pd.orient(b, c)) {
                warnings.push(format!("conflicting v-structure {a} -> {c} <- {b}"));
            }
        }
    }
    let (essential, conflicts) = apply_meek_rules_lenient(&pd);
    if conflicts > 0 {
        warnings.push(format!("{conflicts} inconsistent orientation(s) skipped during completion"));
    }
    LearnResult {
        essential,
        elimination_order: Vec::new(),
        ci: oracle.stats(),
        warnings,
        rounds: Vec::new(),
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::DsepOracle;
    use crate::graph::{cpdag_bruteforce, Dag};
    use crate::mb::total_conditioning;

    fn run(g: &Dag) -> LearnResult {
        let mut o = DsepOracle::new(g.clone());
        let mb = total_conditioning(&mut o, g.p());
        pc_baseline(&mut o, &mb)
    }

    #[test]
    fn collider_and_chain() {
        let g = Dag::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        let r = run(&g);
        assert!(r.essential.has_directed(0, 2) && r.essential.has_directed(1, 2));
        // three marginal tests, then 2 keeps both edges at level 1
        assert_eq!(r.ci.n_tests, 5);

        let g = Dag::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(run(&g).essential, cpdag_bruteforce(&g).unwrap());
    }

    #[test]
    fn empty_graph_needs_no_tests() {
        let r = run(&Dag::empty(5));
        assert_eq!(r.essential.n_edges(), 0);
        assert_eq!(r.ci.n_tests, 0);
    }

    #[test]
    fn recovers_cpdag() {
        let g = Dag::from_edges(6, [(0, 2), (1, 2), (2, 3), (3, 4), (1, 4), (5, 4), (0, 5)]).unwrap();
        let r = run(&g);
        assert_eq!(r.essential, cpdag_bruteforce(&g).unwrap());
        assert!(r.warnings.is_empty());
    }
}
