//! Meek orientation rules.
//!
//! For an undirected edge `a - b`, orient `a -> b` when
//!
//! * R1: some `c -> a` with `c` not adjacent to `b`;
//! * R2: some `a -> c -> b`;
//! * R3: two nonadjacent `c`, `d` with `a - c -> b` and `a - d -> b`;
//! * R4: some `a - d`, `d -> c -> b`, `a` adjacent to `c`, `b` not adjacent to `d`.
//!
//! Rules are applied in a fixed sweep order until nothing changes.

use std::collections::BTreeSet;

use super::{GraphError, Pdag};

/// Completes `pd` under the four rules. An orientation that would close a
/// directed cycle means the input was not a valid pattern and is an error.
pub fn apply_meek_rules(pd: &Pdag) -> Result<Pdag, GraphError> {
    let mut out = pd.clone();
    match sweep(&mut out, &BTreeSet::new()) {
        Some((a, b)) => Err(GraphError::InconsistentOrientation(a, b)),
        None => Ok(out),
    }
}

/// Like [`apply_meek_rules`], but leaves cycle-closing edges undirected and
/// reports how many were skipped. Used on finite-sample output, where the
/// input pattern may be inconsistent.
pub fn apply_meek_rules_lenient(pd: &Pdag) -> (Pdag, usize) {
    let mut out = pd.clone();
    let mut skipped = BTreeSet::new();
    while let Some(e) = sweep(&mut out, &skipped) {
        skipped.insert(e);
    }
    (out, skipped.len())
}

/// Sweeps to fixpoint; returns the first cycle-closing orientation not in
/// `skip`, leaving the graph as it was at that point.
fn sweep(pd: &mut Pdag, skip: &BTreeSet<(usize, usize)>) -> Option<(usize, usize)> {
    loop {
        let mut changed = false;
        for a in 0..pd.p() {
            let candidates = pd.undirected_neighbors(a).clone();
            for b in &candidates {
                if !pd.has_undirected(a, b) || skip.contains(&(a, b)) || !fires(pd, a, b) {
                    continue;
                }
                if pd.has_directed_path(b, a) {
                    return Some((a, b));
                }
                pd.orient(a, b);
                changed = true;
            }
        }
        if !changed {
            return None;
        }
    }
}

fn fires(pd: &Pdag, a: usize, b: usize) -> bool {
    // R1
    if pd
        .parents(a)
        .iter()
        .any(|c| c != b && !pd.adjacent(c, b))
    {
        return true;
    }
    // R2
    if !pd.children(a).is_disjoint(pd.parents(b)) {
        return true;
    }
    // R3
    let mids = pd.undirected_neighbors(a).intersection(pd.parents(b)).to_vec();
    for (i, &c) in mids.iter().enumerate() {
        if mids[i + 1..].iter().any(|&d| !pd.adjacent(c, d)) {
            return true;
        }
    }
    // R4
    for d in pd.undirected_neighbors(a) {
        if d == b || pd.adjacent(d, b) {
            continue;
        }
        if pd
            .children(d)
            .intersection(pd.parents(b))
            .iter()
            .any(|c| pd.adjacent(a, c))
        {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule1_propagates() {
        let pd = Pdag::from_edges(3, [(0, 1)], [(1, 2)]).unwrap();
        let out = apply_meek_rules(&pd).unwrap();
        assert_eq!(out.directed_edges(), BTreeSet::from([(0, 1), (1, 2)]));
    }

    #[test]
    fn triangle_unchanged() {
        let pd = Pdag::from_edges(3, [], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(apply_meek_rules(&pd).unwrap(), pd);
    }

    #[test]
    fn rule2_closes_chain() {
        let pd = Pdag::from_edges(3, [(0, 1), (1, 2)], [(0, 2)]).unwrap();
        let out = apply_meek_rules(&pd).unwrap();
        assert!(out.has_directed(0, 2));
    }

    #[test]
    fn rule3_kite() {
        // a=0 with a - c=1, a - d=2, a - b=3, c -> b, d -> b, c,d nonadjacent
        let pd = Pdag::from_edges(4, [(1, 3), (2, 3)], [(0, 1), (0, 2), (0, 3)]).unwrap();
        let out = apply_meek_rules(&pd).unwrap();
        assert!(out.has_directed(0, 3));
        assert!(out.has_undirected(0, 1) && out.has_undirected(0, 2));
    }

    #[test]
    fn rule4_fires() {
        // a=0, b=1, c=2, d=3: a - b, a - d, a - c, d -> c -> b, b,d nonadjacent
        let pd = Pdag::from_edges(4, [(3, 2), (2, 1)], [(0, 1), (0, 3), (0, 2)]).unwrap();
        let out = apply_meek_rules(&pd).unwrap();
        assert!(out.has_directed(0, 1));
    }

    #[test]
    fn inconsistent_input_is_reported() {
        // R1 (3 -> 0, 3 not adjacent to 2) wants 0 -> 2, closing 0 -> 2 -> 1 -> 0
        let cyc = Pdag::from_edges(4, [(3, 0), (1, 0), (2, 1)], [(0, 2)]).unwrap();
        assert_eq!(
            apply_meek_rules(&cyc),
            Err(GraphError::InconsistentOrientation(0, 2))
        );
        let (out, n) = apply_meek_rules_lenient(&cyc);
        assert_eq!(n, 1);
        // R2 (2 -> 1 -> 0) then settles the pair the consistent way
        assert!(out.has_directed(2, 0));
    }

    #[test]
    fn idempotent_on_output() {
        let pd = Pdag::from_edges(5, [(0, 2), (1, 2)], [(2, 3), (3, 4), (2, 4)]).unwrap();
        let once = apply_meek_rules(&pd).unwrap();
        assert_eq!(apply_meek_rules(&once).unwrap(), once);
    }
}
