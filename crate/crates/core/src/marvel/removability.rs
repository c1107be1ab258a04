//! The CI-test battery deciding whether a variable can be eliminated.

use super::caches::{MarvelCaches, NeighborInfo, VStructSet};
use super::MarvelError;
use crate::ci::CiOracle;
use crate::varset::VarSet;

/// Splits `mb_x` into neighbours and co-parents of `x`. A member `y` is a
/// co-parent iff some proper subset of `mb_x \ {y}` separates it from `x`;
/// subsets are tried smallest first and the first separating one is kept.
pub fn find_neighbors<O: CiOracle + ?Sized>(
    x: usize,
    mb_x: &VarSet,
    oracle: &mut O,
    caches: &mut MarvelCaches,
) -> NeighborInfo {
    let mut info = NeighborInfo::default();
    for y in mb_x {
        let sepset = match caches.classification(x, y) {
            Some(c) => c.clone(),
            None => {
                let found = mb_x
                    .without(y)
                    .proper_subsets()
                    .find(|s| oracle.query(x, y, s));
                caches.store_classification(x, y, found.clone());
                found
            }
        };
        match sepset {
            Some(s) => {
                info.coparents.insert(y);
                info.sepsets.insert(y, s);
            }
            None => {
                info.neighbors.insert(y);
            }
        }
    }
    info
}

/// Every v-structure `x -> y <- t` with `t` a co-parent of `x`: `y` is a
/// common child iff it is outside the separating set of `(x, t)` and no
/// subset of `(mb_x ∪ {x}) \ {y, t}` separates `y` from `t`.
pub fn find_vpa<O: CiOracle + ?Sized>(
    x: usize,
    info: &NeighborInfo,
    mb_x: &VarSet,
    oracle: &mut O,
    caches: &mut MarvelCaches,
) -> VStructSet {
    let pool = mb_x.with(x);
    let mut vpa = VStructSet::default();
    for (&t, s_xt) in &info.sepsets {
        for y in &info.neighbors {
            let verdict = match caches.common_child(x, y, t) {
                Some(v) => v,
                None => {
                    let v = !s_xt.contains(y) && {
                        let mut rest = pool.without(y);
                        rest.remove(t);
                        let separable = rest.subsets().any(|s| oracle.query(y, t, &s));
                        !separable
                    };
                    caches.store_common_child(x, y, t, v);
                    v
                }
            };
            if verdict {
                vpa.triples.insert((x, y, t));
            }
        }
    }
    vpa
}

/// True iff every pair of neighbours of `x` stays dependent given `S ∪ {x}`
/// for all `S ⊆ mb_x \ {z, w}`. Stops at the first separating set.
pub fn check_condition1<O: CiOracle + ?Sized>(
    x: usize,
    info: &NeighborInfo,
    mb_x: &VarSet,
    oracle: &mut O,
    caches: &mut MarvelCaches,
) -> bool {
    caches.set_cond1_holds(None);
    let nbrs = info.neighbors.to_vec();
    for (i, &z) in nbrs.iter().enumerate() {
        for &w in &nbrs[i + 1..] {
            if caches.cond1_inseparable(x, z, w) {
                continue;
            }
            let mut rest = mb_x.without(z);
            rest.remove(w);
            if rest.subsets().any(|s| oracle.query(z, w, &s.with(x))) {
                return false;
            }
            caches.mark_cond1_inseparable(x, z, w);
        }
    }
    caches.set_cond1_holds(Some(x));
    true
}

/// True iff for every `x -> y <- t` in `vpa` and every other neighbour `z` of
/// `x`, `z` and `t` stay dependent given `S ∪ {x, y}` for all
/// `S ⊆ mb_x \ {z, y, t}`.
///
/// Only meaningful once [`check_condition1`] has passed for `x`.
pub fn check_condition2<O: CiOracle + ?Sized>(
    x: usize,
    info: &NeighborInfo,
    vpa: &VStructSet,
    mb_x: &VarSet,
    oracle: &mut O,
    caches: &mut MarvelCaches,
) -> Result<bool, MarvelError> {
    if !caches.cond1_holds(x) {
        return Err(MarvelError::Condition1NotVerified(x));
    }
    for &(_, y, t) in vpa.iter() {
        for z in info.neighbors.without(y).iter() {
            if caches.cond2_inseparable(z, t, x, y) {
                continue;
            }
            let mut rest = mb_x.without(z);
            rest.remove(y);
            rest.remove(t);
            let xy = VarSet::from([x, y]);
            if rest.subsets().any(|s| oracle.query(z, t, &s.union(&xy))) {
                return Ok(false);
            }
            caches.mark_cond2_inseparable(z, t, x, y);
        }
    }
    Ok(true)
}

/// Outcome of running the full battery on one variable.
#[derive(Clone, Debug)]
pub struct Removability {
    pub removable: bool,
    pub info: NeighborInfo,
    /// `None` when condition 1 failed and v-structures were not searched.
    pub vpa: Option<VStructSet>,
}

/// Neighbours, condition 1, v-structures, condition 2, in that order.
pub fn is_removable_ci<O: CiOracle + ?Sized>(
    x: usize,
    mb_x: &VarSet,
    oracle: &mut O,
    caches: &mut MarvelCaches,
) -> Result<Removability, MarvelError> {
    let info = find_neighbors(x, mb_x, oracle, caches);
    if !check_condition1(x, &info, mb_x, oracle, caches) {
        return Ok(Removability { removable: false, info, vpa: None });
    }
    let vpa = find_vpa(x, &info, mb_x, oracle, caches);
    let removable = check_condition2(x, &info, &vpa, mb_x, oracle, caches)?;
    Ok(Removability { removable, info, vpa: Some(vpa) })
}
