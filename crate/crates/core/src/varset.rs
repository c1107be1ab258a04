//! Sets of variable indices backed by a growable bitset.
//!
//! `VarSet` is the workhorse type for Markov boundaries, conditioning sets
//! and separating sets. Iteration is always in ascending index order, and
//! subset enumeration is by increasing cardinality, then lexicographic.

use std::fmt;

use itertools::Itertools;

const WORD_BITS: usize = 64;

/// A set of variable indices.
///
/// The backing storage never carries trailing zero words, so two sets with the
/// same members compare (and hash) equal regardless of how they were built.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet {
    words: Vec<u64>,
}

impl VarSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set `{0, 1, ..., p - 1}`.
    pub fn full(p: usize) -> Self {
        (0..p).collect()
    }

    pub fn singleton(x: usize) -> Self {
        let mut s = Self::new();
        s.insert(x);
        s
    }

    pub fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x / WORD_BITS, x % WORD_BITS);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, x: usize) -> bool {
        let (w, b) = (x / WORD_BITS, x % WORD_BITS);
        if w >= self.words.len() {
            return false;
        }
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        present
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        let (w, b) = (x / WORD_BITS, x % WORD_BITS);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest member, if any.
    pub fn last(&self) -> Option<usize> {
        let w = self.words.len().checked_sub(1)?;
        Some(w * WORD_BITS + (WORD_BITS - 1 - self.words[w].leading_zeros() as usize))
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn with(&self, x: usize) -> Self {
        let mut s = self.clone();
        s.insert(x);
        s
    }

    pub fn without(&self, x: usize) -> Self {
        let mut s = self.clone();
        s.remove(x);
        s
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, o) in words.iter_mut().zip(&short.words) {
            *w |= o;
        }
        Self { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        };
        s.trim();
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (w, o) in s.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.len() <= other.words.len()
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &Self) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        self.trim();
    }

    /// All subsets, by increasing cardinality and lexicographically within a
    /// cardinality. Includes the empty set and the set itself.
    pub fn subsets(&self) -> impl Iterator<Item = VarSet> + '_ {
        self.subsets_up_to(self.len())
    }

    /// All subsets of cardinality strictly below `len()`, in the same order as
    /// [`VarSet::subsets`].
    pub fn proper_subsets(&self) -> impl Iterator<Item = VarSet> + '_ {
        let n = self.len();
        self.subsets_up_to(n.saturating_sub(1))
            .filter(move |_| n > 0)
    }

    fn subsets_up_to(&self, max_size: usize) -> impl Iterator<Item = VarSet> + '_ {
        let members = self.to_vec();
        (0..=max_size).flat_map(move |k| {
            members
                .clone()
                .into_iter()
                .combinations(k)
                .map(|c| c.into_iter().collect::<VarSet>())
        })
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD_BITS + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VarSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl Extend<usize> for VarSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        for x in iter {
            self.insert(x);
        }
    }
}

impl<const N: usize> From<[usize; N]> for VarSet {
    fn from(items: [usize; N]) -> Self {
        items.into_iter().collect()
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_remove_contains() {
        let mut s = VarSet::new();
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(130));
        assert!(s.contains(3) && s.contains(130) && !s.contains(4));
        assert_eq!(s.len(), 2);
        assert_eq!(s.last(), Some(130));
        assert!(s.remove(130));
        assert_eq!(s, VarSet::from([3]));
        assert!(s.remove(3));
        assert!(s.is_empty());
        assert_eq!(s, VarSet::new());
    }

    #[test]
    fn subsets_increasing_cardinality_then_lex() {
        let s = VarSet::from([1, 4, 7]);
        let got: Vec<Vec<usize>> = s.subsets().map(|x| x.to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![],
                vec![1],
                vec![4],
                vec![7],
                vec![1, 4],
                vec![1, 7],
                vec![4, 7],
                vec![1, 4, 7],
            ]
        );
        assert_eq!(s.proper_subsets().count(), 7);
        assert_eq!(VarSet::new().subsets().count(), 1);
        assert_eq!(VarSet::new().proper_subsets().count(), 0);
    }

    #[test]
    fn display_lists_members() {
        assert_eq!(VarSet::from([2, 0]).to_string(), "{0, 2}");
        assert_eq!(VarSet::new().to_string(), "{}");
    }

    proptest! {
        #[test]
        fn matches_btreeset(xs in proptest::collection::vec(0usize..200, 0..40),
                            ys in proptest::collection::vec(0usize..200, 0..40)) {
            use std::collections::BTreeSet;
            let a: VarSet = xs.iter().copied().collect();
            let b: VarSet = ys.iter().copied().collect();
            let ra: BTreeSet<usize> = xs.iter().copied().collect();
            let rb: BTreeSet<usize> = ys.iter().copied().collect();
            prop_assert_eq!(a.to_vec(), ra.iter().copied().collect::<Vec<_>>());
            prop_assert_eq!(a.union(&b).to_vec(), ra.union(&rb).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.intersection(&b).to_vec(), ra.intersection(&rb).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.difference(&b).to_vec(), ra.difference(&rb).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.is_subset(&b), ra.is_subset(&rb));
            prop_assert_eq!(a.is_disjoint(&b), ra.is_disjoint(&rb));
            // canonical representation
            let rebuilt: VarSet = a.iter().collect();
            prop_assert_eq!(rebuilt, a.difference(&VarSet::new()));
        }
    }
}
