//! Sparse exact elimination over the rationals.
//!
//! [`SparseEchelon`] keeps a list of rows, each with a pivot key at which every
//! later row vanishes. Reducing a vector row by row in insertion order then
//! clears every pivot, which is all that membership tests, rank computations
//! and coordinate solves need.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::ncpoly::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

pub(crate) fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    for (k, v) in x {
        let e = target.entry(k.clone()).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            target.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K> {
    pivot: K,
    vec: SparseVec<K>,
    /// Coordinates of `vec` in terms of the inserted generators.
    combo: SparseVec<usize>,
}

#[derive(Clone, Debug)]
pub struct SparseEchelon<K> {
    rows: Vec<Row<K>>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon { rows: Vec::new(), inserted: 0 }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows, returning the residue and the
    /// combination of generators subtracted from it.
    pub fn reduce(&self, mut v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut used = SparseVec::new();
        for row in &self.rows {
            if let Some(c) = v.get(&row.pivot).cloned() {
                axpy(&mut v, &-c.clone(), &row.vec);
                axpy(&mut used, &c, &row.combo);
            }
        }
        (v, used)
    }

    /// Inserts the next generator; returns `false` if it is dependent on the
    /// earlier ones. Generators are numbered by insertion order either way.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (res, used) = self.reduce(v);
        let Some((pivot, pc)) = res.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Rational::one() / pc;
        let vec: SparseVec<K> = res.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        let mut combo = SparseVec::new();
        combo.insert(id, Rational::one());
        axpy(&mut combo, &-Rational::one(), &used);
        let combo = combo.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.rows.push(Row { pivot, vec, combo });
        true
    }

    /// Coordinates of `v` in the span of the inserted generators, or `None`
    /// when `v` lies outside it.
    pub fn solve(&self, v: SparseVec<K>) -> Option<SparseVec<usize>> {
        let (res, used) = self.reduce(v);
        res.is_empty().then_some(used)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::rat;

    fn sv(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, rat(c))).collect()
    }

    #[test]
    fn rank_and_solve() {
        let mut e = SparseEchelon::new();
        assert!(e.insert(sv(&[(0, 1), (1, 1)])));
        assert!(e.insert(sv(&[(1, 1), (2, 1)])));
        assert!(!e.insert(sv(&[(0, 1), (1, 2), (2, 1)])));
        assert_eq!(e.rank(), 2);
        let c = e.solve(sv(&[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(c, [(0usize, rat(2)), (1, rat(3))].into_iter().collect());
        assert!(e.solve(sv(&[(0, 1)])).is_none());
    }
}
