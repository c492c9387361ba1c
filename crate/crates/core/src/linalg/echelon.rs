//! Incremental row echelon form over ℚ(i).
//!
//! Stored rows are monic and keyed by their leading column. Incoming vectors
//! are reduced only at their leading entry, always against the pivot row
//! owning that column, so the result depends only on insertion order. Every
//! intermediate entry is a ratio of minors of the inserted rows, which keeps
//! coefficient growth polynomial.

use std::collections::BTreeMap;

use super::sparse::{axpy, scale_vec, SparseVec};

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.pivots.iter()
    }

    /// Reduces `v` against the stored pivots; the remainder is empty iff `v`
    /// lies in the row span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, x)) = v.first() {
            match self.pivots.get(lead) {
                Some(p) => v = axpy(&v, &-x.clone(), p),
                None => break,
            }
        }
        v
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns `true` iff it was independent of the current rows.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        match r.first() {
            Some((lead, x)) => {
                let lead = *lead;
                let row = scale_vec(&r, &x.inv());
                self.pivots.insert(lead, row);
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar::Gq;

    fn sv(v: &[i64]) -> SparseVec {
        v.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(k, x)| (k, Gq::from_int(*x)))
            .collect()
    }

    #[test]
    fn detects_dependence() {
        let mut e = Echelon::new();
        assert!(e.insert(sv(&[2, 4, 0])));
        assert!(e.insert(sv(&[1, 0, 1])));
        assert!(!e.insert(sv(&[3, 4, 1])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(sv(&[0, 4, -2])));
        assert!(!e.contains(sv(&[0, 1, 1])));
    }

    #[test]
    fn gaussian_entries() {
        let i = Gq::i();
        let mut e = Echelon::new();
        assert!(e.insert(vec![(0, Gq::one()), (1, i.clone())]));
        // i·(1, i) = (i, −1)
        assert!(!e.insert(vec![(0, i.clone()), (1, Gq::from_int(-1))]));
        assert!(e.insert(vec![(0, i), (1, Gq::one())]));
    }
}
