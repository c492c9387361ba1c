//! Subspaces of ℚ(i)ⁿ held by their reduced row echelon basis.

use super::echelon::Echelon;
use super::scalar::Gq;
use super::sparse::{axpy, from_dense, scale_vec, to_dense, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    pivots: Vec<usize>,
    basis: Vec<Vec<Gq>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            pivots: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|k| {
                let mut v = vec![Gq::zero(); ambient];
                v[k] = Gq::one();
                v
            })
            .collect();
        Self {
            ambient,
            pivots: (0..ambient).collect(),
            basis,
        }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Gq>>) -> Self {
        let mut e = Echelon::new();
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length");
            e.insert(from_dense(&v));
        }
        Self::from_echelon(ambient, &e)
    }

    pub fn span_sparse(ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new();
        for v in vectors {
            e.insert(v);
        }
        Self::from_echelon(ambient, &e)
    }

    pub fn from_echelon(ambient: usize, e: &Echelon) -> Self {
        let mut rows: Vec<(usize, SparseVec)> = e
            .rows()
            .map(|(lead, row)| {
                let inv = row[0].1.inv();
                (*lead, scale_vec(row, &inv))
            })
            .collect();
        // Back substitution from the last pivot upward.
        for k in (0..rows.len()).rev() {
            let mut row = std::mem::take(&mut rows[k].1);
            for later in k + 1..rows.len() {
                let p = rows[later].0;
                if let Ok(pos) = row.binary_search_by_key(&p, |x| x.0) {
                    let f = -row[pos].1.clone();
                    row = axpy(&row, &f, &rows[later].1);
                }
            }
            rows[k].1 = row;
        }
        Self {
            ambient,
            pivots: rows.iter().map(|r| r.0).collect(),
            basis: rows.iter().map(|r| to_dense(&r.1, ambient)).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Gq>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Gq]) -> Option<Vec<Gq>> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let coords: Vec<Gq> = self.pivots.iter().map(|p| v[*p].clone()).collect();
        let mut rest: Vec<Gq> = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &(c * y);
                }
            }
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[Gq]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Maps a subspace of coordinate space `ℚ(i)^dim` into the ambient space.
    pub fn embed(&self, inner: &Subspace) -> Subspace {
        assert_eq!(inner.ambient, self.dim(), "embedding dimension");
        let vectors = inner.basis.iter().map(|c| self.lift(c));
        Subspace::span(self.ambient, vectors)
    }

    /// Ambient vector with the given coordinates.
    pub fn lift(&self, coords: &[Gq]) -> Vec<Gq> {
        let mut v = vec![Gq::zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        v
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<Gq> {
        x.iter().map(|a| Gq::from_int(*a)).collect()
    }

    #[test]
    fn rref_basis_is_canonical() {
        let a = Subspace::span(3, [v(&[1, 2, 3]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, [v(&[1, 3, 4]), v(&[2, 4, 6])]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[v(&[1, 0, 1]), v(&[0, 1, 1])]);
        assert_eq!(a.coordinates(&v(&[2, 3, 5])), Some(v(&[2, 3])));
        assert!(!a.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn embed_coordinates() {
        let a = Subspace::span(3, [v(&[1, 0, 1]), v(&[0, 1, 1])]);
        let inner = Subspace::span(2, [v(&[1, 1])]);
        let e = a.embed(&inner);
        assert_eq!(e.basis(), &[v(&[1, 1, 2])]);
    }
}
