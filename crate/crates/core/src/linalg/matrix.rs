//! Dense exact matrices over ℚ(i): rank, kernels, generalized kernels.

use std::fmt;

use super::echelon::Echelon;
use super::scalar::Gq;
use super::sparse::{from_dense, SparseVec};
use super::subspace::Subspace;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Gq>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Gq::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Gq::one());
        }
        m
    }

    pub fn diagonal(d: &[Gq]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (k, x) in d.iter().enumerate() {
            m.set(k, k, x.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gq>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|x| Gq::from_int(*x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, columns: &[Vec<Gq>]) -> Self {
        let mut m = Self::zeros(n, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Gq {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Gq) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Gq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Gq> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] += &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Gq]) -> Vec<Gq> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Gq::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, f: &Gq) -> ExactMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * f).collect(),
        }
    }

    /// `self − c·I`.
    pub fn shift(&self, c: &Gq) -> ExactMatrix {
        let mut m = self.clone();
        for k in 0..self.rows.min(self.cols) {
            let v = self.get(k, k) - c;
            m.set(k, k, v);
        }
        m
    }

    pub fn commutator(&self, rhs: &ExactMatrix) -> ExactMatrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn commutes_with(&self, rhs: &ExactMatrix) -> bool {
        self.mul(rhs) == rhs.mul(self)
    }

    pub fn sparse_rows(&self) -> Vec<SparseVec> {
        (0..self.rows).map(|r| from_dense(self.row(r))).collect()
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for r in self.sparse_rows() {
            e.insert(r);
        }
        e.rank()
    }

    /// Reduced row echelon form (unique), with its pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut e = Echelon::new();
        for r in self.sparse_rows() {
            e.insert(r);
        }
        let sub = Subspace::from_echelon(self.cols, &e);
        let pivots = sub.pivots().to_vec();
        let rows: Vec<Vec<Gq>> = sub.basis().to_vec();
        let mut m = ExactMatrix::zeros(self.rows, self.cols);
        for (r, row) in rows.into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        (m, pivots)
    }

    /// Basis of `{v : Mv = 0}`: one vector per free column, taking the value
    /// 1 there and 0 at the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Gq>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (k, p) in pivots.iter().enumerate() {
            is_pivot[*p] = Some(k);
        }
        let mut out = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![Gq::zero(); self.cols];
            v[free] = Gq::one();
            for (k, p) in pivots.iter().enumerate() {
                let x = r.get(k, free);
                if !x.is_zero() {
                    v[*p] = -x;
                }
            }
            out.push(v);
        }
        out
    }

    /// Solves `self · x_k = b_k` for every right-hand side. Returns `None`
    /// if some system is inconsistent; free variables are set to zero.
    pub fn solve_columns(&self, rhs: &[Vec<Gq>]) -> Option<Vec<Vec<Gq>>> {
        let n = self.cols;
        let mut aug = ExactMatrix::zeros(self.rows, n + rhs.len());
        for r in 0..self.rows {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            for (k, b) in rhs.iter().enumerate() {
                aug.set(r, n + k, b[r].clone());
            }
        }
        let mut e = Echelon::new();
        for r in aug.sparse_rows() {
            e.insert(r);
        }
        let sub = Subspace::from_echelon(aug.cols, &e);
        if sub.pivots().iter().any(|p| *p >= n) {
            return None;
        }
        let mut out = vec![vec![Gq::zero(); n]; rhs.len()];
        for (row, p) in sub.basis().iter().zip(sub.pivots()) {
            for (k, x) in out.iter_mut().enumerate() {
                x[*p] = row[n + k].clone();
            }
        }
        Some(out)
    }

    pub fn solve(&self, b: &[Gq]) -> Option<Vec<Gq>> {
        self.solve_columns(&[b.to_vec()]).map(|mut v| v.remove(0))
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_square() || self.rank() < self.rows {
            return None;
        }
        let id: Vec<Vec<Gq>> = (0..self.rows)
            .map(|k| {
                let mut v = vec![Gq::zero(); self.rows];
                v[k] = Gq::one();
                v
            })
            .collect();
        let cols = self.solve_columns(&id)?;
        Some(ExactMatrix::from_columns(self.rows, &cols))
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::span(self.cols, self.kernel_basis())
    }

    /// `ker (M − cI)^n` computed by repeated squaring of `M − cI` until the
    /// exponent reaches the dimension.
    pub fn generalized_kernel(&self, c: &Gq) -> Result<Subspace> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Subspace::zero(0));
        }
        let mut p = self.shift(c);
        let mut exponent = 1;
        while exponent < n && !p.is_zero() {
            p = p.mul(&p);
            exponent *= 2;
        }
        Ok(p.kernel())
    }

    /// Restriction of `self` to an invariant subspace, in the subspace's
    /// basis coordinates.
    pub fn restrict(&self, s: &Subspace) -> Result<ExactMatrix> {
        let d = s.dim();
        let mut out = ExactMatrix::zeros(d, d);
        for (c, b) in s.basis().iter().enumerate() {
            let img = self.mul_vec(b);
            let coords = s
                .coordinates(&img)
                .ok_or_else(|| Error::Internal("subspace is not invariant".into()))?;
            for (r, v) in coords.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        Ok(out)
    }
}

/// Intersection of the generalized kernels `ker (M_i − c_i I)^n` for a
/// pairwise commuting family.
pub fn joint_generalized_space(pairs: &[(ExactMatrix, Gq)]) -> Result<Subspace> {
    let Some((first, _)) = pairs.first() else {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    };
    let n = first.rows();
    for (m, _) in pairs {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.rows(),
            });
        }
    }
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if !pairs[i].0.commutes_with(&pairs[j].0) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    joint_generalized_space_unchecked(pairs)
}

/// As [`joint_generalized_space`] without the commutation test.
pub fn joint_generalized_space_unchecked(pairs: &[(ExactMatrix, Gq)]) -> Result<Subspace> {
    let n = pairs[0].0.rows();
    // Progressive restriction: each generalized kernel is invariant under the
    // remaining (commuting) operators.
    let mut current = Subspace::full(n);
    for (m, c) in pairs {
        if current.dim() == 0 {
            break;
        }
        let r = m.restrict(&current)?;
        let k = r.generalized_kernel(c)?;
        current = current.embed(&k);
    }
    Ok(current)
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
