//! Sparse vectors and column-major sparse matrices over ℚ(i).

use super::matrix::ExactMatrix;
use super::scalar::Gq;

/// Sorted `(index, value)` pairs with no explicit zeros.
pub type SparseVec = Vec<(usize, Gq)>;

/// `a + f·b` on sorted sparse vectors.
pub fn axpy(a: &[(usize, Gq)], f: &Gq, b: &[(usize, Gq)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let kb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            let v = f * &b[j].1;
            if !v.is_zero() {
                out.push((kb, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + &(f * &b[j].1);
            if !v.is_zero() {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(v: &[(usize, Gq)], f: &Gq) -> SparseVec {
    if f.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(k, x)| (*k, f * x)).collect()
}

pub fn to_dense(v: &[(usize, Gq)], n: usize) -> Vec<Gq> {
    let mut out = vec![Gq::zero(); n];
    for (k, x) in v {
        out[*k] = x.clone();
    }
    out
}

pub fn from_dense(v: &[Gq]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (k, x.clone()))
        .collect()
}

/// Accumulates unordered contributions into a sorted sparse vector.
#[derive(Default)]
pub struct Accumulator {
    entries: std::collections::BTreeMap<usize, Gq>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, k: usize, v: &Gq) {
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry(k).or_default();
        *e += v;
    }

    pub fn finish(self) -> SparseVec {
        self.entries.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.cols[k].push((k, Gq::one()));
        }
        m
    }

    pub fn diagonal(d: &[Gq]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (k, x) in d.iter().enumerate() {
            if !x.is_zero() {
                m.cols[k].push((k, x.clone()));
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Gq {
        self.cols[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|k| self.cols[c][k].1.clone())
            .unwrap_or_default()
    }

    pub fn mul_vec(&self, v: &[(usize, Gq)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (k, x) in v {
            for (r, m) in &self.cols[*k] {
                acc.add(*r, &(m * x));
            }
        }
        acc.finish()
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, rhs.nrows, "sparse product shape");
        SparseMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            cols: rhs.cols.iter().map(|c| self.mul_vec(c)).collect(),
        }
    }

    /// `self + f·rhs`.
    pub fn axpy(&self, f: &Gq, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            cols: self
                .cols
                .iter()
                .zip(&rhs.cols)
                .map(|(a, b)| axpy(a, f, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &Gq) -> SparseMatrix {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            cols: self.cols.iter().map(|c| scale_vec(c, f)).collect(),
        }
    }

    pub fn commutator(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.mul(rhs).axpy(&-Gq::one(), &rhs.mul(self))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.clone()));
            }
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            cols,
        }
    }

    pub fn trace(&self) -> Gq {
        let mut t = Gq::zero();
        for k in 0..self.ncols.min(self.nrows) {
            t += &self.get(k, k);
        }
        t
    }

    pub fn to_dense(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.nrows, self.ncols);
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn from_dense(m: &ExactMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(m.rows(), m.cols());
        for c in 0..m.cols() {
            for r in 0..m.rows() {
                let v = m.get(r, c);
                if !v.is_zero() {
                    out.cols[c].push((r, v.clone()));
                }
            }
        }
        out
    }

    /// Rows as sparse vectors (row-major view).
    pub fn rows_sparse(&self) -> Vec<SparseVec> {
        self.transpose().cols
    }

    /// Kronecker product `self ⊗ rhs` with index `(i, j) ↦ i·dim(rhs) + j`.
    pub fn kron(&self, rhs: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.nrows * rhs.nrows, self.ncols * rhs.ncols);
        for (ca, cola) in self.cols.iter().enumerate() {
            for (cb, colb) in rhs.cols.iter().enumerate() {
                let col = &mut out.cols[ca * rhs.ncols + cb];
                for (ra, va) in cola {
                    for (rb, vb) in colb {
                        col.push((ra * rhs.nrows + rb, va * vb));
                    }
                }
                col.sort_by_key(|e| e.0);
            }
        }
        out
    }
}
