//! The complex semisimple Lie algebra in a Killing-normalized root basis.
//!
//! Basis order: `E_{α_1}..E_{α_n}, E_{−α_1}..E_{−α_n}, H_1..H_r`, with
//! positive roots in [`RootSystem`] order and `H_j` the simple coroots.
//!
//! Each simple factor is realized on its adjoint module. Non-simple root
//! vectors come from fixed bracket recipes `e_α = [e_i, e_{α−α_i}]`,
//! `f_α = [f_{α−α_i}, f_i]` (smallest admissible `i`), after which every pair
//! is rescaled so that `κ(E_α, E_{−α}) = 1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{joint_generalized_space, ExactMatrix, Gq, Rational, SparseMatrix, Subspace};
use crate::repn::build_raw;
use crate::rootsys::{RootSystem, RootSystemSpec, Weight};

/// Coordinates on the algebra basis.
pub type Element = Vec<Gq>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Pos(usize),
    Neg(usize),
    H(usize),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Pos(k) => write!(f, "E+{}", k + 1),
            BasisLabel::Neg(k) => write!(f, "E-{}", k + 1),
            BasisLabel::H(j) => write!(f, "H{}", j + 1),
        }
    }
}

/// `Some((i, β))`: the root vector is the bracket of simple `i` with root `β`.
type Recipe = Option<(usize, usize)>;

fn recipes(rs: &RootSystem) -> Vec<Recipe> {
    (0..rs.num_positive())
        .map(|k| {
            if rs.height(k) == 1 {
                return None;
            }
            (0..rs.rank()).find_map(|i| {
                let mut b = rs.positive_roots()[k].clone();
                b[i] -= 1;
                rs.find_positive_coords(&b).map(|beta| (i, beta))
            })
        })
        .collect()
}

/// Unnormalized root vectors from generator matrices.
fn raw_root_vectors(
    rs: &RootSystem,
    recipes: &[Recipe],
    e: &[SparseMatrix],
    f: &[SparseMatrix],
) -> (Vec<SparseMatrix>, Vec<SparseMatrix>) {
    let n = rs.num_positive();
    let mut pos: Vec<SparseMatrix> = Vec::with_capacity(n);
    let mut neg: Vec<SparseMatrix> = Vec::with_capacity(n);
    for k in 0..n {
        match recipes[k] {
            None => {
                let i = rs.simple_of(k).unwrap();
                pos.push(e[i].clone());
                neg.push(f[i].clone());
            }
            Some((i, beta)) => {
                pos.push(e[i].commutator(&pos[beta]));
                neg.push(neg[beta].commutator(&f[i]));
            }
        }
    }
    (pos, neg)
}

#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    rs: RootSystem,
    recipes: Vec<Recipe>,
    scale_pos: Vec<Rational>,
    scale_neg: Vec<Rational>,
    /// `ad[a].cols[b]` holds `[b_a, b_b]`.
    ad: Vec<SparseMatrix>,
    killing: Vec<Vec<Gq>>,
    weights: Vec<Weight>,
}

impl ChevalleyAlgebra {
    pub fn build(rs: &RootSystem) -> Result<Self> {
        let n = rs.num_positive();
        let r = rs.rank();
        let dim = 2 * n + r;
        let recipes_global = recipes(rs);
        let mut scale_pos = vec![Rational::one(); n];
        let mut scale_neg = vec![Rational::one(); n];
        let mut weights = Vec::with_capacity(dim);
        weights.extend(rs.root_weights().iter().cloned());
        weights.extend(rs.root_weights().iter().map(|w| w.neg()));
        weights.extend((0..r).map(|_| Weight::zero(r)));
        let mut ad_cols: Vec<Vec<Vec<(usize, Gq)>>> = vec![vec![Vec::new(); dim]; dim];

        for comp in rs.components() {
            let local = RootSystem::build(&RootSystemSpec::new(vec![(comp.series, comp.rank)])?)?;
            let theta = local.root_weight(local.num_positive() - 1).clone();
            let adj = build_raw(&local, &theta, usize::MAX)?;
            let local_recipes = recipes(&local);
            let (pos, neg) = raw_root_vectors(&local, &local_recipes, &adj.e, &adj.f);
            let to_global: Vec<usize> = local
                .positive_roots()
                .iter()
                .map(|b| {
                    let mut g = vec![0; r];
                    g[comp.offset..comp.offset + comp.rank].copy_from_slice(b);
                    rs.find_positive_coords(&g).unwrap()
                })
                .collect();
            // Killing-normalize each pair; ω(e_α) = −f_α for the raw vectors.
            let mut mats: Vec<(usize, SparseMatrix)> = Vec::new();
            for (lk, &gk) in to_global.iter().enumerate() {
                let kappa = pos[lk].mul(&neg[lk]).trace();
                if !kappa.is_real() || kappa.re.signum() <= 0 {
                    return Err(Error::Internal(format!("Killing value {kappa} not positive")));
                }
                let kappa = kappa.re;
                match kappa.sqrt_exact() {
                    Some(root) => {
                        scale_pos[gk] = root.recip();
                        scale_neg[gk] = root.recip();
                    }
                    None => {
                        scale_pos[gk] = Rational::one();
                        scale_neg[gk] = kappa.recip();
                    }
                }
                mats.push((gk, pos[lk].scale(&Gq::real(scale_pos[gk].clone()))));
            }
            for (lk, &gk) in to_global.iter().enumerate() {
                mats.push((n + gk, neg[lk].scale(&Gq::real(scale_neg[gk].clone()))));
            }
            for j in 0..comp.rank {
                mats.push((2 * n + comp.offset + j, adj.h[j].clone()));
            }

            let index_of = |global: usize| mats.iter().position(|m| m.0 == global).unwrap();
            let first_nonzero: Vec<(usize, usize)> = mats
                .iter()
                .map(|(_, m)| {
                    let c = m.cols.iter().position(|c| !c.is_empty()).unwrap();
                    (m.cols[c][0].0, c)
                })
                .collect();
            // Cartan part: diagonal of h_j in the adjoint weight basis.
            let hdiag = ExactMatrix::from_columns(
                adj.dim(),
                &(0..comp.rank)
                    .map(|j| (0..adj.dim()).map(|k| adj.h[j].get(k, k)).collect())
                    .collect::<Vec<_>>(),
            );
            for (a, (ga, ma)) in mats.iter().enumerate() {
                for (ga_b, mb) in mats.iter() {
                    let comm = ma.commutator(mb);
                    if comm.is_zero() {
                        continue;
                    }
                    let w = weights[*ga].add(&weights[*ga_b]);
                    let col = &mut ad_cols[*ga][*ga_b];
                    if w.0.iter().all(|x| *x == 0) {
                        let diag: Vec<Gq> = (0..adj.dim()).map(|k| comm.get(k, k)).collect();
                        let x = hdiag
                            .solve(&diag)
                            .ok_or_else(|| Error::Internal("bracket not in Cartan".into()))?;
                        for (j, v) in x.into_iter().enumerate() {
                            if !v.is_zero() {
                                col.push((2 * n + comp.offset + j, v));
                            }
                        }
                    } else {
                        let (k, positive) = rs
                            .find_root(&w.0)
                            .ok_or_else(|| Error::Internal("bracket weight not a root".into()))?;
                        let t = if positive { k } else { n + k };
                        let ti = index_of(t);
                        let (r0, c0) = first_nonzero[ti];
                        let coef = &comm.get(r0, c0) / &mats[ti].1.get(r0, c0);
                        if comm != mats[ti].1.scale(&coef) {
                            return Err(Error::Internal("bracket not proportional to root vector".into()));
                        }
                        col.push((t, coef));
                    }
                    let _ = a;
                }
            }
        }

        let ad: Vec<SparseMatrix> = ad_cols
            .into_iter()
            .map(|cols| SparseMatrix {
                nrows: dim,
                ncols: dim,
                cols,
            })
            .collect();
        let mut killing = vec![vec![Gq::zero(); dim]; dim];
        for a in 0..dim {
            let target = weights[a].neg();
            for b in 0..dim {
                if weights[b] == target {
                    killing[a][b] = ad[a].mul(&ad[b]).trace();
                }
            }
        }
        Ok(Self {
            rs: rs.clone(),
            recipes: recipes_global,
            scale_pos,
            scale_neg,
            ad,
            killing,
            weights,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn num_positive(&self) -> usize {
        self.rs.num_positive()
    }

    pub fn pos(&self, k: usize) -> usize {
        k
    }

    pub fn neg(&self, k: usize) -> usize {
        self.num_positive() + k
    }

    pub fn h(&self, j: usize) -> usize {
        2 * self.num_positive() + j
    }

    pub fn label(&self, a: usize) -> BasisLabel {
        let n = self.num_positive();
        if a < n {
            BasisLabel::Pos(a)
        } else if a < 2 * n {
            BasisLabel::Neg(a - n)
        } else {
            BasisLabel::H(a - 2 * n)
        }
    }

    pub fn basis_weight(&self, a: usize) -> &Weight {
        &self.weights[a]
    }

    /// Scale factors `(c, c′)` with `E_α = c·e_α`, `E_{−α} = c′·f_α`.
    pub fn scales(&self, k: usize) -> (&Rational, &Rational) {
        (&self.scale_pos[k], &self.scale_neg[k])
    }

    pub fn zero(&self) -> Element {
        vec![Gq::zero(); self.dim()]
    }

    pub fn basis_element(&self, a: usize) -> Element {
        let mut x = self.zero();
        x[a] = Gq::one();
        x
    }

    pub fn is_zero(x: &[Gq]) -> bool {
        x.iter().all(|c| c.is_zero())
    }

    /// `ad(b_a)`.
    pub fn ad_basis(&self, a: usize) -> &SparseMatrix {
        &self.ad[a]
    }

    pub fn ad(&self, x: &[Gq]) -> SparseMatrix {
        let d = self.dim();
        let mut m = SparseMatrix::zeros(d, d);
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.axpy(c, &self.ad[a]);
            }
        }
        m
    }

    pub fn bracket(&self, x: &[Gq], y: &[Gq]) -> Element {
        let mut out = self.zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let f = xa * yb;
                for (t, c) in &self.ad[a].cols[b] {
                    out[*t] += &(&f * c);
                }
            }
        }
        out
    }

    pub fn killing(&self, x: &[Gq], y: &[Gq]) -> Gq {
        let mut acc = Gq::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                let k = &self.killing[a][b];
                if !yb.is_zero() && !k.is_zero() {
                    acc += &(&(xa * yb) * k);
                }
            }
        }
        acc
    }

    pub fn killing_basis(&self, a: usize, b: usize) -> &Gq {
        &self.killing[a][b]
    }

    /// The compact conjugation `ω`: antilinear, `ω(H_j) = −H_j`,
    /// `ω(E_α) = −(c/c′)E_{−α}`, `ω(E_{−α}) = −(c′/c)E_α`.
    pub fn conjugate(&self, x: &[Gq]) -> Element {
        let n = self.num_positive();
        let mut out = self.zero();
        for (a, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.conj();
            match self.label(a) {
                BasisLabel::H(_) => out[a] = -c,
                BasisLabel::Pos(k) => {
                    let f = -(&self.scale_pos[k] / &self.scale_neg[k]);
                    out[n + k] = c.scale(&f);
                }
                BasisLabel::Neg(k) => {
                    let f = -(&self.scale_neg[k] / &self.scale_pos[k]);
                    out[k] = c.scale(&f);
                }
            }
        }
        out
    }

    /// Coefficient `w` with `ω(E_α) = w·E_{−α}`.
    pub fn omega_factor(&self, k: usize) -> Rational {
        -(&self.scale_pos[k] / &self.scale_neg[k])
    }

    pub fn commuting_check(&self, xs: &[Element]) -> bool {
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                if !Self::is_zero(&self.bracket(&xs[i], &xs[j])) {
                    return false;
                }
            }
        }
        true
    }

    fn check_commuting(&self, xs: &[Element]) -> Result<()> {
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                if !Self::is_zero(&self.bracket(&xs[i], &xs[j])) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        Ok(())
    }

    /// `𝔤^⟨X⟩ = ∩ ker ad(X_i)`.
    pub fn centralizer(&self, xs: &[Element]) -> Result<Subspace> {
        self.check_commuting(xs)?;
        let d = self.dim();
        let mut rows = Vec::new();
        for x in xs {
            let m = self.ad(x).to_dense();
            for r in 0..d {
                rows.push(m.row(r).to_vec());
            }
        }
        if rows.is_empty() {
            return Ok(Subspace::full(d));
        }
        Ok(ExactMatrix::from_rows(rows).kernel())
    }

    /// `𝔤(0)`: the joint generalized 0-eigenspace of `ad(X_i)`.
    pub fn generalized_zero_space(&self, xs: &[Element]) -> Result<Subspace> {
        self.check_commuting(xs)?;
        if xs.is_empty() {
            return Ok(Subspace::full(self.dim()));
        }
        let pairs: Vec<(ExactMatrix, Gq)> =
            xs.iter().map(|x| (self.ad(x).to_dense(), Gq::zero())).collect();
        joint_generalized_space(&pairs)
    }

    /// Matrices of the full basis in a module given by `e_i, f_i, h_i`.
    pub fn basis_matrices_from_generators(
        &self,
        e: &[SparseMatrix],
        f: &[SparseMatrix],
        h: &[SparseMatrix],
    ) -> Vec<SparseMatrix> {
        let (pos, neg) = raw_root_vectors(&self.rs, &self.recipes, e, f);
        let mut out = Vec::with_capacity(self.dim());
        for (k, m) in pos.iter().enumerate() {
            out.push(m.scale(&Gq::real(self.scale_pos[k].clone())));
        }
        for (k, m) in neg.iter().enumerate() {
            out.push(m.scale(&Gq::real(self.scale_neg[k].clone())));
        }
        out.extend(h.iter().cloned());
        out
    }

    /// Element supported on 𝔥 with the given coroot coordinates.
    pub fn from_h(&self, coords: &[Gq]) -> Element {
        let mut x = self.zero();
        for (j, c) in coords.iter().enumerate() {
            x[self.h(j)] = c.clone();
        }
        x
    }

    /// Coroot coordinates of an element supported on 𝔥.
    pub fn h_part(&self, x: &[Gq]) -> Option<Vec<Gq>> {
        let n2 = 2 * self.num_positive();
        if x[..n2].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(x[n2..].to_vec())
    }

    pub fn format_element(&self, x: &[Gq]) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| format!("({c})*{}", self.label(a)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn alg(s: &str) -> ChevalleyAlgebra {
        ChevalleyAlgebra::build(&RootSystem::build(&s.parse().unwrap()).unwrap()).unwrap()
    }

    fn assert_jacobi(g: &ChevalleyAlgebra) {
        let d = g.dim();
        for a in 0..d {
            for b in 0..d {
                for c in b + 1..d {
                    let (x, y, z) = (g.basis_element(a), g.basis_element(b), g.basis_element(c));
                    let t1 = g.bracket(&x, &g.bracket(&y, &z));
                    let t2 = g.bracket(&y, &g.bracket(&z, &x));
                    let t3 = g.bracket(&z, &g.bracket(&x, &y));
                    let s: Vec<Gq> = (0..d).map(|k| &(&t1[k] + &t2[k]) + &t3[k]).collect();
                    assert!(ChevalleyAlgebra::is_zero(&s), "Jacobi fails at {a},{b},{c}");
                }
            }
        }
    }

    #[test]
    fn dimensions_and_jacobi() {
        for (s, d) in [("A1", 3), ("A2", 8), ("A1xA1", 6), ("B2", 10), ("G2", 14)] {
            let g = alg(s);
            assert_eq!(g.dim(), d);
            assert_jacobi(&g);
        }
    }

    #[test]
    fn sl2_brackets() {
        let g = alg("A1");
        let (e, f, h) = (g.basis_element(0), g.basis_element(1), g.basis_element(2));
        let he = g.bracket(&h, &e);
        assert_eq!(he, e.iter().map(|c| c.scale(&Rational::from_int(2))).collect::<Vec<_>>());
        assert!(ChevalleyAlgebra::is_zero(&g.bracket(&e, &e)));
        assert_eq!(g.killing(&e, &f), Gq::one());
        // ([E_α, E_{−α}], H) = α(H) = 2.
        assert_eq!(g.killing(&g.bracket(&e, &f), &h), Gq::from_int(2));
    }

    #[test]
    fn normalization_and_duality() {
        for s in ["A1", "A2", "B2", "G2", "A1xA1"] {
            let g = alg(s);
            let rs = g.root_system();
            for k in 0..g.num_positive() {
                let (e, f) = (g.basis_element(g.pos(k)), g.basis_element(g.neg(k)));
                assert_eq!(g.killing(&e, &f), Gq::one(), "{s}");
                let t = g.bracket(&e, &f);
                for j in 0..g.rank() {
                    let hj = g.basis_element(g.h(j));
                    let expected = Gq::from_int(rs.root_weight(k).0[j]);
                    assert_eq!(g.killing(&t, &hj), expected, "{s}");
                }
            }
            // Killing form on 𝔥 agrees with the root-system form.
            for i in 0..g.rank() {
                for j in 0..g.rank() {
                    assert_eq!(g.killing_basis(g.h(i), g.h(j)).re, rs.killing_h()[i][j]);
                }
            }
        }
    }

    #[test]
    fn a2_simple_bracket() {
        let g = alg("A2");
        let x = g.bracket(&g.basis_element(0), &g.basis_element(1));
        let nz: Vec<usize> = (0..g.dim()).filter(|k| !x[*k].is_zero()).collect();
        assert_eq!(nz, vec![2]);
    }

    #[test]
    fn cross_factor_brackets_vanish() {
        let g = alg("A1xA1");
        for a in [0, 2, 4] {
            for b in [1, 3, 5] {
                let x = g.bracket(&g.basis_element(a), &g.basis_element(b));
                assert!(ChevalleyAlgebra::is_zero(&x), "{a} {b}");
            }
        }
    }

    #[test]
    fn conjugation() {
        let g = alg("A1");
        let ih = g.from_h(&[Gq::i()]);
        assert_eq!(g.conjugate(&ih), ih);
        let mut m = g.zero();
        m[0] = Gq::one();
        m[1] = -Gq::one();
        assert_eq!(g.conjugate(&m), m);
    }

    #[test]
    fn conjugation_is_antilinear_automorphism() {
        for s in ["A2", "B2", "G2"] {
            let g = alg(s);
            for a in 0..g.dim() {
                for b in 0..g.dim() {
                    let (x, y) = (g.basis_element(a), g.basis_element(b));
                    assert_eq!(
                        g.conjugate(&g.bracket(&x, &y)),
                        g.bracket(&g.conjugate(&x), &g.conjugate(&y))
                    );
                }
            }
        }
    }

    #[test]
    fn killing_invariance() {
        for s in ["A2", "B2"] {
            let g = alg(s);
            let d = g.dim();
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let (x, y, z) = (g.basis_element(a), g.basis_element(b), g.basis_element(c));
                        let lhs = &g.killing(&g.bracket(&x, &y), &z) + &g.killing(&y, &g.bracket(&x, &z));
                        assert!(lhs.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn centralizer_examples() {
        let g = alg("A1");
        assert_eq!(g.centralizer(&[g.zero()]).unwrap().dim(), 3);
        assert_eq!(g.centralizer(&[g.basis_element(2)]).unwrap().dim(), 1);
        let g2 = alg("A1xA1");
        let x = g2.from_h(&[Gq::from_ratio(1, 3), Gq::zero()]);
        assert_eq!(g2.centralizer(&[x]).unwrap().dim(), 4);
    }

    #[test]
    fn generalized_zero_examples() {
        let g = alg("A1");
        assert_eq!(g.generalized_zero_space(&[g.basis_element(0)]).unwrap().dim(), 3);
        assert_eq!(g.generalized_zero_space(&[g.basis_element(2)]).unwrap().dim(), 1);
        assert_eq!(g.generalized_zero_space(&[g.zero()]).unwrap().dim(), 3);
    }

    #[test]
    fn commuting_examples() {
        let g = alg("A1xA1");
        assert!(g.commuting_check(&[g.basis_element(g.h(0)), g.basis_element(g.h(1))]));
        let s = alg("A1");
        assert!(!s.commuting_check(&[s.basis_element(0), s.basis_element(1)]));
        assert!(!s.commuting_check(&[s.basis_element(0), s.basis_element(2)]));
        assert_eq!(
            s.centralizer(&[s.basis_element(0), s.basis_element(1)]),
            Err(Error::NonCommuting(0, 1))
        );
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(v in proptest::collection::vec((-3i64..4, -3i64..4), 8)) {
            let g = alg("A2");
            let x: Element = v.iter().map(|(a, b)| &Gq::from_int(*a) + &(&Gq::i() * &Gq::from_int(*b))).collect();
            prop_assert_eq!(g.conjugate(&g.conjugate(&x)), x);
        }
    }
}
