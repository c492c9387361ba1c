//! Irreducible highest-weight modules with explicit exact matrices.
//!
//! The module is built weight by weight from the highest weight down. At a
//! weight `μ` the candidates are `f_i·b` for basis vectors `b` of
//! `V_{μ+α_i}`. In the irreducible quotient a vector of weight `μ ≠ λ` is zero
//! exactly when every `e_j` kills it, so the candidates are compared through
//! their images under `e_1..e_r`, which are computed from
//! `e_j f_i b = f_i e_j b + δ_ij (μ+α_i)(H_i) b`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::chevalley::ChevalleyAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, ExactMatrix, Gq, Rational, SparseMatrix};
use crate::linalg::sparse::from_dense;
use crate::rootsys::{RootSystem, Weight};
use crate::weyl::WeylElement;

pub const DEFAULT_DIM_CEILING: usize = 5000;

/// `∏_{α>0} <λ+ρ_W, α^∨> / <ρ_W, α^∨>`.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<u128> {
    if !lambda.is_dominant() || lambda.0.len() != rs.rank() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let rho = rs.rho_w();
    let shifted = lambda.add(&rho);
    let mut num = Rational::one();
    for k in 0..rs.num_positive() {
        num = &num * &rs.coroot_pairing_weight(&shifted, k);
        num = &num / &rs.coroot_pairing_weight(&rho, k);
    }
    u128::try_from(&num.to_big().to_integer())
        .map_err(|_| Error::Internal("Weyl dimension overflow".into()))
}

/// Weight multiplicities of `V^λ` by Freudenthal's recursion.
pub fn freudenthal_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<BTreeMap<Weight, usize>> {
    if !lambda.is_dominant() || lambda.0.len() != rs.rank() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let r = rs.rank();
    let rho = rs.rho_w();
    let top = rs.form_weights(&lambda.add(&rho), &lambda.add(&rho));
    let mut mult: BTreeMap<Weight, usize> = BTreeMap::new();
    mult.insert(lambda.clone(), 1);
    let mut layer = vec![lambda.clone()];
    let mut depth: i64 = 0;
    // Every weight of V^λ is reachable from λ through weights by subtracting
    // simple roots, so the search stops at the first empty layer.
    while !layer.is_empty() {
        depth += 1;
        let mut candidates: Vec<Weight> = Vec::new();
        for mu in &layer {
            for i in 0..r {
                let nu = mu.sub(&rs.simple_weight(i));
                if !mult.contains_key(&nu) && !candidates.contains(&nu) {
                    candidates.push(nu);
                }
            }
        }
        candidates.sort_by(|a, b| b.cmp(a));
        let mut next = Vec::new();
        for mu in candidates {
            let denom = &top - &rs.form_weights(&mu.add(&rho), &mu.add(&rho));
            if denom.is_zero() {
                continue;
            }
            let mut sum = Rational::zero();
            for (k, alpha) in rs.root_weights().iter().enumerate() {
                let h = rs.height(k);
                for step in 1..=depth / h {
                    let w = mu.add(&alpha.scale(step));
                    if let Some(m) = mult.get(&w) {
                        let p = rs.form_weights(&w, alpha);
                        sum += &(&p * &Rational::from_int(*m as i64));
                    }
                }
            }
            let m = &(&sum * &Rational::from_int(2)) / &denom;
            let m = m
                .to_i64()
                .ok_or_else(|| Error::Internal("non-integral multiplicity".into()))?;
            if m > 0 {
                mult.insert(mu.clone(), m as usize);
                next.push(mu);
            }
        }
        layer = next;
    }
    Ok(mult)
}

/// Raw generator matrices `e_i, f_i, h_i` of `V^λ` with weight bookkeeping.
#[derive(Clone, Debug)]
pub struct RawModule {
    pub lambda: Weight,
    pub weights: Vec<Weight>,
    pub words: Vec<Vec<usize>>,
    pub e: Vec<SparseMatrix>,
    pub f: Vec<SparseMatrix>,
    pub h: Vec<SparseMatrix>,
}

impl RawModule {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

struct WeightSpace {
    words: Vec<Vec<usize>>,
}

pub fn build_raw(rs: &RootSystem, lambda: &Weight, ceiling: usize) -> Result<RawModule> {
    let expected = weyl_dimension(rs, lambda)?;
    if expected > ceiling as u128 {
        return Err(Error::ModuleCeiling {
            dim: expected,
            ceiling,
        });
    }
    let r = rs.rank();
    let simple: Vec<Weight> = (0..r).map(|i| rs.simple_weight(i)).collect();
    let mut spaces: HashMap<Weight, WeightSpace> = HashMap::new();
    // e_blocks[(μ, j)]: V_μ → V_{μ+α_j}; f_blocks[(ν, i)]: V_ν → V_{ν−α_i}.
    let mut e_blocks: HashMap<(Weight, usize), ExactMatrix> = HashMap::new();
    let mut f_blocks: HashMap<(Weight, usize), ExactMatrix> = HashMap::new();
    spaces.insert(lambda.clone(), WeightSpace { words: vec![vec![]] });
    let mut order: Vec<Weight> = vec![lambda.clone()];
    let mut layer = vec![lambda.clone()];
    let mut total = 1u128;
    while !layer.is_empty() {
        let mut targets: Vec<Weight> = Vec::new();
        for nu in &layer {
            for s in &simple {
                let mu = nu.sub(s);
                if !targets.contains(&mu) {
                    targets.push(mu);
                }
            }
        }
        targets.sort_by(|a, b| b.cmp(a));
        let mut next = Vec::new();
        for mu in targets {
            let up: Vec<Option<usize>> = (0..r)
                .map(|j| spaces.get(&mu.add(&simple[j])).map(|s| s.words.len()))
                .collect();
            // Offsets of the blocks V_{μ+α_j} in the concatenated e-image.
            let mut offsets = vec![0; r + 1];
            for j in 0..r {
                offsets[j + 1] = offsets[j] + up[j].unwrap_or(0);
            }
            let width = offsets[r];
            let mut candidates: Vec<(usize, usize, Vec<Gq>)> = Vec::new();
            for i in 0..r {
                let Some(dim_nu) = up[i] else { continue };
                let nu = mu.add(&simple[i]);
                for b in 0..dim_nu {
                    let mut img = vec![Gq::zero(); width];
                    for j in 0..r {
                        if up[j].is_none() {
                            continue;
                        }
                        // f_i (e_j b), with e_j b ∈ V_{ν+α_j}.
                        if let Some(ej) = e_blocks.get(&(nu.clone(), j)) {
                            let top = nu.add(&simple[j]);
                            let fi = f_blocks.get(&(top, i));
                            if let Some(fi) = fi {
                                let col = ej.column(b);
                                let v = fi.mul_vec(&col);
                                for (k, x) in v.into_iter().enumerate() {
                                    img[offsets[j] + k] += &x;
                                }
                            }
                        }
                        if i == j {
                            let c = Gq::from_int(nu.0[i]);
                            img[offsets[j] + b] += &c;
                        }
                    }
                    candidates.push((i, b, img));
                }
            }
            let mut ech = Echelon::new();
            let mut basis: Vec<usize> = Vec::new();
            for (k, (_, _, img)) in candidates.iter().enumerate() {
                if ech.insert(from_dense(img)) {
                    basis.push(k);
                }
            }
            if basis.is_empty() {
                continue;
            }
            let dim = basis.len();
            let bmat = ExactMatrix::from_columns(
                width,
                &basis.iter().map(|k| candidates[*k].2.clone()).collect::<Vec<_>>(),
            );
            let rhs: Vec<Vec<Gq>> = candidates.iter().map(|c| c.2.clone()).collect();
            let coords = bmat
                .solve_columns(&rhs)
                .ok_or_else(|| Error::Internal("candidate outside span".into()))?;
            for i in 0..r {
                let Some(dim_nu) = up[i] else { continue };
                let nu = mu.add(&simple[i]);
                let mut fm = ExactMatrix::zeros(dim, dim_nu);
                for (k, (ci, b, _)) in candidates.iter().enumerate() {
                    if *ci == i {
                        for (row, x) in coords[k].iter().enumerate() {
                            fm.set(row, *b, x.clone());
                        }
                    }
                }
                f_blocks.insert((nu, i), fm);
            }
            for j in 0..r {
                let Some(dim_up) = up[j] else { continue };
                let mut em = ExactMatrix::zeros(dim_up, dim);
                for (col, k) in basis.iter().enumerate() {
                    for row in 0..dim_up {
                        em.set(row, col, candidates[*k].2[offsets[j] + row].clone());
                    }
                }
                e_blocks.insert((mu.clone(), j), em);
            }
            let words = basis
                .iter()
                .map(|k| {
                    let (i, b, _) = &candidates[*k];
                    let nu = mu.add(&simple[*i]);
                    let mut w = vec![*i];
                    w.extend(spaces[&nu].words[*b].iter().copied());
                    w
                })
                .collect();
            total += dim as u128;
            spaces.insert(mu.clone(), WeightSpace { words });
            order.push(mu.clone());
            next.push(mu);
        }
        layer = next;
    }
    if total != expected {
        return Err(Error::Internal(format!(
            "module for {lambda} has dimension {total}, expected {expected}"
        )));
    }

    let mut start: HashMap<Weight, usize> = HashMap::new();
    let mut weights = Vec::new();
    let mut words = Vec::new();
    for mu in &order {
        start.insert(mu.clone(), weights.len());
        for w in &spaces[mu].words {
            weights.push(mu.clone());
            words.push(w.clone());
        }
    }
    let n = weights.len();
    let place = |blocks: &HashMap<(Weight, usize), ExactMatrix>, i: usize, shift: &Weight, up: bool| {
        let mut m = SparseMatrix::zeros(n, n);
        for mu in &order {
            let Some(block) = blocks.get(&(mu.clone(), i)) else { continue };
            let target = if up { mu.add(shift) } else { mu.sub(shift) };
            let (Some(c0), Some(r0)) = (start.get(mu), start.get(&target)) else { continue };
            for c in 0..block.cols() {
                for rr in 0..block.rows() {
                    let v = block.get(rr, c);
                    if !v.is_zero() {
                        m.cols[c0 + c].push((r0 + rr, v.clone()));
                    }
                }
            }
        }
        for col in &mut m.cols {
            col.sort_by_key(|x| x.0);
        }
        m
    };
    let e = (0..r).map(|i| place(&e_blocks, i, &simple[i], true)).collect();
    let f = (0..r).map(|i| place(&f_blocks, i, &simple[i], false)).collect();
    let h = (0..r)
        .map(|i| {
            SparseMatrix::diagonal(&weights.iter().map(|w| Gq::from_int(w.0[i])).collect::<Vec<_>>())
        })
        .collect();
    Ok(RawModule {
        lambda: lambda.clone(),
        weights,
        words,
        e,
        f,
        h,
    })
}

/// `V^λ` with matrices for every element of the normalized Chevalley basis.
#[derive(Clone, Debug)]
pub struct HighestWeightModule {
    pub lambda: Weight,
    pub weights: Vec<Weight>,
    pub words: Vec<Vec<usize>>,
    /// `ν(b_a)` for the algebra basis `[E_+…, E_−…, H…]`.
    pub basis_matrices: Vec<SparseMatrix>,
    weight_index: BTreeMap<Weight, Vec<usize>>,
}

impl HighestWeightModule {
    pub fn build(alg: &ChevalleyAlgebra, lambda: &Weight) -> Result<Self> {
        Self::build_with_ceiling(alg, lambda, DEFAULT_DIM_CEILING)
    }

    pub fn build_with_ceiling(alg: &ChevalleyAlgebra, lambda: &Weight, ceiling: usize) -> Result<Self> {
        let raw = build_raw(alg.root_system(), lambda, ceiling)?;
        let basis_matrices = alg.basis_matrices_from_generators(&raw.e, &raw.f, &raw.h);
        let mut weight_index: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (k, w) in raw.weights.iter().enumerate() {
            weight_index.entry(w.clone()).or_default().push(k);
        }
        Ok(Self {
            lambda: raw.lambda,
            weights: raw.weights,
            words: raw.words,
            basis_matrices,
            weight_index,
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn multiplicities(&self) -> BTreeMap<Weight, usize> {
        self.weight_index
            .iter()
            .map(|(w, v)| (w.clone(), v.len()))
            .collect()
    }

    pub fn weight_basis(&self, w: &Weight) -> &[usize] {
        self.weight_index.get(w).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// `ν(x)` for an algebra element given by its basis coordinates.
    pub fn action(&self, x: &[Gq]) -> SparseMatrix {
        let n = self.dim();
        let mut m = SparseMatrix::zeros(n, n);
        for (c, b) in x.iter().zip(&self.basis_matrices) {
            if !c.is_zero() {
                m = m.axpy(c, b);
            }
        }
        m
    }

    /// `ν*(x) = −ν(x)ᵀ` in the dual basis.
    pub fn dual_action(&self, x: &[Gq]) -> SparseMatrix {
        self.action(x).transpose().scale(&-Gq::one())
    }

    /// The dual basis vector of `(V^λ)*` of weight `sign·σλ`.
    pub fn extreme_weight_vector(&self, sigma: &WeylElement, positive: bool) -> Result<Vec<Gq>> {
        let sl = sigma.act(&self.lambda);
        // The dual basis vector v_k* has weight −wt(v_k).
        let target = if positive { sl.neg() } else { sl };
        let idx = self.weight_basis(&target);
        if idx.len() != 1 {
            return Err(Error::NotExtreme {
                weight: target.0,
                dim: idx.len(),
            });
        }
        let mut v = vec![Gq::zero(); self.dim()];
        v[idx[0]] = Gq::one();
        Ok(v)
    }
}

/// Memo of built modules keyed by root system and highest weight. Concurrent
/// duplicate builds are allowed; the first insert wins.
#[derive(Default)]
pub struct ModuleCache {
    map: Mutex<HashMap<(String, Weight), Arc<HighestWeightModule>>>,
    ceiling: Option<usize>,
}

impl ModuleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_ceiling(ceiling: usize) -> Self {
        Self {
            map: Mutex::default(),
            ceiling: Some(ceiling),
        }
    }

    pub fn get(&self, alg: &ChevalleyAlgebra, lambda: &Weight) -> Result<Arc<HighestWeightModule>> {
        let key = (alg.root_system().spec.to_string(), lambda.clone());
        if let Some(m) = self.map.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let built = Arc::new(HighestWeightModule::build_with_ceiling(
            alg,
            lambda,
            self.ceiling.unwrap_or(DEFAULT_DIM_CEILING),
        )?);
        let mut map = self.map.lock().unwrap();
        Ok(map.entry(key).or_insert(built).clone())
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
