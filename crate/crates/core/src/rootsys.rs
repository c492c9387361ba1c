//! Root systems of semisimple type, weights, and the invariant form.
//!
//! Conventions: simple roots are numbered as in Bourbaki. The Cartan matrix is
//! `C[i][j] = <α_i, α_j^∨> = α_i(H_j)`, so row `i` is `α_i` written in
//! fundamental-weight coordinates. Weights are stored by their values on the
//! coroots `H_1..H_r`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Gq, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    /// Simply laced series carry a single root length.
    pub fn simply_laced(self) -> bool {
        matches!(self, Series::A | Series::D | Series::E)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSystemSpec {
    pub factors: Vec<(Series, usize)>,
}

impl RootSystemSpec {
    pub fn new(factors: Vec<(Series, usize)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidRootSystem("no factors".into()));
        }
        for &(s, r) in &factors {
            let ok = match s {
                Series::A => r >= 1,
                Series::B | Series::C => r >= 2,
                Series::D => r >= 4,
                Series::E => (6..=8).contains(&r),
                Series::F => r == 4,
                Series::G => r == 2,
            };
            if !ok {
                return Err(Error::InvalidRootSystem(format!("{}{}", s.letter(), r)));
            }
        }
        Ok(Self { factors })
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.1).sum()
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(s, r)| format!("{}{}", s.letter(), r))
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for RootSystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.trim().split(['x', 'X', '×']) {
            let part = part.trim();
            let mut chars = part.chars();
            let letter = chars
                .next()
                .ok_or_else(|| Error::InvalidRootSystem(s.to_string()))?;
            let series = match letter.to_ascii_uppercase() {
                'A' => Series::A,
                'B' => Series::B,
                'C' => Series::C,
                'D' => Series::D,
                'E' => Series::E,
                'F' => Series::F,
                'G' => Series::G,
                _ => return Err(Error::InvalidRootSystem(s.to_string())),
            };
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidRootSystem(s.to_string()))?;
            factors.push((series, rank));
        }
        RootSystemSpec::new(factors)
    }
}

/// Weight in fundamental-weight coordinates `(μ(H_1), …, μ(H_r))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|x| *x >= 0)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Character of 𝔥 given by its values on the coroots, possibly non-integral.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterOnH {
    pub values: Vec<Gq>,
    pub integral: bool,
}

impl CharacterOnH {
    pub fn new(values: Vec<Gq>) -> Self {
        let integral = values.iter().all(|v| v.is_integer());
        Self { values, integral }
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![Gq::zero(); rank])
    }

    /// The underlying weight when all values are rational integers.
    pub fn as_weight(&self) -> Option<Weight> {
        if !self.integral {
            return None;
        }
        self.values
            .iter()
            .map(|v| v.re.to_i64())
            .collect::<Option<Vec<_>>>()
            .map(Weight)
    }
}

impl From<&Weight> for CharacterOnH {
    fn from(w: &Weight) -> Self {
        CharacterOnH::new(w.0.iter().map(|x| Gq::from_int(*x)).collect())
    }
}

/// A simple factor: its series, rank, and simple-root index range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub series: Series,
    pub rank: usize,
    pub offset: usize,
    /// Indices into [`RootSystem::positive_roots`].
    pub positive: Vec<usize>,
}

/// Regular roots of a component and, where present, a relation
/// `alpha_prime = alpha_second + simple`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootChain {
    pub roots: Vec<usize>,
    pub relation: Option<(usize, usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub spec: RootSystemSpec,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// Integer Gram matrix of the simple roots, block diagonal.
    gram: Vec<Vec<i64>>,
    components: Vec<Component>,
    /// Positive roots in simple-root coordinates, in height order.
    positive: Vec<Vec<i64>>,
    positive_weights: Vec<Weight>,
    /// `coroot[a][j]`: `α_a^∨ = Σ_j coroot[a][j] α_j^∨`.
    coroot: Vec<Vec<Rational>>,
    lookup: HashMap<Vec<i64>, usize>,
    /// Killing form on 𝔥 in the coroot basis.
    killing_h: Vec<Vec<Rational>>,
    /// Induced form on weights.
    form_weights: Vec<Vec<Rational>>,
}

fn simple_gram(series: Series, r: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; r]; r];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match series {
        Series::A => {
            for i in 0..r {
                g[i][i] = 2;
                if i + 1 < r {
                    link(&mut g, i, i + 1, -1);
                }
            }
        }
        Series::B => {
            for i in 0..r {
                g[i][i] = if i + 1 == r { 2 } else { 4 };
                if i + 1 < r {
                    link(&mut g, i, i + 1, -2);
                }
            }
        }
        Series::C => {
            for i in 0..r {
                g[i][i] = if i + 1 == r { 4 } else { 2 };
                if i + 1 < r {
                    link(&mut g, i, i + 1, if i + 2 == r { -2 } else { -1 });
                }
            }
        }
        Series::D => {
            for i in 0..r {
                g[i][i] = 2;
            }
            for i in 0..r - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, r - 3, r - 1, -1);
        }
        Series::E => {
            for i in 0..r {
                g[i][i] = 2;
            }
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 2..r - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        Series::F => {
            for (i, d) in [4, 4, 2, 2].into_iter().enumerate() {
                g[i][i] = d;
            }
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        Series::G => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    g
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

impl RootSystem {
    pub fn build(spec: &RootSystemSpec) -> Result<Self> {
        let spec = RootSystemSpec::new(spec.factors.clone())?;
        let rank = spec.rank();
        let mut gram = vec![vec![0i64; rank]; rank];
        let mut components = Vec::new();
        let mut offset = 0;
        for &(series, r) in &spec.factors {
            let g = simple_gram(series, r);
            for i in 0..r {
                for j in 0..r {
                    gram[offset + i][offset + j] = g[i][j];
                }
            }
            components.push(Component {
                series,
                rank: r,
                offset,
                positive: Vec::new(),
            });
            offset += r;
        }
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| 2 * gram[i][j] / gram[j][j])
                    .collect()
            })
            .collect();

        // Closure by root strings, one height at a time.
        let mut positive: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: std::collections::HashSet<Vec<i64>> = positive.iter().cloned().collect();
        let mut layer = positive.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for b in &layer {
                for i in 0..rank {
                    let pairing: i64 = (0..rank).map(|j| b[j] * cartan[j][i]).sum();
                    let mut p = 0;
                    let mut probe = b.clone();
                    loop {
                        probe[i] -= 1;
                        if known.contains(&probe) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - pairing;
                    if q > 0 {
                        let mut c = b.clone();
                        c[i] += 1;
                        if known.insert(c.clone()) {
                            next.push(c);
                        }
                    }
                }
            }
            positive.extend(next.iter().cloned());
            layer = next;
        }
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });

        let positive_weights: Vec<Weight> = positive
            .iter()
            .map(|b| Weight((0..rank).map(|j| (0..rank).map(|i| b[i] * cartan[i][j]).sum()).collect()))
            .collect();
        let lookup = positive_weights
            .iter()
            .enumerate()
            .map(|(k, w)| (w.0.clone(), k))
            .collect();
        let coroot = positive
            .iter()
            .map(|b| {
                let norm: i64 = (0..rank)
                    .map(|i| (0..rank).map(|j| b[i] * gram[i][j] * b[j]).sum::<i64>())
                    .sum();
                (0..rank)
                    .map(|j| Rational::new(b[j] * gram[j][j], norm))
                    .collect()
            })
            .collect();
        for (k, b) in positive.iter().enumerate() {
            let first = b.iter().position(|x| *x != 0).unwrap();
            let c = components
                .iter_mut()
                .find(|c| first >= c.offset && first < c.offset + c.rank)
                .unwrap();
            c.positive.push(k);
        }

        let mut killing_h = vec![vec![Rational::zero(); rank]; rank];
        for w in &positive_weights {
            for i in 0..rank {
                for j in 0..rank {
                    killing_h[i][j] += &Rational::from_int(2 * w.0[i] * w.0[j]);
                }
            }
        }
        let k = ExactMatrix::from_rows(
            killing_h
                .iter()
                .map(|r| r.iter().map(|x| Gq::real(x.clone())).collect())
                .collect(),
        );
        let kinv = k
            .inverse()
            .ok_or_else(|| Error::Internal("degenerate Killing form".into()))?;
        let form_weights = (0..rank)
            .map(|i| (0..rank).map(|j| kinv.get(i, j).re.clone()).collect())
            .collect();

        Ok(Self {
            spec,
            rank,
            cartan,
            gram,
            components,
            positive,
            positive_weights,
            coroot,
            lookup,
            killing_h,
            form_weights,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Positive roots in simple-root coordinates.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    pub fn root_weight(&self, k: usize) -> &Weight {
        &self.positive_weights[k]
    }

    pub fn root_weights(&self) -> &[Weight] {
        &self.positive_weights
    }

    pub fn height(&self, k: usize) -> i64 {
        self.positive[k].iter().sum()
    }

    /// Index of the simple root `α_i` in the positive-root list.
    pub fn simple_index(&self, i: usize) -> usize {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        self.positive.iter().position(|b| *b == v).unwrap()
    }

    /// The simple root `α_i` if positive root `k` is simple.
    pub fn simple_of(&self, k: usize) -> Option<usize> {
        let b = &self.positive[k];
        (self.height(k) == 1).then(|| b.iter().position(|x| *x == 1).unwrap())
    }

    /// `Some((k, true))` for the positive root `k`, `Some((k, false))` for `−α_k`.
    pub fn find_root(&self, w: &[i64]) -> Option<(usize, bool)> {
        if let Some(k) = self.lookup.get(w) {
            return Some((*k, true));
        }
        let neg: Vec<i64> = w.iter().map(|x| -x).collect();
        self.lookup.get(&neg).map(|k| (*k, false))
    }

    /// Positive root index with the given simple-root coordinates.
    pub fn find_positive_coords(&self, b: &[i64]) -> Option<usize> {
        self.positive.iter().position(|x| x == b)
    }

    pub fn component_of_root(&self, k: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.positive.contains(&k))
            .unwrap()
    }

    pub fn component_of_simple(&self, i: usize) -> usize {
        self.components
            .iter()
            .position(|c| i >= c.offset && i < c.offset + c.rank)
            .unwrap()
    }

    /// Killing form on 𝔥 in the coroot basis.
    pub fn killing_h(&self) -> &[Vec<Rational>] {
        &self.killing_h
    }

    /// The invariant form on weights.
    pub fn form(&self, a: &[Gq], b: &[Gq]) -> Gq {
        let mut acc = Gq::zero();
        for i in 0..self.rank {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                let f = &self.form_weights[i][j];
                if f.is_zero() || b[j].is_zero() {
                    continue;
                }
                acc += &(&a[i] * &b[j]).scale(f);
            }
        }
        acc
    }

    pub fn form_weights(&self, a: &Weight, b: &Weight) -> Rational {
        self.form(
            &CharacterOnH::from(a).values,
            &CharacterOnH::from(b).values,
        )
        .re
    }

    /// `<μ, α_k^∨>` for a positive root `k`.
    pub fn coroot_pairing(&self, mu: &[Gq], k: usize) -> Gq {
        let mut acc = Gq::zero();
        for (j, c) in self.coroot[k].iter().enumerate() {
            if !c.is_zero() && !mu[j].is_zero() {
                acc += &mu[j].scale(c);
            }
        }
        acc
    }

    pub fn coroot_pairing_weight(&self, mu: &Weight, k: usize) -> Rational {
        let mut acc = Rational::zero();
        for (j, c) in self.coroot[k].iter().enumerate() {
            if mu.0[j] != 0 {
                acc += &(c * &Rational::from_int(mu.0[j]));
            }
        }
        acc
    }

    /// Coefficients of the coroot `α_k^∨` on `H_1..H_r`.
    pub fn coroot_coeffs(&self, k: usize) -> &[Rational] {
        &self.coroot[k]
    }

    pub fn rho_w(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Simple root `α_i` as a weight.
    pub fn simple_weight(&self, i: usize) -> Weight {
        Weight(self.cartan[i].clone())
    }

    /// Simple-root coordinates of a weight in the root lattice, if it lies there.
    pub fn root_coords(&self, w: &Weight) -> Option<Vec<i64>> {
        let c = ExactMatrix::from_rows(
            (0..self.rank)
                .map(|j| (0..self.rank).map(|i| Gq::from_int(self.cartan[i][j])).collect())
                .collect(),
        );
        let rhs: Vec<Gq> = w.0.iter().map(|x| Gq::from_int(*x)).collect();
        let x = c.solve(&rhs)?;
        x.iter().map(|v| if v.is_integer() { v.re.to_i64() } else { None }).collect()
    }

    pub fn is_regular(&self, mu: &[Gq]) -> bool {
        (0..self.positive.len()).all(|k| !self.coroot_pairing(mu, k).is_zero())
    }

    pub fn is_regular_weight(&self, mu: &Weight) -> bool {
        self.is_regular(&CharacterOnH::from(mu).values)
    }

    pub fn highest_root(&self, component: usize) -> usize {
        *self.components[component].positive.last().unwrap()
    }

    /// Positive roots of a component ordered by height; roots of equal height
    /// are ordered lexicographically descending in simple-root coordinates.
    pub fn filtration_order(&self, component: usize) -> Vec<usize> {
        self.components[component].positive.clone()
    }

    /// Positive roots `α` of the component with `α + ρ_W` regular.
    pub fn regular_root_chain(&self, component: usize) -> Result<RootChain> {
        let c = self
            .components
            .get(component)
            .ok_or_else(|| Error::InvalidRootSystem(format!("no component {component}")))?;
        let rho = self.rho_w();
        let roots: Vec<usize> = c
            .positive
            .iter()
            .copied()
            .filter(|k| self.is_regular_weight(&self.positive_weights[*k].add(&rho)))
            .collect();
        let top = *c.positive.last().unwrap();
        let mut relation = None;
        'search: for &a in &roots {
            for &b in &roots {
                if a == top || b == top {
                    continue;
                }
                let diff: Vec<i64> = self.positive[a]
                    .iter()
                    .zip(&self.positive[b])
                    .map(|(x, y)| x - y)
                    .collect();
                if diff.iter().sum::<i64>() == 1 && diff.iter().all(|x| *x >= 0) {
                    let s = diff.iter().position(|x| *x == 1).unwrap();
                    relation = Some((a, b, self.simple_index(s)));
                    break 'search;
                }
            }
        }
        Ok(RootChain { roots, relation })
    }

    /// `|W|` from the factor orders.
    pub fn weyl_order(&self) -> u128 {
        self.spec
            .factors
            .iter()
            .map(|&(s, r)| {
                let r = r as u128;
                match s {
                    Series::A => factorial(r + 1),
                    Series::B | Series::C => (1u128 << r) * factorial(r),
                    Series::D => (1u128 << (r - 1)) * factorial(r),
                    Series::E => match r {
                        6 => 51_840,
                        7 => 2_903_040,
                        _ => 696_729_600,
                    },
                    Series::F => 1152,
                    Series::G => 12,
                }
            })
            .product()
    }

    /// Dominant weights `Σ n_i w_i` with `Σ n_i ≤ n`, ordered by coefficient
    /// sum, then lexicographically descending.
    pub fn dominant_weights_up_to(&self, n: usize) -> Vec<Weight> {
        let mut out = Vec::new();
        for total in 0..=n as i64 {
            let mut level = Vec::new();
            compositions(self.rank, total, &mut Vec::new(), &mut level);
            level.sort_by(|a: &Vec<i64>, b| b.cmp(a));
            out.extend(level.into_iter().map(Weight));
        }
        out
    }

    /// Reflection `s_i` applied to a weight.
    pub fn reflect(&self, i: usize, mu: &[Gq]) -> Vec<Gq> {
        let m = mu[i].clone();
        mu.iter()
            .enumerate()
            .map(|(k, x)| x - &(&m * &Gq::from_int(self.cartan[i][k])))
            .collect()
    }

    /// Ratio of squared lengths `|α_k|² / |α_i|²` is encoded in the gram matrix.
    pub fn simple_gram(&self) -> &[Vec<i64>] {
        &self.gram
    }
}

fn compositions(parts: usize, total: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() + 1 == parts {
        let mut v = prefix.clone();
        v.push(total);
        out.push(v);
        return;
    }
    if parts == 0 {
        return;
    }
    for k in 0..=total {
        prefix.push(k);
        compositions(parts, total - k, prefix, out);
        prefix.pop();
    }
}
