//! Weyl group elements as integer matrices on fundamental-weight coordinates.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::Gq;
use crate::rootsys::{CharacterOnH, RootSystem, Weight};

pub const DEFAULT_WEYL_CEILING: u128 = 1_000_000;

type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Reduced word `s_{w[0]} s_{w[1]} …`.
    pub word: Vec<usize>,
    matrix: IntMatrix,
    inverse: IntMatrix,
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn mat_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Matrix of `s_i`: `μ ↦ μ − μ_i α_i`.
fn reflection(rs: &RootSystem, i: usize) -> IntMatrix {
    let n = rs.rank();
    let c = rs.cartan();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| i64::from(k == j) - if j == i { c[i][k] } else { 0 })
                .collect()
        })
        .collect()
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        Self {
            word: Vec::new(),
            matrix: identity(rank),
            inverse: identity(rank),
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn act(&self, w: &Weight) -> Weight {
        Weight(mat_vec(&self.matrix, &w.0))
    }

    pub fn act_inverse(&self, w: &Weight) -> Weight {
        Weight(mat_vec(&self.inverse, &w.0))
    }

    pub fn act_character(&self, mu: &CharacterOnH) -> CharacterOnH {
        let values = self
            .matrix
            .iter()
            .map(|row| {
                let mut acc = Gq::zero();
                for (a, x) in row.iter().zip(&mu.values) {
                    if *a != 0 && !x.is_zero() {
                        acc += &(&Gq::from_int(*a) * x);
                    }
                }
                acc
            })
            .collect();
        CharacterOnH::new(values)
    }

    /// `Φ_σ = {α > 0 : σ⁻¹α < 0}`, as positive-root indices in root order.
    pub fn phi_set(&self, rs: &RootSystem) -> Vec<usize> {
        (0..rs.num_positive())
            .filter(|k| {
                let image = mat_vec(&self.inverse, &rs.root_weight(*k).0);
                matches!(rs.find_root(&image), Some((_, false)))
            })
            .collect()
    }

    /// Word for `σ⁻¹`.
    pub fn inverse_word(&self) -> Vec<usize> {
        self.word.iter().rev().copied().collect()
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            word: self.inverse_word(),
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }
}

/// The full Weyl group (or the elements up to a length bound) in BFS order.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    complete: bool,
}

impl WeylGroup {
    pub fn enumerate(rs: &RootSystem, max_length: Option<usize>) -> Result<Self> {
        Self::enumerate_with_ceiling(rs, max_length, DEFAULT_WEYL_CEILING)
    }

    pub fn enumerate_with_ceiling(
        rs: &RootSystem,
        max_length: Option<usize>,
        ceiling: u128,
    ) -> Result<Self> {
        let order = rs.weyl_order();
        if max_length.is_none() && order > ceiling {
            return Err(Error::WeylCeiling { order, ceiling });
        }
        let r = rs.rank();
        let gens: Vec<IntMatrix> = (0..r).map(|i| reflection(rs, i)).collect();
        let mut seen: HashMap<IntMatrix, usize> = HashMap::new();
        let mut elements = vec![WeylElement::identity(r)];
        seen.insert(identity(r), 0);
        let mut frontier = vec![0usize];
        let mut length = 0;
        while !frontier.is_empty() && max_length.is_none_or(|m| length < m) {
            let mut next = Vec::new();
            for &k in &frontier {
                for (i, g) in gens.iter().enumerate() {
                    let m = mat_mul(&elements[k].matrix, g);
                    if seen.contains_key(&m) {
                        continue;
                    }
                    if elements.len() as u128 >= ceiling {
                        return Err(Error::WeylCeiling { order, ceiling });
                    }
                    let mut word = elements[k].word.clone();
                    word.push(i);
                    let inverse = mat_mul(g, &elements[k].inverse);
                    seen.insert(m.clone(), elements.len());
                    next.push(elements.len());
                    elements.push(WeylElement {
                        word,
                        matrix: m,
                        inverse,
                    });
                }
            }
            frontier = next;
            length += 1;
        }
        let complete = elements.len() as u128 == order;
        Ok(Self { elements, complete })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// `|W(k)|` for `k = 0, 1, …`.
    pub fn length_histogram(&self) -> Vec<usize> {
        let max = self.elements.iter().map(|e| e.length()).max().unwrap_or(0);
        let mut h = vec![0; max + 1];
        for e in &self.elements {
            h[e.length()] += 1;
        }
        h
    }

    pub fn longest(&self) -> &WeylElement {
        self.elements.iter().max_by_key(|e| e.length()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;
    use proptest::prelude::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn histograms() {
        let w = WeylGroup::enumerate(&rs("A1xA1"), None).unwrap();
        assert_eq!(w.length_histogram(), vec![1, 2, 1]);
        let w = WeylGroup::enumerate(&rs("A2"), None).unwrap();
        assert_eq!(w.length_histogram(), vec![1, 2, 2, 1]);
        assert_eq!(WeylGroup::enumerate(&rs("G2"), None).unwrap().len(), 12);
        assert!(WeylGroup::enumerate(&rs("G2"), None).unwrap().is_complete());
    }

    #[test]
    fn histogram_is_palindromic_and_complete() {
        for s in ["B2", "A3", "B3", "C3", "A1xA2", "G2", "D4"] {
            let r = rs(s);
            let w = WeylGroup::enumerate(&r, None).unwrap();
            assert_eq!(w.len() as u128, r.weyl_order(), "{s}");
            let h = w.length_histogram();
            let mut rev = h.clone();
            rev.reverse();
            assert_eq!(h, rev, "{s}");
            assert_eq!(h.len() - 1, r.num_positive());
        }
    }

    #[test]
    fn ceiling_refuses() {
        assert!(matches!(
            WeylGroup::enumerate(&rs("E8"), None),
            Err(Error::WeylCeiling { .. })
        ));
        let w = WeylGroup::enumerate(&rs("E8"), Some(1)).unwrap();
        assert_eq!(w.len(), 9);
    }

    #[test]
    fn phi_sets() {
        let r = rs("A2");
        let w = WeylGroup::enumerate(&r, None).unwrap();
        assert!(w.elements[0].phi_set(&r).is_empty());
        for e in &w.elements {
            assert_eq!(e.phi_set(&r).len(), e.length());
            if e.length() == 1 {
                assert_eq!(e.phi_set(&r), vec![r.simple_index(e.word[0])]);
            }
        }
        let all: Vec<usize> = (0..r.num_positive()).collect();
        assert_eq!(w.longest().phi_set(&r), all);
    }

    #[test]
    fn action_examples() {
        let a1 = rs("A1");
        let w = WeylGroup::enumerate(&a1, None).unwrap();
        assert_eq!(w.elements[1].act(&Weight(vec![1])), Weight(vec![-1]));
        let a2 = rs("A2");
        let w = WeylGroup::enumerate(&a2, None).unwrap();
        let s1 = w.elements.iter().find(|e| e.word == vec![0]).unwrap();
        assert_eq!(s1.act(&Weight(vec![1, 0])), Weight(vec![-1, 1]));
    }

    #[test]
    fn phi_of_inverse() {
        for s in ["B2", "G2", "A3"] {
            let r = rs(s);
            for e in &WeylGroup::enumerate(&r, None).unwrap().elements {
                let inv = e.inverse();
                assert_eq!(inv.phi_set(&r).len(), e.phi_set(&r).len());
                // −σ⁻¹(Φ_σ) ⊆ Δ⁺ and equals Φ_{σ⁻¹}.
                let mut image: Vec<usize> = e
                    .phi_set(&r)
                    .iter()
                    .map(|k| {
                        let w = e.act_inverse(r.root_weight(*k)).neg();
                        r.find_root(&w.0).unwrap().0
                    })
                    .collect();
                image.sort();
                assert_eq!(image, inv.phi_set(&r));
            }
        }
    }

    proptest! {
        #[test]
        fn action_preserves_form(a in proptest::collection::vec(-3i64..4, 2), b in proptest::collection::vec(-3i64..4, 2)) {
            for s in ["A2", "B2", "G2", "A1xA1"] {
                let r = rs(s);
                let (wa, wb) = (Weight(a.clone()), Weight(b.clone()));
                for e in &WeylGroup::enumerate(&r, None).unwrap().elements {
                    prop_assert_eq!(
                        r.form_weights(&e.act(&wa), &e.act(&wb)),
                        r.form_weights(&wa, &wb)
                    );
                }
            }
        }
    }
}
