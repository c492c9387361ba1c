//! Deformation data: the splitting `𝔥 = 𝔩 ⊕ 𝔩̄` and the commuting tuple `X`.

use serde::{Deserialize, Serialize};

use crate::chevalley::{ChevalleyAlgebra, Element};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Gq, Rational, Subspace};
use crate::rootsys::CharacterOnH;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    /// `X = s·X⁰` with `s` a formal transcendental; only `X⁰` is stored.
    Scaled,
}

#[derive(Clone, Debug)]
pub struct DeformationData {
    pub l: usize,
    /// Coroot coordinates of `A_1..A_l`.
    pub a: Vec<Vec<Gq>>,
    /// Coroot coordinates of `Ā_1..Ā_l`.
    pub a_bar: Vec<Vec<Gq>>,
    pub x: Vec<Element>,
    pub y: Option<Vec<Element>>,
    pub mode: Mode,
}

/// Compact conjugation on 𝔥: `c_j ↦ −conj(c_j)`.
pub fn conjugate_on_h(c: &[Gq]) -> Vec<Gq> {
    c.iter().map(|x| -x.conj()).collect()
}

/// `A_1 = −H_1 − (a + b·i)H_2` for the two-factor preset.
pub fn preset_su2su2(a: &Rational, b: &Rational) -> Vec<Vec<Gq>> {
    vec![vec![-Gq::one(), -Gq::new(a.clone(), b.clone())]]
}

/// `A_k = H_{2k−1} + i·H_{2k}`.
pub fn default_splitting(rank: usize) -> Vec<Vec<Gq>> {
    (0..rank / 2)
        .map(|k| {
            let mut v = vec![Gq::zero(); rank];
            v[2 * k] = Gq::one();
            v[2 * k + 1] = Gq::i();
            v
        })
        .collect()
}

impl DeformationData {
    /// Validates the splitting, the tuple shape and commutation.
    pub fn validate(
        alg: &ChevalleyAlgebra,
        a: Vec<Vec<Gq>>,
        x: Vec<Element>,
        y: Option<Vec<Element>>,
        mode: Mode,
    ) -> Result<Self> {
        let r = alg.rank();
        if !r.is_multiple_of(2) {
            return Err(Error::InvalidDeformation(format!("rank {r} is odd")));
        }
        let l = r / 2;
        if a.len() != l {
            return Err(Error::InvalidDeformation(format!(
                "expected {l} splitting vectors, got {}",
                a.len()
            )));
        }
        if a.iter().any(|v| v.len() != r) {
            return Err(Error::InvalidDeformation("splitting vector length".into()));
        }
        let a_bar: Vec<Vec<Gq>> = a.iter().map(|v| conjugate_on_h(v)).collect();
        let stacked = ExactMatrix::from_rows(a.iter().chain(&a_bar).cloned().collect());
        if stacked.rank() != r {
            return Err(Error::InvalidDeformation("𝔩 and its conjugate do not span 𝔥".into()));
        }
        if x.len() != l {
            return Err(Error::InvalidDeformation(format!(
                "expected {l} deformation elements, got {}",
                x.len()
            )));
        }
        if x.iter().any(|v| v.len() != alg.dim()) {
            return Err(Error::InvalidDeformation("element length".into()));
        }
        if !alg.commuting_check(&x) {
            return Err(Error::InvalidDeformation("X is not a commuting tuple".into()));
        }
        if let Some(ys) = &y {
            let span = Subspace::span(r, a.iter().cloned());
            for v in ys {
                let inside = v.len() == alg.dim()
                    && alg.h_part(v).is_some_and(|h| span.contains(&h));
                if !inside {
                    return Err(Error::InvalidDeformation("Y must lie in 𝔩".into()));
                }
            }
        }
        Ok(Self {
            l,
            a,
            a_bar,
            x,
            y,
            mode,
        })
    }

    /// `μ(Ā_i)`.
    pub fn evaluate(&self, mu: &CharacterOnH, i: usize) -> Gq {
        let mut acc = Gq::zero();
        for (m, c) in mu.values.iter().zip(&self.a_bar[i]) {
            if !m.is_zero() && !c.is_zero() {
                acc += &(m * c);
            }
        }
        acc
    }

    /// `μ(A_i)`.
    pub fn evaluate_a(&self, mu: &CharacterOnH, i: usize) -> Gq {
        let mut acc = Gq::zero();
        for (m, c) in mu.values.iter().zip(&self.a[i]) {
            if !m.is_zero() && !c.is_zero() {
                acc += &(m * c);
            }
        }
        acc
    }

    pub fn a_bar_element(&self, alg: &ChevalleyAlgebra, i: usize) -> Element {
        alg.from_h(&self.a_bar[i])
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|v| ChevalleyAlgebra::is_zero(v))
    }

    /// True iff every `[X_i, X_j]` vanishes; `Y` never affects the answer.
    pub fn kuranishi_membership(&self, alg: &ChevalleyAlgebra) -> bool {
        alg.commuting_check(&self.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{RootSystem, Weight};

    fn alg(s: &str) -> ChevalleyAlgebra {
        ChevalleyAlgebra::build(&RootSystem::build(&s.parse().unwrap()).unwrap()).unwrap()
    }

    fn ce(g: &ChevalleyAlgebra, x: Element) -> DeformationData {
        let a = preset_su2su2(&Rational::zero(), &Rational::one());
        DeformationData::validate(g, a, vec![x], None, Mode::Exact).unwrap()
    }

    #[test]
    fn ce_preset_is_valid() {
        let g = alg("A1xA1");
        let d = ce(&g, g.zero());
        assert_eq!(d.a[0], vec![-Gq::one(), -Gq::i()]);
        assert_eq!(d.a_bar[0], vec![Gq::one(), -Gq::i()]);
        assert!(d.kuranishi_membership(&g));
    }

    #[test]
    fn real_splitting_is_rejected() {
        let g = alg("A1xA1");
        let r = DeformationData::validate(
            &g,
            vec![vec![Gq::one(), Gq::zero()]],
            vec![g.zero()],
            None,
            Mode::Exact,
        );
        assert!(matches!(r, Err(Error::InvalidDeformation(_))));
        // A dependent splitting on A2: A = i·H_1 is fixed by conjugation.
        let a2 = alg("A2");
        let r = DeformationData::validate(
            &a2,
            vec![vec![Gq::i(), Gq::zero()]],
            vec![a2.zero()],
            None,
            Mode::Exact,
        );
        assert!(matches!(r, Err(Error::InvalidDeformation(_))));
    }

    #[test]
    fn odd_rank_is_rejected() {
        let g = alg("A1");
        assert!(DeformationData::validate(&g, vec![], vec![], None, Mode::Exact).is_err());
    }

    #[test]
    fn conjugation_rule() {
        assert_eq!(conjugate_on_h(&[Gq::i()]), vec![Gq::i()]);
        assert_eq!(conjugate_on_h(&[Gq::one()]), vec![-Gq::one()]);
        assert_eq!(
            conjugate_on_h(&[-Gq::one(), -Gq::i()]),
            vec![Gq::one(), -Gq::i()]
        );
        let v = vec!["1/2+3*i".parse::<Gq>().unwrap(), "-2*i".parse().unwrap()];
        assert_eq!(conjugate_on_h(&conjugate_on_h(&v)), v);
    }

    #[test]
    fn evaluation() {
        let g = alg("A1xA1");
        let d = ce(&g, g.zero());
        let lam = CharacterOnH::from(&Weight(vec![3, 0]));
        assert_eq!(d.evaluate(&lam, 0), Gq::from_int(3));
        let rho = CharacterOnH::from(&Weight(vec![2, 0]));
        assert_eq!(d.evaluate(&rho, 0), Gq::from_int(2));
        assert!(d.evaluate(&CharacterOnH::zero(2), 0).is_zero());
    }

    #[test]
    fn kuranishi_examples() {
        let g = alg("A1xA1");
        let x = g.from_h(&[Gq::from_ratio(1, 3), Gq::zero()]);
        assert!(ce(&g, x).kuranishi_membership(&g));
        // A rank-4 system with l = 2 and a non-commuting pair.
        let g4 = alg("A1xA1xA1xA1");
        let (e, f) = (g4.basis_element(g4.pos(0)), g4.basis_element(g4.neg(0)));
        assert!(!g4.commuting_check(&[e.clone(), f.clone()]));
        let r = DeformationData::validate(&g4, default_splitting(4), vec![e, f], None, Mode::Exact);
        assert!(r.is_err());
    }

    #[test]
    fn y_must_lie_in_l() {
        let g = alg("A1xA1");
        let a = preset_su2su2(&Rational::zero(), &Rational::one());
        let y_ok = g.from_h(&a[0]);
        assert!(DeformationData::validate(&g, a.clone(), vec![g.zero()], Some(vec![y_ok]), Mode::Exact).is_ok());
        let y_bad = g.basis_element(g.h(0));
        assert!(DeformationData::validate(&g, a, vec![g.zero()], Some(vec![y_bad]), Mode::Exact).is_err());
    }
}
