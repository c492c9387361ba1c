//! Resonance detection for the deformed Borel–Weil–Bott decomposition.
//!
//! For `(σ, λ)` the resonance equation forces
//! `β(X_i) = σλ(Ā_i) − Σ_{α∈Φ_σ} α(Ā_i) − ρ(Ā_i)`, so existence reduces to a
//! joint generalized-kernel test at those forced values.

use rayon::prelude::*;
use serde::Serialize;

use crate::context::Context;
use crate::deform::{DeformationData, Mode};
use crate::error::{Error, Result};
use crate::linalg::{joint_generalized_space, ExactMatrix, Gq, Subspace};
use crate::linalg::matrix::joint_generalized_space_unchecked;
use crate::rootsys::{CharacterOnH, RootSystem, Weight};
use crate::weyl::WeylElement;

pub const DEFAULT_CUTOFF: usize = 4;

#[derive(Clone, Debug)]
pub struct ResonanceTriple {
    /// Index into the context's Weyl group.
    pub sigma: usize,
    pub sigma_word: Vec<usize>,
    pub phi_len: usize,
    pub lambda: Weight,
    pub beta: Vec<Gq>,
    /// `V^λ(β)` in module coordinates.
    pub eigenspace: Subspace,
}

impl ResonanceTriple {
    pub fn eigenspace_dim(&self) -> usize {
        self.eigenspace.dim()
    }

    pub fn beta_is_zero(&self) -> bool {
        self.beta.iter().all(|b| b.is_zero())
    }

    pub fn summary(&self) -> TripleSummary {
        TripleSummary {
            sigma: self.sigma_word.iter().map(|i| i + 1).collect(),
            lambda: self.lambda.0.clone(),
            beta: self.beta.iter().map(|b| b.to_string()).collect(),
            eigenspace_dim: self.eigenspace_dim(),
        }
    }
}

/// Serializable form of a triple; `sigma` is a reduced word in 1-based
/// simple-reflection indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleSummary {
    pub sigma: Vec<usize>,
    pub lambda: Vec<i64>,
    pub beta: Vec<String>,
    pub eigenspace_dim: usize,
}

impl std::fmt::Display for TripleSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sigma = if self.sigma.is_empty() {
            "e".to_string()
        } else {
            self.sigma.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join("")
        };
        let lambda: Vec<String> = self.lambda.iter().map(|x| x.to_string()).collect();
        write!(f, "(σ={sigma}, λ=({}), β=({}))", lambda.join(","), self.beta.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "cutoff")]
pub enum Strategy {
    Scaled,
    Cutoff(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NonResonant,
    Resonant,
    InconclusiveBeyondCutoff,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub strategy: Strategy,
    pub rho: CharacterOnH,
    pub resonances: Vec<ResonanceTriple>,
    pub verdict: Verdict,
    /// True when the resonance list is provably the whole set.
    pub complete: bool,
    pub note: String,
}

impl Certificate {
    /// A triple showing why the certificate fails, if it does.
    pub fn witness(&self) -> Option<&ResonanceTriple> {
        self.resonances
            .iter()
            .find(|t| !t.beta_is_zero())
            .or_else(|| self.resonances.get(1))
    }
}

/// `c_i = σλ(Ā_i) − Σ_{α∈Φ_σ} α(Ā_i) − ρ(Ā_i)`.
pub fn candidate_beta(
    rs: &RootSystem,
    sigma: &WeylElement,
    lambda: &Weight,
    rho: &CharacterOnH,
    data: &DeformationData,
) -> Vec<Gq> {
    let mut shift = sigma.act(lambda);
    for k in sigma.phi_set(rs) {
        shift = shift.sub(rs.root_weight(k));
    }
    let shift = CharacterOnH::from(&shift);
    (0..data.l)
        .map(|i| &data.evaluate(&shift, i) - &data.evaluate(rho, i))
        .collect()
}

/// `R(ρ, X)(λ)`: all σ for which the forced β is a joint generalized
/// eigenvalue of `ν_λ(X_i)`. In scaled mode only `β = 0` can occur.
pub fn resonances_at_lambda(
    ctx: &Context,
    rho: &CharacterOnH,
    lambda: &Weight,
    data: &DeformationData,
) -> Result<Vec<ResonanceTriple>> {
    let rs = ctx.rs();
    let module = ctx.module(lambda)?;
    let n = module.dim();
    let mats: Vec<ExactMatrix> = data.x.iter().map(|x| module.action(x).to_dense()).collect();
    let mut out = Vec::new();
    for (s, sigma) in ctx.weyl.elements.iter().enumerate() {
        let c = candidate_beta(rs, sigma, lambda, rho, data);
        if data.mode == Mode::Scaled && c.iter().any(|x| !x.is_zero()) {
            continue;
        }
        // Quick exit when some M_i − c_i is invertible.
        let mut possible = true;
        for (m, ci) in mats.iter().zip(&c) {
            if m.is_zero() {
                if !ci.is_zero() {
                    possible = false;
                    break;
                }
            } else if m.shift(ci).rank() == n {
                possible = false;
                break;
            }
        }
        if !possible {
            continue;
        }
        let pairs: Vec<(ExactMatrix, Gq)> = mats.iter().cloned().zip(c.iter().cloned()).collect();
        let space = if pairs.is_empty() {
            Subspace::full(n)
        } else {
            joint_generalized_space_unchecked(&pairs)?
        };
        if space.dim() > 0 {
            out.push(ResonanceTriple {
                sigma: s,
                sigma_word: sigma.word.clone(),
                phi_len: sigma.length(),
                lambda: lambda.clone(),
                beta: c,
                eigenspace: space,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaZero {
    /// `(σ index, λ)` pairs.
    pub pairs: Vec<(usize, Weight)>,
    pub integral: bool,
}

/// Solutions of `σλ = Σ_{α∈Φ_σ} α + ρ` with `λ` dominant.
pub fn beta_zero_solutions(ctx: &Context, rho: &CharacterOnH) -> BetaZero {
    let Some(rho) = rho.as_weight() else {
        return BetaZero {
            pairs: Vec::new(),
            integral: false,
        };
    };
    let rs = ctx.rs();
    let mut pairs = Vec::new();
    for (s, sigma) in ctx.weyl.elements.iter().enumerate() {
        let mut mu = rho.clone();
        for k in sigma.phi_set(rs) {
            mu = mu.add(rs.root_weight(k));
        }
        let lambda = sigma.act_inverse(&mu);
        if lambda.is_dominant() {
            pairs.push((s, lambda));
        }
    }
    BetaZero {
        pairs,
        integral: true,
    }
}

/// `ρ` integral and `ρ + ρ_W` regular.
pub fn integral_regular_test(rs: &RootSystem, rho: &CharacterOnH) -> bool {
    match rho.as_weight() {
        Some(w) => rs.is_regular_weight(&w.add(&rs.rho_w())),
        None => false,
    }
}

/// The unique integral weight `w` with `(w − ρ)(Ā_i) = 0` for all `i`, if any.
/// For a weight `u`, the forced β at `(σ, λ)` vanishes exactly when
/// `σλ − Σ_{Φ_σ} α = w`.
pub fn effective_weight(rho: &CharacterOnH, data: &DeformationData) -> Option<Weight> {
    let r = rho.values.len();
    let rows: Vec<Vec<Gq>> = data.a_bar.iter().chain(&data.a).cloned().collect();
    let m = ExactMatrix::from_rows(rows);
    let mut rhs: Vec<Gq> = (0..data.l).map(|i| data.evaluate(rho, i)).collect();
    let conj: Vec<Gq> = rhs.iter().map(|v| -v.conj()).collect();
    rhs.extend(conj);
    let w = m.solve(&rhs)?;
    debug_assert_eq!(w.len(), r);
    CharacterOnH::new(w).as_weight()
}

fn nilpotent_tuple(ctx: &Context, data: &DeformationData) -> Result<bool> {
    Ok(ctx.alg.generalized_zero_space(&data.x)?.dim() == ctx.alg.dim())
}

/// Triples at the β = 0 solutions for the effective weight of ρ, keeping
/// those where 0 is a joint generalized eigenvalue of `ν_λ(X_i)`.
fn beta_zero_resonances(
    ctx: &Context,
    rho: &CharacterOnH,
    data: &DeformationData,
) -> Result<Vec<ResonanceTriple>> {
    let Some(w) = effective_weight(rho, data) else {
        return Ok(Vec::new());
    };
    let bz = beta_zero_solutions(ctx, &CharacterOnH::from(&w));
    let mut out = Vec::new();
    for (s, lambda) in bz.pairs {
        let module = ctx.module(&lambda)?;
        let n = module.dim();
        let space = if data.x.is_empty() || data.is_zero() {
            Subspace::full(n)
        } else {
            let pairs: Vec<(ExactMatrix, Gq)> = data
                .x
                .iter()
                .map(|x| (module.action(x).to_dense(), Gq::zero()))
                .collect();
            joint_generalized_space(&pairs)?
        };
        if space.dim() > 0 {
            let sigma = &ctx.weyl.elements[s];
            out.push(ResonanceTriple {
                sigma: s,
                sigma_word: sigma.word.clone(),
                phi_len: sigma.length(),
                lambda,
                beta: vec![Gq::zero(); data.l],
                eigenspace: space,
            });
        }
    }
    Ok(out)
}

fn decide(resonances: &[ResonanceTriple]) -> bool {
    resonances.len() <= 1 && resonances.iter().all(|t| t.beta_is_zero())
}

pub fn certify(
    ctx: &Context,
    rho: &CharacterOnH,
    data: &DeformationData,
    strategy: Strategy,
) -> Result<Certificate> {
    if strategy == Strategy::Scaled && data.mode != Mode::Scaled {
        return Err(Error::InvalidDeformation(
            "scaled certification needs a scaled tuple".into(),
        ));
    }
    let rho_real = rho.values.iter().all(|v| v.is_real());
    if data.mode == Mode::Scaled {
        let resonances = beta_zero_resonances(ctx, rho, data)?;
        let ok = decide(&resonances);
        return Ok(Certificate {
            strategy,
            rho: rho.clone(),
            verdict: if ok { Verdict::NonResonant } else { Verdict::Resonant },
            resonances,
            complete: true,
            note: "X = s·X⁰ with s transcendental: a resonance needs a vanishing forced β \
                   and a joint 0-eigenvector of ν_λ(X⁰)"
                .into(),
        });
    }
    let Strategy::Cutoff(cutoff) = strategy else {
        unreachable!()
    };
    if rho_real && nilpotent_tuple(ctx, data)? {
        let resonances = beta_zero_resonances(ctx, rho, data)?;
        let ok = decide(&resonances);
        return Ok(Certificate {
            strategy,
            rho: rho.clone(),
            verdict: if ok { Verdict::NonResonant } else { Verdict::Resonant },
            resonances,
            complete: true,
            note: "every ad X_i is nilpotent, so every β vanishes and the β = 0 \
                   solutions are the whole resonance set"
                .into(),
        });
    }
    let lambdas = ctx.rs().dominant_weights_up_to(cutoff);
    let per_lambda: Vec<Result<Vec<ResonanceTriple>>> = lambdas
        .par_iter()
        .map(|lam| resonances_at_lambda(ctx, rho, lam, data))
        .collect();
    let mut resonances = Vec::new();
    for r in per_lambda {
        resonances.extend(r?);
    }
    let verdict = if decide(&resonances) {
        Verdict::InconclusiveBeyondCutoff
    } else {
        Verdict::Resonant
    };
    Ok(Certificate {
        strategy,
        rho: rho.clone(),
        resonances,
        verdict,
        complete: false,
        note: format!("scan limited to dominant weights with coefficient sum ≤ {cutoff}"),
    })
}
