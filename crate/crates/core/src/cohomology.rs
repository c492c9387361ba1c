//! Closed-form cohomology: Koszul complexes of commuting nilpotent
//! operators, the deformed Borel–Weil–Bott assembly, tangent cohomology and
//! the non-invariance verdict.

use std::collections::HashMap;

use serde::Serialize;

use crate::chevalley::Element;
use crate::context::Context;
use crate::deform::{DeformationData, Mode};
use crate::error::{Error, Result};
use crate::linalg::modular::rank_of;
use crate::linalg::sparse::from_dense;
use crate::linalg::{ExactMatrix, Gq, Subspace};
use crate::resonance::{certify, Certificate, ResonanceTriple, Strategy, TripleSummary, Verdict};
use crate::rootsys::CharacterOnH;

/// `l` commuting nilpotent operators on a `dim`-dimensional space.
#[derive(Clone, Debug)]
pub struct KoszulModule {
    dim: usize,
    ops: Vec<ExactMatrix>,
}

impl KoszulModule {
    pub fn new(dim: usize, ops: Vec<ExactMatrix>) -> Result<Self> {
        for m in &ops {
            if !m.is_square() {
                return Err(Error::NotSquare {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            if m.rows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.rows(),
                });
            }
        }
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if !ops[i].commutes_with(&ops[j]) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        for (i, m) in ops.iter().enumerate() {
            if dim > 0 && m.generalized_kernel(&Gq::zero())?.dim() != dim {
                return Err(Error::Internal(format!("operator {i} is not nilpotent")));
            }
        }
        Ok(Self { dim, ops })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn l(&self) -> usize {
        self.ops.len()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn masks_of_size(l: usize, p: usize) -> Vec<u64> {
    (0u64..1 << l).filter(|m| m.count_ones() as usize == p).collect()
}

/// Dimensions of `H^p`, `p = 0..=l`, for `d(ω⊗v) = Σ_i e_i*∧ω ⊗ N_i v`.
pub fn koszul_cohomology(m: &KoszulModule) -> Vec<usize> {
    let l = m.l();
    let n = m.dim;
    let by_degree: Vec<Vec<u64>> = (0..=l).map(|p| masks_of_size(l, p)).collect();
    let index: Vec<HashMap<u64, usize>> = by_degree
        .iter()
        .map(|ms| ms.iter().enumerate().map(|(k, s)| (*s, k)).collect())
        .collect();
    let images: Vec<Vec<Vec<Gq>>> = m
        .ops
        .iter()
        .map(|op| (0..n).map(|v| op.column(v)).collect())
        .collect();
    // ranks[p] = rank of d: C^p → C^{p+1}
    let mut ranks = vec![0usize; l + 1];
    for p in 0..l {
        let target = by_degree[p + 1].len() * n;
        let mut cols = Vec::with_capacity(by_degree[p].len() * n);
        for &s in &by_degree[p] {
            for v in 0..n {
                let mut col = vec![Gq::zero(); target];
                for i in 0..l {
                    if s & (1 << i) != 0 {
                        continue;
                    }
                    let negative = (s & ((1u64 << i) - 1)).count_ones() % 2 == 1;
                    let row0 = index[p + 1][&(s | (1 << i))] * n;
                    for (w, x) in images[i][v].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        if negative {
                            col[row0 + w] -= x;
                        } else {
                            col[row0 + w] += x;
                        }
                    }
                }
                cols.push(from_dense(&col));
            }
        }
        ranks[p] = rank_of(cols);
    }
    (0..=l)
        .map(|p| {
            let c = by_degree[p].len() * n;
            c - ranks[p] - if p > 0 { ranks[p - 1] } else { 0 }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    #[serde(flatten)]
    pub triple: TripleSummary,
    pub shift: usize,
    pub koszul_dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedCohomology {
    pub dims: Vec<usize>,
    pub summands: Vec<Summand>,
}

impl GradedCohomology {
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(q, d)| if q % 2 == 0 { *d as i64 } else { -(*d as i64) })
            .sum()
    }
}

/// The twisted module `Ṽ^λ(β)` with operators `ν_λ(X_i) − β_i` on `V^λ(β)`.
pub fn twisted_module(ctx: &Context, t: &ResonanceTriple, data: &DeformationData) -> Result<KoszulModule> {
    let module = ctx.module(&t.lambda)?;
    let ops = data
        .x
        .iter()
        .zip(&t.beta)
        .map(|(x, b)| {
            let m = module.action(x).to_dense().restrict(&t.eigenspace)?;
            Ok(m.shift(b))
        })
        .collect::<Result<Vec<_>>>()?;
    KoszulModule::new(t.eigenspace.dim(), ops)
}

/// `H^n = ⊕_{(σ,λ,β)∈R} H^{n−|Φ_σ|}(ℂ^l, Ṽ^λ(β))` in degrees `0..=l+|Δ⁺|`.
pub fn bwbd(ctx: &Context, data: &DeformationData, resonances: &[ResonanceTriple]) -> Result<GradedCohomology> {
    let top = data.l + ctx.alg.num_positive();
    let mut dims = vec![0usize; top + 1];
    let mut summands = Vec::with_capacity(resonances.len());
    for t in resonances {
        let k = koszul_cohomology(&twisted_module(ctx, t, data)?);
        for (q, d) in k.iter().enumerate() {
            dims[q + t.phi_len] += d;
        }
        summands.push(Summand {
            triple: t.summary(),
            shift: t.phi_len,
            koszul_dims: k,
        });
    }
    Ok(GradedCohomology { dims, summands })
}

/// Holomorphic sections: invariants of the `σ = e` summands.
pub fn h0_sections(ctx: &Context, data: &DeformationData, resonances: &[ResonanceTriple]) -> Result<usize> {
    let mut total = 0;
    for t in resonances.iter().filter(|t| t.phi_len == 0) {
        total += koszul_cohomology(&twisted_module(ctx, t, data)?)[0];
    }
    Ok(total)
}

/// `{0} ∪ Δ⁺` in that order, each labelled for reports.
pub fn tangent_characters(ctx: &Context) -> Vec<(String, CharacterOnH)> {
    let rs = ctx.rs();
    let mut out = vec![("0".to_string(), CharacterOnH::zero(rs.rank()))];
    for k in 0..rs.num_positive() {
        out.push((format!("α{}", k + 1), CharacterOnH::from(rs.root_weight(k))));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateSummary {
    pub rho: String,
    pub rho_coords: Vec<String>,
    pub strategy: Strategy,
    pub verdict: Verdict,
    pub complete: bool,
    pub resonances: Vec<TripleSummary>,
    pub note: String,
}

impl CertificateSummary {
    pub fn new(label: &str, c: &Certificate) -> Self {
        Self {
            rho: label.to_string(),
            rho_coords: c.rho.values.iter().map(|v| v.to_string()).collect(),
            strategy: c.strategy,
            verdict: c.verdict,
            complete: c.complete,
            resonances: c.resonances.iter().map(|t| t.summary()).collect(),
            note: c.note.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Refusal {
    pub rho: String,
    pub verdict: Verdict,
    pub witness: Option<TripleSummary>,
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.verdict, &self.witness) {
            (Verdict::Resonant, Some(w)) => write!(f, "ρ = {} is resonant: witness {w}", self.rho),
            (Verdict::Resonant, None) => write!(f, "ρ = {} is resonant", self.rho),
            _ => write!(f, "ρ = {} is not certified beyond the cutoff", self.rho),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LieStructure {
    pub dim: usize,
    pub basis: Vec<String>,
    /// `[b_a, b_b] = Σ c_k b_k` for `a < b`, nonzero brackets only.
    pub brackets: Vec<(usize, usize, Vec<(usize, String)>)>,
    pub derived_dim: usize,
    pub abelian: bool,
    pub assumes_orbit_condition: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentCohomology {
    pub dims: Vec<usize>,
    pub l: usize,
    pub centralizer_dim: usize,
    pub g0_dim: usize,
    pub koszul_dims: Vec<usize>,
    pub h0_lie: LieStructure,
    pub smallness_note: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TangentOutcome {
    Computed(TangentCohomology),
    Refused(Refusal),
}

pub struct CertificateBundle {
    pub labels: Vec<String>,
    pub certificates: Vec<Certificate>,
}

impl CertificateBundle {
    pub fn summaries(&self) -> Vec<CertificateSummary> {
        self.labels
            .iter()
            .zip(&self.certificates)
            .map(|(l, c)| CertificateSummary::new(l, c))
            .collect()
    }

    /// The first resonant ρ if any, else the first uncertified one.
    pub fn first_failure(&self) -> Option<Refusal> {
        let mut pairs = self.labels.iter().zip(&self.certificates);
        let (label, c) = pairs
            .clone()
            .find(|(_, c)| c.verdict == Verdict::Resonant)
            .or_else(|| pairs.find(|(_, c)| c.verdict != Verdict::NonResonant))?;
        Some(Refusal {
            rho: label.clone(),
            verdict: c.verdict,
            witness: if c.verdict == Verdict::Resonant {
                c.witness().map(|t| t.summary())
            } else {
                None
            },
        })
    }
}

pub fn tangent_certificates(ctx: &Context, data: &DeformationData, strategy: Strategy) -> Result<CertificateBundle> {
    let mut labels = Vec::new();
    let mut certificates = Vec::new();
    for (label, rho) in tangent_characters(ctx) {
        certificates.push(certify(ctx, &rho, data, strategy)?);
        labels.push(label);
    }
    Ok(CertificateBundle { labels, certificates })
}

pub const SMALLNESS_NOTE: &str =
    "assumes ε small enough that the (1,0)-part of 𝔥 along the deformation has dimension l";

/// `dims[q] = C(l,q)·l + dim H^q(ℂ^l, 𝔤(0))`, refusing unless every
/// `ρ ∈ {0} ∪ Δ⁺` is certified non-resonant.
pub fn tangent_cohomology(
    ctx: &Context,
    data: &DeformationData,
    bundle: &CertificateBundle,
) -> Result<TangentOutcome> {
    if let Some(r) = bundle.first_failure() {
        return Ok(TangentOutcome::Refused(r));
    }
    let l = data.l;
    let g0 = ctx.alg.generalized_zero_space(&data.x)?;
    let ops = data
        .x
        .iter()
        .map(|x| ctx.alg.ad(x).to_dense().restrict(&g0))
        .collect::<Result<Vec<_>>>()?;
    let koszul = koszul_cohomology(&KoszulModule::new(g0.dim(), ops)?);
    let dims: Vec<usize> = (0..=l).map(|q| binomial(l, q) * l + koszul[q]).collect();
    let centralizer_dim = ctx.alg.centralizer(&data.x)?.dim();
    if dims[0] != l + centralizer_dim {
        return Err(Error::Internal(format!(
            "H⁰ = {} but l + dim 𝔤^⟨X⟩ = {}",
            dims[0],
            l + centralizer_dim
        )));
    }
    let h0_lie = h0_lie_structure(ctx, data)?;
    if h0_lie.dim != dims[0] {
        return Err(Error::Internal(format!(
            "quotient algebra has dimension {} but H⁰ = {}",
            h0_lie.dim, dims[0]
        )));
    }
    Ok(TangentOutcome::Computed(TangentCohomology {
        dims,
        l,
        centralizer_dim,
        g0_dim: g0.dim(),
        koszul_dims: koszul,
        h0_lie,
        smallness_note: SMALLNESS_NOTE.into(),
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvarianceVerdict {
    CertifiedNonInvariant,
    InvariantBaseline,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub verdict: InvarianceVerdict,
    pub d_inv: usize,
    pub d_def: usize,
    pub refusal: Option<Refusal>,
}

pub fn invariance_verdict(ctx: &Context, data: &DeformationData, bundle: &CertificateBundle) -> Result<InvarianceReport> {
    let d_inv = data.l + ctx.alg.dim();
    let d_def = data.l + ctx.alg.centralizer(&data.x)?.dim();
    let refusal = bundle.first_failure();
    let verdict = if data.is_zero() {
        InvarianceVerdict::InvariantBaseline
    } else if refusal.is_none() && d_def < d_inv {
        InvarianceVerdict::CertifiedNonInvariant
    } else {
        InvarianceVerdict::Inconclusive
    };
    Ok(InvarianceReport {
        verdict,
        d_inv,
        d_def,
        refusal,
    })
}

/// `(𝔤^⟨X⟩ ⊕ 𝔥) / span{(X_i, Ā_i)}` with the componentwise bracket. In
/// scaled mode `X⁰` stands in for `s·X⁰`; rescaling the 𝔥 factor by `s`
/// identifies the two quotients.
pub fn h0_lie_structure(ctx: &Context, data: &DeformationData) -> Result<LieStructure> {
    let alg = &ctx.alg;
    let n = alg.dim();
    let r = alg.rank();
    let total = n + r;
    let cent = alg.centralizer(&data.x)?;
    let pad = |y: &[Gq], h: &[Gq]| -> Vec<Gq> {
        let mut v = y.to_vec();
        v.extend_from_slice(h);
        v
    };
    let ideal: Vec<Vec<Gq>> = (0..data.l)
        .map(|i| pad(&data.x[i], &data.a_bar[i]))
        .collect();
    let mut candidates: Vec<Vec<Gq>> = cent.basis().iter().map(|y| pad(y, &vec![Gq::zero(); r])).collect();
    for j in 0..r {
        let mut h = vec![Gq::zero(); r];
        h[j] = Gq::one();
        candidates.push(pad(&alg.zero(), &h));
    }
    let mut span = Subspace::span(total, ideal.iter().cloned());
    if span.dim() != data.l {
        return Err(Error::Internal("the ideal span is degenerate".into()));
    }
    let mut complement = Vec::new();
    for c in candidates {
        if !span.contains(&c) {
            span = span.sum(&Subspace::span(total, [c.clone()]));
            complement.push(c);
        }
    }
    let q = complement.len();
    let mut columns = ideal.clone();
    columns.extend(complement.iter().cloned());
    let frame = ExactMatrix::from_columns(total, &columns);
    let split = |v: &Vec<Gq>| -> (Element, Vec<Gq>) { (v[..n].to_vec(), v[n..].to_vec()) };
    let mut pairs = Vec::new();
    let mut targets = Vec::new();
    for a in 0..q {
        for b in a + 1..q {
            let (ya, _) = split(&complement[a]);
            let (yb, _) = split(&complement[b]);
            let br = alg.bracket(&ya, &yb);
            if br.iter().any(|x| !x.is_zero()) {
                pairs.push((a, b));
                targets.push(pad(&br, &vec![Gq::zero(); r]));
            }
        }
    }
    let solved = if targets.is_empty() {
        Vec::new()
    } else {
        frame
            .solve_columns(&targets)
            .ok_or_else(|| Error::Internal("bracket leaves the centralizer".into()))?
    };
    let mut brackets = Vec::new();
    let mut images = Vec::new();
    for ((a, b), coords) in pairs.into_iter().zip(solved) {
        let quotient: Vec<Gq> = coords[data.l..].to_vec();
        let entries: Vec<(usize, String)> = quotient
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| (k, x.to_string()))
            .collect();
        if !entries.is_empty() {
            brackets.push((a, b, entries));
            images.push(from_dense(&quotient));
        }
    }
    let derived_dim = rank_of(images);
    let basis = complement
        .iter()
        .map(|v| {
            let (y, h) = split(v);
            format!("({}, {})", alg.format_element(&y), alg.format_element(&alg.from_h(&h)))
        })
        .collect();
    Ok(LieStructure {
        dim: q,
        basis,
        brackets,
        derived_dim,
        abelian: derived_dim == 0,
        assumes_orbit_condition: true,
    })
}

/// True when the tuple lies in one Cartan subalgebra of the standard kind
/// used by the presets (all `X_i` in `𝔥`).
pub fn tuple_in_cartan(ctx: &Context, data: &DeformationData) -> bool {
    data.x.iter().all(|x| ctx.alg.h_part(x).is_some())
}

pub fn mode_label(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Scaled => "scaled",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::preset_su2su2;
    use crate::linalg::Rational;
    use crate::resonance::DEFAULT_CUTOFF;
    use crate::rootsys::Weight;

    fn jordan(n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(n, n);
        for k in 0..n.saturating_sub(1) {
            m.set(k, k + 1, Gq::one());
        }
        m
    }

    fn ce(ctx: &Context, x: Element, mode: Mode) -> DeformationData {
        let a = preset_su2su2(&Rational::zero(), &Rational::one());
        DeformationData::validate(&ctx.alg, a, vec![x], None, mode).unwrap()
    }

    #[test]
    fn koszul_examples() {
        let m = KoszulModule::new(3, vec![ExactMatrix::zeros(3, 3); 2]).unwrap();
        assert_eq!(koszul_cohomology(&m), vec![3, 6, 3]);
        let m = KoszulModule::new(2, vec![jordan(2)]).unwrap();
        assert_eq!(koszul_cohomology(&m), vec![1, 1]);
        let m = KoszulModule::new(3, vec![jordan(3)]).unwrap();
        assert_eq!(koszul_cohomology(&m), vec![1, 1]);
        let m = KoszulModule::new(3, vec![jordan(3), jordan(3).mul(&jordan(3))]).unwrap();
        assert_eq!(koszul_cohomology(&m), vec![1, 2, 1]);
    }

    #[test]
    fn koszul_rejects_bad_input() {
        assert!(KoszulModule::new(2, vec![ExactMatrix::identity(2)]).is_err());
        assert!(KoszulModule::new(2, vec![jordan(2), jordan(2).transpose()]).is_err());
    }

    #[test]
    fn bwbd_trivial_cases() {
        let ctx = Context::parse("A1xA1").unwrap();
        let d = ce(&ctx, ctx.alg.zero(), Mode::Exact);
        let g = bwbd(&ctx, &d, &[]).unwrap();
        assert!(g.dims.iter().all(|x| *x == 0));
        let c = certify(&ctx, &CharacterOnH::zero(2), &d, Strategy::Cutoff(DEFAULT_CUTOFF)).unwrap();
        let g = bwbd(&ctx, &d, &c.resonances).unwrap();
        assert_eq!(g.dims, vec![1, 1, 0, 0]);
    }

    #[test]
    fn ce_resonant_summand() {
        let ctx = Context::parse("A1xA1").unwrap();
        let x = ctx.alg.from_h(&[Gq::from_ratio(1, 3), Gq::zero()]);
        let d = ce(&ctx, x, Mode::Exact);
        let rho = CharacterOnH::from(&Weight(vec![2, 0]));
        let c = certify(&ctx, &rho, &d, Strategy::Cutoff(4)).unwrap();
        let res: Vec<_> = c.resonances.iter().filter(|t| !t.beta_is_zero()).cloned().collect();
        let g = bwbd(&ctx, &d, &res).unwrap();
        assert_eq!(&g.dims[..2], &[1, 1]);
        assert_eq!(h0_sections(&ctx, &d, &c.resonances).unwrap(), 2);
    }

    #[test]
    fn h0_sections_zero_tuple() {
        let ctx = Context::parse("A1xA1").unwrap();
        let d = ce(&ctx, ctx.alg.zero(), Mode::Exact);
        for (rho, expect) in [(vec![0, 0], 1), (vec![2, 0], 3)] {
            let c = certify(&ctx, &CharacterOnH::from(&Weight(rho)), &d, Strategy::Cutoff(4)).unwrap();
            assert_eq!(h0_sections(&ctx, &d, &c.resonances).unwrap(), expect);
        }
    }

    #[test]
    fn tangent_zero_tuple() {
        let ctx = Context::parse("A1xA1").unwrap();
        let d = ce(&ctx, ctx.alg.zero(), Mode::Exact);
        let b = tangent_certificates(&ctx, &d, Strategy::Cutoff(4)).unwrap();
        let TangentOutcome::Computed(t) = tangent_cohomology(&ctx, &d, &b).unwrap() else {
            panic!("refused")
        };
        assert_eq!(t.dims, vec![7, 7]);
        assert_eq!(t.h0_lie.dim, 7);
        let v = invariance_verdict(&ctx, &d, &b).unwrap();
        assert_eq!(v.verdict, InvarianceVerdict::InvariantBaseline);
        assert_eq!((v.d_inv, v.d_def), (7, 7));
    }

    #[test]
    fn tangent_scaled_regular() {
        let ctx = Context::parse("A1xA1").unwrap();
        let d = ce(&ctx, ctx.alg.from_h(&[Gq::one(), Gq::one()]), Mode::Scaled);
        let b = tangent_certificates(&ctx, &d, Strategy::Scaled).unwrap();
        let TangentOutcome::Computed(t) = tangent_cohomology(&ctx, &d, &b).unwrap() else {
            panic!("refused")
        };
        assert_eq!(t.dims, vec![3, 3]);
        assert!(t.h0_lie.abelian);
        let v = invariance_verdict(&ctx, &d, &b).unwrap();
        assert_eq!(v.verdict, InvarianceVerdict::CertifiedNonInvariant);
        assert_eq!((v.d_def, v.d_inv), (3, 7));
    }

    #[test]
    fn tangent_refuses_resonant() {
        let ctx = Context::parse("A1xA1").unwrap();
        let x = ctx.alg.from_h(&[Gq::from_ratio(1, 3), Gq::zero()]);
        let d = ce(&ctx, x, Mode::Exact);
        let b = tangent_certificates(&ctx, &d, Strategy::Cutoff(4)).unwrap();
        let TangentOutcome::Refused(r) = tangent_cohomology(&ctx, &d, &b).unwrap() else {
            panic!("computed")
        };
        assert_eq!(r.rho, "α1");
        let w = r.witness.unwrap();
        assert_eq!((w.sigma.len(), w.lambda.clone(), w.beta.clone()), (0, vec![3, 0], vec!["1".to_string()]));
        let v = invariance_verdict(&ctx, &d, &b).unwrap();
        assert_eq!(v.verdict, InvarianceVerdict::Inconclusive);
    }

    #[test]
    fn lie_structure_forced() {
        let ctx = Context::parse("A1xA1").unwrap();
        let x = ctx.alg.from_h(&[Gq::from_ratio(1, 3), Gq::zero()]);
        let d = ce(&ctx, x, Mode::Exact);
        let s = h0_lie_structure(&ctx, &d).unwrap();
        assert_eq!(s.dim, 5);
        assert_eq!(s.derived_dim, 3);
        let z = ce(&ctx, ctx.alg.zero(), Mode::Exact);
        assert_eq!(h0_lie_structure(&ctx, &z).unwrap().dim, 7);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(1, 2), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
