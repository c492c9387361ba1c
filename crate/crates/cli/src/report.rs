//! Command pipelines. Every command produces a JSON payload; text output is
//! rendered from it.

use std::collections::BTreeSet;
use std::time::Instant;

use anyhow::Result;
use rayon::prelude::*;
use serde_json::{json, Value};

use dolbeault_core::cohomology::{
    bwbd, h0_sections, invariance_verdict, tangent_certificates, tangent_cohomology, CertificateSummary,
    InvarianceVerdict, TangentOutcome,
};
use dolbeault_core::context::Context;
use dolbeault_core::deform::Mode;
use dolbeault_core::oracle::{ce_nilradical, euler_consistency, LambdaComparison};
use dolbeault_core::repn::{freudenthal_multiplicities, weyl_dimension};
use dolbeault_core::resonance::{certify, Verdict};
use dolbeault_core::rootsys::{CharacterOnH, Weight};
use dolbeault_core::weyl::WeylGroup;

use crate::input::Deformation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Refused,
    Failed,
}

pub struct Output {
    pub payload: Value,
    pub timing: Option<Value>,
    pub status: Status,
}

impl Output {
    fn ok(payload: Value) -> Self {
        Self {
            payload,
            timing: None,
            status: Status::Ok,
        }
    }
}

pub fn rootsys_show(ctx: &Context) -> Result<Output> {
    let rs = ctx.rs();
    let mut components = Vec::new();
    for (c, comp) in rs.components().iter().enumerate() {
        let chain = rs.regular_root_chain(c)?;
        components.push(json!({
            "series": format!("{:?}", comp.series),
            "rank": comp.rank,
            "highest_root": rs.positive_roots()[rs.highest_root(c)],
            "regular_root_chain": chain.roots.iter().map(|k| &rs.positive_roots()[*k]).collect::<Vec<_>>(),
        }));
    }
    Ok(Output::ok(json!({
        "rootsystem": rs.spec.to_string(),
        "rank": rs.rank(),
        "cartan": rs.cartan(),
        "positive_roots": rs.positive_roots(),
        "rho_w": rs.rho_w().0,
        "weyl_order": rs.weyl_order().to_string(),
        "components": components,
    })))
}

pub fn weyl_enum(ctx: &Context, max_length: Option<usize>) -> Result<Output> {
    let group = match max_length {
        Some(m) => WeylGroup::enumerate(ctx.rs(), Some(m))?,
        None => ctx.weyl.clone(),
    };
    let words: Vec<Vec<usize>> = group
        .elements
        .iter()
        .map(|e| e.word.iter().map(|i| i + 1).collect())
        .collect();
    Ok(Output::ok(json!({
        "rootsystem": ctx.rs().spec.to_string(),
        "order": group.len(),
        "complete": group.is_complete(),
        "length_histogram": group.length_histogram(),
        "words": words,
    })))
}

pub fn repn_info(ctx: &Context, lambda: &Weight) -> Result<Output> {
    let rs = ctx.rs();
    let dim = weyl_dimension(rs, lambda)?;
    let mults = freudenthal_multiplicities(rs, lambda)?;
    let module = ctx.module(lambda)?;
    let multiplicities: Vec<Value> = mults
        .iter()
        .rev()
        .map(|(w, m)| json!({"weight": w.0, "multiplicity": m}))
        .collect();
    Ok(Output::ok(json!({
        "rootsystem": rs.spec.to_string(),
        "lambda": lambda.0,
        "weyl_dimension": dim.to_string(),
        "freudenthal_total": mults.values().sum::<usize>(),
        "built_dimension": module.dim(),
        "multiplicities": multiplicities,
    })))
}

pub fn deform_validate(def: &Deformation) -> Result<Output> {
    Ok(Output::ok(json!({
        "input": def.echo(),
        "l": def.data.l,
        "kuranishi": def.data.kuranishi_membership(&def.ctx.alg),
        "valid": true,
    })))
}

pub fn resonance_scan(def: &Deformation, label: &str, rho: &CharacterOnH) -> Result<Output> {
    let c = certify(&def.ctx, rho, &def.data, def.strategy)?;
    let summary = CertificateSummary::new(label, &c);
    Ok(Output::ok(json!({
        "input": def.echo(),
        "certificate": summary,
        "witness": c.witness().map(|t| t.summary()),
    })))
}

pub fn cohomology_line(def: &Deformation, label: &str, rho: &CharacterOnH) -> Result<Output> {
    let c = certify(&def.ctx, rho, &def.data, def.strategy)?;
    let g = bwbd(&def.ctx, &def.data, &c.resonances)?;
    let h0 = h0_sections(&def.ctx, &def.data, &c.resonances)?;
    Ok(Output::ok(json!({
        "input": def.echo(),
        "rho": label,
        "dims": g.dims,
        "h0": h0,
        "summands": g.summands,
        "certificates": [CertificateSummary::new(label, &c)],
        "complete": c.complete,
    })))
}

pub fn cohomology_tangent(def: &Deformation) -> Result<Output> {
    let bundle = tangent_certificates(&def.ctx, &def.data, def.strategy)?;
    let outcome = tangent_cohomology(&def.ctx, &def.data, &bundle)?;
    let status = match outcome {
        TangentOutcome::Computed(_) => Status::Ok,
        TangentOutcome::Refused(_) => Status::Refused,
    };
    Ok(Output {
        payload: json!({
            "input": def.echo(),
            "tangent": outcome,
            "certificates": bundle.summaries(),
        }),
        timing: None,
        status,
    })
}

pub fn verdict(def: &Deformation) -> Result<Output> {
    let bundle = tangent_certificates(&def.ctx, &def.data, def.strategy)?;
    let report = invariance_verdict(&def.ctx, &def.data, &bundle)?;
    let status = if report.verdict == InvarianceVerdict::Inconclusive {
        Status::Refused
    } else {
        Status::Ok
    };
    Ok(Output {
        payload: json!({
            "input": def.echo(),
            "verdict": report,
            "certificates": bundle.summaries(),
        }),
        timing: None,
        status,
    })
}

pub fn oracle_kostant(ctx: &Context, lambda: &Weight) -> Result<Output> {
    let k = ce_nilradical(ctx, lambda)?;
    let status = if k.passed { Status::Ok } else { Status::Failed };
    Ok(Output {
        payload: json!({"rootsystem": ctx.rs().spec.to_string(), "kostant": k}),
        timing: None,
        status,
    })
}

/// The oracle needs an exact tuple; a scaled tuple is specialized at `s = 1`.
fn oracle_deformation(def: &Deformation) -> dolbeault_core::deform::DeformationData {
    let mut d = def.data.clone();
    d.mode = Mode::Exact;
    d
}

fn specialization(def: &Deformation) -> Option<&'static str> {
    (def.data.mode == Mode::Scaled).then_some("s = 1")
}

pub fn oracle_bwbd(def: &Deformation, rho: &CharacterOnH, lambda: &Weight) -> Result<Output> {
    let data = oracle_deformation(def);
    let cmp = euler_consistency(&def.ctx, rho, &data, std::slice::from_ref(lambda))?;
    let ok = cmp.iter().all(|c| c.matches);
    Ok(Output {
        payload: json!({
            "input": def.echo(),
            "specialization": specialization(def),
            "comparisons": cmp,
            "all_match": ok,
        }),
        timing: None,
        status: if ok { Status::Ok } else { Status::Failed },
    })
}

pub fn oracle_sweep(def: &Deformation, cutoff: usize) -> Result<Output> {
    let data = oracle_deformation(def);
    let lambdas = def.ctx.rs().dominant_weights_up_to(cutoff);
    let rhos = dolbeault_core::cohomology::tangent_characters(&def.ctx);
    let results: Vec<Result<Vec<LambdaComparison>>> = rhos
        .par_iter()
        .map(|(_, rho)| euler_consistency(&def.ctx, rho, &data, &lambdas).map_err(Into::into))
        .collect();
    let mut comparisons = Vec::new();
    for r in results {
        comparisons.extend(r?);
    }
    let ok = comparisons.iter().all(|c| c.matches);
    Ok(Output {
        payload: json!({
            "input": def.echo(),
            "specialization": specialization(def),
            "cutoff": cutoff,
            "comparisons": comparisons,
            "all_match": ok,
        }),
        timing: None,
        status: if ok { Status::Ok } else { Status::Failed },
    })
}

/// Scan, certify, assemble, decide, then cross-check every λ the closed
/// form used against the direct complex.
pub fn full_report(def: &Deformation) -> Result<Output> {
    let ctx = &def.ctx;
    let mut timing = serde_json::Map::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timing: &mut serde_json::Map<String, Value>| {
        timing.insert(name.into(), json!(clock.elapsed().as_millis() as u64));
        clock = Instant::now();
    };

    let bundle = tangent_certificates(ctx, &def.data, def.strategy)?;
    lap("certify_ms", &mut timing);

    let mut lines = Vec::new();
    for (label, c) in bundle.labels.iter().zip(&bundle.certificates) {
        let g = bwbd(ctx, &def.data, &c.resonances)?;
        let h0 = h0_sections(ctx, &def.data, &c.resonances)?;
        lines.push(json!({"rho": label, "dims": g.dims, "h0": h0, "summands": g.summands}));
    }
    lap("line_cohomology_ms", &mut timing);

    let tangent = tangent_cohomology(ctx, &def.data, &bundle)?;
    let inv = invariance_verdict(ctx, &def.data, &bundle)?;
    lap("tangent_ms", &mut timing);

    let data = oracle_deformation(def);
    let mut jobs: Vec<(usize, Weight)> = Vec::new();
    for (r, c) in bundle.certificates.iter().enumerate() {
        let used: BTreeSet<Weight> = c.resonances.iter().map(|t| t.lambda.clone()).collect();
        jobs.extend(used.into_iter().map(|w| (r, w)));
    }
    let results: Vec<Result<Vec<LambdaComparison>>> = jobs
        .par_iter()
        .map(|(r, lambda)| {
            euler_consistency(ctx, &bundle.certificates[*r].rho, &data, std::slice::from_ref(lambda))
                .map_err(Into::into)
        })
        .collect();
    let mut comparisons = Vec::new();
    for r in results {
        comparisons.extend(r?);
    }
    let all_match = comparisons.iter().all(|c| c.matches);
    lap("oracle_ms", &mut timing);

    let status = if !all_match {
        Status::Failed
    } else if matches!(tangent, TangentOutcome::Refused(_)) {
        Status::Refused
    } else {
        Status::Ok
    };
    let any_resonant = bundle.certificates.iter().any(|c| c.verdict == Verdict::Resonant);
    Ok(Output {
        payload: json!({
            "version": env!("CARGO_PKG_VERSION"),
            "input": def.echo(),
            "certificates": bundle.summaries(),
            "any_resonant": any_resonant,
            "line_cohomology": lines,
            "tangent": tangent,
            "verdict": inv,
            "oracle": {
                "specialization": specialization(def),
                "comparisons": comparisons,
                "all_match": all_match,
            },
        }),
        timing: Some(Value::Object(timing)),
        status,
    })
}
