//! Assembling a root system and deformation tuple from flags and files.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use clap::Args;
use serde_json::{json, Value};

use dolbeault_core::chevalley::Element;
use dolbeault_core::context::Context;
use dolbeault_core::deform::{default_splitting, preset_su2su2, DeformationData, Mode};
use dolbeault_core::expr::{element_from_json, element_to_json, parse_element};
use dolbeault_core::linalg::{Gq, Rational};
use dolbeault_core::resonance::{Strategy, DEFAULT_CUTOFF};
use dolbeault_core::rootsys::{CharacterOnH, RootSystemSpec, Weight};
use dolbeault_core::Error;

#[derive(Args, Clone, Debug, Default)]
pub struct SystemArgs {
    /// Root system such as `A1xA1`, `B2` or `G2`.
    #[arg(long)]
    pub rootsystem: Option<String>,

    /// Refuse modules above this dimension.
    #[arg(long = "ceiling-dim")]
    pub ceiling_dim: Option<usize>,
}

#[derive(Args, Clone, Debug, Default)]
pub struct DeformArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    /// Named preset; `su2su2` is A1xA1 with `A = −H1 − (a+bi)H2`.
    #[arg(long)]
    pub preset: Option<String>,

    #[arg(long, default_value = "0")]
    pub a: String,

    #[arg(long, default_value = "1")]
    pub b: String,

    /// JSON file with `rootsystem`, `a`, `x`, optional `y` and `mode`.
    #[arg(long)]
    pub deformation: Option<PathBuf>,

    /// Element expression or path to an element JSON file; repeat per `X_i`.
    #[arg(long)]
    pub x: Vec<String>,

    /// JSON file holding the whole tuple.
    #[arg(long = "x-file")]
    pub x_file: Option<PathBuf>,

    /// Read `X` as `s·X⁰` with `s` transcendental.
    #[arg(long)]
    pub scaled: bool,

    /// Dominant weights scanned in cutoff mode (coefficient sum).
    #[arg(long)]
    pub cutoff: Option<usize>,
}

pub fn context_for(args: &SystemArgs, spec: &RootSystemSpec) -> Result<Context> {
    let ceiling = args.ceiling_dim.unwrap_or(dolbeault_core::repn::DEFAULT_DIM_CEILING);
    Ok(Context::with_ceilings(spec, ceiling, dolbeault_core::weyl::DEFAULT_WEYL_CEILING)?)
}

pub fn system_spec(args: &SystemArgs, default: &str) -> Result<RootSystemSpec> {
    let s = args.rootsystem.as_deref().unwrap_or(default);
    Ok(s.parse::<RootSystemSpec>()?)
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn elements_from_value(ctx: &Context, v: &Value, mode: Mode) -> Result<Vec<Element>> {
    let alg = &ctx.alg;
    match v {
        Value::Array(items) => items
            .iter()
            .map(|it| element_from_json(alg, it, mode).map_err(Into::into))
            .collect(),
        Value::Object(o) if o.contains_key("X") => elements_from_value(ctx, &o["X"], mode),
        Value::Object(o) if o.contains_key("x") => elements_from_value(ctx, &o["x"], mode),
        other => Ok(vec![element_from_json(alg, other, mode)?]),
    }
}

fn scalar_list(v: &Value) -> Result<Vec<Gq>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected a list of scalars".into()))?;
    items
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(s.parse::<Gq>()?),
            Value::Number(n) => n
                .as_i64()
                .map(Gq::from_int)
                .ok_or_else(|| Error::Parse(format!("non-integer number {n}")).into()),
            other => Err(Error::Parse(format!("expected a scalar, found {other}")).into()),
        })
        .collect()
}

pub struct Deformation {
    pub ctx: Context,
    pub data: DeformationData,
    pub strategy: Strategy,
    pub cutoff: usize,
}

impl Deformation {
    /// The canonical input echo: re-running on it reproduces the result.
    pub fn echo(&self) -> Value {
        let alg = &self.ctx.alg;
        let scalars = |v: &[Gq]| -> Vec<String> { v.iter().map(|x| x.to_string()).collect() };
        json!({
            "rootsystem": self.ctx.rs().spec.to_string(),
            "a": self.data.a.iter().map(|v| scalars(v)).collect::<Vec<_>>(),
            "x": self.data.x.iter().map(|x| element_to_json(alg, x)).collect::<Vec<_>>(),
            "y": self.data.y.as_ref().map(|ys| ys.iter().map(|y| element_to_json(alg, y)).collect::<Vec<_>>()),
            "mode": self.data.mode,
            "strategy": self.strategy,
        })
    }
}

/// Looks up a deformation-file key in either case (`A`/`a`, `X`/`x`, `Y`/`y`).
fn key<'a>(file: Option<&'a Value>, name: &str) -> Option<&'a Value> {
    let f = file?;
    f.get(name).or_else(|| f.get(name.to_lowercase()))
}

pub fn load_deformation(args: &DeformArgs) -> Result<Deformation> {
    let file = args.deformation.as_deref().map(read_json).transpose()?;
    let file_rs = file
        .as_ref()
        .and_then(|f| f.get("rootsystem"))
        .and_then(|v| v.as_str())
        .map(str::to_string);
    let preset = args.preset.as_deref();
    if let Some(p) = preset {
        if p != "su2su2" {
            return Err(Error::Parse(format!("unknown preset {p:?}")).into());
        }
    }
    let rs_name = args
        .system
        .rootsystem
        .clone()
        .or(file_rs)
        .unwrap_or_else(|| "A1xA1".to_string());
    let spec: RootSystemSpec = rs_name.parse()?;
    if preset.is_some() && spec.to_string() != "A1xA1" {
        return Err(Error::InvalidDeformation("the su2su2 preset lives on A1xA1".into()).into());
    }
    let ctx = context_for(&args.system, &spec)?;
    let file_mode = file
        .as_ref()
        .and_then(|f| f.get("mode"))
        .map(|m| serde_json::from_value::<Mode>(m.clone()))
        .transpose()
        .map_err(|e| Error::Parse(format!("mode: {e}")))?;
    let mode = if args.scaled {
        Mode::Scaled
    } else {
        file_mode.unwrap_or(Mode::Exact)
    };
    let a = if preset.is_some() {
        let a: Rational = args.a.parse()?;
        let b: Rational = args.b.parse()?;
        preset_su2su2(&a, &b)
    } else if let Some(av) = key(file.as_ref(), "A") {
        let rows = av
            .as_array()
            .ok_or_else(|| Error::Parse("a must be a list of vectors".into()))?;
        rows.iter().map(scalar_list).collect::<Result<Vec<_>>>()?
    } else {
        default_splitting(ctx.rs().rank())
    };
    let mut x: Vec<Element> = Vec::new();
    if let Some(xv) = key(file.as_ref(), "X") {
        x.extend(elements_from_value(&ctx, xv, mode)?);
    }
    if let Some(path) = &args.x_file {
        x.extend(elements_from_value(&ctx, &read_json(path)?, mode)?);
    }
    for item in &args.x {
        let path = Path::new(item);
        if path.is_file() {
            x.extend(elements_from_value(&ctx, &read_json(path)?, mode)?);
        } else {
            x.push(parse_element(&ctx.alg, item, mode)?);
        }
    }
    let l = ctx.rs().rank() / 2;
    if x.is_empty() {
        x = vec![ctx.alg.zero(); l];
    }
    let y = key(file.as_ref(), "Y")
        .map(|yv| elements_from_value(&ctx, yv, mode))
        .transpose()?;
    let data = DeformationData::validate(&ctx.alg, a, x, y, mode)?;
    let cutoff = args.cutoff.unwrap_or(DEFAULT_CUTOFF);
    let strategy = match mode {
        Mode::Scaled => Strategy::Scaled,
        Mode::Exact => Strategy::Cutoff(cutoff),
    };
    Ok(Deformation {
        ctx,
        data,
        strategy,
        cutoff,
    })
}

/// `0`, a 1-based positive-root index (`3`, `a3`, `α3`), or a JSON list of
/// values on the coroots.
pub fn parse_rho(ctx: &Context, s: &str) -> Result<(String, CharacterOnH)> {
    let rs = ctx.rs();
    let t = s.trim();
    if t == "0" {
        return Ok(("0".into(), CharacterOnH::zero(rs.rank())));
    }
    let idx = t.trim_start_matches('α').trim_start_matches('a');
    if let Ok(k) = idx.parse::<usize>() {
        if k == 0 || k > rs.num_positive() {
            bail!(Error::Parse(format!("root index {k} is out of range")));
        }
        return Ok((format!("α{k}"), CharacterOnH::from(rs.root_weight(k - 1))));
    }
    let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(format!("rho: {e}")))?;
    let values = scalar_list(&v)?;
    if values.len() != rs.rank() {
        bail!(Error::Parse(format!("rho needs {} values", rs.rank())));
    }
    let label = format!("[{}]", values.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    Ok((label, CharacterOnH::new(values)))
}

/// `3,0` or `[3,0]`, in fundamental-weight coordinates.
pub fn parse_lambda(ctx: &Context, s: &str) -> Result<Weight> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let coords = t
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Parse(format!("lambda: {e}")))?;
    if coords.len() != ctx.rs().rank() {
        bail!(Error::Parse(format!("lambda needs {} coordinates", ctx.rs().rank())));
    }
    let w = Weight(coords);
    if !w.is_dominant() {
        bail!(Error::NotDominant(w.0));
    }
    Ok(w)
}
