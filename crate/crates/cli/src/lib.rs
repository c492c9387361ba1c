//! Command-line front end: argument parsing, dispatch, output and exit codes.

pub mod cache;
pub mod input;
pub mod report;
pub mod text;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dolbeault_core::Error;

use crate::input::{context_for, load_deformation, parse_lambda, parse_rho, system_spec, DeformArgs, SystemArgs};
use crate::report::{Output, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "dolbeault", version, about = "Exact Dolbeault cohomology of deformed complex structures on compact Lie groups")]
pub struct Cli {
    /// Write the JSON report to this path (`-` for stdout) instead of text.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Root system data.
    Rootsys {
        #[command(subcommand)]
        cmd: RootsysCmd,
    },
    /// Weyl group enumeration.
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
    /// Highest-weight modules.
    Repn {
        #[command(subcommand)]
        cmd: RepnCmd,
    },
    /// Deformation data checks.
    Deform {
        #[command(subcommand)]
        cmd: DeformCmd,
    },
    /// Resonance search and certification.
    Resonance {
        #[command(subcommand)]
        cmd: ResonanceCmd,
    },
    /// Line-bundle and tangent cohomology.
    Cohomology {
        #[command(subcommand)]
        cmd: CohomologyCmd,
    },
    /// Compare holomorphic vector field counts with the invariant structure.
    Verdict {
        #[command(flatten)]
        def: DeformArgs,
    },
    /// Direct cochain-complex cross-checks.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Full pipeline with oracle comparison.
    Report {
        #[command(flatten)]
        def: DeformArgs,
        /// Memoize payloads in this directory.
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum RootsysCmd {
    Show {
        #[command(flatten)]
        system: SystemArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum WeylCmd {
    Enum {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long = "max-length")]
        max_length: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum RepnCmd {
    Info {
        #[command(flatten)]
        system: SystemArgs,
        /// Highest weight in fundamental coordinates, e.g. `3,0`.
        #[arg(long)]
        lambda: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum DeformCmd {
    Validate {
        #[command(flatten)]
        def: DeformArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ResonanceCmd {
    Scan {
        #[command(flatten)]
        def: DeformArgs,
        /// `0`, a positive-root index, or a JSON list of coroot values.
        #[arg(long)]
        rho: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CohomologyCmd {
    Line {
        #[command(flatten)]
        def: DeformArgs,
        #[arg(long)]
        rho: String,
    },
    Tangent {
        #[command(flatten)]
        def: DeformArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    Kostant {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        lambda: String,
    },
    Bwbd {
        #[command(flatten)]
        def: DeformArgs,
        #[arg(long)]
        rho: String,
        #[arg(long)]
        lambda: String,
    },
    Sweep {
        #[command(flatten)]
        def: DeformArgs,
    },
}

fn dispatch(cli: &Cli) -> Result<(String, Output)> {
    Ok(match &cli.command {
        Command::Rootsys { cmd: RootsysCmd::Show { system } } => {
            let ctx = context_for(system, &system_spec(system, "A1xA1")?)?;
            ("rootsys show".into(), report::rootsys_show(&ctx)?)
        }
        Command::Weyl { cmd: WeylCmd::Enum { system, max_length } } => {
            let ctx = context_for(system, &system_spec(system, "A1xA1")?)?;
            ("weyl enum".into(), report::weyl_enum(&ctx, *max_length)?)
        }
        Command::Repn { cmd: RepnCmd::Info { system, lambda } } => {
            let ctx = context_for(system, &system_spec(system, "A1xA1")?)?;
            let w = parse_lambda(&ctx, lambda)?;
            ("repn info".into(), report::repn_info(&ctx, &w)?)
        }
        Command::Deform { cmd: DeformCmd::Validate { def } } => {
            ("deform validate".into(), report::deform_validate(&load_deformation(def)?)?)
        }
        Command::Resonance { cmd: ResonanceCmd::Scan { def, rho } } => {
            let d = load_deformation(def)?;
            let (label, r) = parse_rho(&d.ctx, rho)?;
            ("resonance scan".into(), report::resonance_scan(&d, &label, &r)?)
        }
        Command::Cohomology { cmd: CohomologyCmd::Line { def, rho } } => {
            let d = load_deformation(def)?;
            let (label, r) = parse_rho(&d.ctx, rho)?;
            ("cohomology line".into(), report::cohomology_line(&d, &label, &r)?)
        }
        Command::Cohomology { cmd: CohomologyCmd::Tangent { def } } => {
            ("cohomology tangent".into(), report::cohomology_tangent(&load_deformation(def)?)?)
        }
        Command::Verdict { def } => ("verdict".into(), report::verdict(&load_deformation(def)?)?),
        Command::Oracle { cmd: OracleCmd::Kostant { system, lambda } } => {
            let ctx = context_for(system, &system_spec(system, "A1xA1")?)?;
            let w = parse_lambda(&ctx, lambda)?;
            ("oracle kostant".into(), report::oracle_kostant(&ctx, &w)?)
        }
        Command::Oracle { cmd: OracleCmd::Bwbd { def, rho, lambda } } => {
            let d = load_deformation(def)?;
            let (_, r) = parse_rho(&d.ctx, rho)?;
            let w = parse_lambda(&d.ctx, lambda)?;
            ("oracle bwbd".into(), report::oracle_bwbd(&d, &r, &w)?)
        }
        Command::Oracle { cmd: OracleCmd::Sweep { def } } => {
            let d = load_deformation(def)?;
            let cutoff = d.cutoff;
            ("oracle sweep".into(), report::oracle_sweep(&d, cutoff)?)
        }
        Command::Report { def, cache_dir } => {
            let d = load_deformation(def)?;
            let cache = cache_dir.as_deref().map(cache::Cache::open).transpose()?;
            let key = cache::Cache::key("report", &d.echo());
            if let Some(payload) = cache.as_ref().and_then(|c| c.load(&key)) {
                let status = status_of_report(&payload);
                let out = Output {
                    payload,
                    timing: Some(json!({"cached": true})),
                    status,
                };
                return Ok(("report".into(), out));
            }
            let out = report::full_report(&d)?;
            if let Some(c) = &cache {
                c.store(&key, &out.payload)?;
            }
            ("report".into(), out)
        }
    })
}

fn status_of_report(payload: &Value) -> Status {
    if payload["oracle"]["all_match"] == Value::Bool(false) {
        Status::Failed
    } else if payload["tangent"]["status"] == "refused" {
        Status::Refused
    } else {
        Status::Ok
    }
}

/// Maps an error to its exit code.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::Refused(_) => EXIT_REFUSED,
            Error::Internal(_) | Error::NotSquare { .. } | Error::NotExtreme { .. } => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() || err.downcast_ref::<serde_json::Error>().is_some() {
        return EXIT_INVALID;
    }
    EXIT_INTERNAL
}

fn emit(cli: &Cli, command: &str, out: &Output) -> Result<()> {
    match &cli.json {
        Some(path) => {
            let mut doc = json!({"command": command, "payload": out.payload});
            if let Some(t) = &out.timing {
                doc["timing"] = t.clone();
            }
            let text = serde_json::to_string_pretty(&doc)?;
            if path.as_os_str() == "-" {
                println!("{text}");
            } else {
                std::fs::write(path, text + "\n")?;
            }
        }
        None => print!("{}", text::render(command, &out.payload)),
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = dispatch(&cli).and_then(|(command, out)| {
        emit(&cli, &command, &out)?;
        Ok(out.status)
    });
    match result {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::Refused) => EXIT_REFUSED,
        Ok(Status::Failed) => EXIT_INTERNAL,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}
