#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::{Options, VdwGrid, VdwParams};
use config::RunConfig;

/// Contact-geometric thermodynamics toolkit.
#[derive(Parser)]
#[command(name = "cthermo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, short)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Overrides the tolerance of the check.
    #[arg(long)]
    tol: Option<f64>,
    /// Overrides the sampling seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether a 1-form is closed on a sample of points.
    CheckClosed(Common),
    /// Integrate a model and write its trace as CSV.
    Simulate {
        /// Must match `model.kind` when given.
        model: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate a constitutive surface on a grid.
    Surface(Common),
    /// Check the entropy-production rate along a process curve.
    Admissible {
        #[command(flatten)]
        common: Common,
        /// Per-sample rates as CSV.
        #[arg(long)]
        rates: Option<PathBuf>,
    },
    /// Thermodynamic metric and its determinant at given points.
    Metric(Common),
    /// Integral of a 1-form along a process curve.
    Action(Common),
    /// Curvature of the connection form at given points.
    Curvature(Common),
    /// Van der Waals fluid: surface table and spinodal search.
    Vdw(VdwArgs),
}

#[derive(Args)]
struct VdwArgs {
    /// Attraction parameter.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Excluded volume.
    #[arg(long, default_value_t = 0.1)]
    b: f64,
    /// Gas constant.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Heat capacity at constant volume.
    #[arg(long, default_value_t = 1.5)]
    cv: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    s_min: f64,
    #[arg(long, default_value_t = 0.5)]
    s_max: f64,
    #[arg(long, default_value_t = 11)]
    s_count: usize,
    #[arg(long, default_value_t = 0.15)]
    v_min: f64,
    #[arg(long, default_value_t = 3.0)]
    v_max: f64,
    #[arg(long, default_value_t = 58)]
    v_count: usize,
    /// Entropy of the isentrope scanned for spinodal points.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    isentrope: f64,
    /// Surface table; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Spinodal summary as JSON; stderr when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<u8> {
    let with_config = |c: &Common, f: &dyn Fn(&RunConfig, &Options) -> Result<u8>| -> Result<u8> {
        let cfg = RunConfig::load(&c.config)?;
        f(&cfg, &Options { out: c.out.as_deref(), tol: c.tol, seed: c.seed })
    };
    match &cli.command {
        Command::CheckClosed(c) => with_config(c, &commands::check_closed),
        Command::Simulate { model, common } => {
            with_config(common, &|cfg, o| commands::simulate(cfg, model.as_deref(), o))
        }
        Command::Surface(c) => with_config(c, &commands::surface_cmd),
        Command::Admissible { common, rates } => {
            with_config(common, &|cfg, o| commands::admissible(cfg, rates.as_deref(), o))
        }
        Command::Metric(c) => with_config(c, &commands::metric),
        Command::Action(c) => with_config(c, &commands::action),
        Command::Curvature(c) => with_config(c, &commands::curvature),
        Command::Vdw(v) => {
            if v.s_count == 0 || v.v_count == 0 {
                anyhow::bail!("grid counts must be positive");
            }
            let params = VdwParams { a: v.a, b: v.b, r: v.r, cv: v.cv };
            let grid = VdwGrid {
                s: (v.s_min, v.s_max, v.s_count),
                v: (v.v_min, v.v_max, v.v_count),
                isentrope: v.isentrope,
                scan: (v.v_min, v.v_max),
            };
            commands::vdw(
                &params,
                &grid,
                v.report.as_deref(),
                &Options { out: v.out.as_deref(), tol: None, seed: None },
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
