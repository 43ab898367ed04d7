//! `se2geo`: geodesics, boundary-value problems and existence queries on SE(2).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;
mod svg;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use se2_core::geodesic::Geodesic;
use se2_core::pendulum::PendulumState;
use se2_core::pose::Pose;
use se2_core::solver::{atlas, configure_threads, AtlasSpec, BoundaryPair, Execution, Solver};

use report::Failure;

#[derive(Parser, Debug)]
#[command(name = "se2geo", version, about = "Sub-Riemannian geodesics on SE(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a geodesic from its initial pendulum state.
    Geodesic(GeodesicArgs),
    /// Solve the boundary-value problem from the origin (or --from) to a pose.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Decide whether a curve with unit planar speed reaches the pose optimally.
    #[command(allow_negative_numbers = true)]
    Exists(ExistsArgs),
    /// Existence verdicts over a grid of targets in a disk.
    Atlas(AtlasArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct GeodesicArgs {
    #[arg(long)]
    nu0: f64,
    #[arg(long)]
    c0: f64,
    /// Base pose `x y θ` (radians).
    #[arg(long, num_args = 3, value_names = ["X", "Y", "THETA"])]
    base: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10.0)]
    tmax: f64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct Target {
    x: f64,
    y: f64,
    /// Heading in radians.
    theta: f64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    target: Target,
    /// Start pose `x y θ`; the origin by default.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "THETA"])]
    from: Option<Vec<f64>>,
    /// Weight of the horizontal control.
    #[arg(long, default_value_t = 1.0)]
    xi: f64,
    /// Treat headings modulo π.
    #[arg(long)]
    projective: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct ExistsArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct AtlasArgs {
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    #[arg(long, default_value_t = 32)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

fn finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::usage(format!("{name} must be finite, got {v}")))
    }
}

fn pose_arg(name: &str, v: &[f64]) -> Result<Pose, Failure> {
    Ok(Pose::new(finite(name, v[0])?, finite(name, v[1])?, finite(name, v[2])?))
}

fn target(t: &Target) -> Result<Pose, Failure> {
    pose_arg("target", &[t.x, t.y, t.theta])
}

fn run_geodesic(a: &GeodesicArgs) -> Result<String, Failure> {
    let s = PendulumState::new(finite("nu0", a.nu0)?, finite("c0", a.c0)?);
    let base = match &a.base {
        Some(b) => pose_arg("base", b)?,
        None => Pose::ORIGIN,
    };
    if !(a.tmax >= 0.0) || !a.tmax.is_finite() {
        return Err(Failure::usage(format!("tmax must be a non-negative number, got {}", a.tmax)));
    }
    if a.samples < 2 {
        return Err(Failure::usage("samples must be at least 2".into()));
    }
    let g = Geodesic::new(base, s);
    let samples = g.sample_curve(a.tmax, a.samples).map_err(Failure::numerical)?;
    let mut cusps = g.cusp_times(a.tmax).unwrap_or_default();
    if g.control_u(0.0).abs() <= 1e-12 && cusps.first().is_none_or(|&t| t > 0.0) {
        cusps.insert(0, 0.0);
    }
    Ok(match a.format {
        Format::Csv => report::geodesic_csv(&samples),
        Format::Json => report::geodesic_json(&g, &samples, &cusps),
        Format::Svg => svg::geodesic(&g, &samples, &cusps),
    })
}

fn run_solve(a: &SolveArgs) -> Result<String, Failure> {
    if a.format == Format::Svg {
        return Err(Failure::usage("svg output is available for geodesic and atlas only".into()));
    }
    let q_in = match &a.from {
        Some(p) => pose_arg("from", p)?,
        None => Pose::ORIGIN,
    };
    let bp = BoundaryPair::new(q_in, target(&a.target)?, a.xi).map_err(Failure::usage_from)?;
    let solver = Solver::shared();
    let (minimizers, lift) = if a.projective {
        let p = solver.solve_pprojective(&bp).map_err(Failure::numerical)?;
        (vec![p.minimizer], Some(p.lift))
    } else {
        (solver.solve(&bp).map_err(Failure::numerical)?, None)
    };
    Ok(match a.format {
        Format::Csv => report::solve_csv(&minimizers),
        _ => report::solve_json(&bp, a.projective, lift, &minimizers),
    })
}

fn run_exists(a: &ExistsArgs) -> Result<String, Failure> {
    if a.format == Format::Svg {
        return Err(Failure::usage("svg output is available for geodesic and atlas only".into()));
    }
    let q = target(&a.target)?;
    let v = Solver::shared()
        .existence(&BoundaryPair::from_origin(q))
        .map_err(Failure::numerical)?;
    Ok(match a.format {
        Format::Csv => report::exists_csv(&v),
        _ => report::exists_json(&q, &v),
    })
}

fn run_atlas(a: &AtlasArgs) -> Result<String, Failure> {
    if !(a.radius > 0.0) || !a.radius.is_finite() {
        return Err(Failure::usage(format!("radius must be positive, got {}", a.radius)));
    }
    if a.grid == 0 {
        return Err(Failure::usage("grid must be positive".into()));
    }
    let spec = AtlasSpec { radius: a.radius, grid: a.grid };
    let exec = if a.sequential { Execution::Sequential } else { Execution::default() };
    configure_threads();
    let entries = atlas(&spec, Solver::shared(), exec);
    Ok(match a.format {
        Format::Csv => report::atlas_csv(&entries),
        Format::Json => report::atlas_json(&spec, &entries),
        Format::Svg => svg::atlas(&spec, &entries),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let message: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            let message = message.join(" ");
            return Failure::usage(message.trim_start_matches("error: ").to_string()).emit();
        }
    };
    let out = match &cli.command {
        Command::Geodesic(a) => run_geodesic(a),
        Command::Solve(a) => run_solve(a),
        Command::Exists(a) => run_exists(a),
        Command::Atlas(a) => run_atlas(a),
    };
    match out {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => f.emit(),
    }
}
