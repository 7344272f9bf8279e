//! `osculate`: verify nesting theorems, run counting scans, and draw figure
//! presets.
//!
//! Exit codes: 0 pass, 1 usage or input error, 2 hypothesis violated,
//! 3 hypothesis held but the check failed.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "osculate", version, about = "Osculating families of plane curves and functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample an osculating family and check pairwise disjointness or
    /// nesting; writes a JSON report.
    Verify {
        #[arg(value_enum)]
        theorem: Theorem,
        #[command(flatten)]
        opts: Opts,
    },
    /// Count vertices, sextactic points, Schwarzian zeros or derivative
    /// zeros; writes one CSV row per instance.
    Scan {
        #[arg(value_enum)]
        kind: ScanKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Render a figure preset to SVG after verifying its family.
    Figure {
        /// One of spiral_circles, ellipse_evolute, taylor_even, taylor_odd,
        /// spiral_conics, spiral_cubic_ovals.
        preset: String,
        /// Output path; defaults to `<preset>.svg`.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Run every verification and scan with default inputs; writes a JSON
    /// summary.
    Report {
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// JSON input: a curve for tait_kneser, conics, cubic_ovals, vertices
    /// and sextactic; a function spec for taylor_even, taylor_odd, moebius
    /// and derivative_zeros; a circle diffeomorphism for schwarzian_zeros.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Sampled family members, or batch size for scans.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed for every random batch.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance for the evolute string identity (tait_kneser only).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Contour grid cells per axis (cubic_ovals) or scan grid size.
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
pub enum Theorem {
    TaitKneser,
    TaylorEven,
    TaylorOdd,
    Conics,
    Moebius,
    CubicOvals,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
pub enum ScanKind {
    Vertices,
    Sextactic,
    SchwarzianZeros,
    DerivativeZeros,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli.command) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
