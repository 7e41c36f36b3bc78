//! `cuspidal`: invariants of cuspidal edges with boundary, singular space curves and flat
//! ruled surfaces.
//!
//! Exit status: 0 on success, 1 for i/o errors and failing harness rows, 2 for inputs that
//! do not match their schema, 3 when a mathematical precondition fails.

mod curve;
mod harness;
mod input;
mod invariants;
mod parabola;
mod ruled;
mod wire;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use cuspidal::boundary::FormulaVariant;
use cuspidal::jets::DEFAULT_ORDER;
use cuspidal::ruled::DEFAULT_STEPS;

use crate::invariants::Mode;
use crate::wire::{emit, read_json, to_csv, to_json, Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "cuspidal", version, about)]
struct Cli {
    /// Tolerance overriding the defaults of `harness` and `invariants --both`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Working jet order; polynomial inputs are zero-extended to it.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Seed of the random draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct ModeFlags {
    /// Closed forms from the normal form only.
    #[arg(long)]
    closed: bool,
    /// Numeric oracle only.
    #[arg(long)]
    numeric: bool,
    /// Both, with per-field deltas (default).
    #[arg(long)]
    both: bool,
}

impl ModeFlags {
    fn mode(&self) -> Mode {
        match (self.closed, self.numeric) {
            (true, _) => Mode::Closed,
            (_, true) => Mode::Numeric,
            _ => Mode::Both,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
enum Variant {
    /// Closed forms checked against the oracle.
    #[default]
    Verified,
    /// Closed forms in their original, unverified form.
    Verbatim,
}

impl From<Variant> for FormulaVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Verified => FormulaVariant::Verified,
            Variant::Verbatim => FormulaVariant::Verbatim,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary invariants of a germ or normal form; a JSON array gives a CSV table.
    Invariants {
        input: PathBuf,
        #[command(flatten)]
        mode: ModeFlags,
        #[arg(long, value_enum, default_value_t)]
        variant: Variant,
    },
    /// Normal-form coefficients of a germ with boundary.
    Reduce { input: PathBuf },
    /// Singular space curves.
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Curvature parabola, umbilic curvature and the points V, P.
    Parabola {
        input: PathBuf,
        /// Also draw the normal plane picture to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Flat ruled surfaces.
    #[command(subcommand)]
    Ruled(RuledCommand),
    /// Closed forms and invariances against the oracle on random draws; CSV table.
    Harness {
        #[arg(long, default_value_t = 200)]
        draws: usize,
        #[arg(long, value_enum, default_value_t)]
        variant: Variant,
    },
}

#[derive(Subcommand, Debug)]
enum CurveCommand {
    /// Class, cuspidal curvature and torsion, and the σ invariant.
    Invariants {
        input: PathBuf,
        /// Include the extrapolated limits of √|s|κ and sgn(t)√|s|τ.
        #[arg(long)]
        limits: bool,
    },
    /// Curve with given rescaled curvature and torsion, as CSV samples (t, x, y, z).
    Reconstruct {
        /// Comma-separated polynomial coefficients, or a JSON scalar function.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Parameter interval `lo,hi`, containing 0.
        #[arg(long, allow_hyphen_values = true, default_value = "-1,1")]
        span: String,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
}

#[derive(Subcommand, Debug)]
enum RuledCommand {
    /// Births of singularities and the singular set.
    Scan {
        input: PathBuf,
        /// Write the singular set to this CSV file instead of the JSON report.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
    },
    /// Triangulated surface over I × [−M, M] as Wavefront OBJ.
    Mesh {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Approximate number of rows along I.
        #[arg(long, default_value_t = 100)]
        rows: usize,
        /// Samples along each ruling.
        #[arg(long, default_value_t = 41)]
        cols: usize,
    },
}

fn origin(path: &Path) -> String {
    path.display().to_string()
}

fn run(cli: Cli) -> Outcome<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Invariants { input, mode, variant } => {
            let at = origin(&input);
            let tol = cli.tol.unwrap_or(invariants::DEFAULT_TOL);
            match read_json(&input)? {
                Value::Array(items) => {
                    let rows = invariants::batch(items, &at, cli.order, mode.mode(), variant.into(), tol)?;
                    emit(out, &to_csv(&invariants::CSV_HEADER, &rows)?)
                }
                value => {
                    let s = input::surface(value, &at, cli.order)?;
                    let r = invariants::report(&s, &at, mode.mode(), variant.into(), tol)?;
                    emit(out, &to_json(&r))
                }
            }
        }
        Command::Reduce { input } => {
            let at = origin(&input);
            let s = input::surface(read_json(&input)?, &at, cli.order)?;
            emit(out, &to_json(&invariants::reduce(&s, &at)?))
        }
        Command::Curve(CurveCommand::Invariants { input, limits }) => {
            let g = input::curve(read_json(&input)?, &origin(&input), cli.order)?;
            emit(out, &to_json(&curve::report(&g, limits)?))
        }
        Command::Curve(CurveCommand::Reconstruct { alpha, beta, span, steps }) => {
            let alpha = curve::scalar(&alpha, "--alpha")?;
            let beta = curve::scalar(&beta, "--beta")?;
            let rows = curve::reconstruct(&alpha, &beta, curve::span(&span)?, steps)?;
            emit(out, &to_csv(&curve::RECONSTRUCT_HEADER, &rows)?)
        }
        Command::Parabola { input, svg } => {
            let s = input::surface(read_json(&input)?, &origin(&input), cli.order)?;
            let r = parabola::report(&s)?;
            if let Some(path) = svg {
                emit(Some(&path), parabola::svg(&r).as_bytes())?;
            }
            emit(out, &to_json(&r))
        }
        Command::Ruled(RuledCommand::Scan { input, csv, steps }) => {
            let ruled = ruled::load(read_json(&input)?, &origin(&input))?;
            let (json, report) = ruled::scan_json(&ruled, steps, csv.is_none())?;
            if let Some(path) = csv {
                let rows = ruled::singular_rows(&report);
                emit(Some(&path), &to_csv(&ruled::SINGULAR_HEADER, &rows)?)?;
            }
            emit(out, &to_json(&json))
        }
        Command::Ruled(RuledCommand::Mesh { input, steps, rows, cols }) => {
            let ruled = ruled::load(read_json(&input)?, &origin(&input))?;
            emit(out, ruled::mesh_obj(&ruled, steps, rows, cols)?.as_bytes())
        }
        Command::Harness { draws, variant } => {
            let order = cli.order.unwrap_or(DEFAULT_ORDER);
            let rows = harness::run(cli.seed, draws, order, variant.into(), cli.tol);
            emit(out, &to_csv(&harness::HEADER, &harness::table(&rows))?)?;
            match rows.iter().filter(|r| !r.passed()).count() {
                0 => Ok(()),
                n => Err(Failure::Harness(n)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cuspidal: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
