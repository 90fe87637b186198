//! `simlev`: runs the heat-equation symmetry experiments and the acceptance
//! suite, writing flat CSV or JSON tables.
//!
//! Exit codes: 0 pass, 1 acceptance failure, 2 structural error, 64 usage error.

mod commands;
mod grids;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, GeometryConfig, Report, Scenario, Shape, SymmetryConfig};
use table::Format;

const DEFAULT_SEED: u64 = 20_240_101;

#[derive(Parser, Debug)]
#[command(name = "simlev", version, about = "Heat-equation level-set symmetry experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct TimeGrid(Vec<f64>);

#[derive(Clone, Debug)]
struct FloatList(Vec<f64>);

#[derive(Clone, Debug)]
struct Degrees(Vec<usize>);

fn time_grid(s: &str) -> Result<TimeGrid, String> {
    grids::parse_time_grid(s).map(TimeGrid)
}

fn float_list(s: &str) -> Result<FloatList, String> {
    grids::parse_float_list(s).map(FloatList)
}

fn degrees(s: &str) -> Result<Degrees, String> {
    grids::parse_degrees(s).map(Degrees)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Level-sphere records of the non-radial solution, one row per time.
    Counterexample {
        /// Half-width of the mollifier support.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        a: f64,
        /// Times: comma list, or min:max:steps (geometric).
        #[arg(long, value_parser = time_grid, default_value = "10,100,1000,10000")]
        t: TimeGrid,
        /// Root tolerance for the level radius.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Funk-Hecke eigenvalues by closed form and by quadrature.
    FunkHecke {
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
        /// Degrees: `0..6`, `2` or `0,2,4`.
        #[arg(long, value_parser = degrees, default_value = "0..6")]
        k: Degrees,
        #[arg(long = "L", value_parser = float_list, default_value = "0.5,1,2", allow_hyphen_values = true)]
        l: FloatList,
        /// Bound on the relative eigenrelation residual.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Bound on the relative gap between the two eigenvalue routes.
        #[arg(long, default_value_t = 1e-10)]
        diff_tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Built-in symmetry scenarios: condition (C) reports and moment detectors.
    Symmetry {
        #[arg(value_enum)]
        scenario: Scenario,
        /// Times t_n (default depends on the scenario).
        #[arg(long, value_parser = time_grid)]
        t: Option<TimeGrid>,
        /// Boundary point of the 1-D scenarios, also the moment weight e^{by/2}.
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        /// Perturbation size of perturbed-3d.
        #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
        eps: f64,
        /// Relative tolerance (default 1e-12 in 1-D, 1e-10 in 3-D).
        #[arg(long)]
        tol: Option<f64>,
        /// Sphere samples for condition (C) in 3-D.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Seed of the random rotations.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Normal-alignment test on sampled boundaries.
    Geometry {
        #[arg(value_enum)]
        shape: Shape,
        /// Radius of circle and sphere.
        #[arg(long = "R", default_value_t = 1.0, allow_hyphen_values = true)]
        radius: f64,
        /// Semi-axes of ellipse (A,B) or ellipsoid (A,B,C).
        #[arg(long, value_parser = float_list, allow_hyphen_values = true)]
        axes: Option<FloatList>,
        /// Tilt angle applied to every normal.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Runs the acceptance suite and prints a pass/fail line per criterion.
    VerifyAll {
        /// Print the suite without running it.
        #[arg(long)]
        list: bool,
        /// Multiplies every upper-bound tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn run(command: Command) -> Result<i32, CliError> {
    let (report, output) = match command {
        Command::Counterexample { a, t, tol, output } => (commands::counterexample(a, &t.0, tol)?, output),
        Command::FunkHecke { n, k, l, tol, diff_tol, output } => {
            (commands::funk_hecke(n, &k.0, &l.0, tol, diff_tol)?, output)
        }
        Command::Symmetry { scenario, t, b, eps, tol, samples, seed, output } => {
            let times = match t {
                Some(t) => t.0,
                None => grids::parse_time_grid(scenario.default_times()).expect("built-in grid"),
            };
            let cfg = SymmetryConfig {
                scenario,
                times,
                b,
                eps,
                tol: tol.unwrap_or(scenario.default_tol()),
                samples,
                seed,
            };
            (commands::symmetry(&cfg)?, output)
        }
        Command::Geometry { shape, radius, axes, noise, samples, tol, seed, output } => {
            let cfg = GeometryConfig {
                shape,
                radius,
                axes: axes.map(|a| a.0),
                noise,
                samples,
                tol,
                seed,
            };
            (commands::geometry(&cfg)?, output)
        }
        Command::VerifyAll { list: true, output, .. } => {
            emit(&commands::list_suite(), &output)?;
            return Ok(0);
        }
        Command::VerifyAll { tol_scale, seed, output, .. } => {
            let report = commands::verify_all(tol_scale, seed, |l| println!("{l}"))?;
            eprintln!("{}", report.summary);
            if output.out.is_some() {
                emit(&report.table, &output)?;
            }
            return Ok(report.exit_code());
        }
    };
    finish(report, &output)
}

fn finish(report: Report, output: &Output) -> Result<i32, CliError> {
    emit(&report.table, output)?;
    eprintln!("{}", report.summary);
    Ok(report.exit_code())
}

/// A closed downstream pipe (`simlev … | head`) is not an error.
fn emit(table: &table::Table, output: &Output) -> Result<(), CliError> {
    match table.emit(output.format, output.out.as_deref()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("simlev: {e}");
            match e {
                CliError::Usage(_) => 64,
                CliError::Structural(_) | CliError::Io(_) => 2,
            }
        }
    };
    ExitCode::from(code as u8)
}
