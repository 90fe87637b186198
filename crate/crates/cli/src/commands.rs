use std::f64::consts::E;
use std::fmt;
use std::io;

use rayon::prelude::*;
use simlev_core::acceptance::{criteria, perturbed_bump, run_criterion, SuiteConfig};
use simlev_core::counterexample::{level_sphere_record, Counterexample};
use simlev_core::heat::fixtures::bump;
use simlev_core::heat::{solve_1d, solve_nd, InitialDataND, InitialProfile1D};
use simlev_core::linalg::rotation_catalog;
use simlev_core::special::{funk_hecke_eigenvalue, MAX_HARMONIC_DEGREE};
use simlev_core::symmetry::{
    check_condition_c, ellipse_samples, ellipsoid_samples, moment_1d, normal_alignment_test, perturb_normals,
    sphere_samples, spherical_moment_coefficients, BoundarySample, BoundaryScaling, ConstancyReport, TimeSequence,
};

use crate::table::{Cell, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Structural(String),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Structural(m) => write!(f, "error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<simlev_core::Error> for CliError {
    fn from(e: simlev_core::Error) -> Self {
        use simlev_core::Error as E;
        match e.root() {
            E::InvalidInput(_) | E::UnsupportedDimension(_) => CliError::Usage(e.to_string()),
            _ => CliError::Structural(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// What a command produced and how it judged it.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub pass: bool,
    /// Some row could not be computed; takes precedence over `pass`.
    pub structural: bool,
    pub summary: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.structural {
            2
        } else if self.pass {
            0
        } else {
            1
        }
    }
}

pub const COUNTEREXAMPLE_COLUMNS: [&str; 16] = [
    "t",
    "r2",
    "r3",
    "r4",
    "r",
    "lower",
    "upper",
    "f_residual",
    "sphere_spread",
    "nonradial_gap",
    "heat_residual",
    "bracket_width",
    "spread_bound",
    "multiple_roots",
    "status",
    "detail",
];

pub fn counterexample(a: f64, times: &[f64], tol: f64) -> Result<Report, CliError> {
    if !(a > 0.0) {
        return usage(format!("--a must be positive, got {a}"));
    }
    if !(tol > 0.0) {
        return usage(format!("--tol must be positive, got {tol}"));
    }
    let ce = Counterexample::standard(a)?;
    let records: Vec<_> = times.par_iter().map(|&t| level_sphere_record(&ce, t, tol)).collect();

    let mut table = Table::new(&COUNTEREXAMPLE_COLUMNS);
    let (mut failed, mut broken) = (0, 0);
    for (&t, rec) in times.iter().zip(records) {
        match rec {
            Ok(rec) => {
                let violations = rec.violations(a);
                let ok = violations.is_empty();
                failed += usize::from(!ok);
                table.push(vec![
                    rec.t.into(),
                    rec.r2.into(),
                    rec.r3.into(),
                    rec.r4.into(),
                    rec.r.into(),
                    rec.lower.into(),
                    rec.upper.into(),
                    rec.f_residual.into(),
                    rec.sphere_spread.into(),
                    rec.nonradial_gap.into(),
                    rec.heat_residual.into(),
                    rec.bracket_width.into(),
                    rec.spread_bound.into(),
                    rec.multiple_roots.into(),
                    if ok { "pass" } else { "fail" }.into(),
                    violations.join("; ").into(),
                ]);
            }
            Err(e) => {
                broken += 1;
                let status = match e.root() {
                    simlev_core::Error::Structure { .. } => "structure-error",
                    _ => "error",
                };
                let mut row = vec![Cell::from(t)];
                row.resize(COUNTEREXAMPLE_COLUMNS.len() - 2, Cell::Missing);
                row.push(status.into());
                row.push(e.to_string().into());
                table.push(row);
            }
        }
    }
    Ok(Report {
        summary: format!(
            "counterexample a = {a}: {} times, {failed} with violations, {broken} not computable",
            times.len()
        ),
        table,
        pass: failed == 0,
        structural: broken > 0,
    })
}

pub const FUNK_HECKE_COLUMNS: [&str; 8] =
    ["k", "N", "L", "lambda_closed", "lambda_direct", "rel_diff", "eigen_residual", "pass"];

pub fn funk_hecke(n: usize, degrees: &[usize], ls: &[f64], tol: f64, diff_tol: f64) -> Result<Report, CliError> {
    if !(n == 2 || n == 3) {
        return usage(format!("--N must be 2 or 3, got {n}"));
    }
    if let Some(k) = degrees.iter().find(|&&k| k > MAX_HARMONIC_DEGREE) {
        return usage(format!("degree {k} exceeds the supported maximum {MAX_HARMONIC_DEGREE}"));
    }
    if ls.iter().any(|&l| l == 0.0) {
        return usage("--L must be nonzero");
    }
    if !(tol > 0.0 && diff_tol > 0.0) {
        return usage("tolerances must be positive");
    }
    let cases: Vec<(usize, f64)> = degrees.iter().flat_map(|&k| ls.iter().map(move |&l| (k, l))).collect();
    let recs = cases
        .par_iter()
        .map(|&(k, l)| funk_hecke_eigenvalue(k, n, l))
        .collect::<simlev_core::Result<Vec<_>>>()?;

    let mut table = Table::new(&FUNK_HECKE_COLUMNS);
    let mut failed = 0;
    for r in &recs {
        let ok = r.eigen_residual <= tol && r.rel_diff() <= diff_tol;
        failed += usize::from(!ok);
        table.push(vec![
            r.k.into(),
            r.n.into(),
            r.l.into(),
            r.lambda_closed.into(),
            r.lambda_direct.into(),
            r.rel_diff().into(),
            r.eigen_residual.into(),
            ok.into(),
        ]);
    }
    Ok(Report {
        summary: format!("funk-hecke N = {n}: {} cases, {failed} outside tolerance", recs.len()),
        table,
        pass: failed == 0,
        structural: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    /// Even bump in one dimension.
    #[value(name = "radial-1d")]
    Radial1d,
    /// Bump shifted off the origin in one dimension.
    #[value(name = "asymmetric-1d")]
    Asymmetric1d,
    /// Radial bump on the unit ball in three dimensions.
    #[value(name = "radial-3d")]
    Radial3d,
    /// Radial bump times `1 + ε y₁`.
    #[value(name = "perturbed-3d")]
    Perturbed3d,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Radial1d => "radial-1d",
            Scenario::Asymmetric1d => "asymmetric-1d",
            Scenario::Radial3d => "radial-3d",
            Scenario::Perturbed3d => "perturbed-3d",
        }
    }

    pub fn expects_symmetric(self) -> bool {
        matches!(self, Scenario::Radial1d | Scenario::Radial3d)
    }

    pub fn default_times(self) -> &'static str {
        match self {
            Scenario::Radial1d | Scenario::Asymmetric1d => "1:1024:11",
            Scenario::Radial3d | Scenario::Perturbed3d => "0.25:4:5",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Scenario::Radial1d | Scenario::Asymmetric1d => 1e-12,
            Scenario::Radial3d | Scenario::Perturbed3d => 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymmetryConfig {
    pub scenario: Scenario,
    pub times: Vec<f64>,
    pub b: f64,
    pub eps: f64,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
}

pub const SYMMETRY_COLUMNS: [&str; 13] = [
    "scenario",
    "kind",
    "n",
    "t",
    "rotation",
    "radius",
    "degree",
    "variant",
    "value",
    "error",
    "mean",
    "threshold",
    "flag",
];

/// A 1-D moment is taken as evidence of asymmetry once it exceeds this
/// multiple of its own quadrature error bound.
const MOMENT_SIGNAL_RATIO: f64 = 100.0;
/// Radii, relative to the support radius, of the spheres compared by the 3-D detector.
const MOMENT_RADII: [f64; 3] = [0.25, 0.5, 0.75];
const DETECTOR_DEGREE: usize = 4;

pub fn symmetry(cfg: &SymmetryConfig) -> Result<Report, CliError> {
    if !(cfg.tol > 0.0) {
        return usage("--tol must be positive");
    }
    if cfg.samples == 0 {
        return usage("--samples must be positive");
    }
    let times = TimeSequence::from_values(cfg.times.clone())?;
    let name = cfg.scenario.name();
    let mut table = Table::new(&SYMMETRY_COLUMNS);
    let row = |kind: &str| {
        let mut r = vec![Cell::from(name), Cell::from(kind)];
        r.resize(SYMMETRY_COLUMNS.len(), Cell::Missing);
        r
    };
    let mut flagged = false;
    let push_constancy = |table: &mut Table, reports: &[ConstancyReport]| {
        for (n, c) in reports.iter().enumerate() {
            let mut r = row("condition-c");
            r[2] = (n + 1).into();
            r[3] = c.t.into();
            r[8] = c.spread.into();
            r[10] = c.mean.into();
            r[11] = c.threshold.into();
            r[12] = (!c.pass).into();
            table.push(r);
        }
        reports.iter().any(|c| !c.pass)
    };

    match cfg.scenario {
        Scenario::Radial1d | Scenario::Asymmetric1d => {
            if !(cfg.b > 1.5) {
                return usage(format!("--b must exceed the support half-width 1.5, got {}", cfg.b));
            }
            let v0 = if cfg.scenario == Scenario::Radial1d {
                InitialProfile1D::new(1.0, E.recip(), |y| bump(y, 1.0))?.even()
            } else {
                InitialProfile1D::new(1.5, E.recip(), |y| bump(y - 0.5, 1.0))?
            };
            let boundary = vec![
                BoundarySample::new(vec![-cfg.b], vec![-1.0], vec![])?,
                BoundarySample::new(vec![cfg.b], vec![1.0], vec![])?,
            ];
            let reports = check_condition_c(
                |x, t| solve_1d(&v0, x[0], t),
                &boundary,
                &times,
                &BoundaryScaling::Linear,
                cfg.tol,
                v0.sup_bound(),
            )?;
            flagged |= push_constancy(&mut table, &reports);

            let odd = v0.antisymmetric_part();
            let moments = times
                .values()
                .par_iter()
                .map(|&t| moment_1d(&odd, cfg.b, t))
                .collect::<simlev_core::Result<Vec<_>>>()?;
            for (n, (&t, m)) in times.values().iter().zip(&moments).enumerate() {
                let mut r = row("moment");
                r[2] = (n + 1).into();
                r[3] = t.into();
                r[8] = m.value.into();
                r[9] = m.error.into();
                r[11] = (MOMENT_SIGNAL_RATIO * m.error).into();
                let fires = m.value != 0.0 && m.value.abs() > MOMENT_SIGNAL_RATIO * m.error;
                flagged |= fires;
                r[12] = fires.into();
                table.push(r);
            }
        }
        Scenario::Radial3d | Scenario::Perturbed3d => {
            let eps = if cfg.scenario == Scenario::Radial3d { 0.0 } else { cfg.eps };
            if !eps.is_finite() || eps.abs() >= 1.0 {
                return usage(format!("--eps must lie in (-1, 1), got {eps}"));
            }
            let g = perturbed_bump(eps)?;
            let scale = g.sup_bound();
            let boundary = sphere_samples(1.0, cfg.samples)?;
            let reports = check_condition_c(
                |x, t| solve_nd(&g, x, t),
                &boundary,
                &times,
                &BoundaryScaling::Linear,
                cfg.tol,
                scale,
            )?;
            flagged |= push_constancy(&mut table, &reports);
            flagged |= harmonic_rows(&mut table, &g, cfg, &row)?;
        }
    }

    let detected_symmetric = !flagged;
    let expected = cfg.scenario.expects_symmetric();
    let verdict = |s: bool| if s { "symmetric" } else { "asymmetric" };
    Ok(Report {
        summary: format!(
            "symmetry {name}: expected {}, detected {}",
            verdict(expected),
            verdict(detected_symmetric)
        ),
        table,
        pass: expected == detected_symmetric,
        structural: false,
    })
}

fn harmonic_rows(
    table: &mut Table,
    g: &InitialDataND,
    cfg: &SymmetryConfig,
    row: &dyn Fn(&str) -> Vec<Cell>,
) -> Result<bool, CliError> {
    let rotations = rotation_catalog(cfg.seed);
    let big_r = g.support_radius();
    let jobs: Vec<(usize, f64)> = (0..rotations.len())
        .flat_map(|i| MOMENT_RADII.map(|r| (i, r * big_r)))
        .collect();
    let coeffs = jobs
        .par_iter()
        .map(|&(i, r)| spherical_moment_coefficients(g, &rotations[i], r, big_r, DETECTOR_DEGREE))
        .collect::<simlev_core::Result<Vec<_>>>()?;
    let threshold = cfg.tol * g.sup_bound();
    let mut flagged = false;
    for (&(i, radius), cs) in jobs.iter().zip(&coeffs) {
        for c in cs {
            let mut r = row("harmonic");
            r[4] = rotations[i].label().into();
            r[5] = radius.into();
            r[6] = c.degree.into();
            r[7] = c.variant.into();
            r[8] = c.value.into();
            r[11] = threshold.into();
            r[12] = (c.value.abs() > threshold).into();
            flagged |= c.value.abs() > threshold;
            table.push(r);
        }
    }
    Ok(flagged)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Shape {
    Circle,
    Ellipse,
    Sphere,
    Ellipsoid,
}

#[derive(Debug, Clone)]
pub struct GeometryConfig {
    pub shape: Shape,
    pub radius: f64,
    pub axes: Option<Vec<f64>>,
    pub noise: f64,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

pub const GEOMETRY_COLUMNS: [&str; 11] = [
    "shape",
    "dimension",
    "samples",
    "axes",
    "noise",
    "max_misalignment",
    "radius_spread",
    "tol",
    "aligned",
    "expected_aligned",
    "pass",
];

pub fn geometry(cfg: &GeometryConfig) -> Result<Report, CliError> {
    let axes = match (cfg.shape, &cfg.axes) {
        (Shape::Circle, None) => vec![cfg.radius; 2],
        (Shape::Sphere, None) => vec![cfg.radius; 3],
        (Shape::Circle | Shape::Sphere, Some(_)) => return usage("--axes applies to ellipse and ellipsoid only"),
        (Shape::Ellipse, Some(a)) if a.len() == 2 => a.clone(),
        (Shape::Ellipsoid, Some(a)) if a.len() == 3 => a.clone(),
        (Shape::Ellipse, _) => return usage("ellipse needs --axes A,B"),
        (Shape::Ellipsoid, _) => return usage("ellipsoid needs --axes A,B,C"),
    };
    if axes.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return usage(format!("degenerate shape: semi-axes {axes:?} must be positive"));
    }
    if cfg.samples == 0 {
        return usage("--samples must be positive");
    }
    if !(cfg.tol > 0.0) || !(cfg.noise >= 0.0) {
        return usage("--tol must be positive and --noise non-negative");
    }
    let exact = match axes[..] {
        [a, b] => ellipse_samples(a, b, cfg.samples)?,
        [a, b, c] => ellipsoid_samples(a, b, c, cfg.samples)?,
        _ => unreachable!(),
    };
    let boundary = if cfg.noise > 0.0 {
        perturb_normals(&exact, cfg.noise, cfg.seed)
    } else {
        exact
    };
    let report = normal_alignment_test(&boundary, cfg.tol)?;

    let (lo, hi) = axes
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let expected_aligned = hi / lo - 1.0 <= cfg.tol;
    let pass = report.aligned == expected_aligned;
    let axes_text = axes.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");

    let mut table = Table::new(&GEOMETRY_COLUMNS);
    table.push(vec![
        format!("{:?}", cfg.shape).to_lowercase().into(),
        axes.len().into(),
        cfg.samples.into(),
        axes_text.into(),
        cfg.noise.into(),
        report.max_misalignment.into(),
        report.radius_spread.into(),
        cfg.tol.into(),
        report.aligned.into(),
        expected_aligned.into(),
        pass.into(),
    ]);
    Ok(Report {
        summary: format!(
            "geometry: max misalignment {:.3e}, {} (expected {})",
            report.max_misalignment,
            if report.aligned { "aligned" } else { "misaligned" },
            if expected_aligned { "aligned" } else { "misaligned" }
        ),
        table,
        pass,
        structural: false,
    })
}

pub const SUITE_COLUMNS: [&str; 3] = ["id", "name", "budget_s"];
pub const OUTCOME_COLUMNS: [&str; 6] = ["id", "name", "pass", "elapsed_s", "budget_s", "detail"];

pub fn list_suite() -> Table {
    let mut table = Table::new(&SUITE_COLUMNS);
    for c in criteria() {
        table.push(vec![(c.id as usize).into(), c.name.into(), (c.budget.as_secs() as usize).into()]);
    }
    table
}

/// Runs every acceptance criterion, printing each outcome line as it finishes.
pub fn verify_all(tol_scale: f64, seed: u64, mut line: impl FnMut(&str)) -> Result<Report, CliError> {
    if !(tol_scale > 0.0) {
        return usage(format!("--tol-scale must be positive, got {tol_scale}"));
    }
    let cfg = SuiteConfig { tol_scale, seed };
    let mut table = Table::new(&OUTCOME_COLUMNS);
    let mut failed = 0;
    let all = criteria();
    for c in &all {
        let out = run_criterion(c, &cfg);
        line(&out.line());
        failed += usize::from(!out.pass);
        table.push(vec![
            (out.id as usize).into(),
            out.name.into(),
            out.pass.into(),
            out.elapsed.as_secs_f64().into(),
            (out.budget.as_secs() as usize).into(),
            out.detail.into(),
        ]);
    }
    Ok(Report {
        summary: format!("verify-all: {} of {} criteria passed", all.len() - failed, all.len()),
        table,
        pass: failed == 0,
        structural: false,
    })
}
