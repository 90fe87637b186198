//! The acceptance suite: eight end-to-end checks with fixed tolerances and
//! runtime budgets. Upper-bound tolerances can be scaled (e.g. by `1e-4`)
//! to probe how much headroom each check has.

use std::f64::consts::{E, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counterexample::{find_level_radius, residual_samples, Counterexample, OFF_LEVEL_OFFSET, SPHERE_SAMPLES};
use crate::error::Result;
use crate::heat::fixtures::{bump, gaussian_evolution, truncated_gaussian_1d, truncated_gaussian_nd};
use crate::heat::{solve_1d, solve_nd, solve_radial_3d, InitialDataND, InitialProfile1D, RadialProfile};
use crate::linalg::{norm, rotation_catalog};
use crate::special::{funk_hecke_eigenvalue, funk_hecke_lambda_closed, funk_hecke_lambda_direct, MAX_HARMONIC_DEGREE};
use crate::symmetry::{
    circle_samples, ellipse_samples, max_coefficient, moment_1d, normal_alignment_test, sphere_samples,
    spherical_moment_coefficients,
};

/// Settings shared by all criteria.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Multiplies every upper-bound tolerance.
    pub tol_scale: f64,
    /// Seed for sampled points and rotations.
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { tol_scale: 1.0, seed: 20_240_101 }
    }
}

/// One acceptance criterion.
#[derive(Clone, Copy)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget: Duration,
    check: fn(&SuiteConfig) -> Result<(bool, String)>,
}

impl std::fmt::Debug for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Criterion")
            .field("id", &self.id)
            .field("name", &self.name)
            .field("budget", &self.budget)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    /// Tolerances met and runtime within budget.
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    /// `[PASS] 1 counterexample-bounds (0.41s / 20s): …`
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {} ({:.2}s / {}s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, check| Criterion {
        id,
        name,
        budget: Duration::from_secs(secs),
        check,
    };
    vec![
        c(1, "counterexample-bounds", 20, counterexample_bounds),
        c(2, "level-sphere-vs-nonradial", 60, level_sphere_vs_nonradial),
        c(3, "caloric-residual", 30, caloric_residual),
        c(4, "funk-hecke-eigenrelation", 10, funk_hecke),
        c(5, "symmetry-1d", 10, symmetry_1d),
        c(6, "moment-detector-nd", 60, moment_detector_nd),
        c(7, "geometry", 1, geometry),
        c(8, "solver-oracle", 10, solver_oracle),
    ]
}

pub fn run_criterion(c: &Criterion, cfg: &SuiteConfig) -> Outcome {
    let start = Instant::now();
    let result = (c.check)(cfg);
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_budget = elapsed <= c.budget;
    let detail = if in_budget {
        detail
    } else {
        format!("{detail}; over runtime budget")
    };
    Outcome {
        id: c.id,
        name: c.name,
        pass: ok && in_budget,
        detail,
        elapsed,
        budget: c.budget,
    }
}

/// Runs every criterion in order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<Outcome> {
    criteria().iter().map(|c| run_criterion(c, cfg)).collect()
}

const SWEEP_TIMES: [f64; 4] = [10.0, 100.0, 1000.0, 10000.0];
const ROOT_TOL: f64 = 1e-12;

fn counterexample_bounds(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let ce = Counterexample::standard(1.0)?;
    let levels = SWEEP_TIMES
        .par_iter()
        .map(|&t| find_level_radius(&ce.v0, t, ROOT_TOL * cfg.tol_scale))
        .collect::<Result<Vec<_>>>()?;
    let mut ok = true;
    let mut parts = Vec::new();
    for l in &levels {
        let b = l.brackets;
        let good = l.lower <= l.r && l.r <= l.upper && b.r3 < l.r && l.r < b.r4 && l.bracket_width <= ROOT_TOL * cfg.tol_scale;
        ok &= good;
        parts.push(format!(
            "t={:e}: {:.4} ≤ r={:.6} ≤ {:.4}, width {:.1e}",
            l.t, l.lower, l.r, l.upper, l.bracket_width
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn level_sphere_vs_nonradial(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let ce = Counterexample::standard(1.0)?;
    let rows = SWEEP_TIMES
        .par_iter()
        .map(|&t| {
            let r = find_level_radius(&ce.v0, t, ROOT_TOL)?.r;
            let on = ce.sphere_spread(r, t, SPHERE_SAMPLES)?;
            let off = ce.sphere_spread(r + OFF_LEVEL_OFFSET * t.sqrt(), t, SPHERE_SAMPLES)?;
            Ok((t, on, off))
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = 1e-4 * cfg.tol_scale;
    let ok = rows.iter().all(|&(_, on, off)| on <= limit * off);
    let worst = rows.iter().map(|&(_, on, off)| on / off).fold(0.0, f64::max);
    Ok((ok, format!("worst spread ratio {worst:.2e} (limit {limit:.0e})")))
}

fn caloric_residual(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let ce = Counterexample::standard(1.0)?;
    let samples = residual_samples(&ce, 20, 1.0, 100.0, cfg.seed)?;
    let limit = 1e-6 * cfg.tol_scale;
    let worst = samples.iter().map(|s| s.residual / s.sup_u).fold(0.0, f64::max);
    let min_ratio = samples
        .iter()
        .map(|s| s.residual / s.residual_half_step)
        .fold(f64::INFINITY, f64::min);
    let ok = worst <= limit && min_ratio >= 8.0;
    Ok((
        ok,
        format!("max residual/sup|u| {worst:.2e} (limit {limit:.0e}), min halving ratio {min_ratio:.1}"),
    ))
}

fn funk_hecke(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let cases: Vec<(usize, f64)> = (0..=MAX_HARMONIC_DEGREE)
        .flat_map(|k| [0.5, 1.0, 2.0].map(|l| (k, l)))
        .collect();
    let recs = cases
        .par_iter()
        .map(|&(k, l)| funk_hecke_eigenvalue(k, 3, l))
        .collect::<Result<Vec<_>>>()?;
    let worst_eig = recs.iter().map(|r| r.eigen_residual).fold(0.0, f64::max);
    let worst_diff = recs.iter().map(|r| r.rel_diff()).fold(0.0, f64::max);
    let want0 = 2.0 * PI * (E - 1.0 / E);
    let want1 = 4.0 * PI / E;
    let mut ref_err: f64 = 0.0;
    for f in [funk_hecke_lambda_closed, funk_hecke_lambda_direct] {
        ref_err = ref_err.max((f(0, 3, 1.0)? - want0).abs() / want0);
        ref_err = ref_err.max((f(1, 3, 1.0)? - want1).abs() / want1);
    }
    let s = cfg.tol_scale;
    let ok = worst_eig <= 1e-8 * s && worst_diff <= 1e-10 * s && ref_err <= 1e-12 * s;
    Ok((
        ok,
        format!("{} cases: eigen residual {worst_eig:.1e}, closed vs direct {worst_diff:.1e}, reference values {ref_err:.1e}", recs.len()),
    ))
}

fn symmetry_1d(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let b = 2.0;
    let even = InitialProfile1D::new(1.0, (-1f64).exp(), |y| bump(y, 1.0))?.even();
    let sup = even.sup_bound();
    let forward: Vec<f64> = (0..=20)
        .into_par_iter()
        .map(|n| {
            let t = 2f64.powi(n);
            Ok((solve_1d(&even, t * b, t)? - solve_1d(&even, -t * b, t)?).abs())
        })
        .collect::<Result<_>>()?;
    let worst = forward.into_iter().fold(0.0, f64::max);

    let shifted = InitialProfile1D::new(1.5, (-1f64).exp(), |y| bump(y - 0.5, 1.0))?;
    let v0 = shifted.antisymmetric_part();
    let mut fired_at = None;
    let mut best = 0.0f64;
    for n in 0..=10 {
        let m = moment_1d(&v0, b, 2f64.powi(n))?;
        let ratio = m.value.abs() / m.error.max(f64::MIN_POSITIVE);
        best = best.max(ratio);
        if ratio > 100.0 && fired_at.is_none() {
            fired_at = Some(n);
        }
    }
    let ok = worst <= 1e-12 * cfg.tol_scale * sup && fired_at.is_some();
    Ok((
        ok,
        format!(
            "even: max |u(t b) - u(-t b)| {worst:.1e} (limit {:.1e}); shifted: detector fires at n = {}, best |moment|/error {best:.1e}",
            1e-12 * cfg.tol_scale * sup,
            fired_at.map_or("none".into(), |n| n.to_string())
        ),
    ))
}

/// Radii at which spherical moments are taken, for support radius 1.
const MOMENT_RADII: [f64; 3] = [0.25, 0.5, 0.75];

fn detector_max(g: &InitialDataND, seed: u64) -> Result<f64> {
    let rots = rotation_catalog(seed);
    let jobs: Vec<(usize, f64)> = (0..rots.len())
        .flat_map(|i| MOMENT_RADII.map(|r| (i, r)))
        .collect();
    let vals = jobs
        .par_iter()
        .map(|&(i, r)| spherical_moment_coefficients(g, &rots[i], r, 1.0, 4).map(|c| max_coefficient(&c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// `bump(|y|)·(1 + ε y₁)` on the unit ball.
pub fn perturbed_bump(eps: f64) -> Result<InitialDataND> {
    let sup = (-1f64).exp() * (1.0 + eps.abs());
    Ok(InitialDataND::new(3, 1.0, sup, move |y| bump(norm(y), 1.0) * (1.0 + eps * y[0]))?.with_feature_length(0.5))
}

fn moment_detector_nd(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let radial = perturbed_bump(0.0)?;
    let sup = radial.sup_bound();
    let flat = detector_max(&radial, cfg.seed)?;
    let big = detector_max(&perturbed_bump(1e-2)?, cfg.seed)?;
    let small = detector_max(&perturbed_bump(1e-3)?, cfg.seed)?;
    let ratio = big / small;
    let ok = flat <= 1e-10 * cfg.tol_scale * sup && big >= 1e-4 * sup && (ratio - 10.0).abs() <= 1.0;
    Ok((
        ok,
        format!(
            "radial max coefficient {:.1e}·sup g; ε=1e-2: {:.2e}·sup g; ε ratio {ratio:.4}",
            flat / sup,
            big / sup
        ),
    ))
}

fn geometry(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let tol = 1e-12 * cfg.tol_scale;
    let circle = normal_alignment_test(&circle_samples(1.0, 200)?, tol)?;
    let sphere = normal_alignment_test(&sphere_samples(1.0, 200)?, tol)?;
    let ellipse = normal_alignment_test(&ellipse_samples(2.0, 1.0, 200)?, tol)?;
    let ok = circle.aligned
        && sphere.aligned
        && circle.radius_spread <= tol
        && sphere.radius_spread <= tol
        && ellipse.max_misalignment >= 0.3;
    Ok((
        ok,
        format!(
            "circle {:.1e}/{:.1e}, sphere {:.1e}/{:.1e} (misalignment/radius spread), ellipse misalignment {:.4}",
            circle.max_misalignment, circle.radius_spread, sphere.max_misalignment, sphere.radius_spread, ellipse.max_misalignment
        ),
    ))
}

fn solver_oracle(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let s0 = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points: Vec<([f64; 3], f64)> = (0..10)
        .map(|_| {
            let t = 0.1 + 4.9 * rng.gen::<f64>();
            let reach = 2.0 * (s0 + t).sqrt();
            let x = [0, 1, 2].map(|_| reach * (2.0 * rng.gen::<f64>() - 1.0) / 3f64.sqrt());
            (x, t)
        })
        .collect();
    let g1 = truncated_gaussian_1d(s0);
    let g3 = truncated_gaussian_nd(3, s0);
    let psi = RadialProfile::new(g3.support_radius(), move |rho| (-rho * rho / (4.0 * s0)).exp())?;
    let errs = points
        .par_iter()
        .map(|(x, t)| {
            let e1 = gaussian_evolution(1, s0, &x[..1], *t);
            let e3 = gaussian_evolution(3, s0, x, *t);
            let direct = solve_nd(&g3, x, *t)?;
            let radial = solve_radial_3d(&psi, norm(x), *t)?;
            Ok([
                (solve_1d(&g1, x[0], *t)? - e1).abs() / e1,
                (direct - e3).abs() / e3,
                (radial - direct).abs() / direct.abs(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = |i: usize| errs.iter().map(|e| e[i]).fold(0.0, f64::max);
    let limit = 1e-10 * cfg.tol_scale;
    let ok = (0..3).all(|i| worst(i) <= limit);
    Ok((
        ok,
        format!(
            "max relative error 1-D {:.1e}, 3-D {:.1e}, radial vs direct {:.1e} (limit {limit:.0e})",
            worst(0),
            worst(1),
            worst(2)
        ),
    ))
}
