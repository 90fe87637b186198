//! A non-radial caloric function in ℝ³ whose level sets at radius `r(t)` are spheres.
//!
//! With `v` the heat evolution of an even mollifier `v₀` on `[-a, a]` and
//! `w = ∂³v/∂s³`, the function `f(r,t) = ∂/∂r (w(r,t)/r)` gives
//! `u(x,t) = u_rad(|x|,t) + f(|x|,t)·x₁/|x|`, where `u_rad` evolves a radial
//! bump `ψ`. The second term is `∂/∂x₁` of the radial caloric function
//! `w(|x|,t)/|x|`, so `u` solves the heat equation, and on `|x| = r(t)`
//! with `f(r(t),t) = 0` it equals `u_rad(r(t),t)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::heat::{d3v_ds3, d4v_ds4, dnv_dsn, solve_radial_3d, InitialProfile1D, RadialProfile};
use crate::linalg::norm;
use crate::numerics::{default_steps, fd_heat_residual, refine_root, sign_scan, Bracket};
use crate::symmetry::{check_condition_c, sphere_samples, BoundaryScaling, ConstancyReport, TimeSequence};

/// Below `SERIES_SWITCH·√t` the quotient defining `f` is replaced by its Taylor series.
const SERIES_SWITCH: f64 = 1e-2;
/// Grid points for the bracket scan.
const SCAN_POINTS: usize = 400;
/// Grid points for the root scan of `f` between `r3` and `r4`.
const LEVEL_SCAN_POINTS: usize = 64;
/// Samples on each sphere used for spreads.
pub const SPHERE_SAMPLES: usize = 200;
/// Off-level radius offset in units of `√t`.
pub const OFF_LEVEL_OFFSET: f64 = 0.05;

/// The even bump `exp(-1/(a² - s²))` on `(-a, a)`.
#[derive(Debug, Clone)]
pub struct MollifierProfile {
    a: f64,
    profile: InitialProfile1D,
}

pub fn build_mollifier(a: f64) -> Result<MollifierProfile> {
    if !(a > 0.0) || !a.is_finite() {
        return invalid(format!("mollifier half-width must be positive, got {a}"));
    }
    let a2 = a * a;
    let profile = InitialProfile1D::new(a, (-1.0 / a2).exp(), move |s| {
        let d = a2 - s * s;
        if d <= 0.0 {
            0.0
        } else {
            (-1.0 / d).exp()
        }
    })?
    .even();
    Ok(MollifierProfile { a, profile })
}

impl MollifierProfile {
    pub fn half_width(&self) -> f64 {
        self.a
    }

    pub fn evaluate(&self, s: f64) -> f64 {
        self.profile.evaluate(s)
    }

    /// `v₀'(s) = -2s v₀(s) / (a² - s²)²`.
    pub fn derivative(&self, s: f64) -> f64 {
        let d = self.a * self.a - s * s;
        if d <= 0.0 {
            0.0
        } else {
            -2.0 * s * self.evaluate(s) / (d * d)
        }
    }

    pub fn profile(&self) -> &InitialProfile1D {
        &self.profile
    }

    /// Support, evenness on a 100-point grid and `v₀' < 0` on `(0, a)`.
    pub fn check_invariants(&self) -> Result<()> {
        let a = self.a;
        if self.evaluate(a) != 0.0 || self.evaluate(-a) != 0.0 || self.evaluate(1.5 * a) != 0.0 {
            return invalid("mollifier nonzero on or outside its support boundary");
        }
        for i in 0..100 {
            let s = -a + 2.0 * a * (i as f64 + 0.5) / 100.0;
            if self.evaluate(s) != self.evaluate(-s) {
                return invalid(format!("mollifier not even at {s}"));
            }
        }
        for i in 1..1000 {
            let s = a * i as f64 / 1000.0;
            // the analytic derivative underflows to zero next to the endpoint
            if self.evaluate(s) > 0.0 && !(self.derivative(s) < 0.0) {
                return invalid(format!("mollifier not strictly decreasing at {s}"));
            }
        }
        Ok(())
    }
}

fn check_rt(r: f64, t: f64) -> Result<()> {
    if !(t > 0.0) {
        return invalid(format!("time must be positive, got {t}"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return invalid(format!("radius must be positive, got {r}"));
    }
    Ok(())
}

/// `f(r,t) = (r ∂⁴v - ∂³v) / r²`.
///
/// For `r < 1e-2·√t` the odd expansion `w = Σ ∂^{2j+4}v(0,t) r^{2j+1}/(2j+1)!`
/// gives `f ≈ ∂⁶v(0)·r/3 + ∂⁸v(0)·r³/30 + ∂¹⁰v(0)·r⁵/840`.
pub fn f_level(v0: &MollifierProfile, r: f64, t: f64) -> Result<f64> {
    check_rt(r, t)?;
    if r < SERIES_SWITCH * t.sqrt() {
        let p = &v0.profile;
        let c6 = dnv_dsn(p, 6, 0.0, t)?;
        let c8 = dnv_dsn(p, 8, 0.0, t)?;
        let c10 = dnv_dsn(p, 10, 0.0, t)?;
        let r2 = r * r;
        return Ok(r * (c6 / 3.0 + r2 * (c8 / 30.0 + r2 * c10 / 840.0)));
    }
    let w = d3v_ds3(&v0.profile, r, t)?;
    let dw = d4v_ds4(&v0.profile, r, t)?;
    Ok((r * dw - w) / (r * r))
}

/// Zeros of `∂³v` and `∂⁴v` framing the level radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Brackets {
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
}

fn scan_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn structure(t: f64, detail: impl Into<String>) -> Error {
    Error::Structure { t, detail: detail.into() }
}

fn trace(brackets: &[Bracket]) -> String {
    let parts: Vec<String> = brackets
        .iter()
        .map(|b| format!("[{:.6}, {:.6}] {}→{}", b.lo, b.hi, sign(b.f_lo), sign(b.f_hi)))
        .collect();
    if parts.is_empty() {
        "no sign changes".into()
    } else {
        parts.join(", ")
    }
}

fn sign(x: f64) -> char {
    if x < 0.0 {
        '-'
    } else {
        '+'
    }
}

/// Root-finding tolerance for the bracket radii.
const BRACKET_TOL: f64 = 1e-12;

/// Scans `[0.1·√t, 2a + √(12t)]` on 400 points. `r3` is the largest zero of
/// `∂³v` (negative beyond), `r4` the largest zero of `∂⁴v` (positive
/// beyond) and `r2` the zero of `∂⁴v` where it last turns negative before `r4`.
pub fn find_brackets(v0: &MollifierProfile, t: f64) -> Result<Brackets> {
    if !(t > 0.0) {
        return invalid(format!("time must be positive, got {t}"));
    }
    let a = v0.a;
    let grid = scan_grid(0.1 * t.sqrt(), 2.0 * a + (12.0 * t).sqrt(), SCAN_POINTS);
    let p = &v0.profile;
    let eval = |order: usize, s: f64| match order {
        3 => d3v_ds3(p, s, t),
        _ => d4v_ds4(p, s, t),
    };
    let values = |order: usize| -> Result<Vec<f64>> { grid.par_iter().map(|&s| eval(order, s)).collect() };
    let (d3, d4) = (values(3)?, values(4)?);
    let lookup = |vals: &[f64]| {
        let (grid, vals) = (grid.clone(), vals.to_vec());
        move |s: f64| {
            grid.iter()
                .position(|&g| g == s)
                .map(|i| vals[i])
                .unwrap_or(f64::NAN)
        }
    };
    let b3 = sign_scan(lookup(&d3), &grid)?;
    let b4 = sign_scan(lookup(&d4), &grid)?;

    let last3 = b3
        .last()
        .filter(|b| b.f_lo > 0.0 && b.f_hi < 0.0)
        .ok_or_else(|| structure(t, format!("∂³v: {}", trace(&b3))))?;
    let i4 = b4
        .iter()
        .rposition(|b| b.f_lo < 0.0 && b.f_hi > 0.0)
        .filter(|&i| i == b4.len() - 1)
        .ok_or_else(|| structure(t, format!("∂⁴v (r4): {}", trace(&b4))))?;
    let i2 = b4[..i4]
        .iter()
        .rposition(|b| b.f_lo > 0.0 && b.f_hi < 0.0)
        .ok_or_else(|| structure(t, format!("∂⁴v (r2): {}", trace(&b4))))?;

    let r3 = refine_root(|s| eval(3, s).unwrap_or(f64::NAN), *last3, BRACKET_TOL)?.x;
    let r4 = refine_root(|s| eval(4, s).unwrap_or(f64::NAN), b4[i4], BRACKET_TOL)?.x;
    let r2 = refine_root(|s| eval(4, s).unwrap_or(f64::NAN), b4[i2], BRACKET_TOL)?.x;
    if !(r2 < r3 && r3 < r4) {
        return Err(structure(t, format!("expected r2 < r3 < r4, got {r2}, {r3}, {r4}")));
    }
    Ok(Brackets { r2, r3, r4 })
}

/// The level radius with its brackets and the analytic bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRadius {
    pub t: f64,
    pub brackets: Brackets,
    pub r: f64,
    /// `√(5t) - a`
    pub lower: f64,
    /// `a + √(12t)`
    pub upper: f64,
    pub f_residual: f64,
    /// Width of the final root bracket.
    pub bracket_width: f64,
    /// `max |f|` over the scan of `(r3, r4)`.
    pub f_scale: f64,
    /// More than one sign change of `f` in `(r3, r4)`; the largest root is kept.
    pub multiple_roots: bool,
}

/// Refines the zero of `f(·, t)` inside `(r3, r4)` to bracket width `tol`.
pub fn find_level_radius(v0: &MollifierProfile, t: f64, tol: f64) -> Result<LevelRadius> {
    if !(tol > 0.0) {
        return invalid("root tolerance must be positive");
    }
    let brackets = find_brackets(v0, t)?;
    let grid = scan_grid(brackets.r3, brackets.r4, LEVEL_SCAN_POINTS);
    let values: Vec<f64> = grid.par_iter().map(|&r| f_level(v0, r, t)).collect::<Result<_>>()?;
    let f_scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let lookup = |r: f64| grid.iter().position(|&g| g == r).map(|i| values[i]).unwrap_or(f64::NAN);
    let found = sign_scan(lookup, &grid)?;
    let last = found
        .last()
        .ok_or_else(|| structure(t, format!("f has no sign change on ({}, {})", brackets.r3, brackets.r4)))?;
    let root = refine_root(|r| f_level(v0, r, t).unwrap_or(f64::NAN), *last, tol)?;
    let a = v0.a;
    Ok(LevelRadius {
        t,
        brackets,
        r: root.x,
        lower: (5.0 * t).sqrt() - a,
        upper: a + (12.0 * t).sqrt(),
        f_residual: root.f_x.abs(),
        bracket_width: root.width(),
        f_scale,
        multiple_roots: found.len() > 1,
    })
}

/// The radial part `ψ` together with the data it was built from.
#[derive(Debug, Clone)]
pub struct PsiProfile {
    pub radial: RadialProfile,
    /// `ψ(0)`
    pub amplitude: f64,
    pub support: f64,
    /// Time standing in for `t = 0` when evaluating `f(·, 0⁺)`.
    pub epsilon: f64,
    /// `max_{0<r≤a} |f(r, ε)|` on the sampling grid.
    pub f_sup: f64,
}

/// Points used to bound `|f(·, ε)|` on `(0, a]`.
const PSI_GRID: usize = 400;

/// `ψ(ρ) = A·exp(1 - 1/(1 - (ρ/(a+margin))²))` with `A` large enough that
/// `ψ(ρ) ≥ 1.5·|f(ρ, ε)|` on the sampling grid of `(0, a]` and
/// `A ≥ (1 + margin)·max|f(·, ε)|`, where `ε = 1e-6·a²` stands in for `t = 0`.
pub fn build_psi(v0: &MollifierProfile, margin: f64) -> Result<PsiProfile> {
    if !(margin > 0.0) || !margin.is_finite() {
        return invalid(format!("margin must be positive, got {margin}"));
    }
    let a = v0.a;
    let support = a + margin;
    let epsilon = 1e-6 * a * a;
    let shape = move |rho: f64| {
        let q = rho / support;
        if q.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - q * q)).exp()
        }
    };
    let grid: Vec<f64> = (1..=PSI_GRID).map(|i| a * i as f64 / PSI_GRID as f64).collect();
    let fs: Vec<f64> = grid.par_iter().map(|&r| f_level(v0, r, epsilon)).collect::<Result<_>>()?;
    let f_sup = fs.iter().map(|f| f.abs()).fold(0.0, f64::max);
    let needed = grid
        .iter()
        .zip(&fs)
        .map(|(&r, f)| 1.5 * f.abs() / shape(r))
        .fold(0.0, f64::max);
    let amplitude = needed.max((1.0 + margin) * f_sup);
    let radial = RadialProfile::new(support, move |rho| amplitude * shape(rho))?;
    Ok(PsiProfile {
        radial,
        amplitude,
        support,
        epsilon,
        f_sup,
    })
}

/// `g(x) = ψ(|x|) + f(|x|, ε)·x₁/|x|`, the initial datum of the counterexample.
pub fn initial_datum(v0: &MollifierProfile, psi: &PsiProfile, x: &[f64]) -> Result<f64> {
    let r = norm(x);
    if r == 0.0 {
        return Ok(psi.radial.evaluate(0.0));
    }
    Ok(psi.radial.evaluate(r) + f_level(v0, r, psi.epsilon)? * x[0] / r)
}

/// `u(x,t) = u_rad(|x|,t) + f(|x|,t)·x₁/|x|`; the second term is 0 at `x = 0`.
pub fn eval_counterexample(v0: &MollifierProfile, psi: &PsiProfile, x: &[f64], t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return invalid(format!("time must be positive, got {t}"));
    }
    if x.len() != 3 {
        return invalid("the counterexample lives in ℝ³");
    }
    let r = norm(x);
    let radial = solve_radial_3d(&psi.radial, r, t)?;
    if r == 0.0 {
        return Ok(radial);
    }
    Ok(radial + f_level(v0, r, t)? * x[0] / r)
}

/// The counterexample with its default parameters.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub v0: MollifierProfile,
    pub psi: PsiProfile,
}

impl Counterexample {
    pub fn new(a: f64, margin: f64) -> Result<Self> {
        let v0 = build_mollifier(a)?;
        let psi = build_psi(&v0, margin)?;
        Ok(Self { v0, psi })
    }

    /// `a` with margin `a` for ψ.
    pub fn standard(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    pub fn evaluate(&self, x: &[f64], t: f64) -> Result<f64> {
        eval_counterexample(&self.v0, &self.psi, x, t)
    }

    /// `u(rω, t)` for `r > 0` and a direction `ω`, normalized here. A point
    /// given this way lies exactly on the sphere of radius `r`, whereas the
    /// Cartesian point `r·ω` is off by a rounding error in the radius.
    pub fn evaluate_polar(&self, r: f64, omega: &[f64], t: f64) -> Result<f64> {
        check_rt(r, t)?;
        let len = norm(omega);
        if omega.len() != 3 || !(len > 0.0) {
            return invalid("direction must be a nonzero vector in ℝ³");
        }
        Ok(solve_radial_3d(&self.psi.radial, r, t)? + f_level(&self.v0, r, t)? * omega[0] / len)
    }

    pub fn initial(&self, x: &[f64]) -> Result<f64> {
        initial_datum(&self.v0, &self.psi, x)
    }

    /// `sup_x |u(x,t)| = max_r (|u_rad(r,t)| + |f(r,t)|)`, maximized over a radial grid.
    pub fn sup_abs(&self, t: f64) -> Result<f64> {
        let reach = self.psi.support + 8.0 * t.sqrt();
        let grid = scan_grid(0.0, reach, 256);
        let vals: Vec<f64> = grid
            .par_iter()
            .map(|&r| {
                let rad = solve_radial_3d(&self.psi.radial, r, t)?;
                let f = if r == 0.0 { 0.0 } else { f_level(&self.v0, r, t)? };
                Ok(rad.abs() + f.abs())
            })
            .collect::<Result<_>>()?;
        Ok(vals.into_iter().fold(0.0, f64::max))
    }

    /// Max − min of `u(·, t)` over `samples` points of the sphere of radius `r`,
    /// addressed in polar form.
    pub fn sphere_spread(&self, r: f64, t: f64, samples: usize) -> Result<f64> {
        let values: Vec<f64> = sphere_samples(1.0, samples)?
            .par_iter()
            .map(|s| self.evaluate_polar(r, &s.point, t))
            .collect::<Result<_>>()?;
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(hi - lo)
    }

    /// `|∂_t u − Δu|` at `(x, t)` with the default steps, spatial step scaled by `h_scale`.
    pub fn heat_residual(&self, x: &[f64], t: f64, h_scale: f64) -> Result<f64> {
        let steps = default_steps(t);
        fd_heat_residual(|y, s| self.evaluate(y, s), x, t, h_scale * steps.h, steps.dt)
    }
}

/// One row of a counterexample sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSphereRecord {
    pub t: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub r: f64,
    pub lower: f64,
    pub upper: f64,
    pub f_residual: f64,
    /// Max − min of `u` over 200 points of `|x| = r`.
    pub sphere_spread: f64,
    /// Max − min of `u` over 200 points of `|x| = r + 0.05·√t`.
    pub nonradial_gap: f64,
    /// Largest FD heat residual on the level sphere, relative to `sup|u(·,t)|`.
    pub heat_residual: f64,
    pub bracket_width: f64,
    pub multiple_roots: bool,
    /// Allowance for `sphere_spread` from the root tolerance and rounding.
    pub spread_bound: f64,
}

impl LevelSphereRecord {
    /// Invariants that fail for this record, as readable messages.
    pub fn violations(&self, a: f64) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.r3 < self.r && self.r < self.r4) {
            out.push(format!("r = {} outside (r3, r4) = ({}, {})", self.r, self.r3, self.r4));
        }
        if self.t > 0.8 * a * a && !(self.lower <= self.r && self.r <= self.upper) {
            out.push(format!("r = {} outside [{}, {}]", self.r, self.lower, self.upper));
        }
        if !(self.sphere_spread <= self.spread_bound) {
            out.push(format!(
                "level-sphere spread {:e} exceeds its root-tolerance bound {:e}",
                self.sphere_spread, self.spread_bound
            ));
        }
        if !(self.sphere_spread <= 1e-6 * self.nonradial_gap) {
            out.push(format!(
                "level-sphere spread {:e} not ≪ off-level spread {:e}",
                self.sphere_spread, self.nonradial_gap
            ));
        }
        if !(self.heat_residual <= 1e-6) {
            out.push(format!("relative heat residual {:e} above 1e-6", self.heat_residual));
        }
        out
    }
}

/// Full record at one time.
pub fn level_sphere_record(ce: &Counterexample, t: f64, tol: f64) -> Result<LevelSphereRecord> {
    let level = find_level_radius(&ce.v0, t, tol)?;
    let r = level.r;
    let sphere_spread = ce.sphere_spread(r, t, SPHERE_SAMPLES)?;
    let nonradial_gap = ce.sphere_spread(r + OFF_LEVEL_OFFSET * t.sqrt(), t, SPHERE_SAMPLES)?;

    let dr = 1e-4 * t.sqrt();
    let slope = (f_level(&ce.v0, r + dr, t)? - f_level(&ce.v0, r - dr, t)?) / (2.0 * dr);
    let u_rad = solve_radial_3d(&ce.psi.radial, r, t)?;
    // |f| on the sphere is at most |f(r)| + width·|f'|; the spread is twice
    // that, plus rounding of the sum u_rad + f·ω₁.
    let spread_bound =
        1e3 * 2.0 * (level.f_residual + level.bracket_width * slope.abs()) + 4.0 * f64::EPSILON * u_rad.abs();

    let sup = ce.sup_abs(t)?;
    let probes = [
        [r, 0.0, 0.0],
        [-r, 0.0, 0.0],
        [0.0, r, 0.0],
        [0.0, 0.0, r],
        [r / 3f64.sqrt(), r / 3f64.sqrt(), -r / 3f64.sqrt()],
    ];
    let residuals: Vec<f64> = probes
        .par_iter()
        .map(|x| ce.heat_residual(x, t, 1.0))
        .collect::<Result<_>>()?;
    let heat_residual = residuals.into_iter().fold(0.0, f64::max) / sup;

    let b = level.brackets;
    Ok(LevelSphereRecord {
        t,
        r2: b.r2,
        r3: b.r3,
        r4: b.r4,
        r,
        lower: level.lower,
        upper: level.upper,
        f_residual: level.f_residual,
        sphere_spread,
        nonradial_gap,
        heat_residual,
        bracket_width: level.bracket_width,
        multiple_roots: level.multiple_roots,
        spread_bound,
    })
}

/// Records for every time in `t_grid`, in input order. Times must exceed
/// `4a²/5`, the regime where the lower bound on `r3` holds.
pub fn counterexample_sweep(a: f64, t_grid: &[f64], tol: f64) -> Result<Vec<LevelSphereRecord>> {
    if let Some(&t) = t_grid.iter().find(|&&t| !(t > 0.8 * a * a)) {
        return invalid(format!("time {t} not above 4a²/5 = {}", 0.8 * a * a));
    }
    let ce = Counterexample::standard(a)?;
    t_grid
        .par_iter()
        .map(|&t| level_sphere_record(&ce, t, tol).map_err(|e| e.context(format!("sweep at t = {t}"))))
        .collect()
}

/// A heat-residual sample of the counterexample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    pub x: [f64; 3],
    pub t: f64,
    pub residual: f64,
    pub residual_half_step: f64,
    pub sup_u: f64,
}

/// `count` pseudo-random points with `t` log-uniform in `[t_min, t_max]`
/// and `|x|` uniform in `[0.2, 1.2]·r(t)`-ish radii `[0.3√t, 4√t]`.
pub fn residual_samples(ce: &Counterexample, count: usize, t_min: f64, t_max: f64, seed: u64) -> Result<Vec<ResidualSample>> {
    if !(0.0 < t_min && t_min <= t_max) {
        return invalid("need 0 < t_min ≤ t_max");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<([f64; 3], f64)> = (0..count)
        .map(|_| {
            let t = (t_min.ln() + rng.gen::<f64>() * (t_max / t_min).ln()).exp();
            let rho = t.sqrt() * (0.3 + 3.7 * rng.gen::<f64>());
            let z: f64 = 2.0 * rng.gen::<f64>() - 1.0;
            let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            let s = (1.0 - z * z).sqrt();
            ([rho * s * phi.cos(), rho * s * phi.sin(), rho * z], t)
        })
        .collect();
    points
        .par_iter()
        .map(|&(x, t)| {
            Ok(ResidualSample {
                x,
                t,
                residual: ce.heat_residual(&x, t, 1.0)?,
                residual_half_step: ce.heat_residual(&x, t, 0.5)?,
                sup_u: ce.sup_abs(t)?,
            })
        })
        .collect()
}

/// Times `t` at which `r(t) = t·R`, for the boundary `∂B_R` taken literally.
/// Since `r(t)/t` decreases there is at most one, searched on `[t_lo, t_hi]`.
pub fn self_similar_time(v0: &MollifierProfile, big_r: f64, t_lo: f64, t_hi: f64, tol: f64) -> Result<f64> {
    let gap = |t: f64| find_level_radius(v0, t, tol).map(|l| l.r - t * big_r);
    let (g_lo, g_hi) = (gap(t_lo)?, gap(t_hi)?);
    let bracket = Bracket::new(t_lo, t_hi, g_lo, g_hi)
        .map_err(|_| structure(t_lo, format!("r(t) - tR does not change sign on [{t_lo}, {t_hi}]")))?;
    refine_root(|t| gap(t).unwrap_or(f64::NAN), bracket, tol * t_hi).map(|r| r.x)
}

/// Condition (C) on the unit sphere with the boundary scaled by `r(t_n)`:
/// the counterexample has a level sphere at every time.
pub fn adapted_condition_c(ce: &Counterexample, times: &TimeSequence, tol: f64) -> Result<Vec<ConstancyReport>> {
    let radii: Vec<(f64, f64)> = times
        .values()
        .par_iter()
        .map(|&t| find_level_radius(&ce.v0, t, tol).map(|l| (t, l.r)))
        .collect::<Result<_>>()?;
    let lookup = Arc::new(move |t: f64| {
        radii
            .iter()
            .find(|(s, _)| *s == t)
            .map(|(_, r)| *r)
            .unwrap_or(f64::NAN)
    });
    let scale = times
        .values()
        .iter()
        .map(|&t| ce.sup_abs(t))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    check_condition_c(
        |x, t| ce.evaluate(x, t),
        &sphere_samples(1.0, SPHERE_SAMPLES)?,
        times,
        &BoundaryScaling::Adapted(lookup),
        1e-9,
        scale,
    )
}
