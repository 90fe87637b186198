//! Symmetry diagnostics for heat solutions with similar level sets.
//!
//! * constancy of a solution on scaled copies `t_n·∂Ω` of a boundary,
//! * the monotonicity hypothesis `∂u/∂l < 0` outside a half-space,
//! * alignment of position vectors with outer normals on a closed surface,
//! * the 1-D and N-D moment functionals whose vanishing forces symmetry,
//!   and their projections onto spherical harmonics.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::heat::{InitialDataND, InitialProfile1D, ScalarFn};
use crate::linalg::{dot, norm, Orthogonal};
use crate::numerics::{adaptive_integrate_with, AdaptiveOptions, Estimate, ToleranceNorm};
use crate::special::{harmonic_dimension, orthonormal_harmonic, sphere_grid, SphereGrid, MAX_HARMONIC_DEGREE};

/// Default number of boundary samples per curve or surface.
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 200;

/// Sphere grid order for spherical moments and harmonic projections.
pub const SPHERE_ORDER: usize = 40;

/// Strictly increasing positive times `t_1 < t_2 < …`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSequence {
    values: Vec<f64>,
}

impl TimeSequence {
    /// `t_n = base·ratio^(n-1)` for `n = 1..=count`.
    pub fn geometric(base: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(base > 0.0) || !base.is_finite() {
            return invalid(format!("base time must be positive, got {base}"));
        }
        if !(ratio > 1.0) || !ratio.is_finite() {
            return invalid(format!("ratio must exceed 1, got {ratio}"));
        }
        Self::from_values((0..count).map(|n| base * ratio.powi(n as i32)).collect())
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("time sequence is empty");
        }
        if !values.iter().all(|t| *t > 0.0 && t.is_finite()) {
            return invalid("times must be positive and finite");
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("times must be strictly increasing");
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A boundary point with its outer unit normal and, optionally, a tangent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub point: Vec<f64>,
    pub normal: Vec<f64>,
    pub tangents: Vec<Vec<f64>>,
}

impl BoundarySample {
    pub fn new(point: Vec<f64>, normal: Vec<f64>, tangents: Vec<Vec<f64>>) -> Result<Self> {
        if point.len() != normal.len() || tangents.iter().any(|v| v.len() != point.len()) {
            return invalid("boundary sample components have mismatched dimensions");
        }
        if (norm(&normal) - 1.0).abs() > 1e-12 {
            return invalid(format!("normal has length {}", norm(&normal)));
        }
        if tangents.iter().any(|v| dot(v, &normal).abs() > 1e-12) {
            return invalid("tangent vector not orthogonal to the normal");
        }
        Ok(Self { point, normal, tangents })
    }

    fn unchecked(point: Vec<f64>, normal: Vec<f64>) -> Self {
        let tangents = tangent_basis(&normal);
        Self { point, normal, tangents }
    }
}

/// Orthonormal basis of `ν^⊥` for `ν` in ℝ² or ℝ³.
fn tangent_basis(nu: &[f64]) -> Vec<Vec<f64>> {
    match nu.len() {
        2 => vec![vec![-nu[1], nu[0]]],
        3 => {
            let seed = if nu[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let p = dot(&seed, nu);
            let mut e1: Vec<f64> = seed.iter().zip(nu).map(|(s, n)| s - p * n).collect();
            let l = norm(&e1);
            e1.iter_mut().for_each(|x| *x /= l);
            let e2 = vec![
                nu[1] * e1[2] - nu[2] * e1[1],
                nu[2] * e1[0] - nu[0] * e1[2],
                nu[0] * e1[1] - nu[1] * e1[0],
            ];
            vec![e1, e2]
        }
        _ => Vec::new(),
    }
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let l = norm(&v);
    v.into_iter().map(|x| x / l).collect()
}

/// Ellipse with semi-axes `(a, b)`, `count` points equally spaced in the parameter angle.
pub fn ellipse_samples(a: f64, b: f64, count: usize) -> Result<Vec<BoundarySample>> {
    if !(a > 0.0 && b > 0.0) || count == 0 {
        return invalid("ellipse needs positive semi-axes and at least one sample");
    }
    Ok((0..count)
        .map(|j| {
            let s = 2.0 * PI * j as f64 / count as f64;
            let (c, sn) = (s.cos(), s.sin());
            BoundarySample::unchecked(vec![a * c, b * sn], unit(vec![b * c, a * sn]))
        })
        .collect())
}

pub fn circle_samples(radius: f64, count: usize) -> Result<Vec<BoundarySample>> {
    ellipse_samples(radius, radius, count)
}

/// Ellipsoid with semi-axes `(a, b, c)`: points of a Fibonacci spiral on the
/// unit sphere mapped by `diag(a, b, c)`.
pub fn ellipsoid_samples(a: f64, b: f64, c: f64, count: usize) -> Result<Vec<BoundarySample>> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) || count == 0 {
        return invalid("ellipsoid needs positive semi-axes and at least one sample");
    }
    let golden = PI * (3.0 - 5f64.sqrt());
    Ok((0..count)
        .map(|j| {
            let z = 1.0 - (2.0 * j as f64 + 1.0) / count as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * j as f64;
            let u = [rho * phi.cos(), rho * phi.sin(), z];
            BoundarySample::unchecked(
                vec![a * u[0], b * u[1], c * u[2]],
                unit(vec![u[0] / a, u[1] / b, u[2] / c]),
            )
        })
        .collect())
}

pub fn sphere_samples(radius: f64, count: usize) -> Result<Vec<BoundarySample>> {
    ellipsoid_samples(radius, radius, radius, count)
}

/// Tilts every normal by the angle `amplitude` towards a pseudo-random tangent direction.
pub fn perturb_normals(samples: &[BoundarySample], amplitude: f64, seed: u64) -> Vec<BoundarySample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    samples
        .iter()
        .map(|s| {
            let coeffs: Vec<f64> = s.tangents.iter().map(|_| StandardNormal.sample(&mut rng)).collect();
            let mut dir = vec![0.0; s.normal.len()];
            for (c, t) in coeffs.iter().zip(&s.tangents) {
                dir.iter_mut().zip(t).for_each(|(d, ti)| *d += c * ti);
            }
            let dl = norm(&dir);
            let (sin, cos) = amplitude.sin_cos();
            let tilted: Vec<f64> = s
                .normal
                .iter()
                .zip(&dir)
                .map(|(n, d)| cos * n + sin * d / dl)
                .collect();
            BoundarySample::unchecked(s.point.clone(), unit(tilted))
        })
        .collect()
}

/// How the reference boundary is scaled at time `t_n`.
#[derive(Clone)]
pub enum BoundaryScaling {
    /// `t_n·∂Ω`
    Linear,
    /// `s(t_n)·∂Ω` for a caller-supplied length scale.
    Adapted(ScalarFn),
}

impl BoundaryScaling {
    pub fn factor(&self, t: f64) -> f64 {
        match self {
            BoundaryScaling::Linear => t,
            BoundaryScaling::Adapted(s) => s(t),
        }
    }
}

impl std::fmt::Debug for BoundaryScaling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryScaling::Linear => f.write_str("Linear"),
            BoundaryScaling::Adapted(_) => f.write_str("Adapted(..)"),
        }
    }
}

/// Values of a solution on one scaled boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstancyReport {
    pub t: f64,
    pub samples: Vec<f64>,
    pub mean: f64,
    pub spread: f64,
    /// Absolute threshold `tol·scale` the spread is compared against.
    pub threshold: f64,
    pub pass: bool,
}

/// Samples `u(s(t_n)·p, t_n)` over the boundary for every `t_n` and reports
/// whether the samples agree to `tol·scale`.
pub fn check_condition_c<U>(
    u: U,
    boundary: &[BoundarySample],
    times: &TimeSequence,
    scaling: &BoundaryScaling,
    tol: f64,
    scale: f64,
) -> Result<Vec<ConstancyReport>>
where
    U: Fn(&[f64], f64) -> Result<f64> + Sync,
{
    if boundary.is_empty() {
        return invalid("boundary sample list is empty");
    }
    if !(tol > 0.0) || !(scale > 0.0) {
        return invalid("tolerance and scale must be positive");
    }
    times
        .values()
        .iter()
        .enumerate()
        .map(|(n, &t)| {
            let factor = scaling.factor(t);
            let samples = boundary
                .par_iter()
                .map(|b| {
                    let x: Vec<f64> = b.point.iter().map(|p| factor * p).collect();
                    u(&x, t).map_err(|e| e.context(format!("condition (C) at n = {}, p = {:?}", n + 1, b.point)))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(constancy(t, samples, tol * scale))
        })
        .collect()
}

pub(crate) fn constancy(t: f64, samples: Vec<f64>, threshold: f64) -> ConstancyReport {
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let spread = hi - lo;
    ConstancyReport {
        t,
        samples,
        mean,
        spread,
        threshold,
        pass: spread <= threshold,
    }
}

/// Largest `∂u/∂l` over the samples. A negative result certifies the
/// monotonicity hypothesis there. Every sample must satisfy `x·l > offset`.
pub fn monotonicity_check(g: &InitialDataND, l: &[f64], offset: f64, samples: &[(Vec<f64>, f64)]) -> Result<f64> {
    if samples.is_empty() {
        return invalid("no samples");
    }
    if let Some((x, _)) = samples.iter().find(|(x, _)| !(dot(x, l) > offset)) {
        return invalid(format!("sample {x:?} is not in the region x·l > {offset}"));
    }
    let values = samples
        .par_iter()
        .map(|(x, t)| crate::heat::directional_derivative(g, x, *t, l))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentReport {
    /// `max |p - (p·ν)ν| / |p|`
    pub max_misalignment: f64,
    /// `max |p| - min |p|`
    pub radius_spread: f64,
    pub aligned: bool,
}

/// Measures how far the position vectors are from their normals.
pub fn normal_alignment_test(boundary: &[BoundarySample], tol: f64) -> Result<AlignmentReport> {
    if boundary.is_empty() {
        return invalid("boundary sample list is empty");
    }
    let mut mis: f64 = 0.0;
    let (mut rmin, mut rmax) = (f64::INFINITY, 0.0f64);
    for b in boundary {
        let r = norm(&b.point);
        if r == 0.0 {
            return invalid("boundary sample at the origin");
        }
        let pn = dot(&b.point, &b.normal);
        let tangential: Vec<f64> = b.point.iter().zip(&b.normal).map(|(p, n)| p - pn * n).collect();
        mis = mis.max(norm(&tangential) / r);
        rmin = rmin.min(r);
        rmax = rmax.max(r);
    }
    Ok(AlignmentReport {
        max_misalignment: mis,
        radius_spread: rmax - rmin,
        aligned: mis <= tol,
    })
}

fn moment_options() -> AdaptiveOptions {
    AdaptiveOptions {
        rel_tol: 1e-13,
        abs_tol: 0.0,
        max_panels: 4000,
        norm: ToleranceNorm::L1,
    }
}

/// `∫_{-b}^{b} v₀(y) e^{by/2} e^{-y²/4t} dy`. The support of `v₀` must lie in `(-b, b)`.
pub fn moment_1d(v0: &InitialProfile1D, b: f64, t: f64) -> Result<Estimate> {
    if !(t > 0.0) {
        return invalid(format!("time must be positive, got {t}"));
    }
    if !(v0.half_width() < b) {
        return invalid(format!("support [-{0}, {0}] not inside (-{b}, {b})", v0.half_width()));
    }
    let a = v0.half_width();
    let breaks: Vec<f64> = (0..=16).map(|i| -a + 2.0 * a * i as f64 / 16.0).collect();
    adaptive_integrate_with(
        |y| v0.evaluate(y) * (b * y / 2.0 - y * y / (4.0 * t)).exp(),
        &breaks,
        moment_options(),
    )
}

/// `∫_0^b (w₀(y) + w₀(-y)) e^{-λy²} dy` with `w₀(y) = v₀(y) e^{by/2}`: the
/// Laplace transform in `s = y²` of the symmetrized `w₀`, with the `1/√s`
/// Jacobian removed analytically.
pub fn laplace_moment_1d(v0: &InitialProfile1D, b: f64, lambda: f64) -> Result<Estimate> {
    if !(b > 0.0) {
        return invalid(format!("b must be positive, got {b}"));
    }
    let w0 = |y: f64| v0.evaluate(y) * (b * y / 2.0).exp();
    let breaks: Vec<f64> = (0..=16).map(|i| b * i as f64 / 16.0).collect();
    adaptive_integrate_with(
        |y| (w0(y) + w0(-y)) * (-lambda * y * y).exp(),
        &breaks,
        moment_options(),
    )
}

/// `∫_{B_R} f` in polar form, N ∈ {2, 3}: adaptive in the radius, a fixed
/// sphere grid in the angle. `scale` bounds `|f|` and sets the absolute tolerance.
fn ball_integral<F: Fn(&[f64]) -> f64>(n: usize, radius: f64, scale: f64, f: F) -> Result<f64> {
    let sphere = sphere_grid(n, SPHERE_ORDER)?;
    let breaks: Vec<f64> = (0..=8).map(|i| radius * i as f64 / 8.0).collect();
    let shell = |r: f64| {
        r.powi(n as i32 - 1)
            * sphere.integrate(|w| {
                let y: Vec<f64> = w.iter().map(|wi| r * wi).collect();
                f(&y)
            })
    };
    let volume = crate::special::sphere_area(n - 1) * radius.powi(n as i32) / n as f64;
    let opts = AdaptiveOptions {
        abs_tol: 1e-15 * scale * volume,
        ..moment_options()
    };
    Ok(adaptive_integrate_with(shell, &breaks, opts)?.value)
}

fn check_rotation(g: &InitialDataND, a: &Orthogonal) -> Result<()> {
    if a.dim() != g.dimension() {
        return invalid("rotation and data dimensions differ");
    }
    if !matches!(g.dimension(), 2 | 3) {
        return Err(Error::UnsupportedDimension(g.dimension()));
    }
    Ok(())
}

/// `∫_{|y|≤R} e^{x·y/2} e^{-s|y|²} (g(y) - g(Ay)) dy` for `|x| = R`.
pub fn moment_nd(g: &InitialDataND, a: &Orthogonal, x: &[f64], s: f64) -> Result<f64> {
    check_rotation(g, a)?;
    let r = g.support_radius();
    if x.len() != g.dimension() || (norm(x) - r).abs() > 1e-10 {
        return invalid(format!("|x| = {} is not the support radius {r}", norm(x)));
    }
    if a.is_identity() {
        return Ok(0.0);
    }
    // |e^{x·y/2 - s|y|²}| ≤ e^{R²/2 + max(0, -s)R²} on the ball
    let scale = g.sup_bound() * (r * r / 2.0 + (-s).max(0.0) * r * r).exp();
    ball_integral(g.dimension(), r, scale, |y| {
        (dot(x, y) / 2.0 - s * dot(y, y)).exp() * (g.evaluate(y) - g.evaluate(&a.apply(y)))
    })
}

/// `∫_{S^{N-1}} e^{(Rr/2) α·ω} (g(rω) - g(rAω)) dσ(ω)` for `0 < r ≤ R`.
pub fn spherical_moment(g: &InitialDataND, a: &Orthogonal, r: f64, big_r: f64, alpha: &[f64]) -> Result<f64> {
    check_rotation(g, a)?;
    let grid = sphere_grid(g.dimension(), SPHERE_ORDER)?;
    spherical_moment_on(g, a, r, big_r, alpha, &grid)
}

fn spherical_moment_on(
    g: &InitialDataND,
    a: &Orthogonal,
    r: f64,
    big_r: f64,
    alpha: &[f64],
    grid: &SphereGrid,
) -> Result<f64> {
    if !(r > 0.0) {
        return invalid(format!("radius must be positive, got {r}"));
    }
    if r > big_r {
        return invalid(format!("radius {r} exceeds R = {big_r}; the moment vanishes trivially"));
    }
    if alpha.len() != g.dimension() || (norm(alpha) - 1.0).abs() > 1e-10 {
        return invalid("α must be a unit vector of the data dimension");
    }
    let difference = sphere_difference(g, a, r);
    Ok(crate::special::funk_hecke_apply(difference, big_r * r / 2.0, grid, alpha)?)
}

/// `ω ↦ g(rω) - g(rAω)`.
pub fn sphere_difference<'a>(g: &'a InitialDataND, a: &'a Orthogonal, r: f64) -> impl Fn(&[f64]) -> f64 + Sync + 'a {
    move |w: &[f64]| {
        let y: Vec<f64> = w.iter().map(|c| r * c).collect();
        g.evaluate(&y) - g.evaluate(&a.apply(&y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicCoefficient {
    pub degree: usize,
    pub variant: usize,
    pub value: f64,
}

/// Projections of `h` on `S²` onto the orthonormalized harmonic catalog,
/// ordered by degree then variant.
pub fn harmonic_coefficients<H: Fn(&[f64]) -> f64 + Sync>(h: H, max_degree: usize) -> Result<Vec<HarmonicCoefficient>> {
    if max_degree > MAX_HARMONIC_DEGREE {
        return invalid(format!("max degree {max_degree} exceeds the catalog ({MAX_HARMONIC_DEGREE})"));
    }
    let grid = sphere_grid(3, SPHERE_ORDER)?;
    let values: Vec<f64> = grid.nodes.par_iter().map(|w| h(w)).collect();
    let mut out = Vec::new();
    for k in 0..=max_degree {
        for v in 0..harmonic_dimension(k) {
            let mut acc = 0.0;
            for ((w, x), hv) in grid.weights.iter().zip(&grid.nodes).zip(&values) {
                acc += w * hv * orthonormal_harmonic(k, v, x)?;
            }
            out.push(HarmonicCoefficient { degree: k, variant: v, value: acc });
        }
    }
    Ok(out)
}

/// Harmonic coefficients of `α ↦ spherical_moment(g, A, r, R, α)` in ℝ³.
pub fn spherical_moment_coefficients(
    g: &InitialDataND,
    a: &Orthogonal,
    r: f64,
    big_r: f64,
    max_degree: usize,
) -> Result<Vec<HarmonicCoefficient>> {
    check_rotation(g, a)?;
    if g.dimension() != 3 {
        return Err(Error::UnsupportedDimension(g.dimension()));
    }
    let grid = sphere_grid(3, SPHERE_ORDER)?;
    // Validate once so the projection below cannot fail per direction.
    spherical_moment_on(g, a, r, big_r, &[0.0, 0.0, 1.0], &grid)?;
    harmonic_coefficients(
        |alpha| spherical_moment_on(g, a, r, big_r, alpha, &grid).unwrap_or(f64::NAN),
        max_degree,
    )
}

/// Largest `|coefficient|` in a list.
pub fn max_coefficient(coeffs: &[HarmonicCoefficient]) -> f64 {
    coeffs.iter().map(|c| c.value.abs()).fold(0.0, f64::max)
}
