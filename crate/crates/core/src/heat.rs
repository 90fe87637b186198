//! Solutions of the Cauchy problem `∂_t u = Δu`, `u(·, 0) = g` for bounded,
//! compactly supported `g`, evaluated pointwise by quadrature of the heat
//! kernel `(4πt)^{-N/2} e^{-|x-y|²/4t}` against `g`.
//!
//! Spatial derivatives are always obtained by differentiating the kernel,
//! never the data, so only values of `g` are ever needed.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, norm};
use crate::numerics::{adaptive_integrate_with, gauss_nodes, AdaptiveOptions, ToleranceNorm};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Beyond `|s - μ| > KERNEL_REACH·√t` the Gaussian factor is below `e^{-100}`
/// and the integrand is dropped, even against tenth-degree Hermite weights.
const KERNEL_REACH: f64 = 20.0;

/// Relative tolerance (against `∫|integrand|`) for the 1-D kernel integrals.
const KERNEL_REL_TOL: f64 = 1e-14;

/// A one-dimensional initial datum supported in `[-a, a]`.
#[derive(Clone)]
pub struct InitialProfile1D {
    half_width: f64,
    sup_bound: f64,
    even: bool,
    f: ScalarFn,
}

impl fmt::Debug for InitialProfile1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialProfile1D")
            .field("half_width", &self.half_width)
            .field("sup_bound", &self.sup_bound)
            .field("even", &self.even)
            .finish_non_exhaustive()
    }
}

impl InitialProfile1D {
    /// `f` is only ever called on `[-a, a]`; values outside are taken as 0.
    pub fn new<F>(half_width: f64, sup_bound: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return invalid(format!("support half-width must be positive, got {half_width}"));
        }
        if !(sup_bound > 0.0) {
            return invalid(format!("sup bound must be positive, got {sup_bound}"));
        }
        Ok(Self {
            half_width,
            sup_bound,
            even: false,
            f: Arc::new(f),
        })
    }

    /// Marks the profile as even. Checked by [`Self::check_invariants`].
    pub fn even(mut self) -> Self {
        self.even = true;
        self
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn evaluate(&self, s: f64) -> f64 {
        if s.abs() > self.half_width {
            0.0
        } else {
            (self.f)(s)
        }
    }

    /// The sign-changing difference `g(y) - g(-y)`.
    pub fn antisymmetric_part(&self) -> Self {
        let g = self.clone();
        Self {
            half_width: self.half_width,
            sup_bound: 2.0 * self.sup_bound,
            even: false,
            f: Arc::new(move |y| g.evaluate(y) - g.evaluate(-y)),
        }
    }

    /// `μ ↦ g(λμ)`, supported in `[-a/λ, a/λ]`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return invalid("scale factor must be positive");
        }
        let g = self.clone();
        Ok(Self {
            half_width: self.half_width / lambda,
            sup_bound: self.sup_bound,
            even: self.even,
            f: Arc::new(move |y| g.evaluate(lambda * y)),
        })
    }

    /// Samples `samples` points of `[-1.5a, 1.5a]` and checks support,
    /// `0 ≤ g ≤ sup_bound`, and evenness when flagged.
    pub fn check_invariants(&self, samples: usize) -> Result<()> {
        let a = self.half_width;
        for i in 0..samples {
            let s = -1.5 * a + 3.0 * a * (i as f64 + 0.5) / samples as f64;
            let v = self.evaluate(s);
            if s.abs() > a && v != 0.0 {
                return invalid(format!("profile nonzero outside its support at {s}"));
            }
            if !(0.0..=self.sup_bound).contains(&v) {
                return invalid(format!("profile value {v} at {s} outside [0, {}]", self.sup_bound));
            }
            if self.even && (v - self.evaluate(-s)).abs() > 1e-15 * self.sup_bound {
                return invalid(format!("profile flagged even but g({s}) != g({})", -s));
            }
        }
        Ok(())
    }
}

/// An N-dimensional initial datum supported in the closed ball `B_R(0)`.
#[derive(Clone)]
pub struct InitialDataND {
    dimension: usize,
    support_radius: f64,
    sup_bound: f64,
    feature_length: f64,
    f: FieldFn,
}

impl fmt::Debug for InitialDataND {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialDataND")
            .field("dimension", &self.dimension)
            .field("support_radius", &self.support_radius)
            .field("sup_bound", &self.sup_bound)
            .field("feature_length", &self.feature_length)
            .finish_non_exhaustive()
    }
}

impl InitialDataND {
    pub fn new<F>(dimension: usize, support_radius: f64, sup_bound: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dimension == 0 {
            return invalid("dimension must be at least 1");
        }
        if !(support_radius > 0.0) || !support_radius.is_finite() {
            return invalid(format!("support radius must be positive, got {support_radius}"));
        }
        if !(sup_bound > 0.0) {
            return invalid(format!("sup bound must be positive, got {sup_bound}"));
        }
        Ok(Self {
            dimension,
            support_radius,
            sup_bound,
            feature_length: support_radius / 4.0,
            f: Arc::new(f),
        })
    }

    /// Length scale of the data used to size quadrature panels.
    /// Defaults to a quarter of the support radius.
    pub fn with_feature_length(mut self, length: f64) -> Self {
        self.feature_length = length;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn feature_length(&self) -> f64 {
        self.feature_length
    }

    pub fn evaluate(&self, y: &[f64]) -> f64 {
        if dot(y, y) > self.support_radius * self.support_radius {
            0.0
        } else {
            (self.f)(y)
        }
    }
}

/// A radial profile `ψ(ρ)` supported in `[0, R]`, standing for `ψ(|x|)` in ℝ³.
#[derive(Clone)]
pub struct RadialProfile {
    support: f64,
    f: ScalarFn,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl RadialProfile {
    pub fn new<F>(support: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(support > 0.0) || !support.is_finite() {
            return invalid(format!("radial support must be positive, got {support}"));
        }
        Ok(Self { support, f: Arc::new(f) })
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn evaluate(&self, rho: f64) -> f64 {
        if rho > self.support {
            0.0
        } else {
            (self.f)(rho)
        }
    }

    /// The same profile as an N = 3 datum `x ↦ ψ(|x|)`.
    pub fn to_nd(&self, sup_bound: f64) -> Result<InitialDataND> {
        let psi = self.clone();
        InitialDataND::new(3, self.support, sup_bound, move |y| psi.evaluate(norm(y)))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        invalid(format!("time must be positive, got {t}"))
    }
}

/// `∫_{-a}^{a} weight(s - μ) e^{-(s-μ)²/4t} v0(μ) dμ`, with the domain cut to
/// the kernel's reach and split into panels no wider than `2√t`.
fn kernel_integral<W>(v0: &InitialProfile1D, s: f64, t: f64, weight: W) -> Result<f64>
where
    W: Fn(f64) -> f64,
{
    let a = v0.half_width;
    let reach = KERNEL_REACH * t.sqrt();
    let lo = (-a).max(s - reach);
    let hi = a.min(s + reach);
    if !(lo < hi) {
        return Ok(0.0);
    }
    let panels = ((hi - lo) / (2.0 * t.sqrt())).ceil().clamp(2.0, 64.0) as usize;
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| lo + (hi - lo) * i as f64 / panels as f64)
        .collect();
    let integrand = |mu: f64| {
        let z = s - mu;
        weight(z) * (-z * z / (4.0 * t)).exp() * v0.evaluate(mu)
    };
    // Absolute floor far below anything the integral can resolve relative to
    // sup|v0|·∫|weight·kernel|; it only matters where v0 underflows.
    let kernel_l1 = gauss_nodes(64, -reach, reach)?.integrate(|z| (weight(z) * (-z * z / (4.0 * t)).exp()).abs());
    let opts = AdaptiveOptions {
        rel_tol: KERNEL_REL_TOL,
        abs_tol: 1e-18 * v0.sup_bound * kernel_l1,
        max_panels: 20_000,
        norm: ToleranceNorm::L1,
    };
    Ok(adaptive_integrate_with(integrand, &breaks, opts)?.value)
}

fn prefactor_1d(t: f64) -> f64 {
    (4.0 * PI * t).powf(-0.5)
}

/// `v(s, t) = (4πt)^{-1/2} ∫ e^{-(s-μ)²/4t} v0(μ) dμ`.
pub fn solve_1d(v0: &InitialProfile1D, s: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(prefactor_1d(t) * kernel_integral(v0, s, t, |_| 1.0)?)
}

/// `∂³v/∂s³` with the derivative carried by the kernel:
/// `-(1/8t³) ∫ (s-μ)(-6t + (s-μ)²) e^{-(s-μ)²/4t} v0(μ) dμ`, times `(4πt)^{-1/2}`.
pub fn d3v_ds3(v0: &InitialProfile1D, s: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let i = kernel_integral(v0, s, t, |z| z * (z * z - 6.0 * t))?;
    Ok(-prefactor_1d(t) * i / (8.0 * t * t * t))
}

/// `∂⁴v/∂s⁴ = (1/16t⁴) ∫ (12t² - 12t(s-μ)² + (s-μ)⁴) e^{-(s-μ)²/4t} v0(μ) dμ`,
/// times `(4πt)^{-1/2}`.
pub fn d4v_ds4(v0: &InitialProfile1D, s: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let i = kernel_integral(v0, s, t, |z| {
        let z2 = z * z;
        12.0 * t * t - 12.0 * t * z2 + z2 * z2
    })?;
    Ok(prefactor_1d(t) * i / (16.0 * t.powi(4)))
}

/// `∂ⁿv/∂sⁿ` for any order, from `∂_zⁿ e^{-z²/4t} = (-1/(2√t))ⁿ Hₙ(z/2√t) e^{-z²/4t}`
/// with physicists' Hermite polynomials.
pub fn dnv_dsn(v0: &InitialProfile1D, order: usize, s: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let scale = 2.0 * t.sqrt();
    let i = kernel_integral(v0, s, t, |z| hermite(order, z / scale))?;
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * prefactor_1d(t) * i / scale.powi(order as i32))
}

fn hermite(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Tensor-product Gauss settings for N-dimensional kernel integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdQuadrature {
    /// Gauss points per panel and dimension.
    pub order: usize,
    /// Panels are no wider than this multiple of `√t`.
    pub kernel_panel: f64,
}

impl Default for NdQuadrature {
    fn default() -> Self {
        Self {
            order: 16,
            kernel_panel: 2.0,
        }
    }
}

/// Composite Gauss rule along one axis, restricted to the kernel reach around `xi`.
fn axis_rule(g: &InitialDataND, xi: f64, t: f64, reach: f64, q: NdQuadrature) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = g.support_radius;
    let lo = (-r).max(xi - reach);
    let hi = r.min(xi + reach);
    if !(lo < hi) {
        return Ok((Vec::new(), Vec::new()));
    }
    let width = g.feature_length.min(q.kernel_panel * t.sqrt());
    let panels = ((hi - lo) / width).ceil().max(1.0) as usize;
    let mut nodes = Vec::with_capacity(panels * q.order);
    let mut weights = Vec::with_capacity(panels * q.order);
    for p in 0..panels {
        let a = lo + (hi - lo) * p as f64 / panels as f64;
        let b = lo + (hi - lo) * (p + 1) as f64 / panels as f64;
        let rule = gauss_nodes(q.order, a, b)?;
        nodes.extend(rule.nodes);
        weights.extend(rule.weights);
    }
    Ok((nodes, weights))
}

/// `(4πt)^{-N/2} ∫ weight(y) e^{-|x-y|²/4t} g(y) dy` by tensor-product Gauss
/// over the support cube cut to the kernel reach. Summation order is fixed.
fn nd_kernel_integral<W>(g: &InitialDataND, x: &[f64], t: f64, q: NdQuadrature, weight: W) -> Result<f64>
where
    W: Fn(&[f64]) -> f64,
{
    check_time(t)?;
    let n = g.dimension;
    if n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if x.len() != n {
        return invalid(format!("point has {} coordinates, data has dimension {n}", x.len()));
    }
    // The kernel weights here are at most linear, so a shorter reach suffices.
    let reach = 14.0 * t.sqrt();
    let mut axes = Vec::with_capacity(n);
    for (i, &xi) in x.iter().enumerate() {
        let (nodes, w) = axis_rule(g, xi, t, reach, q)?;
        if nodes.is_empty() {
            return Ok(0.0);
        }
        let kw: Vec<f64> = nodes
            .iter()
            .zip(&w)
            .map(|(&y, &w)| w * (-(x[i] - y) * (x[i] - y) / (4.0 * t)).exp())
            .collect();
        axes.push((nodes, kw));
    }

    let r2max = g.support_radius * g.support_radius;
    let mut y = vec![0.0; n];
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    'outer: loop {
        let mut w = 1.0;
        let mut r2 = 0.0;
        for d in 0..n {
            y[d] = axes[d].0[idx[d]];
            w *= axes[d].1[idx[d]];
            r2 += y[d] * y[d];
        }
        if r2 <= r2max && w != 0.0 {
            total += w * weight(&y) * (g.f)(&y);
        }
        for d in (0..n).rev() {
            idx[d] += 1;
            if idx[d] < axes[d].0.len() {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    Ok((4.0 * PI * t).powf(-(n as f64) / 2.0) * total)
}

/// `u(x, t)` for N ≤ 3 by direct tensor quadrature with default settings.
pub fn solve_nd(g: &InitialDataND, x: &[f64], t: f64) -> Result<f64> {
    solve_nd_with(g, x, t, NdQuadrature::default())
}

pub fn solve_nd_with(g: &InitialDataND, x: &[f64], t: f64, q: NdQuadrature) -> Result<f64> {
    nd_kernel_integral(g, x, t, q, |_| 1.0)
}

/// `∂u/∂l (x, t) = (4πt)^{-N/2} ∫ (-(x-y)·l / 2t) e^{-|x-y|²/4t} g(y) dy`.
pub fn directional_derivative(g: &InitialDataND, x: &[f64], t: f64, l: &[f64]) -> Result<f64> {
    if l.len() != x.len() || (norm(l) - 1.0).abs() > 1e-10 {
        return invalid("direction must be a unit vector of the point's dimension");
    }
    nd_kernel_integral(g, x, t, NdQuadrature::default(), |y| {
        let proj: f64 = x.iter().zip(y).zip(l).map(|((xi, yi), li)| (xi - yi) * li).sum();
        -proj / (2.0 * t)
    })
}

/// `u_rad(r, t)` for `u(·,0) = ψ(|x|)` in ℝ³ via the radial reduction
/// `(4πt)^{-1/2} r^{-1} ∫_0^R ρ ψ(ρ) [e^{-(r-ρ)²/4t} - e^{-(r+ρ)²/4t}] dρ`.
///
/// The bracket divided by `r` is evaluated as
/// `e^{-(r-ρ)²/4t} (ρ/t) φ(rρ/t)` with `φ(z) = (1 - e^{-z})/z`, which is
/// free of cancellation for every `r ≥ 0` and gives the `r = 0` value directly.
pub fn solve_radial_3d(psi: &RadialProfile, r: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if !(r >= 0.0) {
        return invalid(format!("radius must be non-negative, got {r}"));
    }
    let reach = KERNEL_REACH * t.sqrt();
    let lo = (r - reach).max(0.0);
    let hi = (r + reach).min(psi.support);
    if !(lo < hi) {
        return Ok(0.0);
    }
    let panels = ((hi - lo) / (2.0 * t.sqrt())).ceil().clamp(2.0, 64.0) as usize;
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| lo + (hi - lo) * i as f64 / panels as f64)
        .collect();
    let integrand = |rho: f64| {
        let d = r - rho;
        rho * psi.evaluate(rho) * (-d * d / (4.0 * t)).exp() * (rho / t) * phi(r * rho / t)
    };
    let opts = AdaptiveOptions {
        rel_tol: KERNEL_REL_TOL,
        abs_tol: 0.0,
        max_panels: 20_000,
        norm: ToleranceNorm::L1,
    };
    Ok(prefactor_1d(t) * adaptive_integrate_with(integrand, &breaks, opts)?.value)
}

/// `(1 - e^{-z}) / z`, continuous at 0.
fn phi(z: f64) -> f64 {
    if z < 1e-8 {
        1.0 - 0.5 * z
    } else {
        -(-z).exp_m1() / z
    }
}

/// Test fixtures with closed-form evolutions.
pub mod fixtures {
    use super::*;

    /// Radius beyond which `e^{-ρ²/4s0}` is below `1e-16`, so truncating
    /// there discards less than `1e-14` of the mass in any dimension ≤ 3.
    pub fn gaussian_cutoff(s0: f64) -> f64 {
        (4.0 * s0 * 16.0 * std::f64::consts::LN_10).sqrt()
    }

    /// `e^{-μ²/4s0}` on `[-c, c]`, `c` = [`gaussian_cutoff`]. Evolves to
    /// `(s0/(s0+t))^{1/2} e^{-s²/4(s0+t)}` up to the truncation.
    pub fn truncated_gaussian_1d(s0: f64) -> InitialProfile1D {
        InitialProfile1D::new(gaussian_cutoff(s0), 1.0, move |m| (-m * m / (4.0 * s0)).exp())
            .expect("valid fixture")
            .even()
    }

    /// `e^{-|y|²/4s0}` on the ball of radius [`gaussian_cutoff`] in ℝ^N.
    pub fn truncated_gaussian_nd(n: usize, s0: f64) -> InitialDataND {
        InitialDataND::new(n, gaussian_cutoff(s0), 1.0, move |y| (-dot(y, y) / (4.0 * s0)).exp())
            .expect("valid fixture")
            .with_feature_length(2.0 * s0.sqrt())
    }

    pub fn gaussian_evolution(n: usize, s0: f64, x: &[f64], t: f64) -> f64 {
        (s0 / (s0 + t)).powf(n as f64 / 2.0) * (-dot(x, x) / (4.0 * (s0 + t))).exp()
    }

    /// The standard bump `exp(-1/(1 - (ρ/R)²))` on `[0, R)`.
    pub fn bump(rho: f64, radius: f64) -> f64 {
        let q = rho / radius;
        if q.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - q * q)).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::numerics::{adaptive_integrate, fd_heat_residual};

    fn mollifier(a: f64) -> InitialProfile1D {
        InitialProfile1D::new(a, 1.0, move |s| bump(s, a)).unwrap().even()
    }

    #[test]
    fn zero_data_gives_zero() {
        let z = InitialProfile1D::new(1.0, 1.0, |_| 0.0).unwrap();
        assert_eq!(solve_1d(&z, 0.3, 2.0).unwrap(), 0.0);
        let z = InitialDataND::new(3, 1.0, 1.0, |_| 0.0).unwrap();
        assert_eq!(solve_nd(&z, &[0.1, 0.2, 0.3], 1.0).unwrap(), 0.0);
        let z = RadialProfile::new(1.0, |_| 0.0).unwrap();
        assert_eq!(solve_radial_3d(&z, 0.5, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_positive_time() {
        let v0 = mollifier(1.0);
        for t in [0.0, -1.0] {
            assert!(matches!(solve_1d(&v0, 0.0, t), Err(Error::InvalidInput(_))));
            assert!(matches!(d3v_ds3(&v0, 0.0, t), Err(Error::InvalidInput(_))));
            assert!(matches!(d4v_ds4(&v0, 0.0, t), Err(Error::InvalidInput(_))));
        }
        let g = truncated_gaussian_nd(2, 0.5);
        assert!(matches!(solve_nd(&g, &[0.0, 0.0], 0.0), Err(Error::InvalidInput(_))));
        let g4 = InitialDataND::new(4, 1.0, 1.0, |_| 1.0).unwrap();
        assert!(matches!(solve_nd(&g4, &[0.0; 4], 1.0), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn gaussian_closed_form_1d() {
        let s0 = 0.5;
        let v0 = truncated_gaussian_1d(s0);
        for (s, t) in [(0.0, 0.1), (1.3, 1.0), (-2.0, 3.0), (4.0, 10.0), (0.7, 0.01)] {
            let got = solve_1d(&v0, s, t).unwrap();
            let want = gaussian_evolution(1, s0, &[s], t);
            assert!((got - want).abs() <= 1e-12 * want, "({s},{t}): {got} vs {want}");
        }
    }

    #[test]
    fn mass_is_conserved() {
        let v0 = mollifier(1.0);
        let mass = adaptive_integrate(|s| v0.evaluate(s), -1.0, 1.0, 1e-14).unwrap().value;
        let t = 1.0;
        let spread = 30.0;
        let evolved = adaptive_integrate(|s| solve_1d(&v0, s, t).unwrap(), -spread, spread, 1e-13)
            .unwrap()
            .value;
        assert!((evolved - mass).abs() < 1e-10, "{evolved} vs {mass}");
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let v0 = mollifier(1.0);
        let (s, t) = (1.5, 2.0);
        let h = 0.02;
        let v = |s: f64| solve_1d(&v0, s, t).unwrap();
        let fd3 = (-v(s + 3.0 * h) + 8.0 * v(s + 2.0 * h) - 13.0 * v(s + h) + 13.0 * v(s - h)
            - 8.0 * v(s - 2.0 * h)
            + v(s - 3.0 * h))
            / (8.0 * h.powi(3));
        let d3 = d3v_ds3(&v0, s, t).unwrap();
        assert!((fd3 - d3).abs() < 1e-6, "{fd3} vs {d3}");

        let w = |s: f64| d3v_ds3(&v0, s, t).unwrap();
        let fd4 = (-w(s + 2.0 * h) + 8.0 * w(s + h) - 8.0 * w(s - h) + w(s - 2.0 * h)) / (12.0 * h);
        let d4 = d4v_ds4(&v0, s, t).unwrap();
        assert!((fd4 - d4).abs() < 1e-6, "{fd4} vs {d4}");
    }

    #[test]
    fn hermite_form_agrees_with_explicit_polynomials() {
        let v0 = mollifier(1.0);
        for (s, t) in [(0.4, 0.3), (2.5, 1.5), (-7.0, 9.0)] {
            let d3 = d3v_ds3(&v0, s, t).unwrap();
            let d4 = d4v_ds4(&v0, s, t).unwrap();
            assert!((dnv_dsn(&v0, 3, s, t).unwrap() - d3).abs() <= 1e-12 * d3.abs().max(1e-300));
            assert!((dnv_dsn(&v0, 4, s, t).unwrap() - d4).abs() <= 1e-12 * d4.abs().max(1e-300));
            let d0 = solve_1d(&v0, s, t).unwrap();
            assert!((dnv_dsn(&v0, 0, s, t).unwrap() - d0).abs() <= 1e-14 * d0);
        }
    }

    #[test]
    fn parity_of_derivatives() {
        let v0 = mollifier(1.0);
        let t = 1.7;
        assert!(d3v_ds3(&v0, 0.0, t).unwrap().abs() < 1e-15);
        for s in [0.3, 1.1, 2.9, 5.0] {
            let (p, m) = (solve_1d(&v0, s, t).unwrap(), solve_1d(&v0, -s, t).unwrap());
            assert!((p - m).abs() <= 1e-12 * p.abs());
            let (p, m) = (d3v_ds3(&v0, s, t).unwrap(), d3v_ds3(&v0, -s, t).unwrap());
            assert!((p + m).abs() <= 1e-12 * p.abs());
            let (p, m) = (d4v_ds4(&v0, s, t).unwrap(), d4v_ds4(&v0, -s, t).unwrap());
            assert!((p - m).abs() <= 1e-12 * p.abs());
        }
    }

    #[test]
    fn far_field_signs_of_third_and_fourth_derivatives() {
        let a = 1.0;
        let v0 = mollifier(a);
        for t in [0.5f64, 2.0, 4.0, 30.0] {
            for k in 1..=20 {
                let s = a + (6.0 * t).sqrt() + 0.25 * k as f64 * t.sqrt();
                assert!(d3v_ds3(&v0, s, t).unwrap() < 0.0, "d3 at ({s},{t})");
            }
        }
        let t = 4.0f64;
        for k in 1..=20 {
            let s = a + (12.0 * t).sqrt() + 0.25 * k as f64;
            assert!(d4v_ds4(&v0, s, t).unwrap() > 0.0, "d4 at {s}");
        }
    }

    #[test]
    fn self_similar_scaling() {
        let v0 = mollifier(1.0);
        for lambda in [0.5, 2.0, 3.0] {
            let scaled = v0.rescaled(lambda).unwrap();
            for (s, t) in [(0.2, 0.5), (1.0, 1.0), (3.0, 2.0)] {
                let lhs = solve_1d(&v0, lambda * s, lambda * lambda * t).unwrap();
                let rhs = solve_1d(&scaled, s, t).unwrap();
                assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs(), "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn gaussian_closed_form_nd() {
        let s0 = 0.5;
        for n in 1..=3 {
            let g = truncated_gaussian_nd(n, s0);
            for (x, t) in [(vec![0.2, -0.4, 0.9], 0.5), (vec![1.5, 0.3, -0.2], 2.0)] {
                let x = &x[..n];
                let got = solve_nd(&g, x, t).unwrap();
                let want = gaussian_evolution(n, s0, x, t);
                assert!((got - want).abs() <= 1e-10 * want, "n={n}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn radial_reduction_matches_direct_quadrature() {
        let psi = RadialProfile::new(1.5, |r| bump(r, 1.5)).unwrap();
        let g = psi.to_nd(1.0).unwrap().with_feature_length(0.25);
        for (r, t) in [(0.0, 0.5), (0.7, 1.0), (2.0, 0.8), (3.5, 4.0)] {
            let radial = solve_radial_3d(&psi, r, t).unwrap();
            let direct = solve_nd(&g, &[r, 0.0, 0.0], t).unwrap();
            assert!((radial - direct).abs() <= 1e-10 * radial, "({r},{t}): {radial} vs {direct}");
        }
    }

    #[test]
    fn radial_solution_is_continuous_at_origin() {
        let psi = RadialProfile::new(2.0, |r| bump(r, 2.0)).unwrap();
        let t = 0.7;
        let u0 = solve_radial_3d(&psi, 0.0, t).unwrap();
        let u1 = solve_radial_3d(&psi, 1e-6, t).unwrap();
        assert!((u0 - u1).abs() < 1e-10 * u0);
    }

    #[test]
    fn directional_derivative_checks() {
        let g = RadialProfile::new(1.0, |r| bump(r, 1.0)).unwrap().to_nd(1.0).unwrap();
        let t = 1.0;
        let l = [0.0, 0.6, 0.8];
        for c in [0.5, 1.5, 3.0] {
            let x: Vec<f64> = l.iter().map(|v| c * v).collect();
            assert!(directional_derivative(&g, &x, t, &l).unwrap() < 0.0);
        }
        let x = [1.2, 0.3, -0.4];
        let e1 = [1.0, 0.0, 0.0];
        let h = 1e-3;
        let u = |d: f64| solve_nd(&g, &[x[0] + d, x[1], x[2]], t).unwrap();
        let fd = (u(-2.0 * h) - 8.0 * u(-h) + 8.0 * u(h) - u(2.0 * h)) / (12.0 * h);
        let dd = directional_derivative(&g, &x, t, &e1).unwrap();
        assert!((fd - dd).abs() < 1e-7, "{fd} vs {dd}");

        // tangent to the level sphere through x
        let tangent = {
            let v = [0.3, -1.2, 0.0];
            let n = norm(&v);
            [v[0] / n, v[1] / n, v[2] / n]
        };
        assert!(dot(&tangent, &x).abs() < 1e-15);
        assert!(directional_derivative(&g, &x, t, &tangent).unwrap().abs() < 1e-10);
        assert!(directional_derivative(&g, &x, t, &[1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn nd_solution_satisfies_heat_equation() {
        let g = truncated_gaussian_nd(2, 0.3);
        for (x, t) in [([0.3, -0.2], 0.5), ([1.0, 2.0], 3.0), ([-4.0, 1.0], 20.0), ([5.0, 5.0], 100.0)] {
            let steps = crate::numerics::default_steps(t);
            let r = fd_heat_residual(|y, s| solve_nd(&g, y, s), &x, t, steps.h, steps.dt).unwrap();
            assert!(r <= 1e-6 * g.sup_bound(), "({x:?},{t}): {r}");
        }
    }
}
