//! Special functions behind the Funk–Hecke eigenvalue computation:
//! Legendre polynomials of dimension N, sphere areas, the eigenvalue of
//! `f ↦ ∫ e^{L α·ω} f(α) dσ(α)` on degree-k harmonics (closed form and
//! direct quadrature), quadrature grids on `S¹` and `S²`, and a fixed
//! catalog of real solid harmonics of degree ≤ 6 on ℝ³.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, norm};
use crate::numerics::{gauss_nodes, integrate_singular_weight};

/// Highest degree in the harmonic catalog.
pub const MAX_HARMONIC_DEGREE: usize = 6;

const LAMBDA_TOL: f64 = 1e-15;

/// `Γ(m/2)` for `m ≥ 1`, exact up to rounding via `Γ(x+1) = xΓ(x)` from
/// `Γ(1/2) = √π` and `Γ(1) = 1`.
pub fn gamma_half(m: usize) -> f64 {
    assert!(m >= 1, "Γ(m/2) needs m ≥ 1");
    let (mut x, mut g) = if m % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    while 2.0 * x < m as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Surface area of the unit sphere `S^m ⊂ ℝ^{m+1}`: `2π^{(m+1)/2} / Γ((m+1)/2)`.
pub fn sphere_area(m: usize) -> f64 {
    2.0 * PI.powf((m as f64 + 1.0) / 2.0) / gamma_half(m + 1)
}

/// The Legendre polynomial of degree `k` in dimension `N`, normalized so
/// that `P_k(1) = 1`. These are Gegenbauer polynomials `C_k^{(N-2)/2}`
/// divided by their value at 1 (Chebyshev polynomials when N = 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LegendrePoly {
    pub degree: usize,
    pub dimension: usize,
}

impl LegendrePoly {
    pub fn new(degree: usize, dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return invalid(format!("Legendre polynomials need N ≥ 2, got {dimension}"));
        }
        Ok(Self { degree, dimension })
    }

    /// Three-term recurrence
    /// `(k+N-2) P_{k+1} = (2k+N-2) t P_k - k P_{k-1}`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let n = self.dimension as f64;
        let (mut p0, mut p1) = (1.0, t);
        if self.degree == 0 {
            return p0;
        }
        for k in 1..self.degree {
            let kf = k as f64;
            let p2 = ((2.0 * kf + n - 2.0) * t * p1 - kf * p0) / (kf + n - 2.0);
            p0 = p1;
            p1 = p2;
        }
        p1
    }
}

pub fn legendre_eval(k: usize, n: usize, t: f64) -> Result<f64> {
    if !(t.abs() <= 1.0) {
        return invalid(format!("Legendre argument must lie in [-1, 1], got {t}"));
    }
    Ok(LegendrePoly::new(k, n)?.evaluate(t))
}

fn check_lambda_args(n: usize, l: f64) -> Result<()> {
    if n < 2 {
        return invalid(format!("Funk–Hecke eigenvalues need N ≥ 2, got {n}"));
    }
    if l == 0.0 || !l.is_finite() {
        return invalid(format!("L must be a nonzero real, got {l}"));
    }
    Ok(())
}

/// Eigenvalue after integrating by parts `k` times against the Rodrigues form:
///
/// `λ = |S^{N-2}| Γ((N-1)/2) / (2^k Γ(k+(N-1)/2)) · L^k ∫_{-1}^{1} e^{Lt} (1-t²)^{k+(N-3)/2} dt`.
pub fn funk_hecke_lambda_closed(k: usize, n: usize, l: f64) -> Result<f64> {
    check_lambda_args(n, l)?;
    let kappa = k as f64 + (n as f64 - 3.0) / 2.0;
    let integral = integrate_singular_weight(|t| (l * t).exp(), kappa, LAMBDA_TOL)?.value;
    let ratio = gamma_half(n - 1) / (2f64.powi(k as i32) * gamma_half(2 * k + n - 1));
    Ok(sphere_area(n - 2) * ratio * l.powi(k as i32) * integral)
}

/// `e^x - Σ_{j<k} x^j/j!`, summed without cancellation where possible.
fn exp_tail(x: f64, k: usize) -> f64 {
    if k == 0 {
        return x.exp();
    }
    if x >= 0.0 || x.abs() <= 2.0 {
        let mut term = (1..=k).fold(1.0, |acc, j| acc * x / j as f64);
        let mut sum = term;
        let mut j = k;
        while term.abs() > 1e-18 * sum.abs() && j < k + 2000 {
            j += 1;
            term *= x / j as f64;
            sum += term;
        }
        sum
    } else {
        let mut term = 1.0;
        let mut head = 0.0;
        for j in 0..k {
            if j > 0 {
                term *= x / j as f64;
            }
            head += term;
        }
        x.exp() - head
    }
}

/// Eigenvalue from its defining integral
/// `λ = |S^{N-2}| ∫_{-1}^{1} e^{Lt} P_k(t) (1-t²)^{(N-3)/2} dt`.
///
/// `P_k` is orthogonal to polynomials of lower degree, so the Taylor
/// polynomial of `e^{Lt}` of degree `k-1` is dropped from the integrand.
/// The integral is unchanged and the quadrature avoids cancelling O(1)
/// contributions down to an O(L^k/k!) result.
pub fn funk_hecke_lambda_direct(k: usize, n: usize, l: f64) -> Result<f64> {
    check_lambda_args(n, l)?;
    let p = LegendrePoly::new(k, n)?;
    let kappa = (n as f64 - 3.0) / 2.0;
    let integral = integrate_singular_weight(|t| exp_tail(l * t, k) * p.evaluate(t), kappa, LAMBDA_TOL)?.value;
    Ok(sphere_area(n - 2) * integral)
}

/// Quadrature on the unit sphere `S^{N-1}` for N ∈ {2, 3}.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub dimension: usize,
    /// Spherical polynomials of degree ≤ `order` are integrated exactly.
    pub order: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// N = 2: `order + 1` equally spaced points on the circle.
/// N = 3: Gauss–Legendre in `cos θ` (`order/2 + 1` points) times
/// `order + 1` equally spaced longitudes.
pub fn sphere_grid(n: usize, order: usize) -> Result<SphereGrid> {
    if order == 0 {
        return invalid("sphere grid order must be at least 1");
    }
    let (nodes, weights) = match n {
        2 => {
            let m = order + 1;
            let w = 2.0 * PI / m as f64;
            let nodes = (0..m)
                .map(|j| {
                    let phi = 2.0 * PI * j as f64 / m as f64;
                    vec![phi.cos(), phi.sin()]
                })
                .collect();
            (nodes, vec![w; m])
        }
        3 => {
            let polar = gauss_nodes(order / 2 + 1, -1.0, 1.0)?;
            let m = order + 1;
            let mut nodes = Vec::with_capacity(polar.nodes.len() * m);
            let mut weights = Vec::with_capacity(polar.nodes.len() * m);
            for (&z, &wz) in polar.nodes.iter().zip(&polar.weights) {
                let rho = (1.0 - z * z).sqrt();
                for j in 0..m {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    nodes.push(vec![rho * phi.cos(), rho * phi.sin(), z]);
                    weights.push(wz * 2.0 * PI / m as f64);
                }
            }
            (nodes, weights)
        }
        other => return Err(Error::UnsupportedDimension(other)),
    };
    Ok(SphereGrid { dimension: n, order, nodes, weights })
}

/// `ℒf(ω) = ∫_{S^{N-1}} e^{L α·ω} f(α) dσ(α)` on `grid`.
pub fn funk_hecke_apply<F: Fn(&[f64]) -> f64>(f: F, l: f64, grid: &SphereGrid, omega: &[f64]) -> Result<f64> {
    if omega.len() != grid.dimension {
        return invalid("evaluation direction has the wrong dimension");
    }
    Ok(grid.integrate(|alpha| (l * dot(alpha, omega)).exp() * f(alpha)))
}

/// Number of linearly independent harmonics of degree `k` in ℝ³.
pub fn harmonic_dimension(k: usize) -> usize {
    2 * k + 1
}

/// Order `m` and cos/sin flavour of a catalog variant: variant 0 is `m = 0`,
/// variant `2m-1` carries `cos mφ` and variant `2m` carries `sin mφ`.
fn variant_order(variant: usize) -> (usize, bool) {
    if variant == 0 {
        (0, true)
    } else {
        ((variant + 1) / 2, variant % 2 == 1)
    }
}

/// Catalog of real solid harmonics `r^k P_k^m(cos θ) {cos, sin}(mφ)` written
/// as homogeneous harmonic polynomials in `(x₁, x₂, x₃)` and evaluated by
/// recurrence in `x₃` and `|x|²`. Degree 1 is `x₃, x₁, x₂`; degree 2 contains
/// multiples of `x₁x₃`, `x₂x₃`, `x₁² - x₂²` and `x₁x₂`.
pub fn harmonic_poly(k: usize, variant: usize, x: &[f64]) -> Result<f64> {
    if k > MAX_HARMONIC_DEGREE {
        return invalid(format!("harmonic catalog covers degrees 0..={MAX_HARMONIC_DEGREE}, got {k}"));
    }
    if variant >= harmonic_dimension(k) {
        return invalid(format!("degree {k} has {} variants, got {variant}", harmonic_dimension(k)));
    }
    if x.len() != 3 {
        return invalid("harmonic catalog lives in ℝ³");
    }
    let (m, cosine) = variant_order(variant);
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    let r2 = x1 * x1 + x2 * x2 + x3 * x3;

    // (x₁ + i x₂)^m
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..m {
        (re, im) = (re * x1 - im * x2, re * x2 + im * x1);
    }
    let azimuthal = if cosine { re } else { im };

    // Q_l^m(x₃, r²) with Q_m^m = (2m-1)!!
    let mut q_prev = 0.0;
    let mut q = (1..=m).map(|j| (2 * j - 1) as f64).product::<f64>();
    for l in m + 1..=k {
        let lf = l as f64;
        let mf = m as f64;
        let next = ((2.0 * lf - 1.0) * x3 * q - (lf + mf - 1.0) * r2 * q_prev) / (lf - mf);
        q_prev = q;
        q = next;
    }
    Ok(q * azimuthal)
}

/// `∫_{S²} harmonic_poly(k, variant)² dσ`.
pub fn harmonic_norm_sq(k: usize, variant: usize) -> f64 {
    let (m, _) = variant_order(variant);
    let ratio: f64 = ((k - m + 1)..=(k + m)).map(|j| j as f64).product();
    let azimuthal = if m == 0 { 2.0 * PI } else { PI };
    2.0 / (2.0 * k as f64 + 1.0) * ratio * azimuthal
}

/// Catalog harmonic scaled to unit `L²(S²)` norm.
pub fn orthonormal_harmonic(k: usize, variant: usize, x: &[f64]) -> Result<f64> {
    Ok(harmonic_poly(k, variant, x)? / harmonic_norm_sq(k, variant).sqrt())
}

/// Pseudo-random unit vectors in ℝ^N, reproducible for a fixed seed.
pub fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let len = norm(&v);
            if len > 1e-8 {
                break v.into_iter().map(|x| x / len).collect();
            }
        })
        .collect()
}

/// One eigenvalue computed both ways, with the worst eigenrelation residual
/// `max_ω |ℒp(ω) - λ p(ω)| / max|p|` over degree-k harmonics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunkHeckeEigenvalue {
    pub k: usize,
    pub n: usize,
    pub l: f64,
    pub lambda_closed: f64,
    pub lambda_direct: f64,
    pub eigen_residual: f64,
}

impl FunkHeckeEigenvalue {
    pub fn rel_diff(&self) -> f64 {
        (self.lambda_closed - self.lambda_direct).abs() / self.lambda_closed.abs()
    }
}

/// Sphere grid order used for eigenrelation checks.
const EIGEN_GRID_ORDER: usize = 48;
/// Number of evaluation directions for eigenrelation checks.
const EIGEN_DIRECTIONS: usize = 50;

/// Computes both eigenvalue routes and checks `ℒp = λp` at 50 directions
/// for every degree-k harmonic: the catalog for N = 3, `Re/Im (x₁+ix₂)^k`
/// for N = 2.
pub fn funk_hecke_eigenvalue(k: usize, n: usize, l: f64) -> Result<FunkHeckeEigenvalue> {
    let lambda_closed = funk_hecke_lambda_closed(k, n, l)?;
    let lambda_direct = funk_hecke_lambda_direct(k, n, l)?;
    let grid = sphere_grid(n, EIGEN_GRID_ORDER)?;
    let directions = sample_directions(n, EIGEN_DIRECTIONS, 0x5eed + k as u64);

    let harmonics: Vec<Box<dyn Fn(&[f64]) -> f64>> = match n {
        2 => {
            let planar = move |x: &[f64], cosine: bool| {
                let (mut re, mut im) = (1.0, 0.0);
                for _ in 0..k {
                    (re, im) = (re * x[0] - im * x[1], re * x[1] + im * x[0]);
                }
                if cosine { re } else { im }
            };
            let mut v: Vec<Box<dyn Fn(&[f64]) -> f64>> = vec![Box::new(move |x| planar(x, true))];
            if k > 0 {
                v.push(Box::new(move |x| planar(x, false)));
            }
            v
        }
        3 => {
            if k > MAX_HARMONIC_DEGREE {
                return invalid(format!("eigenrelation check covers k ≤ {MAX_HARMONIC_DEGREE}"));
            }
            (0..harmonic_dimension(k))
                .map(|v| Box::new(move |x: &[f64]| harmonic_poly(k, v, x).expect("catalog index")) as Box<dyn Fn(&[f64]) -> f64>)
                .collect()
        }
        other => return Err(Error::UnsupportedDimension(other)),
    };

    let mut residual: f64 = 0.0;
    for p in &harmonics {
        let scale = grid.nodes.iter().map(|x| p(x).abs()).fold(0.0, f64::max);
        for omega in &directions {
            let lp = funk_hecke_apply(|a| p(a), l, &grid, omega)?;
            residual = residual.max((lp - lambda_closed * p(omega)).abs() / scale);
        }
    }

    Ok(FunkHeckeEigenvalue {
        k,
        n,
        l,
        lambda_closed,
        lambda_direct,
        eigen_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    /// `I_k(L) = Σ_j (L/2)^{2j+k} / (j! (j+k)!)`
    fn bessel_i(k: usize, l: f64) -> f64 {
        let mut term = (l / 2.0).powi(k as i32) / (1..=k).map(|j| j as f64).product::<f64>();
        let mut sum = term;
        for j in 1..60 {
            term *= (l / 2.0).powi(2) / (j as f64 * (j + k) as f64);
            sum += term;
        }
        sum
    }

    /// Modified spherical Bessel `i_k(L) = Σ_j L^{k+2j} / (2^j j! (2k+2j+1)!!)`
    fn spherical_bessel_i(k: usize, l: f64) -> f64 {
        let double_fact = |m: usize| (1..=m).rev().step_by(2).map(|j| j as f64).product::<f64>();
        let mut term = l.powi(k as i32) / double_fact(2 * k + 1);
        let mut sum = term;
        for j in 1..60 {
            term *= l * l / (2.0 * j as f64 * (2 * k + 2 * j + 1) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn gamma_at_half_integers() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(2), 1.0);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(10), 24.0);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(0) - 2.0).abs() < 1e-15);
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-15);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-14);
    }

    #[test]
    fn legendre_low_degrees() {
        for n in 2..=5 {
            for t in [-1.0, -0.3, 0.0, 0.5, 1.0] {
                assert_eq!(legendre_eval(0, n, t).unwrap(), 1.0);
                assert!((legendre_eval(1, n, t).unwrap() - t).abs() < 1e-15);
            }
        }
        for t in [-0.9, -0.2, 0.4, 0.77] {
            let p2 = legendre_eval(2, 3, t).unwrap();
            assert!((p2 - (3.0 * t * t - 1.0) / 2.0).abs() < 1e-15);
            // Chebyshev for N = 2
            let t4 = legendre_eval(4, 2, t).unwrap();
            assert!((t4 - (4.0 * t.acos()).cos()).abs() < 1e-14);
        }
        assert!(legendre_eval(2, 3, 1.1).is_err());
        assert!(legendre_eval(2, 1, 0.1).is_err());
    }

    #[test]
    fn legendre_normalization_and_parity() {
        for n in 2..=4 {
            for k in 0..=8 {
                assert!((legendre_eval(k, n, 1.0).unwrap() - 1.0).abs() < 1e-14);
                for t in [0.1, 0.45, 0.9] {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let (p, m) = (legendre_eval(k, n, t).unwrap(), legendre_eval(k, n, -t).unwrap());
                    assert!((m - sign * p).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn legendre_orthogonality() {
        for n in [2, 3] {
            let kappa = (n as f64 - 3.0) / 2.0;
            for j in 0..=6 {
                for k in 0..j {
                    let (pj, pk) = (LegendrePoly::new(j, n).unwrap(), LegendrePoly::new(k, n).unwrap());
                    let v = integrate_singular_weight(|t| pj.evaluate(t) * pk.evaluate(t), kappa, 1e-14)
                        .unwrap()
                        .value;
                    assert!(v.abs() < 1e-10, "N={n}, ({j},{k}): {v}");
                }
            }
        }
    }

    /// `c·t^p·(1-t²)^β` terms for symbolic differentiation.
    #[derive(Clone, Copy)]
    struct Term {
        c: f64,
        p: i32,
        beta: f64,
    }

    fn differentiate(terms: &[Term]) -> Vec<Term> {
        let mut out = Vec::new();
        for t in terms {
            if t.p > 0 {
                out.push(Term { c: t.c * t.p as f64, p: t.p - 1, beta: t.beta });
            }
            if t.beta != 0.0 {
                out.push(Term { c: -2.0 * t.beta * t.c, p: t.p + 1, beta: t.beta - 1.0 });
            }
        }
        out
    }

    fn rodrigues(k: usize, n: usize, t: f64) -> f64 {
        let half = (n as f64 - 3.0) / 2.0;
        let mut terms = vec![Term { c: 1.0, p: 0, beta: k as f64 + half }];
        for _ in 0..k {
            terms = differentiate(&terms);
        }
        let d: f64 = terms
            .iter()
            .map(|x| x.c * t.powi(x.p) * (1.0 - t * t).powf(x.beta))
            .sum();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * gamma_half(n - 1) / (2f64.powi(k as i32) * gamma_half(2 * k + n - 1))
            * (1.0 - t * t).powf(-half)
            * d
    }

    #[test]
    fn recurrence_matches_rodrigues() {
        for n in [2, 3, 4] {
            for k in 0..=4 {
                for t in [-0.95, -0.5, 0.0, 0.3, 0.8] {
                    let r = rodrigues(k, n, t);
                    let p = legendre_eval(k, n, t).unwrap();
                    assert!((r - p).abs() < 1e-11, "N={n} k={k} t={t}: {r} vs {p}");
                }
            }
        }
    }

    #[test]
    fn eigenvalue_reference_values() {
        let want0 = 2.0 * PI * (E - 1.0 / E);
        let want1 = 4.0 * PI / E;
        for f in [funk_hecke_lambda_closed, funk_hecke_lambda_direct] {
            assert!((f(0, 3, 1.0).unwrap() - want0).abs() < 1e-12 * want0);
            assert!((f(1, 3, 1.0).unwrap() - want1).abs() < 1e-12 * want1);
        }
        assert!((want0 - 14.7680).abs() < 1e-4);
        assert!((want1 - 4.622909).abs() < 1e-6);
    }

    #[test]
    fn eigenvalues_match_bessel_series() {
        for k in 0..=6 {
            for l in [0.5f64, 1.0, 2.0, -1.5] {
                let circle = 2.0 * PI * bessel_i(k, l.abs()) * if l < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                let c2 = funk_hecke_lambda_closed(k, 2, l).unwrap();
                assert!((c2 - circle).abs() <= 1e-12 * circle.abs(), "N=2 k={k} L={l}: {c2} vs {circle}");
                let sphere = 4.0 * PI * spherical_bessel_i(k, l.abs()) * if l < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                let c3 = funk_hecke_lambda_closed(k, 3, l).unwrap();
                assert!((c3 - sphere).abs() <= 1e-12 * sphere.abs(), "N=3 k={k} L={l}: {c3} vs {sphere}");
            }
        }
    }

    #[test]
    fn closed_and_direct_agree() {
        for n in [2, 3, 4] {
            for k in 0..=6 {
                for l in [0.5, 1.0, 2.0] {
                    let c = funk_hecke_lambda_closed(k, n, l).unwrap();
                    let d = funk_hecke_lambda_direct(k, n, l).unwrap();
                    assert!(c > 0.0);
                    assert!((c - d).abs() <= 1e-10 * c, "N={n} k={k} L={l}: {c} vs {d}");
                }
            }
        }
        let c = funk_hecke_lambda_closed(3, 2, 0.5).unwrap();
        let d = funk_hecke_lambda_direct(3, 2, 0.5).unwrap();
        assert!((c - d).abs() <= 1e-10 * c);
    }

    #[test]
    fn exp_tail_matches_definition() {
        for x in [-8.0f64, -1.5, -0.1, 0.0, 0.3, 2.0, 9.0] {
            assert!((exp_tail(x, 0) - x.exp()).abs() < 1e-15 * x.exp());
            assert!((exp_tail(x, 1) - x.exp_m1()).abs() < 1e-14 * x.exp().max(1.0));
            let k3 = x.exp() - 1.0 - x - x * x / 2.0;
            assert!((exp_tail(x, 3) - k3).abs() < 1e-12 * x.exp().max(x * x), "{x}");
        }
        // leading term dominates for small x
        let t = exp_tail(1e-3, 6);
        assert!((t / (1e-18 / 720.0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn lambda_rejects_zero_l() {
        assert!(matches!(funk_hecke_lambda_closed(1, 3, 0.0), Err(Error::InvalidInput(_))));
        assert!(matches!(funk_hecke_lambda_direct(1, 3, 0.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn sphere_grid_examples() {
        let g = sphere_grid(2, 7).unwrap();
        assert_eq!(g.len(), 8);
        assert!((g.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-14);

        let g = sphere_grid(3, 16).unwrap();
        assert!((g.weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
        for v in 0..7 {
            let i = g.integrate(|x| harmonic_poly(3, v, x).unwrap());
            assert!(i.abs() < 1e-13, "variant {v}: {i}");
        }
        let i = g.integrate(|x| x[0] * x[0]);
        assert!((i - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!(matches!(sphere_grid(4, 8), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn catalog_is_harmonic_and_homogeneous() {
        let h = 1e-3;
        for k in 0..=MAX_HARMONIC_DEGREE {
            for v in 0..harmonic_dimension(k) {
                let x = [0.31, -0.47, 0.72];
                let p = |y: &[f64]| harmonic_poly(k, v, y).unwrap();
                let mut lap = 0.0;
                for d in 0..3 {
                    let mut y = x;
                    let mut at = |o: f64| {
                        y[d] = x[d] + o;
                        p(&y)
                    };
                    lap += (-at(2.0 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2.0 * h))
                        / (12.0 * h * h);
                }
                assert!(lap.abs() < 1e-6 * harmonic_norm_sq(k, v).sqrt(), "k={k} v={v}: {lap}");
                let scaled = p(&[2.0 * x[0], 2.0 * x[1], 2.0 * x[2]]);
                assert!((scaled - 2f64.powi(k as i32) * p(&x)).abs() < 1e-13 * scaled.abs().max(1.0));
            }
        }
        // named members of the catalog
        let x = [0.3, 0.5, -0.2];
        assert!((harmonic_poly(2, 3, &x).unwrap() - 3.0 * (x[0] * x[0] - x[1] * x[1])).abs() < 1e-15);
        assert!((harmonic_poly(2, 4, &x).unwrap() - 6.0 * x[0] * x[1]).abs() < 1e-15);
        assert!(harmonic_poly(2, 5, &x).is_err());
        assert!(harmonic_poly(7, 0, &x).is_err());
    }

    #[test]
    fn catalog_is_orthonormal() {
        let g = sphere_grid(3, 14).unwrap();
        let all: Vec<(usize, usize)> = (0..=MAX_HARMONIC_DEGREE)
            .flat_map(|k| (0..harmonic_dimension(k)).map(move |v| (k, v)))
            .collect();
        for &(k1, v1) in &all {
            for &(k2, v2) in &all {
                let ip = g.integrate(|x| {
                    orthonormal_harmonic(k1, v1, x).unwrap() * orthonormal_harmonic(k2, v2, x).unwrap()
                });
                let want = if (k1, v1) == (k2, v2) { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12, "({k1},{v1})·({k2},{v2}) = {ip}");
            }
        }
    }

    #[test]
    fn transform_of_constant() {
        let g = sphere_grid(3, 48).unwrap();
        for l in [0.5f64, 1.0, 2.0] {
            let want = 2.0 * PI * (l.exp() - (-l).exp()) / l;
            for omega in sample_directions(3, 5, 1) {
                let v = funk_hecke_apply(|_| 1.0, l, &g, &omega).unwrap();
                assert!((v - want).abs() < 1e-12 * want);
            }
        }
    }

    #[test]
    fn transform_parity() {
        let g = sphere_grid(3, 40).unwrap();
        let f = |a: &[f64]| a[0] + a[1] * a[2] * a[0];
        for omega in sample_directions(3, 4, 3) {
            let neg: Vec<f64> = omega.iter().map(|x| -x).collect();
            let a = funk_hecke_apply(f, 1.3, &g, &omega).unwrap();
            let b = funk_hecke_apply(f, -1.3, &g, &neg).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn eigenrelation_holds() {
        for n in [2, 3] {
            for k in 0..=6 {
                for l in [0.5, 1.0, 2.0] {
                    let rec = funk_hecke_eigenvalue(k, n, l).unwrap();
                    assert!(rec.eigen_residual <= 1e-8, "N={n} k={k} L={l}: {}", rec.eigen_residual);
                    assert!(rec.rel_diff() <= 1e-10);
                    assert!(rec.lambda_closed.abs() >= 1e-12);
                }
            }
        }
    }
}
