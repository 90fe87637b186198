use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};

/// Gauss–Legendre rule mapped onto an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on the three-term recurrence.
fn reference_rule(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                dp = legendre_with_derivative(n, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// The `order`-point Gauss–Legendre rule affinely mapped onto `[lo, hi]`.
pub fn gauss_nodes(order: usize, lo: f64, hi: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return invalid("Gauss rule order must be at least 1");
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return invalid(format!("invalid interval [{lo}, {hi}]"));
    }
    let (x, w) = reference_rule(order);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok(QuadratureRule {
        nodes: x.iter().map(|&x| mid + half * x).collect(),
        weights: w.iter().map(|&w| half * w).collect(),
        order,
    })
}

/// Embedded pair used by the adaptive integrator: orders `LOW` and `2·LOW`.
const LOW: usize = 12;

fn embedded_pair() -> &'static ((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>)) {
    static PAIR: OnceLock<((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>))> = OnceLock::new();
    PAIR.get_or_init(|| (reference_rule(LOW), reference_rule(2 * LOW)))
}

/// An integral value together with a conservative error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// What the relative tolerance is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToleranceNorm {
    /// `|∫ f|`
    Value,
    /// `∫ |f|`, appropriate for sign-changing integrands that may cancel.
    L1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub norm: ToleranceNorm,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_panels: 4000,
            norm: ToleranceNorm::Value,
        }
    }
}

impl AdaptiveOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    l1: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // Largest error first; ties go to the leftmost panel.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn evaluate_panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let ((xl, wl), (xh, wh)) = embedded_pair();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut low = 0.0;
    for (x, w) in xl.iter().zip(wl) {
        let y = f(mid + half * x);
        if !y.is_finite() {
            return Err(Error::Evaluation { at: mid + half * x, value: y });
        }
        low += w * y;
    }
    let mut high = 0.0;
    let mut l1 = 0.0;
    for (x, w) in xh.iter().zip(wh) {
        let y = f(mid + half * x);
        if !y.is_finite() {
            return Err(Error::Evaluation { at: mid + half * x, value: y });
        }
        high += w * y;
        l1 += w * y.abs();
    }
    let (low, high, l1) = (low * half, high * half, l1 * half);
    // Differences at the rounding level of the panel are not resolvable.
    let error = (high - low).abs().max(0.0);
    let floor = 64.0 * f64::EPSILON * l1;
    Ok(Panel {
        lo,
        hi,
        value: high,
        l1,
        error: if error <= floor { 0.0 } else { error },
    })
}

/// Adaptive composite Gauss–Legendre integration of `f` over `[lo, hi]`
/// with the default options and relative tolerance `tol`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Estimate> {
    adaptive_integrate_with(f, &[lo, hi], AdaptiveOptions::with_rel_tol(tol))
}

/// Adaptive integration over the union of the consecutive intervals given
/// by `breakpoints`. The panel with the largest embedded error (difference
/// between the 12- and 24-point rules) is bisected until the summed error
/// meets `max(rel_tol·norm, abs_tol)`.
pub fn adaptive_integrate_with<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    opts: AdaptiveOptions,
) -> Result<Estimate> {
    if breakpoints.len() < 2 {
        return invalid("need at least two breakpoints");
    }
    if !(opts.rel_tol > 0.0) || opts.abs_tol < 0.0 {
        return invalid("tolerances must be positive");
    }
    for w in breakpoints.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return invalid(format!("invalid interval [{}, {}]", w[0], w[1]));
        }
    }

    let mut heap = BinaryHeap::new();
    let mut done = Vec::new();
    let (mut value, mut l1, mut error) = (0.0, 0.0, 0.0);
    for w in breakpoints.windows(2) {
        let p = evaluate_panel(&f, w[0], w[1])?;
        value += p.value;
        l1 += p.l1;
        error += p.error;
        heap.push(p);
    }

    let target = |value: f64, l1: f64| {
        let scale = match opts.norm {
            ToleranceNorm::Value => value.abs(),
            ToleranceNorm::L1 => l1,
        };
        (opts.rel_tol * scale).max(opts.abs_tol)
    };

    let mut panels = heap.len();
    while error > target(value, l1) {
        let Some(worst) = heap.pop() else { break };
        if worst.error == 0.0 {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            // Panel cannot be split further in floating point.
            done.push(worst);
            error -= worst.error;
            continue;
        }
        if panels >= opts.max_panels {
            heap.push(worst);
            let (value, error) = resum(heap.into_iter().chain(done));
            return Err(Error::Convergence { value, error, panels });
        }
        let left = evaluate_panel(&f, worst.lo, mid)?;
        let right = evaluate_panel(&f, mid, worst.hi)?;
        value += left.value + right.value - worst.value;
        l1 += left.l1 + right.l1 - worst.l1;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
    }

    let (value, error) = resum(heap.into_iter().chain(done));
    Ok(Estimate { value, error })
}

/// Sum panels left to right so the result does not depend on heap order.
fn resum(panels: impl Iterator<Item = Panel>) -> (f64, f64) {
    let mut all: Vec<Panel> = panels.collect();
    all.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    all.iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// `∫_{-1}^{1} f(t) (1 - t²)^κ dt` through `t = cos θ`, which turns the
/// weight into `sin^{2κ+1} θ` and never evaluates it at `t = ±1`.
///
/// For `-1 < κ < -1/2` the remaining `θ^{2κ+1}` endpoint singularity is
/// removed by the further substitution `θ = φ^{1/(2κ+2)}` on each half.
pub fn integrate_singular_weight<F: Fn(f64) -> f64>(f: F, kappa: f64, tol: f64) -> Result<Estimate> {
    if !(kappa > -1.0) {
        return invalid(format!("weight exponent must exceed -1, got {kappa}"));
    }
    let p = 2.0 * kappa + 1.0;
    let opts = AdaptiveOptions {
        rel_tol: tol,
        abs_tol: 0.0,
        ..AdaptiveOptions::default()
    };
    if p >= 0.0 {
        let g = |theta: f64| {
            let s = theta.sin();
            let w = if p == 0.0 { 1.0 } else { s.powf(p) };
            f(theta.cos()) * w
        };
        return adaptive_integrate_with(g, &[0.0, FRAC_PI_2, PI], opts);
    }
    // θ = φ^m with m = 1/(p+1): θ^p dθ = m dφ.
    let m = 1.0 / (p + 1.0);
    let end = FRAC_PI_2.powf(1.0 / m);
    let sinc_power = |theta: f64| {
        if theta == 0.0 {
            1.0
        } else {
            (theta.sin() / theta).powf(p)
        }
    };
    let near_zero = |phi: f64| {
        let theta = phi.powf(m);
        m * sinc_power(theta) * f(theta.cos())
    };
    // Mirror θ ↦ π − θ for the other endpoint: cos flips sign, sin is unchanged.
    let near_pi = |phi: f64| {
        let theta = phi.powf(m);
        m * sinc_power(theta) * f(-theta.cos())
    };
    let a = adaptive_integrate_with(near_zero, &[0.0, end], opts)?;
    let b = adaptive_integrate_with(near_pi, &[0.0, end], opts)?;
    Ok(Estimate {
        value: a.value + b.value,
        error: a.error + b.error,
    })
}
