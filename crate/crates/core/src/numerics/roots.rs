use crate::error::{invalid, Error, Result};

/// An interval on which a continuous function changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Requires `lo < hi` and `f_lo · f_hi < 0`, or an exact zero at one end.
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return invalid(format!("bracket [{lo}, {hi}] is empty"));
        }
        let opposite = f_lo * f_hi < 0.0;
        let touches_zero = (f_lo == 0.0) != (f_hi == 0.0);
        if !(opposite || touches_zero) {
            return invalid(format!(
                "no sign change on [{lo}, {hi}]: f = ({f_lo:e}, {f_hi:e})"
            ));
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Every adjacent pair of grid nodes across which `f` changes sign, in grid
/// order. A node where `f` vanishes exactly counts as non-negative.
pub fn sign_scan<F: Fn(f64) -> f64>(f: F, grid: &[f64]) -> Result<Vec<Bracket>> {
    if grid.len() < 2 {
        return invalid("sign scan needs at least two grid points");
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return invalid("sign scan grid must be strictly increasing");
    }
    let mut out = Vec::new();
    let mut prev = (grid[0], finite(&f, grid[0])?);
    for &x in &grid[1..] {
        let fx = finite(&f, x)?;
        if (prev.1 < 0.0) != (fx < 0.0) {
            out.push(Bracket {
                lo: prev.0,
                hi: x,
                f_lo: prev.1,
                f_hi: fx,
            });
        }
        prev = (x, fx);
    }
    Ok(out)
}

fn finite<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation { at: x, value: v })
    }
}

/// A refined root with the final enclosing interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub f_x: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Root {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Brent's method: inverse quadratic interpolation and secant steps, with a
/// bisection fallback whenever the interpolant leaves the safe region or
/// progress stalls. Stops once the enclosing interval is no wider than `tol`
/// (or a few ulps, whichever is larger).
pub fn refine_root<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<Root> {
    let bracket = Bracket::new(bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi)?;
    if !(tol > 0.0) {
        return invalid("root tolerance must be positive");
    }
    if bracket.f_lo == 0.0 {
        return Ok(Root { x: bracket.lo, f_x: 0.0, lo: bracket.lo, hi: bracket.lo });
    }
    if bracket.f_hi == 0.0 {
        return Ok(Root { x: bracket.hi, f_x: 0.0, lo: bracket.hi, hi: bracket.hi });
    }

    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);

    for _ in 0..500 {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = (0.5 * tol).max(2.0 * f64::EPSILON * b.abs());
        let xm = 0.5 * (c - b);
        if fb == 0.0 {
            return Ok(Root { x: b, f_x: 0.0, lo: b, hi: b });
        }
        if xm.abs() <= tol1 {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok(Root { x: b, f_x: fb, lo, hi });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = finite(&f, b)?;
    }
    invalid("root refinement did not terminate")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bracket<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Bracket {
        Bracket::new(lo, hi, f(lo), f(hi)).unwrap()
    }

    #[test]
    fn scan_examples() {
        let b = sign_scan(|s| s - 1.0, &[0.0, 0.5, 2.0]).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].lo, b[0].hi), (0.5, 2.0));

        assert!(sign_scan(|s| s * s + 1.0, &[-3.0, -1.0, 0.0, 2.0, 5.0]).unwrap().is_empty());

        let b = sign_scan(f64::sin, &[0.1, 2.0, 4.0, 7.0]).unwrap();
        let pairs: Vec<_> = b.iter().map(|b| (b.lo, b.hi)).collect();
        assert_eq!(pairs, vec![(2.0, 4.0), (4.0, 7.0)]);
    }

    #[test]
    fn scan_errors() {
        assert!(matches!(sign_scan(|s| s, &[1.0]), Err(Error::InvalidInput(_))));
        assert!(matches!(sign_scan(|s| s, &[1.0, 1.0]), Err(Error::InvalidInput(_))));
        match sign_scan(|s| if s == 1.0 { f64::NAN } else { s }, &[0.0, 1.0, 2.0]) {
            Err(Error::Evaluation { at, .. }) => assert_eq!(at, 1.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn refine_examples() {
        let f = |s: f64| s - 2.0;
        let r = refine_root(f, bracket(&f, 1.0, 3.0), 1e-12).unwrap();
        assert!((r.x - 2.0).abs() < 1e-12);

        let f = |s: f64| s * s - 2.0;
        let r = refine_root(f, bracket(&f, 1.0, 2.0), 1e-12).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.width() <= 1e-12);

        let r = refine_root(f64::cos, bracket(&f64::cos, 1.0, 2.0), 1e-12).unwrap();
        assert!((r.x - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(r.width() <= 1e-12 && r.lo <= r.x && r.x <= r.hi);
    }

    #[test]
    fn refine_rejects_invalid_bracket() {
        let bad = Bracket { lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 2.0 };
        assert!(matches!(refine_root(|s| s + 1.0, bad, 1e-12), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn width_reaches_tolerance_at_large_magnitude() {
        let root = 316.22776601683793;
        let f = |s: f64| (s - root) * (1.0 + 0.01 * s);
        let r = refine_root(f, bracket(&f, 200.0, 400.0), 1e-12).unwrap();
        assert!(r.width() <= 1e-12, "{}", r.width());
        assert!(r.lo <= root && root <= r.hi);
    }
}
