use crate::error::{invalid, Result};

/// Spatial and temporal steps for [`fd_heat_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub h: f64,
    pub dt: f64,
}

/// Steps scaled with the diffusion length `√t`: `h = max(1e-3, 0.03·√t)`,
/// `dt = 1.5e-3·t`. The time step is small enough that the time
/// truncation error stays well below the spatial one, so halving `h`
/// exposes the fourth-order spatial convergence.
pub fn default_steps(t: f64) -> FdSteps {
    FdSteps {
        h: (0.03 * t.sqrt()).max(1e-3),
        dt: 1.5e-3 * t,
    }
}

/// `|∂_t u − Δu|` at `(x, t)` from fourth-order central differences in
/// each spatial direction and a fourth-order central difference in time.
/// The time stencil reaches back to `t − 2·dt`, which must stay positive.
pub fn fd_heat_residual<F>(u: F, x: &[f64], t: f64, h: f64, dt: f64) -> Result<f64>
where
    F: Fn(&[f64], f64) -> Result<f64>,
{
    if !(h > 0.0) || !(dt > 0.0) {
        return invalid("finite-difference steps must be positive");
    }
    if !(t - 2.0 * dt > 0.0) {
        return invalid(format!("time stencil at t = {t} with dt = {dt} leaves t > 0"));
    }
    if x.is_empty() {
        return invalid("point must have at least one coordinate");
    }

    let centre = u(x, t)?;
    let mut laplacian = 0.0;
    let mut p = x.to_vec();
    for i in 0..x.len() {
        let mut at = |offset: f64| -> Result<f64> {
            p[i] = x[i] + offset;
            let v = u(&p, t);
            p[i] = x[i];
            v
        };
        let (m2, m1, p1, p2) = (at(-2.0 * h)?, at(-h)?, at(h)?, at(2.0 * h)?);
        laplacian += (-m2 + 16.0 * m1 - 30.0 * centre + 16.0 * p1 - p2) / (12.0 * h * h);
    }
    let dudt = (u(x, t - 2.0 * dt)? - 8.0 * u(x, t - dt)? + 8.0 * u(x, t + dt)? - u(x, t + 2.0 * dt)?)
        / (12.0 * dt);
    Ok((dudt - laplacian).abs())
}
