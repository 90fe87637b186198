//! Numerical toolkit for heat-equation solutions with similar level sets.
//!
//! The crate evaluates solutions of the Cauchy problem `u_t = Δu`, `u(·,0) = g`
//! by heat-kernel quadrature, computes Funk–Hecke eigenvalues of the kernel
//! `e^{L α·ω}` on spheres, runs moment and geometric symmetry detectors, and
//! reconstructs a non-radial three-dimensional solution whose level sets at
//! radius `r(t) ~ √t` are exact spheres.
//!
//! Module map:
//!
//! - [`numerics`]: Gauss–Legendre quadrature, root bracketing and refinement,
//!   finite-difference heat residuals.
//! - [`heat`]: kernel convolution in 1-D, N-D and radial 3-D, with
//!   kernel-differentiated derivatives.
//! - [`special`]: dimension-N Legendre polynomials, sphere areas, Funk–Hecke
//!   eigenvalues, sphere quadrature and a catalog of solid harmonics.
//! - [`symmetry`]: level-set constancy checks, monotonicity, normal alignment,
//!   and Laplace/spherical moment detectors.
//! - [`counterexample`]: the sphere-level-set construction and its sweeps.
//! - [`acceptance`]: the pass/fail acceptance criteria shared by the test
//!   suite and the `verify-all` command.

pub mod acceptance;
pub mod counterexample;
pub mod error;
pub mod heat;
pub mod linalg;
pub mod numerics;
pub mod special;
pub mod symmetry;

pub use error::{Error, Result};
