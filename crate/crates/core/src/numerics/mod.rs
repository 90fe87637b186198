//! Quadrature, root finding and finite-difference stencils shared by the
//! rest of the crate. Everything here is a pure function of its inputs.

mod fd;
mod quadrature;
mod roots;

pub use fd::{default_steps, fd_heat_residual, FdSteps};
pub use quadrature::{
    adaptive_integrate, adaptive_integrate_with, gauss_nodes, integrate_singular_weight,
    AdaptiveOptions, Estimate, QuadratureRule, ToleranceNorm,
};
pub use roots::{refine_root, sign_scan, Bracket, Root};
