//! Quadrature, ODE integration, interpolation and root finding used by the solvers.

pub mod interp;
pub mod ode;
pub mod quadrature;
pub mod roots;
pub mod special;
