//! Numerical realization of L∞-by-Lᵖ bounds for Laplace-Beltrami eigenfunctions on
//! rotationally symmetric model manifolds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod geometry;
pub mod isoperimetry;
pub mod numerics;
pub mod radial;
pub mod report;
pub mod runner;

pub use bounds::{BoundScenario, CheckKind, Domain, Status, VerificationReport};
pub use config::{parse_config, RunConfig};
pub use error::{Error, Result};
pub use geometry::{BallGeometry, Curvature, ModelKind, WarpingModel};
pub use isoperimetry::{AifEvaluator, IsoperimetricFunction, ProfileVariant, TabulatedProfile};
pub use radial::{DirichletEigenpair, LpNorm, RadialFunction, WholeManifoldSolution};
