//! Finite elements in time built on a convolution variational principle.
//!
//! The harmonic oscillator `m u'' + k u = f`, `u(0) = u0`, `u'(0) = v0` is
//! discretized with linear hat functions over a symmetric partition of
//! `[0, t]`. Because the underlying bilinear form is the convolution rather
//! than the `L2` inner product, the global matrix is banded along the
//! anti-diagonal and both initial conditions enter the discrete problem: the
//! displacement through the admissible set, the velocity through the last
//! entry of the load vector.
//!
//! Two solution paths are provided:
//!
//! * [`solver::fem_trajectory`] assembles and solves the global system;
//! * [`marching::march`] runs the one-step recurrence obtained from the
//!   element equations.
//!
//! They agree to roundoff on identical meshes.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod assembly;
pub mod banded;
pub mod convolution;
pub mod element;
mod error;
pub mod marching;
pub mod model;
pub mod oracle;
pub mod solver;

pub use error::{Error, MeshError, Result};

pub use assembly::{
    assemble_global, bilinear_b, evaluate_global_functional, global_system_direct,
    impose_initial_conditions, AntiBandMatrix, GlobalSystem, ReducedSystem,
};
pub use convolution::{convolve, convolve_shifted, QuadratureRule, QuadratureSpec};
pub use element::{
    evaluate_local_functional, local_force, local_force_sinusoid_closed, local_matrices,
    shape_values, Element, LocalSystem, Mat2, Vec2,
};
pub use marching::{
    amplification_eigenvalues, march, march_mesh, stability_limit, step_matrices, StateVector,
    StepMatrices,
};
pub use model::{natural_frequency, uniform_mesh, validate_mesh, Forcing, Mesh, OscillatorProblem};
pub use oracle::{error_metrics, exact_solution, ErrorReport};
pub use solver::{fem_trajectory, recover_final_velocity, solve_reduced, Scheme, Trajectory};
