//! Spectral-Galerkin simulation and analysis of the Chafee–Infante equation
//! `u_t = u_xx + λu(1 − u²)` on `(0, π)` with Dirichlet conditions, under
//! convolution feedback `b(u − C_h[u])`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod control;
pub mod equilibria;
pub mod groupoid;
pub mod spectral;
pub mod stability;
pub mod timestepping;
pub mod verify;

pub use nalgebra::DMatrix;

pub use control::{controlled_modes, ControlError, ControlParams, FilterKernel, Sign};
pub use equilibria::{
    bifurcation_value, continue_branch, count_zeros, find_equilibrium, EquilibriumBranch,
    EquilibriumError, LambdaConvention,
};
pub use groupoid::{GroupoidError, Morphism, Vertex};
pub use spectral::{SpectralError, SpectralField};
pub use stability::{LinearizationReport, StabilityError, Verdict};
pub use timestepping::{simulate, InitialCondition, SimConfig, TimestepError, Trajectory};
pub use verify::CheckReport;
