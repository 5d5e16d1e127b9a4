//! Pseudo-spectral kernels for studying Gevrey smoothing of non-cutoff
//! kinetic models with soft potentials.
//!
//! The crate is organized bottom-up:
//!
//! * [`spectral`]: periodic velocity grids, unitary FFTs, Fourier multipliers,
//!   velocity weights, the elliptic regularizer and the binary field container.
//! * [`dyadic`]: Littlewood–Paley bump pair, phase/frequency block projections and
//!   the block-sum characterization of weighted Sobolev norms.
//! * [`corpus`]: seeded test-function families used by the inequality checks.
//! * [`inequalities`]: witnesses for interpolation, commutator-free weighted
//!   estimates, composition bounds and regularizer bounds.
//! * [`toy`]: the fractional-diffusion toy model, its block-decay law, the
//!   sharpness infimum and Gevrey-index regression.
//! * [`vector_fields`]: exact rational polynomial engine and the kinetic vector
//!   field identities, plus the factorial ledger.
//! * [`solver`]: regularized linear parabolic solver, Picard iteration and
//!   monitors.
//!
//! Heavy sweeps go through [`exec::Exec`], which is backed by rayon when the
//! `parallel` feature is enabled and degrades to plain iteration otherwise.

// `!(x > 0.0)` is the intended way to reject NaN along with out-of-range input.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod dyadic;
pub mod error;
pub mod exec;
pub mod inequalities;
pub mod params;
pub mod solver;
pub mod spectral;
pub mod toy;
pub mod vector_fields;

pub use error::{Error, Result};
pub use params::SoftPotentialParams;
