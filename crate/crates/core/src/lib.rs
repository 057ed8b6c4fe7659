//! Numerics for SL(2,ℝ) cocycles over minimal subshifts.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. Everything
//! here is a pure function of its inputs; callers that want parallelism pass
//! an [`Executor`] implementation, and results never depend on the schedule.
//!
//! Layout:
//!
//! - [`subshift`]: words, subshift descriptions, factor languages, cylinder
//!   frequencies and the Boshernitzan profile.
//! - [`cocycle`]: 2×2 matrices, locally constant cocycles, layered sampling
//!   functions, Schrödinger families and exact sup/inf exponents over Ω.
//! - [`uniformity`]: finite-scale uniformity machinery (bound propagation,
//!   window checks, `Var_n`, the `W_ε` proxy, the avalanche certificate).
//! - [`hyperbolicity`]: cone-field certificates for uniform hyperbolicity,
//!   splitting extraction and the diagonal counterexample.
//! - [`spectrum`]: periodic bands, spectrum scans and measure estimates.
//! - [`approximation`]: locally constant approximation of families and the
//!   iterative construction of a uniform potential.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approximation;
pub mod cocycle;
mod error;
mod exec;
pub mod hyperbolicity;
pub mod rng;
pub mod spectrum;
pub mod subshift;
pub mod uniformity;

pub use error::{Error, Result};
pub use exec::{Executor, Sequential};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
