//! SL(2,ℝ) cocycles over subshifts.
//!
//! Cocycles are locally constant: A(ω) is read from a table indexed by the
//! window ω_{−r} … ω_r. Continuous sampling functions are represented as
//! sums of such layers ([`LayeredSamplingFunction`]). Suprema over Ω are
//! computed exactly by running over the factor language.

mod exponent;
mod family;
mod locally_constant;
mod mat2;
mod sampling;
mod table;

pub use exponent::{
    enumeration_cost, exponent_profile, exponent_profile_over, sup_exponent_exact, sup_exponent_over, ExactExtrema,
    ExponentProfile,
};
pub use family::{schrodinger_cocycle, BlendedFamily, CocycleFamily, SchrodingerFamily};
pub use locally_constant::{Limits, LocallyConstantCocycle};
pub use mat2::{wrap_pi, LogMat, Mat2};
pub use sampling::{Layer, LayeredSamplingFunction};
pub use table::WindowTable;
