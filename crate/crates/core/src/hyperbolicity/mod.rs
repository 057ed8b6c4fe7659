//! Uniform hyperbolicity: invariant cone certificates, numerical
//! stable/unstable splittings, and the diagonal cocycle that separates a
//! uniform positive lower bound from uniform convergence.
//!
//! A cone certificate is sufficient, not necessary: a refusal only means no
//! invariant family was found at the block lengths tried.

mod arc;
mod cone;
mod diagonal;
mod splitting;

pub use arc::{min_log_expansion, Arc};
pub use cone::{
    certify_uh, certify_uh_over, certify_uh_search, certify_uh_search_over, ConeCertificate, ConeParams, UhOutcome,
    UhRefusal,
};
pub use diagonal::{diagonal_cocycle, uh1_vs_uh3_probe, SpreadPoint, Uh1Uh3Report};
pub use splitting::{extract_splitting, projective_distance, SplittingParams, SplittingPoint, SplittingSample};
