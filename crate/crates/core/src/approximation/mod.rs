//! Locally constant approximation of cocycle families, and a staged
//! construction of potentials with infinitely many layers whose partial
//! sums stay inside a finite-scale uniformity proxy.

mod construct;
mod family;

pub use construct::{
    construct_uniform_potential, random_generators, ConstructionLog, ConstructionParams, DeltaAttempt, EnergyCheck,
    StageLog, PROXY_LABEL,
};
pub use family::{approximate_family, discretize_sampling, CoverParams, FamilyApproximation, Verification};
