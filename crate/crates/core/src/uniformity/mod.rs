//! Finite-scale uniformity diagnostics.
//!
//! Everything here works with exact suprema over Ω (factor enumeration) and
//! a finite set of scales and energies. Infinite-n statements are replaced
//! by the finite checks that imply them (window checks, bound propagation)
//! or by explicitly labelled proxies (`Var_n/n` below ε at some computed
//! horizon).

mod avalanche;
mod lemmas;
mod variation;
mod w_epsilon;

pub use avalanche::{
    avalanche_check, check_against_profile, minimal_ell, openness_probe, AvalancheCertificate, AvalancheCondition,
    AvalancheOutcome, AvalancheParams, AvalancheRefusal, OpennessReport,
};
pub use lemmas::{
    first_window, propagate_upper_bound, step_bound_residual, step_bound_trace, window_check, window_check_profile,
    StepBound,
};
pub use variation::{
    family_profiles, uniform_band, uniformity_verdict, var_n, var_trace, GridSummary, TracePoint, UniformityReport,
    Verdict,
};
pub use w_epsilon::{
    classify_slice, cocycle_report, w_epsilon_test, w_epsilon_test_over, EnergyClass, SliceClass, WParams,
};
