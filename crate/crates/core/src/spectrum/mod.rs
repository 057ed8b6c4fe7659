//! Spectra of Schrödinger operators (Hψ)(n) = ψ(n+1) + ψ(n−1) + f(Tⁿω)ψ(n)
//! from the cocycle side.
//!
//! [`scan_spectrum`] marks an energy as resolvent when the transfer cocycle
//! carries a UH certificate and as a spectrum candidate otherwise. Periodic
//! approximants give band sets through the discriminant.

mod approximants;
mod bands;
mod grid;
mod scan;

pub use approximants::{
    approximant_at_period, approximant_potential, approximant_sequence, semicontinuity_probe, ApproximantLevel,
    SemicontinuityReport,
};
pub use bands::{covering_bound, discriminant, periodic_spectrum, spectrum_measure, BandSet, EDGE_TOL, MERGE_TOL};
pub use grid::EnergyGrid;
pub use scan::{scan_spectrum, EnergyKind, ScanMetadata, ScanParams, ScanPoint, SpectrumEstimate};
