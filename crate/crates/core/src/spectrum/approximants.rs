use alloc::vec::Vec;

use super::bands::{periodic_spectrum, BandSet, EDGE_TOL};
use crate::cocycle::LayeredSamplingFunction;
use crate::subshift::{expand_prefix, SubshiftSpec};
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApproximantLevel {
    pub level: usize,
    /// q_k: the potential is read off the length-q_k prefix.
    pub period: usize,
    pub bands: BandSet,
    pub measure: f64,
}

/// Potential of the level-k periodic approximant: f along the first q sites.
pub fn approximant_potential(f: &LayeredSamplingFunction, spec: &SubshiftSpec, period: usize) -> Result<Vec<f64>> {
    let r = f.radius();
    let word = expand_prefix(spec, period + 2 * r)?;
    f.potential_along(word.as_bytes(), r, period)
}

pub fn approximant_at_period(
    f: &LayeredSamplingFunction,
    spec: &SubshiftSpec,
    level: usize,
    period: usize,
) -> Result<ApproximantLevel> {
    let bands = periodic_spectrum(&approximant_potential(f, spec, period)?)?;
    let measure = bands.measure();
    Ok(ApproximantLevel { level, period, bands, measure })
}

/// Band sets of the approximants at levels 1..=levels.
pub fn approximant_sequence(
    f: &LayeredSamplingFunction,
    spec: &SubshiftSpec,
    levels: usize,
) -> Result<Vec<ApproximantLevel>> {
    spec.approximant_periods(levels)?
        .into_iter()
        .enumerate()
        .map(|(i, q)| approximant_at_period(f, spec, i + 1, q))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SemicontinuityReport {
    pub level: usize,
    pub period: usize,
    /// ‖f − g‖∞ over the legal windows.
    pub epsilon: f64,
    pub f_bands: BandSet,
    pub g_bands: BandSet,
    /// max(0, sup over Σ_g of dist(·, Σ_f) − ε).
    pub violation: f64,
    pub holds: bool,
}

/// sup over x in [a, b] of dist(x, bands); attained at an endpoint or at a
/// clamped gap midpoint.
fn max_distance(bands: &BandSet, a: f64, b: f64) -> f64 {
    let mut probes = Vec::from([a, b]);
    for w in bands.bands.windows(2) {
        probes.push((0.5 * (w[0].1 + w[1].0)).clamp(a, b));
    }
    probes.into_iter().map(|x| bands.distance(x)).fold(0.0, f64::max)
}

/// Checks Σ_g ⊆ B_ε(Σ_f) for the level-k approximants, ε = ‖f − g‖∞.
pub fn semicontinuity_probe(
    f: &LayeredSamplingFunction,
    g: &LayeredSamplingFunction,
    spec: &SubshiftSpec,
    level: usize,
) -> Result<SemicontinuityReport> {
    let period =
        *spec.approximant_periods(level)?.last().ok_or_else(|| crate::Error::invalid("level must be at least 1"))?;
    let epsilon = f.sup_distance(g, spec)?;
    let fa = approximant_at_period(f, spec, level, period)?;
    let ga = approximant_at_period(g, spec, level, period)?;
    let worst = ga.bands.bands.iter().map(|&(a, b)| max_distance(&fa.bands, a, b)).fold(0.0, f64::max);
    let violation = (worst - epsilon).max(0.0);
    Ok(SemicontinuityReport {
        level,
        period,
        epsilon,
        f_bands: fa.bands,
        g_bands: ga.bands,
        violation,
        holds: violation <= 2.0 * EDGE_TOL,
    })
}
