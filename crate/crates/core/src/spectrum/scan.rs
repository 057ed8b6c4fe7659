use alloc::vec::Vec;

use super::bands::spectrum_measure;
use super::grid::EnergyGrid;
use crate::cocycle::{CocycleFamily, LayeredSamplingFunction, Limits};
use crate::hyperbolicity::ConeCertificate;
use crate::subshift::{factor_set, SubshiftSpec};
use crate::uniformity::{classify_slice, SliceClass, WParams};
use crate::{Error, Executor, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ScanParams {
    /// Threshold of the small-exponent test.
    pub epsilon: f64,
    pub w: WParams,
    pub limits: Limits,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams { epsilon: 0.05, w: WParams::default(), limits: Limits::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EnergyKind {
    /// A UH certificate exists: E is in the resolvent set.
    Resolvent,
    /// Small exponent from some n on.
    ZLike,
    /// Neither certificate.
    NuhLike,
}

impl EnergyKind {
    pub fn label(self) -> &'static str {
        match self {
            EnergyKind::Resolvent => "resolvent",
            EnergyKind::ZLike => "z_like",
            EnergyKind::NuhLike => "nuh_like",
        }
    }

    pub fn is_candidate(self) -> bool {
        self != EnergyKind::Resolvent
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanPoint {
    pub energy: f64,
    pub kind: EnergyKind,
    /// max over Ω of (1/H)·log‖A_H‖ at the horizon.
    pub exponent: Option<f64>,
    /// Index into [`SpectrumEstimate::certificates`].
    pub certificate_id: Option<usize>,
    /// First n of the small-exponent window.
    pub small_from: Option<usize>,
    pub budget_limited: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanMetadata {
    pub lo: f64,
    pub hi: f64,
    pub grid_points: usize,
    pub horizon: usize,
    pub max_block: usize,
    pub epsilon: f64,
    pub subshift: SubshiftSpec,
    pub potential: LayeredSamplingFunction,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumEstimate {
    pub points: Vec<ScanPoint>,
    pub certificates: Vec<ConeCertificate>,
    /// Maximal runs of candidate energies, each padded to the neighbouring
    /// grid points and clipped to the grid interval.
    pub intervals: Vec<(f64, f64)>,
    pub measure: f64,
    pub metadata: ScanMetadata,
}

impl SpectrumEstimate {
    pub fn candidates(&self) -> impl Iterator<Item = &ScanPoint> {
        self.points.iter().filter(|p| p.kind.is_candidate())
    }

    pub fn covers(&self, energy: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= energy && energy <= b)
    }
}

/// Classifies every grid energy of the Schrödinger family H = Δ + f and
/// collects the candidate region.
pub fn scan_spectrum<X: Executor>(
    f: &LayeredSamplingFunction,
    spec: &SubshiftSpec,
    grid: &EnergyGrid,
    params: &ScanParams,
    exec: &X,
) -> Result<SpectrumEstimate> {
    if !(params.epsilon > 0.0) {
        return Err(Error::invalid("ε must be positive"));
    }
    let family = CocycleFamily::schrodinger(f.clone(), spec.clone())?.with_limits(params.limits);
    let lang = factor_set(spec, params.w.language_length(family.radius()))?;
    let classified = exec.map(grid.points(), |&energy| -> Result<_> {
        let slice = family.slice(energy)?;
        match classify_slice(&slice, &lang, params.epsilon, &params.w) {
            Ok(c) => Ok((energy, c)),
            Err(e) if e.is_budget() => Ok((energy, (SliceClass::Fail, None, true))),
            Err(e) => Err(e),
        }
    });

    let mut points = Vec::with_capacity(grid.len());
    let mut certificates = Vec::new();
    for item in classified {
        let (energy, (class, exponent, budget_limited)) = item?;
        let (kind, certificate_id, small_from) = match class {
            SliceClass::UhCertified { certificate } => {
                certificates.push(certificate);
                (EnergyKind::Resolvent, Some(certificates.len() - 1), None)
            }
            SliceClass::SmallExponent { k } => (EnergyKind::ZLike, None, Some(k)),
            SliceClass::Fail => (EnergyKind::NuhLike, None, None),
        };
        points.push(ScanPoint { energy, kind, exponent, certificate_id, small_from, budget_limited });
    }

    let intervals = candidate_intervals(grid, &points);
    let measure = spectrum_measure(&intervals);
    Ok(SpectrumEstimate {
        points,
        certificates,
        intervals,
        measure,
        metadata: ScanMetadata {
            lo: grid.lo(),
            hi: grid.hi(),
            grid_points: grid.len(),
            horizon: params.w.horizon,
            max_block: params.w.max_block,
            epsilon: params.epsilon,
            subshift: spec.clone(),
            potential: f.clone(),
        },
    })
}

fn candidate_intervals(grid: &EnergyGrid, points: &[ScanPoint]) -> Vec<(f64, f64)> {
    let e = grid.points();
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < points.len() {
        if !points[i].kind.is_candidate() {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < points.len() && points[j + 1].kind.is_candidate() {
            j += 1;
        }
        let lo = if i > 0 { e[i - 1] } else { grid.lo() };
        let hi = if j + 1 < e.len() { e[j + 1] } else { grid.hi() };
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = hi,
            _ => out.push((lo, hi)),
        }
        i = j + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Sequential;

    fn quick() -> ScanParams {
        ScanParams {
            epsilon: 0.05,
            w: WParams { horizon: 64, max_block: 64, ..WParams::default() },
            ..ScanParams::default()
        }
    }

    #[test]
    fn constant_potential_shifts_free_band() {
        let grid = EnergyGrid::uniform(0.0, 10.0, 0.1).unwrap();
        let spec = SubshiftSpec::periodic("ab").unwrap();
        let est = scan_spectrum(&LayeredSamplingFunction::constant(5.0), &spec, &grid, &quick(), &Sequential).unwrap();
        assert_eq!(est.intervals.len(), 1);
        let (a, b) = est.intervals[0];
        assert!((a - 3.0).abs() <= 0.25 && (b - 7.0).abs() <= 0.25, "{a} {b}");
        assert!((est.measure - (b - a)).abs() < 1e-12);
        for p in &est.points {
            assert_eq!(p.certificate_id.is_some(), p.kind == EnergyKind::Resolvent);
            if p.kind == EnergyKind::Resolvent {
                assert!(p.energy < 3.0 || p.energy > 7.0);
            }
        }
        assert_eq!(est.certificates.len(), est.points.iter().filter(|p| p.kind == EnergyKind::Resolvent).count());
    }

    #[test]
    fn padding_and_merging() {
        let grid = EnergyGrid::explicit(alloc::vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let mk = |kinds: &[EnergyKind]| -> Vec<ScanPoint> {
            kinds
                .iter()
                .zip(grid.points())
                .map(|(&kind, &energy)| ScanPoint {
                    energy,
                    kind,
                    exponent: None,
                    certificate_id: None,
                    small_from: None,
                    budget_limited: false,
                })
                .collect()
        };
        use EnergyKind::*;
        let iv = candidate_intervals(&grid, &mk(&[ZLike, Resolvent, Resolvent, NuhLike, Resolvent, Resolvent]));
        assert_eq!(iv, alloc::vec![(0.0, 1.0), (2.0, 4.0)]);
        let iv = candidate_intervals(&grid, &mk(&[Resolvent, ZLike, Resolvent, NuhLike, Resolvent, ZLike]));
        assert_eq!(iv, alloc::vec![(0.0, 5.0)]);
        let iv = candidate_intervals(&grid, &mk(&[Resolvent; 6]));
        assert!(iv.is_empty());
    }
}
