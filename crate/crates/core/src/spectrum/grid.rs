use alloc::vec::Vec;

use crate::{Error, Result};

/// Sorted, distinct energies inside [lo, hi].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EnergyGrid {
    lo: f64,
    hi: f64,
    points: Vec<f64>,
}

impl EnergyGrid {
    /// lo, lo+step, … up to hi (hi included when it falls on the lattice).
    pub fn uniform(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid("energy grid needs lo < hi"));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::invalid("energy grid step must be positive"));
        }
        let n = libm::floor((hi - lo) / step + 1e-9) as usize;
        let points = (0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect();
        Self::explicit_in(lo, hi, points)
    }

    /// The interval is the hull of the points.
    pub fn explicit(points: Vec<f64>) -> Result<Self> {
        let (lo, hi) = match (points.first(), points.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::invalid("energy grid is empty")),
        };
        Self::explicit_in(lo, hi, points)
    }

    pub fn explicit_in(lo: f64, hi: f64, points: Vec<f64>) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::invalid("energy grid needs lo < hi"));
        }
        if points.iter().any(|e| !e.is_finite() || *e < lo || *e > hi) {
            return Err(Error::invalid("energy grid point outside [lo, hi]"));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("energy grid points must be strictly increasing"));
        }
        if points.is_empty() {
            return Err(Error::invalid("energy grid is empty"));
        }
        Ok(EnergyGrid { lo, hi, points })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for EnergyGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            lo: Option<f64>,
            hi: Option<f64>,
            step: Option<f64>,
            points: Option<Vec<f64>>,
        }
        let r = Repr::deserialize(d)?;
        let g = match (r.lo, r.hi, r.step, r.points) {
            (Some(lo), Some(hi), Some(step), None) => EnergyGrid::uniform(lo, hi, step),
            (None, None, None, Some(p)) => EnergyGrid::explicit(p),
            (Some(lo), Some(hi), None, Some(p)) => EnergyGrid::explicit_in(lo, hi, p),
            _ => Err(Error::invalid("energy grid needs {lo, hi, step} or {points}")),
        };
        g.map_err(serde::de::Error::custom)
    }
}
