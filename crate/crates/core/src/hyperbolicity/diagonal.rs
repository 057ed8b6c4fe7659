use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::cocycle::{exponent_profile, LayeredSamplingFunction, LocallyConstantCocycle, Mat2};
use crate::subshift::{factor_set, SubshiftSpec, Word};
use crate::{Error, Result};

/// A(ω) = diag(e^{f(ω)}, e^{−f(ω)}) for f ≥ 1, so that
/// (1/n)·log‖A_n(ω)‖ is the Birkhoff average of f.
pub fn diagonal_cocycle(f: &LayeredSamplingFunction, base: SubshiftSpec) -> Result<LocallyConstantCocycle> {
    let r = f.radius();
    let legal = factor_set(&base, 2 * r + 1)?;
    let mut table = BTreeMap::new();
    for w in legal.iter() {
        let v = f.value(w)?;
        if !(v >= 1.0) {
            return Err(Error::invalid(alloc::format!("diagonal cocycle needs f ≥ 1; f({w}) = {v}")));
        }
        table.insert(w.clone(), Mat2::diag(libm::exp(v), libm::exp(-v)));
    }
    LocallyConstantCocycle::new(base, r, table)
}

/// Sup and min exponent at one horizon.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpreadPoint {
    pub n: usize,
    pub sup: f64,
    pub min: f64,
    pub spread: f64,
    pub argmax: Word,
    pub argmin: Word,
}

/// Finite-scale comparison of the uniform lower bound and uniform
/// convergence of (1/n)·log‖A_n‖.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Uh1Uh3Report {
    pub points: Vec<SpreadPoint>,
    /// min over horizons of the min exponent.
    pub min_exponent: f64,
    /// spread at the last horizon divided by spread at the first.
    pub spread_ratio: f64,
    /// Spread never increases from one horizon to the next.
    pub spread_nonincreasing: bool,
}

pub fn uh1_vs_uh3_probe(cocycle: &LocallyConstantCocycle, horizons: &[usize]) -> Result<Uh1Uh3Report> {
    if horizons.is_empty() || horizons.windows(2).any(|p| p[0] >= p[1]) || horizons[0] == 0 {
        return Err(Error::invalid("horizons must be positive and strictly increasing"));
    }
    let profile = exponent_profile(cocycle, *horizons.last().unwrap())?;
    let points: Vec<SpreadPoint> = horizons
        .iter()
        .map(|&n| {
            let e = profile.at(n).expect("within profile");
            SpreadPoint {
                n,
                sup: e.sup(),
                min: e.inf(),
                spread: e.sup() - e.inf(),
                argmax: e.argmax.clone(),
                argmin: e.argmin.clone(),
            }
        })
        .collect();
    let first = points[0].spread;
    let last = points[points.len() - 1].spread;
    Ok(Uh1Uh3Report {
        min_exponent: points.iter().fold(f64::INFINITY, |m, p| m.min(p.min)),
        spread_ratio: if first > 0.0 {
            last / first
        } else if last > 0.0 {
            f64::INFINITY
        } else {
            0.0
        },
        spread_nonincreasing: points.windows(2).all(|p| p[1].spread <= p[0].spread + 1e-12),
        points,
    })
}
