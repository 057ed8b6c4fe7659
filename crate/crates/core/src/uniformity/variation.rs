use alloc::vec::Vec;

use crate::cocycle::{exponent_profile_over, CocycleFamily, ExponentProfile};
use crate::subshift::factor_set;
use crate::{Error, Executor, Result};

/// Exact exponent profiles of A(E, ·) for each grid energy, sharing one
/// factor language.
pub fn family_profiles<X: Executor>(
    family: &CocycleFamily,
    grid: &[f64],
    n_max: usize,
    exec: &X,
) -> Result<Vec<ExponentProfile>> {
    if grid.is_empty() {
        return Err(Error::invalid("energy grid is empty"));
    }
    let lang = factor_set(family.base(), n_max + 2 * family.radius())?;
    exec.map(grid, |&e| exponent_profile_over(&family.slice(e)?, &lang, n_max)).into_iter().collect()
}

/// One row of the exponent / variation trace.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TracePoint {
    pub n: usize,
    /// max over grid and Ω of (1/n)·log‖A_n‖.
    pub sup_exp: f64,
    /// min over grid and Ω of (1/n)·log‖A_n‖.
    pub min_exp: f64,
    /// max over grid of the spread of log‖A_n(E, ·)‖ over Ω.
    pub var: f64,
    pub var_over_n: f64,
}

fn trace_point(profiles: &[ExponentProfile], n: usize) -> TracePoint {
    let mut p = TracePoint { n, sup_exp: 0.0, min_exp: f64::INFINITY, var: 0.0, var_over_n: 0.0 };
    for prof in profiles {
        let e = prof.at(n).expect("profile covers horizon");
        p.sup_exp = p.sup_exp.max(e.sup());
        p.min_exp = p.min_exp.min(e.inf());
        p.var = p.var.max(e.spread());
    }
    p.var_over_n = p.var / n as f64;
    p
}

/// Var_n: max over the grid of sup_{ω,ϱ} |log‖A_n(E,ω)‖ − log‖A_n(E,ϱ)‖|,
/// with the sup over Ω exact.
pub fn var_n<X: Executor>(family: &CocycleFamily, grid: &[f64], n: usize, exec: &X) -> Result<f64> {
    let profiles = family_profiles(family, grid, n, exec)?;
    Ok(trace_point(&profiles, n).var)
}

/// Trace rows at each horizon, from one profile per energy.
pub fn var_trace<X: Executor>(
    family: &CocycleFamily,
    grid: &[f64],
    horizons: &[usize],
    exec: &X,
) -> Result<Vec<TracePoint>> {
    check_horizons(horizons)?;
    let profiles = family_profiles(family, grid, *horizons.last().unwrap(), exec)?;
    Ok(horizons.iter().map(|&n| trace_point(&profiles, n)).collect())
}

pub(crate) fn check_horizons(horizons: &[usize]) -> Result<()> {
    if horizons.is_empty() || horizons[0] == 0 || horizons.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::invalid("horizons must be positive and strictly increasing"));
    }
    Ok(())
}

/// Finite-scale verdict. None of these is a proof; each records the
/// finite evidence it rests on.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum Verdict {
    /// A cone certificate exists; `exponent_lower_bound` is its bound.
    UhCertified {
        block_length: usize,
        exponent_lower_bound: f64,
    },
    /// (1/n)·log‖A_n‖ < ε for all n ≥ k (by the window check on [k, 2k]).
    SmallExponent {
        epsilon: f64,
        k: usize,
    },
    /// min over horizons of Var_n/n < ε. `l` is the mid-range exponent at
    /// the minimizing horizon and the band is [l(1−44ε), l(1+ε)].
    Uniform {
        l: f64,
        band_lo: f64,
        band_hi: f64,
        horizon: usize,
    },
    Undecided,
}

/// Grid description recorded with a report.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSummary {
    pub points: usize,
    pub lo: f64,
    pub hi: f64,
}

impl GridSummary {
    pub fn of(grid: &[f64]) -> Self {
        GridSummary {
            points: grid.len(),
            lo: grid.iter().copied().fold(f64::INFINITY, f64::min),
            hi: grid.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UniformityReport {
    pub trace: Vec<TracePoint>,
    pub verdict: Verdict,
    pub epsilon: f64,
    pub horizons: Vec<usize>,
    pub grid: GridSummary,
}

/// Uniform band around `l` for tolerance ε.
pub fn uniform_band(l: f64, epsilon: f64) -> (f64, f64) {
    (l * (1.0 - 44.0 * epsilon), l * (1.0 + epsilon))
}

pub(crate) fn uniform_from_trace(trace: &[TracePoint], epsilon: f64) -> Verdict {
    let best = trace.iter().min_by(|a, b| a.var_over_n.total_cmp(&b.var_over_n).then(b.n.cmp(&a.n)));
    match best {
        Some(p) if p.var_over_n < epsilon => {
            let l = 0.5 * (p.sup_exp + p.min_exp);
            let (band_lo, band_hi) = uniform_band(l, epsilon);
            Verdict::Uniform { l, band_lo, band_hi, horizon: p.n }
        }
        _ => Verdict::Undecided,
    }
}

/// Classifies the family as numerically uniform when min over horizons of
/// Var_n/n is below ε; otherwise undecided. Traces are attached either way.
pub fn uniformity_verdict<X: Executor>(
    family: &CocycleFamily,
    grid: &[f64],
    horizons: &[usize],
    epsilon: f64,
    exec: &X,
) -> Result<UniformityReport> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("ε must be positive"));
    }
    let trace = var_trace(family, grid, horizons, exec)?;
    let verdict = uniform_from_trace(&trace, epsilon);
    Ok(UniformityReport { trace, verdict, epsilon, horizons: horizons.to_vec(), grid: GridSummary::of(grid) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{LayeredSamplingFunction, LocallyConstantCocycle, Mat2};
    use crate::hyperbolicity::diagonal_cocycle;
    use crate::subshift::SubshiftSpec;
    use crate::Sequential;

    fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
        (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
    }

    #[test]
    fn omega_constant_families_have_zero_variation() {
        let fam = CocycleFamily::rotation(SubshiftSpec::fibonacci());
        assert_eq!(var_n(&fam, &grid(0.0, 1.0, 11), 16, &Sequential).unwrap(), 0.0);
        let free = CocycleFamily::schrodinger(LayeredSamplingFunction::zero(), SubshiftSpec::thue_morse()).unwrap();
        assert_eq!(var_n(&free, &grid(-3.0, 3.0, 7), 16, &Sequential).unwrap(), 0.0);
        let id =
            CocycleFamily::Fixed(LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::IDENTITY).unwrap());
        let rep = uniformity_verdict(&id, &[0.0], &[1, 2, 4], 0.01, &Sequential).unwrap();
        assert!(matches!(rep.verdict, Verdict::Uniform { .. }));
    }

    #[test]
    fn two_component_diagonal_is_not_uniform() {
        let f = LayeredSamplingFunction::constant(1.0).plus(&LayeredSamplingFunction::indicator('b', 1.0).unwrap());
        let base = SubshiftSpec::orbit_union_fixture(&["a", "b"]).unwrap();
        let fam = CocycleFamily::Fixed(diagonal_cocycle(&f, base).unwrap());
        let rep = uniformity_verdict(&fam, &[0.0], &[4, 16, 64], 0.1, &Sequential).unwrap();
        assert_eq!(rep.verdict, Verdict::Undecided);
        assert!(rep.trace.iter().all(|p| (p.var_over_n - 1.0).abs() < 1e-12));
    }
}
