use alloc::vec::Vec;

use super::lemmas::first_window;
use super::variation::{check_horizons, uniform_from_trace, GridSummary, TracePoint, UniformityReport, Verdict};
use crate::cocycle::{exponent_profile_over, CocycleFamily, LocallyConstantCocycle};
use crate::hyperbolicity::{certify_uh_search_over, ConeCertificate, ConeParams, UhOutcome};
use crate::subshift::{factor_set, FactorLanguage};
use crate::{Error, Executor, Result};

/// Horizons used by the per-energy W_ε proxy.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct WParams {
    /// Largest n at which exact exponents are computed.
    pub horizon: usize,
    /// Largest cone block length tried (lengths 1, 2, 4, …).
    pub max_block: usize,
    pub cone: ConeParams,
}

impl Default for WParams {
    fn default() -> Self {
        WParams { horizon: 256, max_block: 256, cone: ConeParams::default() }
    }
}

impl WParams {
    /// Factor length that serves both the profile and the cone blocks.
    pub fn language_length(&self, radius: usize) -> usize {
        let rho = self.cone.cone_radius.max(radius);
        (self.horizon + 2 * radius).max(self.max_block + 2 * rho + 1)
    }
}

/// Classification of one cocycle.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "class", rename_all = "snake_case"))]
pub enum SliceClass {
    UhCertified {
        certificate: ConeCertificate,
    },
    /// sup over Ω of (1/n)·log‖A_n‖ < ε for every n ≥ k.
    SmallExponent {
        k: usize,
    },
    Fail,
}

impl SliceClass {
    pub fn label(&self) -> &'static str {
        match self {
            SliceClass::UhCertified { .. } => "uh_certified",
            SliceClass::SmallExponent { .. } => "small_exponent",
            SliceClass::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyClass {
    pub energy: f64,
    pub class: SliceClass,
    /// max over Ω of (1/H)·log‖A_H‖ at the horizon H, when computed.
    pub exponent: Option<f64>,
    /// A budget limit cut the checks short.
    pub budget_limited: bool,
}

/// UH first (cone search), then a small exponent from some k on (window
/// check on the exact profile), else fail.
pub fn classify_slice(
    cocycle: &LocallyConstantCocycle,
    lang: &FactorLanguage,
    epsilon: f64,
    params: &WParams,
) -> Result<(SliceClass, Option<f64>, bool)> {
    let mut budget_limited = false;
    let exponent = match exponent_profile_over(cocycle, lang, params.horizon) {
        Ok(p) => Some(p),
        Err(e) if e.is_budget() => {
            budget_limited = true;
            None
        }
        Err(e) => return Err(e),
    };
    let sup_at_h = exponent.as_ref().and_then(|p| p.at(params.horizon)).map(|e| e.sup());
    match certify_uh_search_over(cocycle, lang, params.max_block, &params.cone)? {
        UhOutcome::Certified(certificate) => {
            return Ok((SliceClass::UhCertified { certificate }, sup_at_h, budget_limited))
        }
        UhOutcome::Refused(crate::hyperbolicity::UhRefusal::Budget { .. }) => budget_limited = true,
        UhOutcome::Refused(_) => {}
    }
    if let Some(k) = exponent.as_ref().and_then(|p| first_window(p, epsilon)) {
        return Ok((SliceClass::SmallExponent { k }, sup_at_h, budget_limited));
    }
    Ok((SliceClass::Fail, sup_at_h, budget_limited))
}

/// Per-energy W_ε proxy over a grid.
pub fn w_epsilon_test<X: Executor>(
    family: &CocycleFamily,
    grid: &[f64],
    epsilon: f64,
    params: &WParams,
    exec: &X,
) -> Result<Vec<EnergyClass>> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("ε must be positive"));
    }
    let lang = factor_set(family.base(), params.language_length(family.radius()))?;
    w_epsilon_test_over(family, &lang, grid, epsilon, params, exec)
}

/// [`w_epsilon_test`] with a precomputed language.
pub fn w_epsilon_test_over<X: Executor>(
    family: &CocycleFamily,
    lang: &FactorLanguage,
    grid: &[f64],
    epsilon: f64,
    params: &WParams,
    exec: &X,
) -> Result<Vec<EnergyClass>> {
    exec.map(grid, |&energy| {
        let slice = family.slice(energy)?;
        let (class, exponent, budget_limited) = classify_slice(&slice, lang, epsilon, params)?;
        Ok(EnergyClass { energy, class, exponent, budget_limited })
    })
    .into_iter()
    .collect()
}

/// Report for a single cocycle. Verdicts are tried in the order
/// uh-certified, small exponent, uniform (Var_n/n < ε), undecided.
pub fn cocycle_report(
    cocycle: &LocallyConstantCocycle,
    horizons: &[usize],
    epsilon: f64,
    params: &WParams,
) -> Result<UniformityReport> {
    check_horizons(horizons)?;
    if !(epsilon > 0.0) {
        return Err(Error::invalid("ε must be positive"));
    }
    let h = *horizons.last().unwrap();
    let p = WParams { horizon: h.max(params.horizon), ..*params };
    let lang = factor_set(cocycle.base(), p.language_length(cocycle.radius()))?;
    let profile = exponent_profile_over(cocycle, &lang, p.horizon)?;
    let trace: Vec<TracePoint> = horizons
        .iter()
        .map(|&n| {
            let e = profile.at(n).expect("within horizon");
            TracePoint { n, sup_exp: e.sup(), min_exp: e.inf(), var: e.spread(), var_over_n: e.spread() / n as f64 }
        })
        .collect();
    let verdict = match certify_uh_search_over(cocycle, &lang, p.max_block, &p.cone)? {
        UhOutcome::Certified(c) => {
            Verdict::UhCertified { block_length: c.block_length, exponent_lower_bound: c.exponent_lower_bound }
        }
        UhOutcome::Refused(_) => match first_window(&profile, epsilon) {
            Some(k) => Verdict::SmallExponent { epsilon, k },
            None => uniform_from_trace(&trace, epsilon),
        },
    };
    Ok(UniformityReport { trace, verdict, epsilon, horizons: horizons.to_vec(), grid: GridSummary::of(&[]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{LayeredSamplingFunction, Mat2};
    use crate::subshift::SubshiftSpec;
    use crate::Sequential;

    fn free() -> CocycleFamily {
        CocycleFamily::schrodinger(LayeredSamplingFunction::zero(), SubshiftSpec::fibonacci()).unwrap()
    }

    #[test]
    fn free_examples() {
        let params = WParams { horizon: 256, max_block: 16, ..Default::default() };
        let out = w_epsilon_test(&free(), &[3.0, 0.0], 0.1, &params, &Sequential).unwrap();
        assert_eq!(out[0].class.label(), "uh_certified");
        assert_eq!(out[1].class, SliceClass::SmallExponent { k: 1 });
        let out = w_epsilon_test(&free(), &[2.0], 0.05, &params, &Sequential).unwrap();
        match out[0].class {
            SliceClass::SmallExponent { k } => {
                let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::schrodinger(2.0)).unwrap();
                assert!(crate::uniformity::window_check(&c, k, 0.05).unwrap());
            }
            ref other => panic!("{other:?}"),
        }
    }

    #[test]
    fn report_prefers_uh() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::diag(2.0, 0.5)).unwrap();
        let rep = cocycle_report(&c, &[4, 8, 16], 0.1, &WParams::default()).unwrap();
        assert!(matches!(rep.verdict, Verdict::UhCertified { block_length: 1, .. }));
        let id = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::IDENTITY).unwrap();
        let rep = cocycle_report(&id, &[4, 8, 16], 0.1, &WParams::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::SmallExponent { epsilon: 0.1, k: 1 });
    }
}
