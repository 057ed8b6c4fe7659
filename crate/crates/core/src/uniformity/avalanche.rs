use alloc::vec::Vec;

use super::variation::uniform_band;
use crate::cocycle::{exponent_profile, ExponentProfile, LocallyConstantCocycle};
use crate::rng::{child_seed, perturb, seeded};
use crate::{Error, Executor, Result};

/// Constants of the avalanche estimate. No numeric values are attached to
/// them in the underlying estimate; the defaults are placeholders and every
/// certificate records the values it used.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct AvalancheParams {
    pub kappa: f64,
    pub lambda0: f64,
}

impl Default for AvalancheParams {
    fn default() -> Self {
        AvalancheParams { kappa: 20.0, lambda0: 10.0 }
    }
}

impl AvalancheParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.lambda0 > 0.0) || !self.kappa.is_finite() || !self.lambda0.is_finite() {
            return Err(Error::invalid("κ and λ0 must be positive and finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AvalancheCondition {
    /// (1/n)·log‖A_n‖ ≤ L(1+ε) for n ≥ ℓ.
    A1,
    /// L(1−ε) ≤ (1/2ℓ)·log‖A_{2ℓ}‖.
    A2,
    /// (3/4)·L·ℓ ≥ λ0.
    A3,
    /// (1/ℓ)·2κ/e^{λ0} < εL.
    A4,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AvalancheRefusal {
    pub condition: AvalancheCondition,
    /// Scale at which the condition failed, for A1 and A2.
    pub n: Option<usize>,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AvalancheCertificate {
    pub l: f64,
    pub ell: usize,
    pub epsilon: f64,
    pub params: AvalancheParams,
    /// [L(1−44ε), L(1+ε)].
    pub band_lo: f64,
    pub band_hi: f64,
    /// (a1) was checked on n ∈ [ℓ, validation_horizon].
    pub validation_horizon: usize,
    /// (a1) holds strictly on [ℓ, 2ℓ], so it extends to every n ≥ ℓ.
    pub a1_extends: bool,
    /// Every exact exponent on [ℓ, validation_horizon] lies in the band.
    pub validated: bool,
    pub min_exponent: f64,
    pub max_exponent: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", content = "detail", rename_all = "snake_case"))]
pub enum AvalancheOutcome {
    Certified(AvalancheCertificate),
    Refused(AvalancheRefusal),
}

impl AvalancheOutcome {
    pub fn certificate(&self) -> Option<&AvalancheCertificate> {
        match self {
            AvalancheOutcome::Certified(c) => Some(c),
            AvalancheOutcome::Refused(_) => None,
        }
    }
}

/// Smallest ℓ satisfying (a3) and (a4) for the given L and ε.
pub fn minimal_ell(l: f64, epsilon: f64, params: &AvalancheParams) -> Result<usize> {
    params.validate()?;
    if !(l > 0.0 && epsilon > 0.0) {
        return Err(Error::invalid("L and ε must be positive"));
    }
    let a3 = libm::ceil(params.lambda0 / (0.75 * l));
    let a4 = libm::floor(2.0 * params.kappa * libm::exp(-params.lambda0) / (epsilon * l)) + 1.0;
    let ell = a3.max(a4).max(1.0);
    if !ell.is_finite() || ell > (1u64 << 40) as f64 {
        return Err(Error::NonFinite("minimal ℓ"));
    }
    let mut ell = ell as usize;
    // guard against rounding at the boundary
    while !(0.75 * l * ell as f64 >= params.lambda0
        && 2.0 * params.kappa / libm::exp(params.lambda0) / (ell as f64) < epsilon * l)
    {
        ell += 1;
    }
    Ok(ell)
}

fn check_inputs(l: f64, ell: usize, epsilon: f64, params: &AvalancheParams) -> Result<()> {
    params.validate()?;
    if !(epsilon > 0.0 && epsilon < 1.0 / 12.0) {
        return Err(Error::invalid("the avalanche estimate needs 0 < ε < 1/12"));
    }
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::invalid("L must be positive"));
    }
    if ell == 0 {
        return Err(Error::invalid("ℓ must be at least 1"));
    }
    Ok(())
}

/// Checks (a1)–(a4) in order and, if all hold, issues the band
/// [L(1−44ε), L(1+ε)] for every n ≥ ℓ.
///
/// (a1) and (a2) use exact sup/min over Ω; (a1) is checked on
/// n ∈ [ℓ, max(2ℓ, validation_horizon)].
pub fn avalanche_check(
    cocycle: &LocallyConstantCocycle,
    l: f64,
    ell: usize,
    epsilon: f64,
    params: &AvalancheParams,
    validation_horizon: usize,
) -> Result<AvalancheOutcome> {
    check_inputs(l, ell, epsilon, params)?;
    let horizon = validation_horizon.max(2 * ell);
    let profile = exponent_profile(cocycle, horizon)?;
    Ok(check_against_profile(&profile, l, ell, epsilon, params))
}

pub fn check_against_profile(
    profile: &ExponentProfile,
    l: f64,
    ell: usize,
    epsilon: f64,
    params: &AvalancheParams,
) -> AvalancheOutcome {
    let horizon = profile.n_max();
    let hi = l * (1.0 + epsilon);
    for n in ell..=horizon {
        let sup = profile.at(n).expect("within profile").sup();
        if !(sup <= hi) {
            return AvalancheOutcome::Refused(AvalancheRefusal {
                condition: AvalancheCondition::A1,
                n: Some(n),
                value: sup,
                bound: hi,
            });
        }
    }
    let lo2 = l * (1.0 - epsilon);
    let inf2 = profile.at(2 * ell).expect("within profile").inf();
    if !(lo2 <= inf2) {
        return AvalancheOutcome::Refused(AvalancheRefusal {
            condition: AvalancheCondition::A2,
            n: Some(2 * ell),
            value: inf2,
            bound: lo2,
        });
    }
    let a3 = 0.75 * l * ell as f64;
    if !(a3 >= params.lambda0) {
        return AvalancheOutcome::Refused(AvalancheRefusal {
            condition: AvalancheCondition::A3,
            n: None,
            value: a3,
            bound: params.lambda0,
        });
    }
    let a4 = 2.0 * params.kappa / libm::exp(params.lambda0) / ell as f64;
    if !(a4 < epsilon * l) {
        return AvalancheOutcome::Refused(AvalancheRefusal {
            condition: AvalancheCondition::A4,
            n: None,
            value: a4,
            bound: epsilon * l,
        });
    }
    let (band_lo, band_hi) = uniform_band(l, epsilon);
    let mut min_exponent = f64::INFINITY;
    let mut max_exponent = f64::NEG_INFINITY;
    for n in ell..=horizon {
        let e = profile.at(n).expect("within profile");
        min_exponent = min_exponent.min(e.inf());
        max_exponent = max_exponent.max(e.sup());
    }
    let a1_extends = (ell..=2 * ell).all(|n| profile.at(n).expect("within profile").sup() < hi);
    AvalancheOutcome::Certified(AvalancheCertificate {
        l,
        ell,
        epsilon,
        params: *params,
        band_lo,
        band_hi,
        validation_horizon: horizon,
        a1_extends,
        validated: band_lo <= min_exponent && max_exponent <= band_hi,
        min_exponent,
        max_exponent,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OpennessReport {
    /// The unperturbed cocycle passes at ε.
    pub base_passed: bool,
    pub trials: usize,
    pub passed: usize,
    pub epsilon: f64,
    pub epsilon_prime: f64,
    pub perturbation: f64,
    pub seed: u64,
}

impl OpennessReport {
    pub fn all_passed(&self) -> bool {
        self.base_passed && self.passed == self.trials
    }
}

/// Re-runs the avalanche check at ε′ on seeded perturbations of every table
/// entry by `delta` (renormalized to determinant one), keeping L and ℓ.
///
/// Perturbed cocycles are checked on [ℓ, 2ℓ], which suffices for (a1) on
/// every n ≥ ℓ when it holds strictly there.
#[allow(clippy::too_many_arguments)]
pub fn openness_probe<X: Executor>(
    cocycle: &LocallyConstantCocycle,
    l: f64,
    ell: usize,
    epsilon: f64,
    epsilon_prime: f64,
    delta: f64,
    trials: usize,
    seed: u64,
    params: &AvalancheParams,
    exec: &X,
) -> Result<OpennessReport> {
    check_inputs(l, ell, epsilon, params)?;
    if !(epsilon < epsilon_prime && epsilon_prime < 1.0 / 12.0) {
        return Err(Error::invalid("openness needs ε < ε′ < 1/12"));
    }
    let mut report =
        OpennessReport { base_passed: false, trials, passed: 0, epsilon, epsilon_prime, perturbation: delta, seed };
    let base = avalanche_check(cocycle, l, ell, epsilon, params, 2 * ell)?;
    if !matches!(base, AvalancheOutcome::Certified(ref c) if c.a1_extends) {
        return Ok(report);
    }
    report.base_passed = true;
    let indices: Vec<u64> = (0..trials as u64).collect();
    let results = exec.map(&indices, |&i| -> Result<bool> {
        let mut rng = seeded(child_seed(seed, i));
        let mut failure = None;
        let perturbed = cocycle.map_entries(|_, m| match perturb(&mut rng, m, delta) {
            Ok(p) => p,
            Err(e) => {
                failure = Some(e);
                *m
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        let out = avalanche_check(&perturbed, l, ell, epsilon_prime, params, 2 * ell)?;
        Ok(matches!(out, AvalancheOutcome::Certified(ref c) if c.a1_extends))
    });
    for r in results {
        if r? {
            report.passed += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Mat2;
    use crate::subshift::SubshiftSpec;
    use crate::Sequential;

    fn constant(m: Mat2) -> LocallyConstantCocycle {
        LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), m).unwrap()
    }

    #[test]
    fn minimal_ell_examples() {
        let p = AvalancheParams::default();
        assert_eq!(minimal_ell(libm::log(2.0), 0.05, &p).unwrap(), 20);
        assert_eq!(minimal_ell(0.9624, 0.08, &p).unwrap(), 14);
    }

    #[test]
    fn identity_refused_at_a2() {
        let out = avalanche_check(&constant(Mat2::IDENTITY), 1.0, 20, 0.05, &AvalancheParams::default(), 64).unwrap();
        match out {
            AvalancheOutcome::Refused(r) => assert_eq!(r.condition, AvalancheCondition::A2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diagonal_certificate() {
        let l = libm::log(2.0);
        let p = AvalancheParams::default();
        let ell = minimal_ell(l, 0.05, &p).unwrap();
        let c = constant(Mat2::diag(2.0, 0.5));
        let cert = avalanche_check(&c, l, ell, 0.05, &p, 256).unwrap().certificate().cloned().unwrap();
        assert!(cert.validated && cert.a1_extends);
        assert!((cert.min_exponent - l).abs() < 1e-14);
    }

    #[test]
    fn short_ell_refused_at_a3() {
        let l = libm::log(2.0);
        let out =
            avalanche_check(&constant(Mat2::diag(2.0, 0.5)), l, 5, 0.05, &AvalancheParams::default(), 16).unwrap();
        assert!(matches!(out, AvalancheOutcome::Refused(AvalancheRefusal { condition: AvalancheCondition::A3, .. })));
    }

    #[test]
    fn openness_of_diagonal() {
        let l = libm::log(2.0);
        let p = AvalancheParams::default();
        let c = constant(Mat2::diag(2.0, 0.5));
        let rep = openness_probe(&c, l, 20, 0.05, 0.08, 1e-3, 10, 1, &p, &Sequential).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        let id = constant(Mat2::IDENTITY);
        let rep = openness_probe(&id, 1.0, 20, 0.05, 0.08, 1e-3, 10, 1, &p, &Sequential).unwrap();
        assert!(!rep.all_passed() && !rep.base_passed);
    }
}
