use alloc::vec::Vec;

use crate::cocycle::{exponent_profile, ExponentProfile, LocallyConstantCocycle};
use crate::{Error, Result};

/// Smallest integer N ≥ 2k·c_max/(L − M).
///
/// If M is the max over Ω of (1/k)·log‖A_k‖ and c_max the max of log‖A‖,
/// then (1/n)·log‖A_n‖ < L for every ω and n ≥ N.
pub fn propagate_upper_bound(k: usize, m: f64, l: f64, c_max: f64) -> Result<usize> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if !(m < l) {
        return Err(Error::invalid("bound propagation needs M < L"));
    }
    if !(c_max >= 0.0) || !c_max.is_finite() {
        return Err(Error::invalid("c_max must be finite and nonnegative"));
    }
    let n = libm::ceil(2.0 * k as f64 * c_max / (l - m));
    if !n.is_finite() || n > usize::MAX as f64 {
        return Err(Error::NonFinite("propagated bound"));
    }
    Ok(n as usize)
}

/// True iff the exact sup of (1/k)·log‖A_k‖ is below L for every
/// k ∈ [N, 2N]; the bound then holds for every n ≥ N.
pub fn window_check(cocycle: &LocallyConstantCocycle, n: usize, l: f64) -> Result<bool> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let profile = exponent_profile(cocycle, 2 * n)?;
    window_check_profile(&profile, n, l)
}

/// [`window_check`] against a precomputed profile reaching at least 2N.
pub fn window_check_profile(profile: &ExponentProfile, n: usize, l: f64) -> Result<bool> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    if profile.n_max() < 2 * n {
        return Err(Error::HorizonExceeded { n: 2 * n, horizon: profile.n_max() });
    }
    Ok((n..=2 * n).all(|k| profile.at(k).is_some_and(|e| e.sup() < l)))
}

/// Smallest N with 2N ≤ profile length passing the window check at L.
pub fn first_window(profile: &ExponentProfile, l: f64) -> Option<usize> {
    let sups: Vec<bool> = profile.points.iter().map(|e| e.sup() < l).collect();
    // run[i] = number of consecutive passing scales starting at scale i+1
    let mut run = alloc::vec![0usize; sups.len() + 1];
    for i in (0..sups.len()).rev() {
        run[i] = if sups[i] { run[i + 1] + 1 } else { 0 };
    }
    (1..=profile.n_max() / 2).find(|&n| run[n - 1] > n)
}

/// One side-by-side pair of the step bound: lhs = |x_{n+1}/(n+1) − x_n/n|,
/// rhs = x_n/(n(n+1)) + c/(n+1), with x_n = log‖A_n(ω)‖ and
/// c = max over windows of log‖A^{±1}‖.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepBound {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
}

impl StepBound {
    /// lhs ≤ rhs up to a relative slack of 1e-9.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-9 * self.rhs.abs().max(1e-300) + 1e-15
    }
}

pub fn step_bound_residual(
    cocycle: &LocallyConstantCocycle,
    config: &[u8],
    start: usize,
    n: usize,
) -> Result<StepBound> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let xs = cocycle.log_norm_trace(config, start, n + 1)?;
    Ok(step_pair(n, xs[n - 1], xs[n], cocycle.max_log_norm()))
}

fn step_pair(n: usize, xn: f64, xn1: f64, c: f64) -> StepBound {
    let nf = n as f64;
    StepBound { n, lhs: (xn1 / (nf + 1.0) - xn / nf).abs(), rhs: xn / (nf * (nf + 1.0)) + c / (nf + 1.0) }
}

/// Step bounds for every n = 1..=n_max along one orbit.
pub fn step_bound_trace(
    cocycle: &LocallyConstantCocycle,
    config: &[u8],
    start: usize,
    n_max: usize,
) -> Result<Vec<StepBound>> {
    let c = cocycle.max_log_norm();
    let xs = cocycle.log_norm_trace(config, start, n_max + 1)?;
    Ok((1..=n_max).map(|n| step_pair(n, xs[n - 1], xs[n], c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{schrodinger_cocycle, sup_exponent_exact, LayeredSamplingFunction, Mat2};
    use crate::subshift::{expand_prefix, SubshiftSpec};
    use core::f64::consts::E;

    #[test]
    fn propagation_formula() {
        assert_eq!(propagate_upper_bound(2, 0.5, 1.0, 2.0).unwrap(), 16);
        assert_eq!(propagate_upper_bound(1, 0.0, 1.0, 0.0).unwrap(), 0);
        assert!(propagate_upper_bound(1, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn propagated_bound_holds_on_fibonacci() {
        let f = LayeredSamplingFunction::indicator('b', 1.0).unwrap();
        let c = schrodinger_cocycle(&f, SubshiftSpec::fibonacci(), 0.0).unwrap();
        let k = 8;
        let m = sup_exponent_exact(&c, k).unwrap().sup();
        let l = m + 0.2;
        let n = propagate_upper_bound(k, m, l, c.max_log_norm()).unwrap();
        let profile = exponent_profile(&c, 4 * n).unwrap();
        for j in n.max(1)..=4 * n {
            assert!(profile.at(j).unwrap().sup() < l);
        }
    }

    #[test]
    fn window_checks() {
        let base = SubshiftSpec::fibonacci();
        let id = LocallyConstantCocycle::constant(base.clone(), Mat2::IDENTITY).unwrap();
        assert!(window_check(&id, 3, 0.1).unwrap());
        let d = LocallyConstantCocycle::constant(base.clone(), Mat2::diag(2.0, 0.5)).unwrap();
        assert!(!window_check(&d, 3, 0.5).unwrap());
        let p = LocallyConstantCocycle::constant(base, Mat2::schrodinger(2.0)).unwrap();
        assert!(window_check(&p, 64, 0.1).unwrap());
        let profile = exponent_profile(&p, 1024).unwrap();
        for n in 64..=1024 {
            // ‖[[2,−1],[1,0]]ⁿ‖ grows linearly in n
            assert!(profile.at(n).unwrap().sup() < 0.1);
        }
    }

    #[test]
    fn first_window_matches_definition() {
        let p = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::schrodinger(2.0)).unwrap();
        let profile = exponent_profile(&p, 512).unwrap();
        let n = first_window(&profile, 0.05).unwrap();
        assert!(window_check_profile(&profile, n, 0.05).unwrap());
        assert!(!window_check_profile(&profile, n - 1, 0.05).unwrap());
    }

    #[test]
    fn step_bound_examples() {
        let base = SubshiftSpec::fibonacci();
        let cfg = expand_prefix(&base, 64).unwrap();
        let id = LocallyConstantCocycle::constant(base.clone(), Mat2::IDENTITY).unwrap();
        let s = step_bound_residual(&id, &cfg, 0, 5).unwrap();
        assert_eq!((s.lhs, s.rhs), (0.0, 0.0));
        let d = LocallyConstantCocycle::constant(base, Mat2::diag(E, 1.0 / E)).unwrap();
        for n in 1..20 {
            let s = step_bound_residual(&d, &cfg, 0, n).unwrap();
            assert!(s.lhs < 1e-14);
            assert!((s.rhs - 2.0 / (n as f64 + 1.0)).abs() < 1e-14);
            assert!(s.holds());
        }
    }
}
