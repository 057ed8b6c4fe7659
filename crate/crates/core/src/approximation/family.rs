use alloc::vec::Vec;

use crate::cocycle::{BlendedFamily, CocycleFamily, LayeredSamplingFunction, LocallyConstantCocycle};
use crate::{Error, Executor, Result};

/// Drops the layers of radius > r: ‖f − f_r‖∞ ≤ bound by construction.
pub fn discretize_sampling(f: &LayeredSamplingFunction, r: usize) -> (LayeredSamplingFunction, f64) {
    f.truncate_radius(r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct CoverParams {
    /// Number of cover intervals tried first; doubled until the error fits.
    pub initial_intervals: usize,
    pub max_intervals: usize,
    /// Spacing of the energy verification sample.
    pub sample_step: f64,
}

impl Default for CoverParams {
    fn default() -> Self {
        CoverParams { initial_intervals: 2, max_intervals: 4096, sample_step: 1e-2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verification {
    pub samples: usize,
    /// max over sampled (E, window) of ‖A′ − A‖.
    pub max_error: f64,
    pub argmax_energy: f64,
    /// max |det A′ − 1|.
    pub max_det_error: f64,
    /// Range of det of the blend before renormalization.
    pub raw_det_min: f64,
    pub raw_det_max: f64,
}

#[derive(Clone, Debug)]
pub struct FamilyApproximation {
    pub family: BlendedFamily,
    pub lo: f64,
    pub hi: f64,
    pub epsilon: f64,
    pub intervals: usize,
    pub verification: Verification,
    /// (intervals, sup error) per refinement step.
    pub refinements: Vec<(usize, f64)>,
}

fn sample_energies(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = libm::ceil((hi - lo) / step - 1e-9).max(1.0) as usize;
    (0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect()
}

fn verify<X: Executor>(
    family: &CocycleFamily,
    blended: &BlendedFamily,
    energies: &[f64],
    exec: &X,
) -> Result<Verification> {
    let per = exec.map(energies, |&e| -> Result<(f64, f64, f64, f64)> {
        let exact: LocallyConstantCocycle = family.slice(e)?;
        let approx = blended.slice(e)?;
        let mut err = 0.0f64;
        let mut det_err = 0.0f64;
        for ((_, a), (_, b)) in exact.table().iter().zip(approx.table().iter()) {
            err = err.max(b.sub(a).norm());
            det_err = det_err.max((b.det() - 1.0).abs());
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (_, m) in blended.raw_blend(e) {
            lo = lo.min(m.det());
            hi = hi.max(m.det());
        }
        Ok((err, det_err, lo, hi))
    });
    let mut v = Verification {
        samples: energies.len(),
        max_error: 0.0,
        argmax_energy: energies[0],
        max_det_error: 0.0,
        raw_det_min: f64::INFINITY,
        raw_det_max: f64::NEG_INFINITY,
    };
    for (r, &e) in per.into_iter().zip(energies) {
        let (err, det_err, lo, hi) = r?;
        if err > v.max_error {
            v.max_error = err;
            v.argmax_energy = e;
        }
        v.max_det_error = v.max_det_error.max(det_err);
        v.raw_det_min = v.raw_det_min.min(lo);
        v.raw_det_max = v.raw_det_max.max(hi);
    }
    Ok(v)
}

/// Replaces A(E, ·) on [lo, hi] by a family that is locally constant in ω
/// and piecewise linear in E before renormalization to det 1.
///
/// The nodes form a uniform cover whose size doubles until the sampled sup
/// error is at most ε.
pub fn approximate_family<X: Executor>(
    family: &CocycleFamily,
    lo: f64,
    hi: f64,
    epsilon: f64,
    params: &CoverParams,
    exec: &X,
) -> Result<FamilyApproximation> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid("energy interval needs lo < hi"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::invalid("ε must be positive"));
    }
    if params.initial_intervals == 0 || !(params.sample_step > 0.0) {
        return Err(Error::invalid("cover parameters must be positive"));
    }
    let energies = sample_energies(lo, hi, params.sample_step);
    let mut n = params.initial_intervals;
    let mut refinements = Vec::new();
    loop {
        let nodes: Vec<f64> = (0..=n).map(|k| if k == n { hi } else { lo + (hi - lo) * k as f64 / n as f64 }).collect();
        let slices = exec.map(&nodes, |&e| family.slice(e)).into_iter().collect::<Result<Vec<_>>>()?;
        let blended = BlendedFamily::new(nodes, slices)?;
        let (err, verified, det_failure) = match verify(family, &blended, &energies, exec) {
            Ok(v) => (v.max_error, Some(v), None),
            Err(e @ Error::BlendedDeterminant { .. }) => (f64::INFINITY, None, Some(e)),
            Err(e) => return Err(e),
        };
        refinements.push((n, err));
        if let Some(verification) = verified.filter(|_| err <= epsilon) {
            return Ok(FamilyApproximation {
                family: blended,
                lo,
                hi,
                epsilon,
                intervals: n,
                verification,
                refinements,
            });
        }
        if 2 * n > params.max_intervals {
            return Err(det_failure.unwrap_or(Error::CoverRefinementFailed { cover: n, error: err }));
        }
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{Layer, Mat2};
    use crate::subshift::{SubshiftSpec, Word};
    use crate::Sequential;
    use alloc::collections::BTreeMap;

    fn unit_layer(radius: usize, coef: f64) -> Layer {
        Layer::new(radius, BTreeMap::new(), Some(1.0), coef).unwrap()
    }

    #[test]
    fn truncation_bounds() {
        let f = LayeredSamplingFunction::new(alloc::vec![unit_layer(0, 1.0)], 0.0).unwrap();
        let (g, b) = discretize_sampling(&f, 0);
        assert_eq!(g, f);
        assert_eq!(b, 0.0);

        let f = LayeredSamplingFunction::new(alloc::vec![unit_layer(0, 1.0), unit_layer(3, 0.1)], 0.0).unwrap();
        let (g, b) = discretize_sampling(&f, 0);
        assert_eq!(g.layers().len(), 1);
        assert!((b - 0.1).abs() < 1e-15);

        let layers = (0..12).map(|j| unit_layer(j, libm::pow(2.0, -(j as f64)))).collect();
        let f = LayeredSamplingFunction::new(layers, 0.0).unwrap();
        let (_, b) = discretize_sampling(&f, 5);
        // Σ_{j=6}^{11} 2^{-j} = 2^{-5} − 2^{-11}
        assert!((b - (libm::pow(2.0, -5.0) - libm::pow(2.0, -11.0))).abs() < 1e-15);
    }

    #[test]
    fn fixed_family_is_reproduced() {
        let spec = SubshiftSpec::fibonacci();
        let mut t = BTreeMap::new();
        t.insert(Word::symbol('a').unwrap(), Mat2::diag(2.0, 0.5));
        t.insert(Word::symbol('b').unwrap(), Mat2::rotation(0.7));
        let c = LocallyConstantCocycle::new(spec, 0, t).unwrap();
        let fam = CocycleFamily::Fixed(c.clone());
        let out = approximate_family(&fam, -1.0, 1.0, 1e-9, &CoverParams::default(), &Sequential).unwrap();
        assert_eq!(out.intervals, 2);
        assert_eq!(out.verification.max_error, 0.0);
        assert_eq!(out.family.slice(0.37).unwrap().table(), c.table());
    }

    #[test]
    fn rotation_family_meets_epsilon() {
        let fam = CocycleFamily::rotation(SubshiftSpec::fibonacci());
        for eps in [0.05, 0.01, 1e-3] {
            let out = approximate_family(&fam, 0.0, 1.0, eps, &CoverParams::default(), &Sequential).unwrap();
            assert!(out.verification.max_error <= eps);
            assert!(out.verification.max_det_error <= 1e-12);
            // oracle: ‖R(E) − R(E')‖ = 2 sin(|E − E'|/2), checked on a finer sample
            for k in 0..=1000 {
                let e = k as f64 / 1000.0;
                let m = out.family.slice(e).unwrap().table().values()[0];
                let exact = Mat2::rotation(e);
                let angle = libm::atan2(m.c, m.a);
                assert!((2.0 * libm::sin((angle - e).abs() / 2.0) - m.sub(&exact).norm()).abs() < 1e-12);
                assert!(m.sub(&exact).norm() <= eps * 1.01);
            }
        }
    }

    #[test]
    fn schrodinger_is_affine_in_energy() {
        let f = LayeredSamplingFunction::indicator('b', 1.0).unwrap();
        let fam = CocycleFamily::schrodinger(f, SubshiftSpec::fibonacci()).unwrap();
        let out = approximate_family(&fam, -3.0, 3.0, 1e-3, &CoverParams::default(), &Sequential).unwrap();
        assert!(out.verification.max_error < 1e-12);
        assert!(out.verification.raw_det_min >= 0.9 && out.verification.raw_det_max <= 1.1);
    }

    #[test]
    fn refinement_limit() {
        let fam = CocycleFamily::rotation(SubshiftSpec::fibonacci());
        let p = CoverParams { max_intervals: 4, ..CoverParams::default() };
        match approximate_family(&fam, 0.0, 6.0, 1e-4, &p, &Sequential) {
            Err(Error::CoverRefinementFailed { cover, .. }) => assert_eq!(cover, 4),
            other => panic!("{other:?}"),
        }
    }
}
