use alloc::vec::Vec;

use crate::cocycle::{wrap_pi, LocallyConstantCocycle, LogMat};
use crate::{Error, Result};

/// Tolerances for splitting extraction.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SplittingParams {
    /// Minimum of log σ_max − log σ_min for A_n.
    pub gap_tol: f64,
    /// Minimum angle between u and s (radians).
    pub angle_tol: f64,
    /// Number of consecutive orbit points sampled.
    pub samples: usize,
}

impl Default for SplittingParams {
    fn default() -> Self {
        SplittingParams { gap_tol: 1e-8, angle_tol: 1e-6, samples: 8 }
    }
}

/// Directions at one orbit point, as angles in [0, π).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplittingPoint {
    pub position: usize,
    pub u: f64,
    pub s: f64,
}

/// Numerical splitting along a stretch of orbit.
///
/// s(ω) is the most contracted input direction of A_n(ω) and u(ω) the most
/// contracted input direction of A_{−n}(ω); (C, λ) are fitted so that
/// ‖A_k(ω)S‖ ≤ Cλ^{−k} and ‖A_{−k}(ω)U‖ ≤ Cλ^{−k} hold for every sampled
/// ω and k ≤ n. The rate λ is fitted on k ≤ n/2.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplittingSample {
    pub n: usize,
    pub points: Vec<SplittingPoint>,
    /// max angle between A(ω)u(ω) and u(Tω) over consecutive samples.
    pub u_residual: f64,
    /// max angle between A(ω)s(ω) and s(Tω).
    pub s_residual: f64,
    /// min angle between u and s.
    pub transversality: f64,
    pub c: f64,
    pub lambda: f64,
    /// Transversal with λ > 1.
    pub certified: bool,
}

impl SplittingSample {
    pub fn residual(&self) -> f64 {
        self.u_residual.max(self.s_residual)
    }
}

/// Distance between two projective points.
pub fn projective_distance(a: f64, b: f64) -> f64 {
    let d = wrap_pi(a - b);
    d.min(core::f64::consts::PI - d)
}

fn direction(theta: f64) -> [f64; 2] {
    [libm::cos(theta), libm::sin(theta)]
}

fn image_angle(m: &crate::cocycle::Mat2, theta: f64) -> f64 {
    let v = m.apply(direction(theta));
    wrap_pi(libm::atan2(v[1], v[0]))
}

/// log‖A_k(ω)x‖ for k = 1..=n (forward) along the configuration.
fn decay(
    cocycle: &LocallyConstantCocycle,
    config: &[u8],
    start: usize,
    n: usize,
    theta: f64,
    backward: bool,
) -> Result<Vec<f64>> {
    let r = cocycle.radius();
    let mut acc = LogMat::identity();
    let x = direction(theta);
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let m = if backward {
            let i = start - k;
            cocycle.eval(&config[i - r..=i + r])?.sl2_inverse()
        } else {
            let i = start + k - 1;
            cocycle.eval(&config[i - r..=i + r])?
        };
        acc.push(&m);
        let v = acc.unit().apply(x);
        out.push(libm::log(libm::hypot(v[0], v[1])) + acc.log_scale());
    }
    Ok(out)
}

/// Extracts the splitting at the orbit points `start .. start + samples`
/// of `config` (ω_0 = config[start]).
pub fn extract_splitting(
    cocycle: &LocallyConstantCocycle,
    config: &[u8],
    start: usize,
    n: usize,
    params: &SplittingParams,
) -> Result<SplittingSample> {
    if n < 2 {
        return Err(Error::invalid("splitting needs n ≥ 2"));
    }
    let samples = params.samples.max(2);
    let r = cocycle.radius();
    let needed_from = start as isize - (n + r) as isize;
    let needed_to = start + samples + n + r;
    if needed_from < 0 || needed_to > config.len() {
        return Err(Error::InsufficientConfiguration { needed_from, needed_to, available: config.len() });
    }
    let mut points = Vec::with_capacity(samples);
    for i in start..start + samples {
        let fwd = cocycle.iterate_scaled(config, i, n as isize)?;
        let bwd = cocycle.iterate_scaled(config, i, -(n as isize))?;
        for p in [&fwd, &bwd] {
            let gap = 2.0 * p.log_norm();
            if !(gap >= params.gap_tol) {
                return Err(Error::DegenerateSingularValues { gap });
            }
        }
        points.push(SplittingPoint {
            position: i,
            u: bwd.unit().contracted_input_angle(),
            s: fwd.unit().contracted_input_angle(),
        });
    }
    let mut u_residual = 0.0f64;
    let mut s_residual = 0.0f64;
    for pair in points.windows(2) {
        let i = pair[0].position;
        let a = cocycle.eval(&config[i - r..=i + r])?;
        u_residual = u_residual.max(projective_distance(image_angle(&a, pair[0].u), pair[1].u));
        s_residual = s_residual.max(projective_distance(image_angle(&a, pair[0].s), pair[1].s));
    }
    let transversality = points.iter().fold(f64::INFINITY, |m, p| m.min(projective_distance(p.u, p.s)));

    // Least-squares slope of log‖·‖ against k, pooled over samples. Only
    // k ≤ n/2 enters the slope: near k = n the finite-n directions pick up
    // a growing component of relative size λ^{2(k−n)}.
    let fit_len = n.div_ceil(2).max(2);
    let mut series = Vec::new();
    for p in &points {
        series.push(decay(cocycle, config, p.position, n, p.s, false)?);
        series.push(decay(cocycle, config, p.position, n, p.u, true)?);
    }
    let (mut sk, mut sy, mut skk, mut sky, mut cnt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ys in &series {
        for (j, &y) in ys.iter().take(fit_len).enumerate() {
            let k = (j + 1) as f64;
            sk += k;
            sy += y;
            skk += k * k;
            sky += k * y;
            cnt += 1.0;
        }
    }
    let slope = (cnt * sky - sk * sy) / (cnt * skk - sk * sk);
    let log_lambda = -slope;
    let log_c = series
        .iter()
        .flat_map(|ys| ys.iter().enumerate().map(|(j, &y)| y + (j + 1) as f64 * log_lambda))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    let lambda = libm::exp(log_lambda);
    Ok(SplittingSample {
        n,
        points,
        u_residual,
        s_residual,
        transversality,
        c: libm::exp(log_c),
        lambda,
        certified: transversality > params.angle_tol && lambda > 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{schrodinger_cocycle, LayeredSamplingFunction, Mat2};
    use crate::subshift::{expand_prefix, SubshiftSpec};
    use core::f64::consts::FRAC_PI_2;

    fn fib_config(len: usize) -> crate::subshift::Word {
        expand_prefix(&SubshiftSpec::fibonacci(), len).unwrap()
    }

    #[test]
    fn diagonal_axes() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::diag(2.0, 0.5)).unwrap();
        let cfg = fib_config(64);
        let s = extract_splitting(&c, &cfg, 20, 10, &SplittingParams::default()).unwrap();
        for p in &s.points {
            assert!(projective_distance(p.u, 0.0) < 1e-15);
            assert!(projective_distance(p.s, FRAC_PI_2) < 1e-15);
        }
        assert_eq!(s.residual(), 0.0);
        assert!((s.lambda - 2.0).abs() < 1e-12);
        assert!(s.certified);
    }

    #[test]
    fn free_energy_three_eigendirections() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::schrodinger(3.0)).unwrap();
        let cfg = fib_config(80);
        let s = extract_splitting(&c, &cfg, 30, 20, &SplittingParams::default()).unwrap();
        let lambda = (3.0 + libm::sqrt(5.0)) / 2.0;
        // eigenvectors (λ, 1) and (1/λ, 1)
        let u = libm::atan2(1.0, lambda);
        let st = libm::atan2(1.0, 1.0 / lambda);
        for p in &s.points {
            assert!(projective_distance(p.u, u) < 1e-6);
            assert!(projective_distance(p.s, st) < 1e-6);
        }
        assert!((s.lambda - lambda).abs() < 1e-4, "{}", s.lambda);
    }

    #[test]
    fn rotation_is_degenerate() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::schrodinger(0.0)).unwrap();
        let cfg = fib_config(64);
        let err = extract_splitting(&c, &cfg, 20, 10, &SplittingParams::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateSingularValues { .. }));
    }

    #[test]
    fn residual_shrinks_with_n() {
        let f = LayeredSamplingFunction::indicator('b', 1.0).unwrap();
        let c = schrodinger_cocycle(&f, SubshiftSpec::fibonacci(), 3.5).unwrap();
        let cfg = fib_config(200);
        let p = SplittingParams::default();
        let r2 = extract_splitting(&c, &cfg, 60, 2, &p).unwrap().residual();
        let r4 = extract_splitting(&c, &cfg, 60, 4, &p).unwrap().residual();
        let r8 = extract_splitting(&c, &cfg, 60, 8, &p).unwrap().residual();
        assert!(r4 <= r2 / 2.0 && r8 <= r4 / 2.0, "{r2} {r4} {r8}");
    }
}
