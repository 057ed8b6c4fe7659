//! Seeded randomness for perturbation trials and random test cocycles.
//!
//! Every random draw in the crate goes through a [`ChaCha8Rng`] built from a
//! single `u64` seed, so runs are reproducible across platforms.

use alloc::collections::BTreeMap;

use core::f64::consts::PI;
pub use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::cocycle::{Layer, LocallyConstantCocycle, Mat2};
use crate::subshift::{factor_set, SubshiftSpec};
use crate::Result;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent seed for sub-task `index` of a run seeded `seed`.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut r = seeded(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    r.next_u64()
}

/// Uniform sample from [0, 1).
pub fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform sample from [lo, hi).
pub fn uniform(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

/// R(θ₁)·diag(eᵗ, e⁻ᵗ)·R(θ₂) with θ uniform and t uniform in [0, max_log_norm].
pub fn random_sl2(rng: &mut impl RngCore, max_log_norm: f64) -> Mat2 {
    let t = uniform(rng, 0.0, max_log_norm);
    let a = Mat2::rotation(uniform(rng, 0.0, 2.0 * PI));
    let b = Mat2::rotation(uniform(rng, 0.0, 2.0 * PI));
    a * Mat2::diag(libm::exp(t), libm::exp(-t)) * b
}

/// Random cocycle of the given radius with every log‖A(window)‖ ≤ `max_log_norm`.
pub fn random_cocycle(
    rng: &mut impl RngCore,
    base: SubshiftSpec,
    radius: usize,
    max_log_norm: f64,
) -> Result<LocallyConstantCocycle> {
    LocallyConstantCocycle::from_fn(base, radius, |_| random_sl2(rng, max_log_norm))
}

/// `m + δ·P` with P of spectral norm one, rescaled to determinant one.
pub fn perturb(rng: &mut impl RngCore, m: &Mat2, delta: f64) -> Result<Mat2> {
    let mut p =
        Mat2::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    let n = p.norm();
    if n > 0.0 {
        p = p.scale(1.0 / n);
    }
    let (out, _) = m.add(&p.scale(delta)).to_sl2(0.0)?;
    Ok(out)
}

/// Layer of the given radius whose values on the legal windows are uniform
/// in [−1, 1], rescaled so that the sup is exactly one.
pub fn random_layer(rng: &mut impl RngCore, base: &SubshiftSpec, radius: usize) -> Result<Layer> {
    let legal = factor_set(base, 2 * radius + 1)?;
    let mut values: BTreeMap<_, f64> = legal.iter().map(|w| (w.clone(), uniform(rng, -1.0, 1.0))).collect();
    let sup = values.values().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup > 0.0 {
        values.values_mut().for_each(|v| *v /= sup);
    }
    Layer::new(radius, values, None, 1.0)
}
