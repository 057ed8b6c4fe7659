use alloc::vec::Vec;

use crate::cocycle::Mat2;
use crate::{Error, Result};

/// Closed intervals of a periodic spectrum, sorted and disjoint.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BandSet {
    pub period: usize,
    pub bands: Vec<(f64, f64)>,
}

impl BandSet {
    pub fn measure(&self) -> f64 {
        spectrum_measure(&self.bands)
    }

    pub fn contains(&self, energy: f64) -> bool {
        self.bands.iter().any(|&(a, b)| a <= energy && energy <= b)
    }

    /// Distance from `energy` to the band set.
    pub fn distance(&self, energy: f64) -> f64 {
        self.bands
            .iter()
            .map(|&(a, b)| {
                if energy < a {
                    a - energy
                } else if energy > b {
                    energy - b
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Σ of interval lengths.
pub fn spectrum_measure(intervals: &[(f64, f64)]) -> f64 {
    intervals.iter().map(|&(a, b)| b - a).sum()
}

/// 2·m·ε + Σ|I_j|.
pub fn covering_bound(intervals: &[(f64, f64)], epsilon: f64, m: usize) -> f64 {
    2.0 * m as f64 * epsilon + spectrum_measure(intervals)
}

/// Endpoint accuracy of [`periodic_spectrum`].
pub const EDGE_TOL: f64 = 1e-10;
/// Bands closer than this are merged (closed gaps are only resolved to
/// about √ε_machine by the discriminant).
pub const MERGE_TOL: f64 = 1e-7;

/// Trace of the period transfer matrix, D(E).
pub fn discriminant(potential: &[f64], energy: f64) -> f64 {
    let mut m = Mat2::IDENTITY;
    let mut scale = 0i32;
    for &v in potential {
        m = Mat2::schrodinger(energy - v) * m;
        if m.max_abs() > 1e100 {
            m = m.scale(1e-100);
            scale += 1;
        }
    }
    let t = m.trace();
    if scale == 0 {
        t
    } else {
        // |D| ≥ 1e100 here up to cancellation; only the sign matters
        t * libm::pow(1e100, scale as f64)
    }
}

/// Number of eigenvalues below `energy` of the Dirichlet problem on sites
/// 0..p−2 (Sturm count of the pivots of J − E).
fn dirichlet_count(potential: &[f64], energy: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0f64;
    for (k, &v) in potential[..potential.len() - 1].iter().enumerate() {
        d = if k == 0 { v - energy } else { (v - energy) - 1.0 / d };
        if d == 0.0 {
            d = -f64::EPSILON;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Shortest exact period of the sequence; the spectrum does not see
/// repetitions.
fn primitive_root(v: &[f64]) -> &[f64] {
    let p = v.len();
    (1..p).filter(|d| p.is_multiple_of(*d)).find(|&d| (d..p).all(|i| v[i] == v[i - d])).map_or(v, |d| &v[..d])
}

fn bisect(mut lo: f64, mut hi: f64, mut left_true: impl FnMut(f64) -> bool) -> (f64, f64) {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if left_true(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Bands {E : |D(E)| ≤ 2} of the periodic operator with the given potential.
///
/// Each band lies between consecutive Dirichlet eigenvalues, which are found
/// by Sturm bisection; inside, the zero of D and then the two edges are
/// bisected. Thin bands therefore cannot be missed between grid points.
pub fn periodic_spectrum(potential: &[f64]) -> Result<BandSet> {
    let p = potential.len();
    if p == 0 {
        return Err(Error::EmptyWord);
    }
    if potential.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("potential"));
    }
    let potential = primitive_root(potential);
    let p = potential.len();
    let vmin = potential.iter().copied().fold(f64::INFINITY, f64::min);
    let vmax = potential.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = (vmin - 2.5, vmax + 2.5);

    let mut fences = Vec::with_capacity(p + 1);
    fences.push(lo);
    for j in 1..p {
        let (_, mu) = bisect(lo, hi, |e| dirichlet_count(potential, e) < j);
        fences.push(mu);
    }
    fences.push(hi);

    let d = |e: f64| discriminant(potential, e);
    let mut bands: Vec<(f64, f64)> = Vec::with_capacity(p);
    for j in 1..=p {
        let (a, b) = (fences[j - 1], fences[j]);
        // D = +2 at the right edge of band j exactly when p − j is even
        let s_right = if (p - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        let s_left = -s_right;
        let (z, _) = bisect(a, b, |e| s_left * d(e) > 0.0);
        // a and b sit in closed gaps, so only interior points are evaluated;
        // a Dirichlet value on a band edge then converges to that edge
        let left = bisect(a, z, |e| s_left * d(e) - 2.0 >= 0.0).1;
        let right = bisect(z, b, |e| s_right * d(e) - 2.0 < 0.0).0;
        match bands.last_mut() {
            Some(last) if left - last.1 <= MERGE_TOL => last.1 = last.1.max(right),
            _ => bands.push((left, right)),
        }
    }
    Ok(BandSet { period: p, bands })
}
