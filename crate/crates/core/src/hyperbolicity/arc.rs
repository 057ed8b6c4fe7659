use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::cocycle::{wrap_pi, Mat2};

/// Closed arc [start, start + len] of the projective line ℝℙ¹ ≅ [0, π).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Arc {
    pub start: f64,
    pub len: f64,
}

impl Arc {
    pub fn new(start: f64, len: f64) -> Self {
        Arc { start: wrap_pi(start), len }
    }

    pub fn centered(center: f64, half_width: f64) -> Self {
        Arc::new(center - half_width, 2.0 * half_width)
    }

    pub fn center(&self) -> f64 {
        wrap_pi(self.start + 0.5 * self.len)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.len
    }

    /// True when the arc is a proper sub-arc of ℝℙ¹.
    pub fn is_proper(&self) -> bool {
        self.len > 0.0 && self.len < PI
    }

    pub fn contains(&self, theta: f64) -> bool {
        wrap_pi(theta - self.start) <= self.len
    }

    /// `other` ⊂ self with at least `margin` to spare at both ends.
    pub fn contains_arc(&self, other: &Arc, margin: f64) -> bool {
        let offset = wrap_pi(other.start - self.start);
        offset >= margin && offset + other.len <= self.len - margin
    }

    pub fn widen(&self, by: f64) -> Arc {
        Arc::new(self.start - by, self.len + 2.0 * by)
    }

    /// Image under a matrix with positive determinant `det`.
    ///
    /// The projective action preserves orientation, so the image runs from
    /// the image of `start` to the image of the end point; its length is
    /// recovered from the cross and dot products, which stays accurate for
    /// strongly contracted arcs.
    pub fn image(&self, m: &Mat2, det: f64) -> Arc {
        let (s0, c0) = (libm::sin(self.start), libm::cos(self.start));
        let end = self.start + self.len;
        let (s1, c1) = (libm::sin(end), libm::cos(end));
        let u = m.apply([c0, s0]);
        let v = m.apply([c1, s1]);
        let cross = det * libm::sin(self.len);
        let dot = u[0] * v[0] + u[1] * v[1];
        Arc::new(libm::atan2(u[1], u[0]), libm::atan2(cross, dot))
    }

    /// Smallest arc containing all `arcs`, or `None` if they cover ℝℙ¹.
    pub fn hull(arcs: &[Arc]) -> Option<Arc> {
        if arcs.is_empty() {
            return None;
        }
        let mut spans: Vec<(f64, f64)> = arcs.iter().map(|a| (a.start, a.start + a.len)).collect();
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (s, e) in spans {
            match merged.last_mut() {
                Some(last) if s <= last.1 => last.1 = last.1.max(e),
                _ => merged.push((s, e)),
            }
        }
        let max_end = merged.iter().fold(f64::NEG_INFINITY, |m, &(_, e)| m.max(e));
        let overflow = max_end - PI;
        // largest uncovered gap (lo, hi)
        let mut best: Option<(f64, f64)> = None;
        let mut consider = |lo: f64, hi: f64| {
            if hi > lo && best.is_none_or(|(a, b)| hi - lo > b - a) {
                best = Some((lo, hi));
            }
        };
        for pair in merged.windows(2) {
            consider(pair[0].1.max(overflow), pair[1].0);
        }
        consider(max_end, PI + merged[0].0);
        best.map(|(lo, hi)| Arc::new(hi, PI - (hi - lo)))
    }
}

/// min over unit x in `arc` of log‖M x‖, for M = exp(log_scale)·unit.
pub fn min_log_expansion(unit: &Mat2, log_scale: f64, arc: &Arc) -> f64 {
    let at = |theta: f64| {
        let v = unit.apply([libm::cos(theta), libm::sin(theta)]);
        libm::log(libm::hypot(v[0], v[1]))
    };
    let mut best = at(arc.start).min(at(arc.start + arc.len));
    let weakest = unit.contracted_input_angle();
    if arc.contains(weakest) {
        best = best.min(at(weakest));
    }
    best + log_scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_wraps() {
        let big = Arc::new(PI - 0.2, 0.4);
        assert!(big.contains(0.1));
        assert!(big.contains_arc(&Arc::new(PI - 0.1, 0.15), 0.01));
        assert!(!big.contains_arc(&Arc::new(0.1, 0.15), 0.01));
    }

    #[test]
    fn hull_of_wrapping_arcs() {
        let h = Arc::hull(&[Arc::new(3.0, 0.2), Arc::new(0.1, 0.1)]).unwrap();
        assert!((h.start - 3.0).abs() < 1e-12);
        assert!((h.len - (PI - 3.0 + 0.2)).abs() < 1e-12);
        let h = Arc::hull(&[Arc::new(0.5, 0.1), Arc::new(0.55, 0.2)]).unwrap();
        assert!((h.start - 0.5).abs() < 1e-15 && (h.len - 0.25).abs() < 1e-15);
        assert!(Arc::hull(&[Arc::new(0.0, 2.0), Arc::new(1.5, 1.8)]).is_none());
    }

    #[test]
    fn hull_contains_every_input() {
        let arcs = [Arc::new(0.2, 0.3), Arc::new(2.9, 0.4), Arc::new(0.05, 0.1)];
        let h = Arc::hull(&arcs).unwrap();
        for a in &arcs {
            assert!(h.contains_arc(a, -1e-12));
        }
    }

    #[test]
    fn image_under_diagonal_contracts_toward_horizontal() {
        let m = Mat2::diag(2.0, 0.5);
        let img = Arc::centered(0.0, 0.3).image(&m, 1.0);
        assert!(img.contains(0.0));
        assert!((img.len - 2.0 * libm::atan(libm::tan(0.3) / 4.0)).abs() < 1e-14);
        let exp = min_log_expansion(&m, 0.0, &Arc::centered(0.0, 0.3));
        let v = m.apply([libm::cos(0.3), libm::sin(0.3)]);
        assert!((exp - libm::log(libm::hypot(v[0], v[1]))).abs() < 1e-14);
    }
}
