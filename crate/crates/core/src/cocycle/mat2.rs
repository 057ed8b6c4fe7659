use core::ops::Mul;

use libm::{exp, hypot, log, sqrt};

use crate::{Error, Result};

/// Real 2×2 matrix [[a, b], [c, d]].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(from = "[f64; 4]", into = "[f64; 4]"))]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl From<[f64; 4]> for Mat2 {
    fn from([a, b, c, d]: [f64; 4]) -> Self {
        Mat2 { a, b, c, d }
    }
}

impl From<Mat2> for [f64; 4] {
    fn from(m: Mat2) -> Self {
        [m.a, m.b, m.c, m.d]
    }
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn diag(x: f64, y: f64) -> Self {
        Mat2 { a: x, b: 0.0, c: 0.0, d: y }
    }

    /// Rotation by `theta` radians.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        Mat2 { a: c, b: -s, c: s, d: c }
    }

    /// Schrödinger transfer matrix [[g, −1], [1, 0]].
    pub const fn schrodinger(g: f64) -> Self {
        Mat2 { a: g, b: -1.0, c: 1.0, d: 0.0 }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Inverse of a unit-determinant matrix (the adjugate).
    pub fn sl2_inverse(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2 { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2 { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2 { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    fn singular_parts(&self) -> (f64, f64) {
        (hypot(self.a + self.d, self.b - self.c), hypot(self.a - self.d, self.b + self.c))
    }

    /// Spectral norm (largest singular value), in closed form.
    pub fn norm(&self) -> f64 {
        let (p, q) = self.singular_parts();
        0.5 * (p + q)
    }

    /// (σ_max, σ_min).
    pub fn singular_values(&self) -> (f64, f64) {
        let (p, q) = self.singular_parts();
        (0.5 * (p + q), 0.5 * (p - q).abs())
    }

    /// Angle in [0, π) of the input direction stretched by σ_max.
    pub fn expanded_input_angle(&self) -> f64 {
        let p = self.a * self.a + self.c * self.c;
        let q = self.b * self.b + self.d * self.d;
        let r = self.a * self.b + self.c * self.d;
        wrap_pi(0.5 * libm::atan2(2.0 * r, p - q))
    }

    /// Angle in [0, π) of the input direction shrunk by σ_min.
    pub fn contracted_input_angle(&self) -> f64 {
        wrap_pi(self.expanded_input_angle() + core::f64::consts::FRAC_PI_2)
    }

    /// Angle in [0, π) of the output direction of largest stretch.
    pub fn expanded_output_angle(&self) -> f64 {
        let p = self.a * self.a + self.b * self.b;
        let q = self.c * self.c + self.d * self.d;
        let r = self.a * self.c + self.b * self.d;
        wrap_pi(0.5 * libm::atan2(2.0 * r, p - q))
    }

    /// Validates positive determinant and rescales by 1/√det when it is off by
    /// more than `det_tol`. The flag reports whether rescaling happened.
    pub fn to_sl2(self, det_tol: f64) -> Result<(Mat2, bool)> {
        if !self.is_finite() {
            return Err(Error::NonFinite("matrix entries"));
        }
        let det = self.det();
        if det <= 0.0 {
            return Err(Error::NonPositiveDeterminant(det));
        }
        if (det - 1.0).abs() <= det_tol {
            Ok((self, false))
        } else {
            Ok((self.scale(1.0 / sqrt(det)), true))
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Reduces an angle to [0, π).
pub fn wrap_pi(theta: f64) -> f64 {
    let pi = core::f64::consts::PI;
    let mut t = theta % pi;
    if t < 0.0 {
        t += pi;
    }
    if t >= pi {
        t -= pi;
    }
    t
}

/// Running product kept as `exp(log_scale) · unit`, renormalized every
/// 32 factors (or earlier if entries grow past 1e150).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMat {
    unit: Mat2,
    log_scale: f64,
    pending: u32,
}

const RENORM_EVERY: u32 = 32;

impl Default for LogMat {
    fn default() -> Self {
        Self::identity()
    }
}

impl LogMat {
    pub const fn identity() -> Self {
        LogMat { unit: Mat2::IDENTITY, log_scale: 0.0, pending: 0 }
    }

    pub fn from_parts(unit: Mat2, log_scale: f64) -> Self {
        LogMat { unit, log_scale, pending: 0 }
    }

    /// Replaces the product P by `m · P`.
    #[inline]
    pub fn push(&mut self, m: &Mat2) {
        self.unit = *m * self.unit;
        self.pending += 1;
        if self.pending >= RENORM_EVERY || self.unit.max_abs() > 1e150 {
            self.renormalize();
        }
    }

    pub fn renormalize(&mut self) {
        let n = self.unit.norm();
        if n > 0.0 && n.is_finite() {
            self.unit = self.unit.scale(1.0 / n);
            self.log_scale += log(n);
        }
        self.pending = 0;
    }

    pub fn log_norm(&self) -> f64 {
        log(self.unit.norm()) + self.log_scale
    }

    /// Stored matrix; the product equals `exp(log_scale()) · unit()`.
    pub fn unit(&self) -> Mat2 {
        self.unit
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// The product normalized to spectral norm one, with its log-norm.
    pub fn normalized(&self) -> (Mat2, f64) {
        let n = self.unit.norm();
        (self.unit.scale(1.0 / n), log(n) + self.log_scale)
    }

    /// Determinant of the full product.
    pub fn det(&self) -> f64 {
        self.unit.det() * exp(2.0 * self.log_scale)
    }

    /// The full product; may overflow for long products.
    pub fn to_mat(&self) -> Mat2 {
        self.unit.scale(exp(self.log_scale))
    }
}
