use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::mat2::{LogMat, Mat2};
use super::table::WindowTable;
use crate::subshift::{factor_set, FactorLanguage, SubshiftSpec, Word};
use crate::{Error, Result};

/// Numerical limits attached to a cocycle.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct Limits {
    /// Entries with |det − 1| above this are rescaled to determinant one.
    pub det_tol: f64,
    /// Largest |n| accepted by [`LocallyConstantCocycle::iterate`].
    pub horizon: usize,
    /// Matrix multiplications allowed in one exact enumeration.
    pub budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { det_tol: 1e-10, horizon: 1 << 20, budget: 200_000_000 }
    }
}

/// A(ω) = table(ω_{−r} … ω_r) over a subshift.
#[derive(Clone, Debug, PartialEq)]
pub struct LocallyConstantCocycle {
    radius: usize,
    base: SubshiftSpec,
    table: WindowTable<Mat2>,
    limits: Limits,
    renormalized: Vec<Word>,
}

impl LocallyConstantCocycle {
    /// Builds a cocycle from a table that must cover every legal window of
    /// length 2r+1. Entries with determinant off by more than `det_tol` are
    /// rescaled and listed in [`renormalized`](Self::renormalized).
    pub fn new(base: SubshiftSpec, radius: usize, entries: BTreeMap<Word, Mat2>) -> Result<Self> {
        Self::with_limits(base, radius, entries, Limits::default())
    }

    pub fn with_limits(
        base: SubshiftSpec,
        radius: usize,
        entries: BTreeMap<Word, Mat2>,
        limits: Limits,
    ) -> Result<Self> {
        let legal = factor_set(&base, 2 * radius + 1)?;
        Self::from_language(base, radius, entries, limits, &legal)
    }

    pub(crate) fn from_language(
        base: SubshiftSpec,
        radius: usize,
        entries: BTreeMap<Word, Mat2>,
        limits: Limits,
        legal: &FactorLanguage,
    ) -> Result<Self> {
        let mut renormalized = Vec::new();
        let mut rows = Vec::with_capacity(entries.len());
        for (w, m) in entries {
            if w.len() != 2 * radius + 1 {
                return Err(Error::WindowLength { expected: 2 * radius + 1, found: w.len() });
            }
            let (m, fixed) = m.to_sl2(limits.det_tol)?;
            if fixed {
                renormalized.push(w.clone());
            }
            rows.push((w, m));
        }
        let table = WindowTable::new(2 * radius + 1, rows)?;
        if let Some(missing) = legal.iter().find(|w| table.get(w).is_none()) {
            return Err(Error::IllegalWindow(missing.clone()));
        }
        Ok(LocallyConstantCocycle { radius, base, table, limits, renormalized })
    }

    /// The constant cocycle A ≡ m.
    pub fn constant(base: SubshiftSpec, m: Mat2) -> Result<Self> {
        Self::from_fn(base, 0, |_| m)
    }

    /// Tabulates `f` on every legal window of length 2r+1.
    pub fn from_fn(base: SubshiftSpec, radius: usize, f: impl FnMut(&Word) -> Mat2) -> Result<Self> {
        Self::try_from_fn(base, radius, Limits::default(), f)
    }

    pub fn try_from_fn(
        base: SubshiftSpec,
        radius: usize,
        limits: Limits,
        mut f: impl FnMut(&Word) -> Mat2,
    ) -> Result<Self> {
        let legal = factor_set(&base, 2 * radius + 1)?;
        let entries = legal.iter().map(|w| (w.clone(), f(w))).collect();
        Self::from_language(base, radius, entries, limits, &legal)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn base(&self) -> &SubshiftSpec {
        &self.base
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
    }

    pub fn table(&self) -> &WindowTable<Mat2> {
        &self.table
    }

    /// Windows whose entries were rescaled to determinant one.
    pub fn renormalized(&self) -> &[Word] {
        &self.renormalized
    }

    /// Table entry for a window of length 2r+1.
    pub fn eval(&self, window: &[u8]) -> Result<Mat2> {
        if window.len() != 2 * self.radius + 1 {
            return Err(Error::WindowLength { expected: 2 * self.radius + 1, found: window.len() });
        }
        self.table.get(window).copied().ok_or_else(|| Error::IllegalWindow(Word::from_bytes_unchecked(window.to_vec())))
    }

    /// max over windows of log‖A‖ (equal to max log‖A⁻¹‖ in SL(2,ℝ)).
    pub fn max_log_norm(&self) -> f64 {
        self.table.values().iter().fold(0.0, |m, a| m.max(libm::log(a.norm())))
    }

    /// Applies `f` to every entry, keeping the window set.
    pub fn map_entries(&self, mut f: impl FnMut(&Word, &Mat2) -> Mat2) -> Result<Self> {
        let entries = self.table.iter().map(|(w, m)| (w.clone(), f(w, m))).collect();
        let legal = FactorLanguage {
            n: 2 * self.radius + 1,
            words: self.table.keys().to_vec(),
            exactness: crate::subshift::Exactness::Exact,
        };
        Self::from_language(self.base.clone(), self.radius, entries, self.limits, &legal)
    }

    fn check_range(&self, config: &[u8], start: usize, n: isize) -> Result<(usize, usize)> {
        let steps = n.unsigned_abs();
        if steps > self.limits.horizon {
            return Err(Error::HorizonExceeded { n: steps, horizon: self.limits.horizon });
        }
        let r = self.radius as isize;
        let s = start as isize;
        // windows centered at start..start+n-1 (n ≥ 0) or start-|n|..start-1
        let (lo, hi) = if n >= 0 { (s - r, s + n + r) } else { (s + n - r, s + r) };
        if lo < 0 || hi as usize > config.len() {
            return Err(Error::InsufficientConfiguration {
                needed_from: lo,
                needed_to: hi.max(0) as usize,
                available: config.len(),
            });
        }
        Ok((lo as usize, hi as usize))
    }

    /// A_n(ω) in log-scaled form, where ω is `config` shifted so that
    /// ω_0 = `config[start]`.
    ///
    /// For n ≥ 0 this is A(T^{n−1}ω)⋯A(ω); for n < 0 it is
    /// A(T^{n}ω)⁻¹⋯A(T^{−1}ω)⁻¹, built from inverted single factors.
    pub fn iterate_scaled(&self, config: &[u8], start: usize, n: isize) -> Result<LogMat> {
        self.check_range(config, start, n)?;
        let r = self.radius;
        let mut acc = LogMat::identity();
        if n >= 0 {
            for i in start..start + n as usize {
                acc.push(&self.eval(&config[i - r..=i + r])?);
            }
        } else {
            for k in 1..=n.unsigned_abs() {
                let i = start - k;
                acc.push(&self.eval(&config[i - r..=i + r])?.sl2_inverse());
            }
        }
        Ok(acc)
    }

    /// A_n(ω) as a plain matrix (may overflow for long hyperbolic products).
    pub fn iterate(&self, config: &[u8], start: usize, n: isize) -> Result<Mat2> {
        Ok(self.iterate_scaled(config, start, n)?.to_mat())
    }

    /// (1/n)·log‖A_n(ω)‖.
    pub fn finite_scale_exponent(&self, config: &[u8], start: usize, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let log_norm = self.iterate_scaled(config, start, n as isize)?.log_norm();
        Ok(log_norm.max(0.0) / n as f64)
    }

    /// log‖A_k(ω)‖ for k = 1..=n along one configuration.
    pub fn log_norm_trace(&self, config: &[u8], start: usize, n: usize) -> Result<Vec<f64>> {
        self.check_range(config, start, n as isize)?;
        let r = self.radius;
        let mut acc = LogMat::identity();
        let mut out = Vec::with_capacity(n);
        for i in start..start + n {
            acc.push(&self.eval(&config[i - r..=i + r])?);
            out.push(acc.log_norm().max(0.0));
        }
        Ok(out)
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Repr {
        subshift: SubshiftSpec,
        radius: usize,
        table: BTreeMap<Word, Mat2>,
        #[serde(default)]
        limits: Limits,
    }

    impl Serialize for LocallyConstantCocycle {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            Repr { subshift: self.base.clone(), radius: self.radius, table: self.table.to_map(), limits: self.limits }
                .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for LocallyConstantCocycle {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let r = Repr::deserialize(d)?;
            LocallyConstantCocycle::with_limits(r.subshift, r.radius, r.table, r.limits)
                .map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::expand_prefix;
    use core::f64::consts::E;

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        a.sub(b).max_abs() <= tol
    }

    #[test]
    fn identity_products_stay_identity() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::IDENTITY).unwrap();
        let cfg = expand_prefix(&SubshiftSpec::fibonacci(), 1_000_010).unwrap();
        let m = c.iterate(&cfg, 0, 1_000_000).unwrap();
        assert_eq!(m, Mat2::IDENTITY);
        assert_eq!(c.finite_scale_exponent(&cfg, 0, 10).unwrap(), 0.0);
    }

    #[test]
    fn quarter_rotation_has_order_four() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::schrodinger(0.0)).unwrap();
        let cfg = expand_prefix(&SubshiftSpec::fibonacci(), 16).unwrap();
        assert!(close(&c.iterate(&cfg, 0, 4).unwrap(), &Mat2::IDENTITY, 1e-12));
        assert!(close(&c.iterate(&cfg, 8, -4).unwrap(), &Mat2::IDENTITY, 1e-12));
    }

    #[test]
    fn diagonal_power() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::diag(2.0, 0.5)).unwrap();
        let cfg = expand_prefix(&SubshiftSpec::fibonacci(), 16).unwrap();
        assert!(close(&c.iterate(&cfg, 0, 5).unwrap(), &Mat2::diag(32.0, 1.0 / 32.0), 1e-12));
        let e = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::diag(E, 1.0 / E)).unwrap();
        for n in 1..10 {
            assert!((e.finite_scale_exponent(&cfg, 0, n).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn free_exponent_at_three() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::schrodinger(3.0)).unwrap();
        let cfg = expand_prefix(&SubshiftSpec::fibonacci(), 10_000).unwrap();
        let oracle = libm::log((3.0 + libm::sqrt(5.0)) / 2.0);
        let l = c.finite_scale_exponent(&cfg, 0, 10_000).unwrap();
        assert!((l - oracle).abs() < 1e-3, "{l}");
    }

    #[test]
    fn missing_window_is_rejected() {
        let mut t = BTreeMap::new();
        t.insert("a".parse().unwrap(), Mat2::IDENTITY);
        let err = LocallyConstantCocycle::new(SubshiftSpec::fibonacci(), 0, t).unwrap_err();
        assert_eq!(err, Error::IllegalWindow("b".parse().unwrap()));
    }

    #[test]
    fn illegal_window_lookup_names_word() {
        let c = LocallyConstantCocycle::from_fn(SubshiftSpec::fibonacci(), 1, |_| Mat2::IDENTITY).unwrap();
        assert_eq!(c.eval(b"bbb"), Err(Error::IllegalWindow("bbb".parse().unwrap())));
        assert!(c.eval(b"ab").is_err());
    }

    #[test]
    fn off_determinant_entries_are_rescaled() {
        let c = LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), Mat2::diag(2.0, 2.0)).unwrap();
        assert_eq!(c.renormalized().len(), 2);
        assert!((c.eval(b"a").unwrap().det() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn insufficient_configuration() {
        let c = LocallyConstantCocycle::from_fn(SubshiftSpec::fibonacci(), 2, |_| Mat2::IDENTITY).unwrap();
        let cfg = expand_prefix(&SubshiftSpec::fibonacci(), 10).unwrap();
        assert!(matches!(c.iterate(&cfg, 1, 3), Err(Error::InsufficientConfiguration { .. })));
        assert!(c.iterate(&cfg, 2, 6).is_ok());
        assert!(c.iterate(&cfg, 2, 7).is_err());
        assert!(c.iterate(&cfg, 8, -6).is_ok());
    }
}
