//! Sampling functions f : Ω → ℝ written as sums of locally constant layers.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::table::WindowTable;
use crate::subshift::{factor_set, SubshiftSpec, Word};
use crate::{Error, Result};

/// One locally constant layer `coefficient · table(ω_{-r} … ω_r)`.
///
/// Windows missing from `table` take `default`; a lookup with neither is an
/// illegal-window error.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    radius: usize,
    table: WindowTable<f64>,
    default: Option<f64>,
    coefficient: f64,
}

impl Layer {
    pub fn new(radius: usize, values: BTreeMap<Word, f64>, default: Option<f64>, coefficient: f64) -> Result<Self> {
        if !coefficient.is_finite()
            || default.is_some_and(|d| !d.is_finite())
            || values.values().any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("layer values"));
        }
        let table = WindowTable::new(2 * radius + 1, values.into_iter().collect())?;
        Ok(Layer { radius, table, default, coefficient })
    }

    pub fn constant(value: f64) -> Self {
        Layer::new(0, BTreeMap::new(), Some(value), 1.0).expect("finite constant")
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn default_value(&self) -> Option<f64> {
        self.default
    }

    pub fn values(&self) -> BTreeMap<Word, f64> {
        self.table.to_map()
    }

    /// sup |table|, including the default.
    pub fn sup(&self) -> f64 {
        self.table.values().iter().copied().chain(self.default).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Unscaled table value on a window of length 2r+1.
    pub fn raw(&self, window: &[u8]) -> Result<f64> {
        if window.len() != 2 * self.radius + 1 {
            return Err(Error::WindowLength { expected: 2 * self.radius + 1, found: window.len() });
        }
        match self.table.get(window) {
            Some(&v) => Ok(v),
            None => self.default.ok_or_else(|| Error::IllegalWindow(Word::from_bytes_unchecked(window.to_vec()))),
        }
    }
}

/// f = Σ_j c_j · layer_j + (tail of sup norm ≤ `tail`).
///
/// Only the layers are evaluated; `tail` records how far the finite sum may
/// be from the function it represents.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LayeredSamplingFunction {
    layers: Vec<Layer>,
    tail: f64,
}

impl LayeredSamplingFunction {
    pub fn new(layers: Vec<Layer>, tail: f64) -> Result<Self> {
        if !(tail >= 0.0) || !tail.is_finite() {
            return Err(Error::invalid("tail bound must be finite and nonnegative"));
        }
        Ok(LayeredSamplingFunction { layers, tail })
    }

    pub fn zero() -> Self {
        LayeredSamplingFunction::default()
    }

    pub fn constant(value: f64) -> Self {
        LayeredSamplingFunction { layers: vec![Layer::constant(value)], tail: 0.0 }
    }

    /// `coupling · 1[ω₀ = symbol]`.
    pub fn indicator(symbol: char, coupling: f64) -> Result<Self> {
        let mut values = BTreeMap::new();
        values.insert(Word::symbol(symbol)?, 1.0);
        let layer = Layer::new(0, values, Some(0.0), coupling)?;
        Ok(LayeredSamplingFunction { layers: vec![layer], tail: 0.0 })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn push(&mut self, layer: Layer) {
        self.layers.push(layer);
    }

    pub fn with_layer(mut self, layer: Layer) -> Self {
        self.layers.push(layer);
        self
    }

    /// f + g (layers concatenated, tails added).
    pub fn plus(&self, other: &LayeredSamplingFunction) -> Self {
        let mut layers = self.layers.clone();
        layers.extend(other.layers.iter().cloned());
        LayeredSamplingFunction { layers, tail: self.tail + other.tail }
    }

    /// s · f.
    pub fn scaled(&self, s: f64) -> Self {
        let layers = self.layers.iter().map(|l| Layer { coefficient: l.coefficient * s, ..l.clone() }).collect();
        LayeredSamplingFunction { layers, tail: self.tail * s.abs() }
    }

    /// Largest layer radius (0 without layers).
    pub fn radius(&self) -> usize {
        self.layers.iter().map(|l| l.radius).max().unwrap_or(0)
    }

    pub fn is_finite_layered(&self) -> bool {
        self.tail == 0.0
    }

    /// Σ|c_j|·sup|layer_j| + tail, an upper bound for ‖f‖∞.
    pub fn sup_bound(&self) -> f64 {
        self.layers.iter().map(|l| l.coefficient.abs() * l.sup()).sum::<f64>() + self.tail
    }

    /// Value of the layered sum on a window of length 2R+1, R = `radius()`.
    pub fn value(&self, window: &[u8]) -> Result<f64> {
        let r = self.radius();
        if window.len() != 2 * r + 1 {
            return Err(Error::WindowLength { expected: 2 * r + 1, found: window.len() });
        }
        self.value_centered(window, r)
    }

    /// Value at the symbol `window[center]`; the window must reach every
    /// layer's radius around it.
    pub fn value_centered(&self, window: &[u8], center: usize) -> Result<f64> {
        let mut total = 0.0;
        for l in &self.layers {
            if center < l.radius || center + l.radius >= window.len() {
                return Err(Error::WindowLength { expected: 2 * l.radius + 1, found: window.len() });
            }
            total += l.coefficient * l.raw(&window[center - l.radius..=center + l.radius])?;
        }
        Ok(total)
    }

    /// f(Tⁿω) read from a configuration: V(n) for n = start..start+len.
    pub fn potential_along(&self, config: &[u8], start: usize, len: usize) -> Result<Vec<f64>> {
        let r = self.radius();
        if start < r || start + len + r > config.len() {
            return Err(Error::InsufficientConfiguration {
                needed_from: start as isize - r as isize,
                needed_to: start + len + r,
                available: config.len(),
            });
        }
        (start..start + len).map(|i| self.value(&config[i - r..=i + r])).collect()
    }

    /// max over legal windows of |f − g| (layers only).
    pub fn sup_distance(&self, other: &LayeredSamplingFunction, base: &SubshiftSpec) -> Result<f64> {
        let r = self.radius().max(other.radius());
        let lang = factor_set(base, 2 * r + 1)?;
        let mut best = 0.0f64;
        for w in lang.iter() {
            let d = self.value_centered(w, r)? - other.value_centered(w, r)?;
            best = best.max(d.abs());
        }
        Ok(best)
    }

    /// Drops every layer of radius > r. Returns the truncation and the tail
    /// bound Σ|c_j|·sup|layer_j| over dropped layers plus the old tail.
    pub fn truncate_radius(&self, r: usize) -> (LayeredSamplingFunction, f64) {
        let mut kept = Vec::new();
        let mut dropped = 0.0;
        for l in &self.layers {
            if l.radius <= r {
                kept.push(l.clone());
            } else {
                dropped += l.coefficient.abs() * l.sup();
            }
        }
        let bound = dropped + self.tail;
        (LayeredSamplingFunction { layers: kept, tail: bound }, bound)
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct LayerRepr {
        radius: usize,
        #[serde(default)]
        table: BTreeMap<Word, f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<f64>,
        coefficient: f64,
    }

    impl Serialize for Layer {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            LayerRepr {
                radius: self.radius,
                table: self.table.to_map(),
                default: self.default,
                coefficient: self.coefficient,
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Layer {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let r = LayerRepr::deserialize(d)?;
            Layer::new(r.radius, r.table, r.default, r.coefficient).map_err(serde::de::Error::custom)
        }
    }

    impl Serialize for LayeredSamplingFunction {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            use serde::ser::SerializeStruct;
            let mut st = s.serialize_struct("LayeredSamplingFunction", 2)?;
            st.serialize_field("layers", &self.layers)?;
            st.serialize_field("tail", &self.tail)?;
            st.end()
        }
    }

    impl<'de> Deserialize<'de> for LayeredSamplingFunction {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Repr {
                layers: Vec<Layer>,
                #[serde(default)]
                tail: f64,
            }
            let r = Repr::deserialize(d)?;
            LayeredSamplingFunction::new(r.layers, r.tail).map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn indicator_values() {
        let f = LayeredSamplingFunction::indicator('b', 1.0).unwrap();
        assert_eq!(f.value(b"a").unwrap(), 0.0);
        assert_eq!(f.value(b"b").unwrap(), 1.0);
        assert_eq!(f.sup_bound(), 1.0);
        assert_eq!(f.radius(), 0);
    }

    #[test]
    fn mixed_radii_use_centered_subwindows() {
        let mut t = BTreeMap::new();
        t.insert(w("aba"), 2.0);
        let f = LayeredSamplingFunction::indicator('b', 1.0)
            .unwrap()
            .with_layer(Layer::new(1, t, Some(-1.0), 0.5).unwrap());
        assert_eq!(f.radius(), 1);
        assert_eq!(f.value(b"aba").unwrap(), 1.0 + 1.0);
        assert_eq!(f.value(b"aab").unwrap(), 0.0 - 0.5);
        assert!(f.value(b"ab").is_err());
        assert_eq!(f.sup_bound(), 2.0);
    }

    #[test]
    fn missing_window_without_default_is_illegal() {
        let mut t = BTreeMap::new();
        t.insert(w("a"), 1.0);
        let l = Layer::new(0, t, None, 1.0).unwrap();
        assert_eq!(l.raw(b"b"), Err(Error::IllegalWindow(w("b"))));
    }

    #[test]
    fn truncation_bound_is_dropped_tail() {
        let mut t = BTreeMap::new();
        t.insert(w("aaaaaaa"), 1.0);
        let f = LayeredSamplingFunction::constant(1.0).with_layer(Layer::new(3, t, Some(-1.0), 0.1).unwrap());
        let (g, bound) = f.truncate_radius(0);
        assert!((bound - 0.1).abs() < 1e-15);
        assert_eq!(g.layers().len(), 1);
        assert_eq!(g.tail(), bound);
    }

    #[test]
    fn sup_distance_of_scaled_indicator() {
        let f = LayeredSamplingFunction::indicator('b', 1.0).unwrap();
        let g = f.scaled(0.9);
        let d = f.sup_distance(&g, &SubshiftSpec::fibonacci()).unwrap();
        assert!((d - 0.1).abs() < 1e-15);
    }
}
