use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::locally_constant::{Limits, LocallyConstantCocycle};
use super::mat2::Mat2;
use super::sampling::LayeredSamplingFunction;
use crate::subshift::{factor_set, FactorLanguage, SubshiftSpec, Word};
use crate::{Error, Result};

/// The Schrödinger family E ↦ A^{E−f}, with f tabulated once on the legal
/// windows.
#[derive(Clone, Debug, PartialEq)]
pub struct SchrodingerFamily {
    f: LayeredSamplingFunction,
    base: SubshiftSpec,
    legal: FactorLanguage,
    values: Vec<f64>,
    limits: Limits,
}

impl SchrodingerFamily {
    /// Uses the finite layers of `f`; a nonzero tail is carried along as the
    /// sup-norm error of every slice.
    pub fn new(f: LayeredSamplingFunction, base: SubshiftSpec) -> Result<Self> {
        let r = f.radius();
        let legal = factor_set(&base, 2 * r + 1)?;
        let values = legal.iter().map(|w| f.value(w)).collect::<Result<Vec<_>>>()?;
        Ok(SchrodingerFamily { f, base, legal, values, limits: Limits::default() })
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn sampling_function(&self) -> &LayeredSamplingFunction {
        &self.f
    }

    pub fn base(&self) -> &SubshiftSpec {
        &self.base
    }

    pub fn radius(&self) -> usize {
        self.f.radius()
    }

    /// Windows and the values of f on them.
    pub fn window_values(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.legal.iter().zip(self.values.iter().copied())
    }

    /// sup over windows of |f|.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn slice(&self, energy: f64) -> Result<LocallyConstantCocycle> {
        let entries: BTreeMap<Word, Mat2> =
            self.window_values().map(|(w, v)| (w.clone(), Mat2::schrodinger(energy - v))).collect();
        LocallyConstantCocycle::from_language(self.base.clone(), self.radius(), entries, self.limits, &self.legal)
    }
}

/// Schrödinger cocycle [[E − f(ω), −1], [1, 0]] with window radius equal to
/// the largest layer radius of f.
pub fn schrodinger_cocycle(
    f: &LayeredSamplingFunction,
    base: SubshiftSpec,
    energy: f64,
) -> Result<LocallyConstantCocycle> {
    SchrodingerFamily::new(f.clone(), base)?.slice(energy)
}

/// Piecewise-linear blend of locally constant slices at energy nodes,
/// renormalized to determinant one and extended constantly past the ends.
#[derive(Clone, Debug, PartialEq)]
pub struct BlendedFamily {
    nodes: Vec<f64>,
    slices: Vec<LocallyConstantCocycle>,
}

impl BlendedFamily {
    pub fn new(nodes: Vec<f64>, slices: Vec<LocallyConstantCocycle>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != slices.len() {
            return Err(Error::invalid("blended family needs one slice per node"));
        }
        if nodes.windows(2).any(|p| !(p[0] < p[1])) || nodes.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("blend nodes must be finite and strictly increasing"));
        }
        let first = &slices[0];
        for s in &slices[1..] {
            if s.radius() != first.radius() || s.table().keys() != first.table().keys() {
                return Err(Error::invalid("blended slices must share their windows"));
            }
        }
        Ok(BlendedFamily { nodes, slices })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn slices(&self) -> &[LocallyConstantCocycle] {
        &self.slices
    }

    /// Hat-function weights at `energy`: at most two nonzero, summing to 1.
    pub fn weights(&self, energy: f64) -> [(usize, f64); 2] {
        let k = self.nodes.len();
        if k == 1 || energy <= self.nodes[0] {
            return [(0, 1.0), (0, 0.0)];
        }
        if energy >= self.nodes[k - 1] {
            return [(k - 1, 1.0), (k - 1, 0.0)];
        }
        let j = self.nodes.partition_point(|&x| x <= energy) - 1;
        let t = (energy - self.nodes[j]) / (self.nodes[j + 1] - self.nodes[j]);
        [(j, 1.0 - t), (j + 1, t)]
    }

    /// Unnormalized blend Σ φ_k(E)·B_k(window) for every window.
    pub fn raw_blend(&self, energy: f64) -> Vec<(Word, Mat2)> {
        let [(i, wi), (j, wj)] = self.weights(energy);
        self.slices[i]
            .table()
            .iter()
            .zip(self.slices[j].table().values())
            .map(|((w, a), b)| {
                let m = if wj == 0.0 || a == b { *a } else { a.scale(wi).add(&b.scale(wj)) };
                (w.clone(), m)
            })
            .collect()
    }

    pub fn slice(&self, energy: f64) -> Result<LocallyConstantCocycle> {
        let first = &self.slices[0];
        let mut entries = BTreeMap::new();
        for (w, m) in self.raw_blend(energy) {
            let det = m.det();
            if !(det > 0.0) {
                return Err(Error::BlendedDeterminant { energy, det });
            }
            entries.insert(w, m.scale(1.0 / libm::sqrt(det)));
        }
        let legal = FactorLanguage {
            n: 2 * first.radius() + 1,
            words: first.table().keys().to_vec(),
            exactness: crate::subshift::Exactness::Exact,
        };
        LocallyConstantCocycle::from_language(first.base().clone(), first.radius(), entries, *first.limits(), &legal)
    }
}

/// One-parameter family E ↦ A(E, ·) of locally constant cocycles.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum CocycleFamily {
    /// The same cocycle at every energy.
    Fixed(LocallyConstantCocycle),
    Schrodinger(SchrodingerFamily),
    /// A(E, ω) = rotation by angle E, independent of ω.
    Rotation {
        base: SubshiftSpec,
        limits: Limits,
    },
    /// Hat-function blend of tabulated slices.
    Blended(BlendedFamily),
}

impl CocycleFamily {
    pub fn schrodinger(f: LayeredSamplingFunction, base: SubshiftSpec) -> Result<Self> {
        Ok(CocycleFamily::Schrodinger(SchrodingerFamily::new(f, base)?))
    }

    pub fn rotation(base: SubshiftSpec) -> Self {
        CocycleFamily::Rotation { base, limits: Limits::default() }
    }

    /// Replaces the numerical limits of every slice.
    pub fn with_limits(self, limits: Limits) -> Self {
        match self {
            CocycleFamily::Fixed(mut c) => {
                c.set_limits(limits);
                CocycleFamily::Fixed(c)
            }
            CocycleFamily::Schrodinger(s) => CocycleFamily::Schrodinger(s.with_limits(limits)),
            CocycleFamily::Rotation { base, .. } => CocycleFamily::Rotation { base, limits },
            CocycleFamily::Blended(mut b) => {
                b.slices.iter_mut().for_each(|c| c.set_limits(limits));
                CocycleFamily::Blended(b)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CocycleFamily::Fixed(_) => "fixed",
            CocycleFamily::Schrodinger(_) => "schrodinger",
            CocycleFamily::Rotation { .. } => "rotation",
            CocycleFamily::Blended(_) => "table_per_energy",
        }
    }

    pub fn base(&self) -> &SubshiftSpec {
        match self {
            CocycleFamily::Fixed(c) => c.base(),
            CocycleFamily::Schrodinger(s) => s.base(),
            CocycleFamily::Rotation { base, .. } => base,
            CocycleFamily::Blended(b) => b.slices[0].base(),
        }
    }

    pub fn radius(&self) -> usize {
        match self {
            CocycleFamily::Fixed(c) => c.radius(),
            CocycleFamily::Schrodinger(s) => s.radius(),
            CocycleFamily::Rotation { .. } => 0,
            CocycleFamily::Blended(b) => b.slices[0].radius(),
        }
    }

    /// The cocycle A(E, ·).
    pub fn slice(&self, energy: f64) -> Result<LocallyConstantCocycle> {
        match self {
            CocycleFamily::Fixed(c) => Ok(c.clone()),
            CocycleFamily::Schrodinger(s) => s.slice(energy),
            CocycleFamily::Rotation { base, limits } => {
                let mut c = LocallyConstantCocycle::constant(base.clone(), Mat2::rotation(energy))?;
                c.set_limits(*limits);
                Ok(c)
            }
            CocycleFamily::Blended(b) => b.slice(energy),
        }
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
    #[allow(clippy::large_enum_variant)]
    enum Repr {
        Fixed { cocycle: LocallyConstantCocycle },
        Schrodinger { subshift: SubshiftSpec, potential: LayeredSamplingFunction },
        Rotation { subshift: SubshiftSpec },
        TablePerEnergy { nodes: Vec<f64>, slices: Vec<LocallyConstantCocycle> },
    }

    impl Serialize for CocycleFamily {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            let repr = match self {
                CocycleFamily::Fixed(c) => Repr::Fixed { cocycle: c.clone() },
                CocycleFamily::Schrodinger(f) => Repr::Schrodinger { subshift: f.base.clone(), potential: f.f.clone() },
                CocycleFamily::Rotation { base, .. } => Repr::Rotation { subshift: base.clone() },
                CocycleFamily::Blended(b) => Repr::TablePerEnergy { nodes: b.nodes.clone(), slices: b.slices.clone() },
            };
            repr.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for CocycleFamily {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let out = match Repr::deserialize(d)? {
                Repr::Fixed { cocycle } => Ok(CocycleFamily::Fixed(cocycle)),
                Repr::Schrodinger { subshift, potential } => CocycleFamily::schrodinger(potential, subshift),
                Repr::Rotation { subshift } => Ok(CocycleFamily::rotation(subshift)),
                Repr::TablePerEnergy { nodes, slices } => BlendedFamily::new(nodes, slices).map(CocycleFamily::Blended),
            };
            out.map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_slices() {
        let fam = CocycleFamily::schrodinger(LayeredSamplingFunction::zero(), SubshiftSpec::fibonacci()).unwrap();
        assert_eq!(fam.slice(0.0).unwrap().eval(b"a").unwrap(), Mat2::new(0.0, -1.0, 1.0, 0.0));
        let m = fam.slice(2.0).unwrap().eval(b"b").unwrap();
        assert_eq!(m, Mat2::new(2.0, -1.0, 1.0, 0.0));
        assert_eq!(m.trace(), 2.0);
        assert_eq!(
            schrodinger_cocycle(&LayeredSamplingFunction::zero(), SubshiftSpec::fibonacci(), 3.0)
                .unwrap()
                .eval(b"a")
                .unwrap(),
            Mat2::schrodinger(3.0)
        );
    }

    #[test]
    fn indicator_slice() {
        let f = LayeredSamplingFunction::indicator('b', 1.0).unwrap();
        let c = schrodinger_cocycle(&f, SubshiftSpec::fibonacci(), 0.0).unwrap();
        assert_eq!(c.eval(b"b").unwrap(), Mat2::new(-1.0, -1.0, 1.0, 0.0));
        assert!(c.renormalized().is_empty());
    }

    #[test]
    fn blend_hits_nodes_and_extends_constantly() {
        let base = SubshiftSpec::fibonacci();
        let s0 = LocallyConstantCocycle::constant(base.clone(), Mat2::rotation(0.0)).unwrap();
        let s1 = LocallyConstantCocycle::constant(base, Mat2::rotation(1.0)).unwrap();
        let b = BlendedFamily::new(alloc::vec![0.0, 1.0], alloc::vec![s0.clone(), s1.clone()]).unwrap();
        assert_eq!(b.slice(-5.0).unwrap(), s0);
        assert_eq!(b.slice(7.0).unwrap().eval(b"a").unwrap(), s1.eval(b"a").unwrap());
        let mid = b.slice(0.5).unwrap().eval(b"a").unwrap();
        assert!((mid.det() - 1.0).abs() < 1e-14);
        let w = b.weights(0.25);
        assert!((w[0].1 + w[1].1 - 1.0).abs() < 1e-15);
    }
}
