//! Cylinder frequencies μ([w]) estimated along one orbit.
//!
//! The shipped subshifts are uniquely ergodic, so the sliding-window
//! frequency along the canonical element converges to the cylinder measure.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{expand_prefix_with, factor_set_with, Exactness, SubshiftConfig, SubshiftSpec, Word};
use crate::{Error, Result};

/// Empirical frequencies of all length-`n` factors.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrequencyTable {
    pub n: usize,
    pub entries: BTreeMap<Word, f64>,
    pub sample_length: usize,
    pub exactness: Exactness,
}

impl FrequencyTable {
    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Bound on |total − 1| for this estimator. Every window of the sample is
    /// a factor, so the sum is one up to rounding.
    pub fn sum_tolerance(&self) -> f64 {
        2.0 * self.n as f64 / self.sample_length as f64
    }
}

/// Occurrences of `w` in the first `sample_length` symbols, divided by the
/// number of windows `sample_length − |w| + 1`.
pub fn word_frequency(spec: &SubshiftSpec, w: &Word, sample_length: usize) -> Result<f64> {
    word_frequency_with(spec, w, sample_length, &SubshiftConfig::default())
}

pub fn word_frequency_with(spec: &SubshiftSpec, w: &Word, sample_length: usize, cfg: &SubshiftConfig) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if sample_length < 10 * w.len() {
        return Err(Error::invalid("sample length must be at least 10·|w|"));
    }
    let prefix = expand_prefix_with(spec, sample_length, cfg)?;
    let hits = prefix.windows(w.len()).filter(|x| *x == w.as_bytes()).count();
    Ok(hits as f64 / (sample_length - w.len() + 1) as f64)
}

pub fn frequency_table(spec: &SubshiftSpec, n: usize, sample_length: usize) -> Result<FrequencyTable> {
    frequency_table_with(spec, n, sample_length, &SubshiftConfig::default())
}

/// Frequencies of every factor in Ω_n (factors never seen get 0).
pub fn frequency_table_with(
    spec: &SubshiftSpec,
    n: usize,
    sample_length: usize,
    cfg: &SubshiftConfig,
) -> Result<FrequencyTable> {
    if n == 0 || sample_length < 10 * n {
        return Err(Error::invalid("need n ≥ 1 and sample length ≥ 10·n"));
    }
    let lang = factor_set_with(spec, n, cfg)?;
    let prefix = expand_prefix_with(spec, sample_length, cfg)?;
    let mut counts: BTreeMap<&[u8], usize> = BTreeMap::new();
    for w in prefix.windows(n) {
        *counts.entry(w).or_default() += 1;
    }
    let windows = (sample_length - n + 1) as f64;
    let mut entries: BTreeMap<Word, f64> = lang.words.iter().map(|w| (w.clone(), 0.0)).collect();
    for (w, c) in counts {
        entries.insert(Word::from_bytes_unchecked(w.to_vec()), c as f64 / windows);
    }
    Ok(FrequencyTable { n, entries, sample_length, exactness: lang.exactness })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfilePoint {
    pub n: usize,
    /// n · min over w ∈ Ω_n of the frequency of w.
    pub eta: f64,
    pub min_frequency: f64,
    /// |Ω_n|.
    pub factors: usize,
    /// Distinct length-n factors seen in the sample.
    pub observed: usize,
    pub exactness: Exactness,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoshernitzanProfile {
    pub points: Vec<ProfilePoint>,
    /// max η(n) over the top half n ∈ [⌈n_max/2⌉, n_max]; positive values
    /// indicate condition (B) numerically.
    pub limsup_proxy: f64,
    pub sample_length: usize,
    pub exactness: Exactness,
}

pub fn boshernitzan_profile(spec: &SubshiftSpec, n_max: usize, sample_length: usize) -> Result<BoshernitzanProfile> {
    boshernitzan_profile_with(spec, n_max, sample_length, &SubshiftConfig::default())
}

/// η(n) = n · min_{w ∈ Ω_n} freq(w) for n = 1..=n_max.
///
/// Frequencies here count exactly `sample_length` window start positions
/// (over a prefix of length `sample_length + n_max − 1`), so a periodic
/// subshift whose period divides the sample length gets exact values.
///
/// Counting refines equivalence classes of start positions one symbol at a
/// time, so the whole profile costs O(n_max · sample_length).
pub fn boshernitzan_profile_with(
    spec: &SubshiftSpec,
    n_max: usize,
    sample_length: usize,
    cfg: &SubshiftConfig,
) -> Result<BoshernitzanProfile> {
    if n_max == 0 || sample_length == 0 {
        return Err(Error::invalid("need n_max ≥ 1 and a positive sample length"));
    }
    let language = factor_set_with(spec, n_max, cfg)?;
    let alphabet = spec.alphabet()?;
    let prefix = expand_prefix_with(spec, sample_length + n_max - 1, cfg)?;
    let mut digit = [0u32; 256];
    for (i, &s) in alphabet.symbols().iter().enumerate() {
        digit[s as usize] = i as u32;
    }
    let k = alphabet.len() as u32;

    let mut class: Vec<u32> = prefix[..sample_length].iter().map(|&s| digit[s as usize]).collect();
    let mut classes = k as usize;
    let mut points = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut counts = vec![0usize; classes];
        for &c in &class {
            counts[c as usize] += 1;
        }
        let observed = counts.iter().filter(|&&c| c > 0).count();
        let lang_n = language.truncate(n);
        let min_count =
            if observed < lang_n.len() { 0 } else { counts.iter().copied().filter(|&c| c > 0).min().unwrap_or(0) };
        let min_frequency = min_count as f64 / sample_length as f64;
        points.push(ProfilePoint {
            n,
            eta: n as f64 * min_frequency,
            min_frequency,
            factors: lang_n.len(),
            observed,
            exactness: lang_n.exactness,
        });
        if n == n_max {
            break;
        }
        // refine: class of w·s from (class of w, s)
        let mut relabel = vec![u32::MAX; classes * k as usize];
        let mut next = 0u32;
        for (i, c) in class.iter_mut().enumerate() {
            let slot = *c as usize * k as usize + digit[prefix[i + n] as usize] as usize;
            if relabel[slot] == u32::MAX {
                relabel[slot] = next;
                next += 1;
            }
            *c = relabel[slot];
        }
        classes = next as usize;
    }
    let half = n_max.div_ceil(2).max(1);
    let limsup_proxy = points.iter().filter(|p| p.n >= half).map(|p| p.eta).fold(f64::NEG_INFINITY, f64::max);
    Ok(BoshernitzanProfile { points, limsup_proxy, sample_length, exactness: language.exactness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn periodic_frequency() {
        let spec = SubshiftSpec::periodic("ab").unwrap();
        let f = word_frequency(&spec, &w("ab"), 10_000).unwrap();
        assert!((f - 0.5).abs() < 1e-3);
    }

    #[test]
    fn fibonacci_letter_frequencies() {
        let spec = SubshiftSpec::fibonacci();
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let fa = word_frequency(&spec, &w("a"), 1_000_000).unwrap();
        let fb = word_frequency(&spec, &w("b"), 1_000_000).unwrap();
        assert!((fa - inv_phi).abs() < 1e-3, "{fa}");
        assert!((fb - (1.0 - inv_phi)).abs() < 1e-3, "{fb}");
    }

    #[test]
    fn frequency_preconditions() {
        let spec = SubshiftSpec::fibonacci();
        assert!(word_frequency(&spec, &Word::default(), 100).is_err());
        assert!(word_frequency(&spec, &w("aba"), 29).is_err());
    }

    #[test]
    fn table_sums_to_one() {
        let spec = SubshiftSpec::thue_morse();
        for n in 1..8 {
            let t = frequency_table(&spec, n, 50_000).unwrap();
            assert!((t.total() - 1.0).abs() <= t.sum_tolerance());
            assert!(t.entries.values().all(|&f| f >= 0.0));
        }
    }

    #[test]
    fn periodic_profile_is_half_n() {
        let spec = SubshiftSpec::periodic("ab").unwrap();
        let prof = boshernitzan_profile(&spec, 10, 10_000).unwrap();
        assert_eq!(prof.points[0].eta, 0.5);
        for p in &prof.points[1..] {
            assert_eq!(p.eta, p.n as f64 / 2.0);
        }
    }

    #[test]
    fn profile_agrees_with_direct_counting() {
        let spec = SubshiftSpec::thue_morse();
        let sample = 20_000;
        let prof = boshernitzan_profile(&spec, 12, sample).unwrap();
        let prefix = super::super::expand_prefix(&spec, sample + 11).unwrap();
        for p in &prof.points {
            let mut counts: BTreeMap<&[u8], usize> = BTreeMap::new();
            for i in 0..sample {
                *counts.entry(&prefix[i..i + p.n]).or_default() += 1;
            }
            let min = *counts.values().min().unwrap();
            assert_eq!(p.observed, counts.len());
            assert_eq!(p.min_frequency, min as f64 / sample as f64);
            assert!(p.eta > 0.0);
        }
    }
}
