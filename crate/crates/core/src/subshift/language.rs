use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{expand_prefix_with, SubshiftConfig, SubshiftSpec, Word};
use crate::{Error, Result};

/// Whether a factor set is known to be complete.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Exactness {
    Exact,
    Sampled,
}

impl Exactness {
    pub fn and(self, other: Exactness) -> Exactness {
        self.max(other)
    }
}

/// All length-`n` factors Ω_n of a subshift, sorted.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FactorLanguage {
    pub n: usize,
    pub words: Vec<Word>,
    pub exactness: Exactness,
}

impl FactorLanguage {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        self.words.binary_search_by(|x| x.as_bytes().cmp(w)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    /// Factors of length `m ≤ n`, obtained as prefixes. Every factor of a
    /// two-sided subshift extends to the right, so nothing is lost.
    pub fn truncate(&self, m: usize) -> FactorLanguage {
        assert!(m <= self.n, "cannot truncate length {} factors to {m}", self.n);
        let mut words: Vec<Word> = Vec::with_capacity(self.words.len());
        for w in &self.words {
            let prefix = &w.as_bytes()[..m];
            // sorted input: equal prefixes are adjacent
            if words.last().map(|l| l.as_bytes() != prefix).unwrap_or(true) {
                words.push(Word::from_bytes_unchecked(prefix.to_vec()));
            }
        }
        FactorLanguage { n: m, words, exactness: self.exactness }
    }
}

/// Length-`n` factors of the subshift.
///
/// Periodic descriptions and orbit unions are enumerated directly. Otherwise a
/// prefix is scanned at doubling lengths, starting from 16·n, until the set
/// stays unchanged for `stable_doublings` consecutive doublings; Simple
/// Toeplitz results are always reported `Sampled`, as is anything that did
/// not stabilize within `max_scan`.
pub fn factor_set(spec: &SubshiftSpec, n: usize) -> Result<FactorLanguage> {
    factor_set_with(spec, n, &SubshiftConfig::default())
}

pub fn factor_set_with(spec: &SubshiftSpec, n: usize, cfg: &SubshiftConfig) -> Result<FactorLanguage> {
    if n == 0 {
        return Err(Error::invalid("factor length must be at least 1"));
    }
    spec.validate(cfg)?;
    match spec {
        SubshiftSpec::Periodic { word } => Ok(cyclic_factors(core::slice::from_ref(word), n)),
        SubshiftSpec::OrbitUnion { words } => Ok(cyclic_factors(words, n)),
        _ => scan_factors(spec, n, cfg),
    }
}

fn cyclic_factors(words: &[Word], n: usize) -> FactorLanguage {
    let mut set = BTreeSet::new();
    for w in words {
        let p = w.len();
        let doubled: Vec<u8> = w.iter().copied().cycle().take(p + n - 1).collect();
        for i in 0..p {
            set.insert(doubled[i..i + n].to_vec());
        }
    }
    FactorLanguage { n, words: set.into_iter().map(Word::from_bytes_unchecked).collect(), exactness: Exactness::Exact }
}

fn windows_of(prefix: &[u8], n: usize) -> BTreeSet<&[u8]> {
    prefix.windows(n).collect()
}

fn scan_factors(spec: &SubshiftSpec, n: usize, cfg: &SubshiftConfig) -> Result<FactorLanguage> {
    let limit = cfg.max_scan.min(cfg.max_length).min(spec.exact_length_limit());
    let mut length = (16 * n).max(64).min(limit);
    if length < n {
        return Err(Error::LengthExceeded { requested: n, max: limit });
    }
    let mut previous: Option<Vec<Word>> = None;
    let mut unchanged = 0usize;
    loop {
        let prefix = expand_prefix_with(spec, length, cfg)?;
        let current: Vec<Word> =
            windows_of(&prefix, n).into_iter().map(|w| Word::from_bytes_unchecked(w.to_vec())).collect();
        if previous.as_ref() == Some(&current) {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
        let stable = unchanged >= cfg.stable_doublings;
        if stable || length >= limit {
            let exactness = match spec {
                SubshiftSpec::SimpleToeplitz { .. } => Exactness::Sampled,
                _ if stable => Exactness::Exact,
                _ => Exactness::Sampled,
            };
            return Ok(FactorLanguage { n, words: current, exactness });
        }
        previous = Some(current);
        length = (length * 2).min(limit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn strings(lang: &FactorLanguage) -> Vec<String> {
        lang.words.iter().map(|w| w.to_string()).collect()
    }

    /// Brute force: every length-n window of a long prefix.
    fn brute(spec: &SubshiftSpec, n: usize, prefix_len: usize) -> Vec<String> {
        let p = super::super::expand_prefix(spec, prefix_len).unwrap();
        let set: BTreeSet<String> = p.windows(n).map(|w| w.iter().map(|&b| b as char).collect()).collect();
        set.into_iter().collect()
    }

    #[test]
    fn fibonacci_three_factors() {
        let lang = factor_set(&SubshiftSpec::fibonacci(), 3).unwrap();
        assert_eq!(strings(&lang), ["aab", "aba", "baa", "bab"]);
        assert_eq!(lang.exactness, Exactness::Exact);
        assert_eq!(strings(&lang), brute(&SubshiftSpec::fibonacci(), 3, 10_000));
    }

    #[test]
    fn periodic_three_factors() {
        let lang = factor_set(&SubshiftSpec::periodic("ab").unwrap(), 3).unwrap();
        assert_eq!(strings(&lang), ["aba", "bab"]);
    }

    #[test]
    fn thue_morse_complexity_matches_brute_force() {
        let tm = SubshiftSpec::thue_morse();
        let lang = factor_set(&tm, 3).unwrap();
        assert_eq!(lang.len(), 6);
        for n in 1..=12 {
            let lang = factor_set(&tm, n).unwrap();
            assert_eq!(strings(&lang), brute(&tm, n, 1 << 16), "n = {n}");
        }
    }

    #[test]
    fn sturmian_complexity_is_n_plus_one() {
        let spec = SubshiftSpec::golden_sturmian(32).unwrap();
        for n in 1..=64 {
            let lang = factor_set(&spec, n).unwrap();
            assert_eq!(lang.exactness, Exactness::Exact);
            assert_eq!(lang.len(), n + 1, "n = {n}");
        }
    }

    #[test]
    fn truncation_equals_direct_enumeration() {
        let spec = SubshiftSpec::period_doubling();
        let long = factor_set(&spec, 20).unwrap();
        for m in 1..20 {
            assert_eq!(long.truncate(m), factor_set(&spec, m).unwrap());
        }
    }

    #[test]
    fn toeplitz_is_flagged_sampled() {
        let spec = SubshiftSpec::simple_toeplitz("abc", vec![2, 3, 2]).unwrap();
        let lang = factor_set(&spec, 4).unwrap();
        assert_eq!(lang.exactness, Exactness::Sampled);
        assert!(!lang.is_empty());
    }

    #[test]
    fn scan_budget_failure_is_sampled() {
        let cfg = SubshiftConfig { max_scan: 64, ..Default::default() };
        let lang = factor_set_with(&SubshiftSpec::thue_morse(), 10, &cfg).unwrap();
        assert_eq!(lang.exactness, Exactness::Sampled);
    }

    #[test]
    fn orbit_union_factors() {
        let spec = SubshiftSpec::orbit_union_fixture(&["a", "b"]).unwrap();
        assert_eq!(strings(&factor_set(&spec, 3).unwrap()), ["aaa", "bbb"]);
    }
}
