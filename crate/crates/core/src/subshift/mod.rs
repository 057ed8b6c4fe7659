//! Minimal subshifts given by finite descriptions.
//!
//! Symbols are printable ASCII characters, so a [`Word`] is a byte string and
//! renders as ordinary text ("abaab"). A [`SubshiftSpec`] describes one
//! canonical element ω of the subshift; [`expand_prefix`] writes out
//! ω_0 ω_1 … and everything else (factor languages, frequencies) is read off
//! such prefixes.

mod frequency;
mod language;
mod sturmian;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;
use core::ops::Deref;
use core::str::FromStr;

use crate::{Error, Result};

pub use frequency::{
    boshernitzan_profile, boshernitzan_profile_with, frequency_table, frequency_table_with, word_frequency,
    word_frequency_with, BoshernitzanProfile, FrequencyTable, ProfilePoint,
};
pub use language::{factor_set, factor_set_with, Exactness, FactorLanguage};
pub use sturmian::{convergents, Convergent};

/// A finite word over printable ASCII symbols.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        for &s in &symbols {
            check_symbol(s)?;
        }
        Ok(Word(symbols))
    }

    pub(crate) fn from_bytes_unchecked(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn from_slice(symbols: &[u8]) -> Result<Self> {
        Self::new(symbols.to_vec())
    }

    pub fn symbol(c: char) -> Result<Self> {
        let b = symbol_byte(c)?;
        Ok(Word(vec![b]))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn as_string(&self) -> String {
        self.0.iter().map(|&b| b as char).collect()
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }
}

pub(crate) fn check_symbol(b: u8) -> Result<()> {
    if b.is_ascii_graphic() {
        Ok(())
    } else {
        Err(Error::UnknownSymbol(b as char))
    }
}

pub(crate) fn symbol_byte(c: char) -> Result<u8> {
    if c.is_ascii_graphic() {
        Ok(c as u8)
    } else {
        Err(Error::UnknownSymbol(c))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::with_capacity(s.len());
        for c in s.chars() {
            out.push(symbol_byte(c)?);
        }
        Ok(Word(out))
    }
}

impl Deref for Word {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl Borrow<[u8]> for Word {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.as_string())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered list of distinct symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, &s) in symbols.iter().enumerate() {
            check_symbol(s)?;
            if symbols[..i].contains(&s) {
                return Err(Error::DuplicateSymbol(s as char));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Sorted distinct symbols occurring in `word`.
    pub fn of_word(word: &[u8]) -> Result<Self> {
        let mut symbols = word.to_vec();
        symbols.sort_unstable();
        symbols.dedup();
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, s: u8) -> Option<usize> {
        self.symbols.iter().position(|&x| x == s)
    }

    pub fn check(&self, word: &[u8]) -> Result<()> {
        match word.iter().find(|s| !self.symbols.contains(s)) {
            Some(&s) => Err(Error::UnknownSymbol(s as char)),
            None => Ok(()),
        }
    }
}

/// Finite description of a subshift.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields))]
pub enum SubshiftSpec {
    /// The orbit of the bi-infinite repetition of `word`.
    Periodic { word: Word },
    /// Subshift generated by a primitive substitution; the canonical element
    /// is read off the iterates of `seed`.
    Substitution { rules: BTreeMap<char, Word>, seed: char },
    /// Sturmian subshift of rotation number α = [0; a₁, a₂, …], coded by the
    /// characteristic word ⌊(k+1)α⌋ − ⌊kα⌋ (k ≥ 1) with 1 ↦ 'a', 0 ↦ 'b'.
    /// Symbols are computed exactly from the last convergent p/q, which
    /// agrees with every α sharing these partial quotients on the first q − 2
    /// symbols; longer prefixes are refused.
    Sturmian { partial_quotients: Vec<u32> },
    /// Simple Toeplitz sequence built by hole filling: step j fills all but
    /// every `periods[j]`-th remaining hole with `coding[j]`. The lists are
    /// used cyclically.
    SimpleToeplitz { coding: Word, periods: Vec<usize> },
    /// Disjoint union of periodic orbits. Not minimal: this exists only as the
    /// fixture for non-uniquely-ergodic examples and bypasses minimality.
    OrbitUnion { words: Vec<Word> },
}

/// Limits shared by the subshift operations.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SubshiftConfig {
    /// Longest prefix `expand_prefix` will produce.
    pub max_length: usize,
    /// Longest prefix scanned while waiting for a factor set to stabilize.
    pub max_scan: usize,
    /// Number of consecutive doublings without change required for `Exact`.
    pub stable_doublings: usize,
    /// Minimum number of partial quotients for a Sturmian description.
    pub min_sturmian_terms: usize,
}

impl Default for SubshiftConfig {
    fn default() -> Self {
        SubshiftConfig { max_length: 1 << 27, max_scan: 1 << 22, stable_doublings: 2, min_sturmian_terms: 8 }
    }
}

impl SubshiftSpec {
    pub fn periodic(word: &str) -> Result<Self> {
        let spec = SubshiftSpec::Periodic { word: word.parse()? };
        spec.validate(&SubshiftConfig::default())?;
        Ok(spec)
    }

    pub fn substitution(rules: &[(char, &str)], seed: char) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(c, image) in rules {
            map.insert(c, image.parse()?);
        }
        let spec = SubshiftSpec::Substitution { rules: map, seed };
        spec.validate(&SubshiftConfig::default())?;
        Ok(spec)
    }

    /// a → ab, b → a.
    pub fn fibonacci() -> Self {
        Self::substitution(&[('a', "ab"), ('b', "a")], 'a').expect("fibonacci rule is primitive")
    }

    /// a → ab, b → ba.
    pub fn thue_morse() -> Self {
        Self::substitution(&[('a', "ab"), ('b', "ba")], 'a').expect("thue-morse rule is primitive")
    }

    /// a → ab, b → aa.
    pub fn period_doubling() -> Self {
        Self::substitution(&[('a', "ab"), ('b', "aa")], 'a').expect("period-doubling rule is primitive")
    }

    pub fn sturmian(partial_quotients: Vec<u32>) -> Result<Self> {
        let spec = SubshiftSpec::Sturmian { partial_quotients };
        spec.validate(&SubshiftConfig::default())?;
        Ok(spec)
    }

    /// Rotation by the golden mean minus one, [0; 1, 1, 1, …] with `terms`
    /// partial quotients.
    pub fn golden_sturmian(terms: usize) -> Result<Self> {
        Self::sturmian(vec![1; terms])
    }

    pub fn simple_toeplitz(coding: &str, periods: Vec<usize>) -> Result<Self> {
        let spec = SubshiftSpec::SimpleToeplitz { coding: coding.parse()?, periods };
        spec.validate(&SubshiftConfig::default())?;
        Ok(spec)
    }

    /// Non-minimal union of the periodic orbits of `words`.
    pub fn orbit_union_fixture(words: &[&str]) -> Result<Self> {
        let words = words.iter().map(|w| w.parse()).collect::<Result<Vec<Word>>>()?;
        let spec = SubshiftSpec::OrbitUnion { words };
        spec.validate(&SubshiftConfig::default())?;
        Ok(spec)
    }

    pub fn is_minimal_description(&self) -> bool {
        !matches!(self, SubshiftSpec::OrbitUnion { .. })
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        match self {
            SubshiftSpec::Periodic { word } => Alphabet::of_word(word),
            SubshiftSpec::Substitution { rules, .. } => {
                let symbols = rules.keys().map(|&c| symbol_byte(c)).collect::<Result<Vec<_>>>()?;
                Alphabet::new(symbols)
            }
            SubshiftSpec::Sturmian { .. } => Alphabet::new(vec![b'a', b'b']),
            SubshiftSpec::SimpleToeplitz { coding, .. } => Alphabet::of_word(coding),
            SubshiftSpec::OrbitUnion { words } => {
                let all: Vec<u8> = words.iter().flat_map(|w| w.iter().copied()).collect();
                Alphabet::of_word(&all)
            }
        }
    }

    /// Checks the invariants of the description.
    pub fn validate(&self, cfg: &SubshiftConfig) -> Result<()> {
        match self {
            SubshiftSpec::Periodic { word } => {
                if word.is_empty() {
                    return Err(Error::EmptyWord);
                }
            }
            SubshiftSpec::Substitution { rules, seed } => {
                let alphabet = self.alphabet()?;
                if !rules.contains_key(seed) {
                    return Err(Error::MissingRule(*seed));
                }
                for image in rules.values() {
                    if image.is_empty() {
                        return Err(Error::EmptyWord);
                    }
                    for &s in image.iter() {
                        if alphabet.index_of(s).is_none() {
                            return Err(Error::MissingRule(s as char));
                        }
                    }
                }
                if !is_primitive(rules, &alphabet) {
                    return Err(Error::NonPrimitiveSubstitution);
                }
                if rules.values().all(|w| w.len() == 1) {
                    return Err(Error::NotSupported("substitution that never grows words"));
                }
            }
            SubshiftSpec::Sturmian { partial_quotients } => {
                if partial_quotients.len() < cfg.min_sturmian_terms {
                    return Err(Error::ContinuedFractionTooShort {
                        terms: partial_quotients.len(),
                        required: cfg.min_sturmian_terms,
                    });
                }
                if partial_quotients.contains(&0) {
                    return Err(Error::invalid("partial quotients must be positive"));
                }
            }
            SubshiftSpec::SimpleToeplitz { coding, periods } => {
                if coding.is_empty() {
                    return Err(Error::InvalidToeplitz("coding sequence is empty"));
                }
                if coding.len() != periods.len() {
                    return Err(Error::InvalidToeplitz("coding and period lists differ in length"));
                }
                if periods.iter().any(|&p| p < 2) {
                    return Err(Error::InvalidToeplitz("every period must be at least 2"));
                }
            }
            SubshiftSpec::OrbitUnion { words } => {
                if words.is_empty() || words.iter().any(|w| w.is_empty()) {
                    return Err(Error::EmptyWord);
                }
            }
        }
        Ok(())
    }

    /// Lengths q_k of the natural periodic approximants, k = 1..=levels.
    ///
    /// Sturmian: continued-fraction denominators; substitution: |σᵏ(seed)|;
    /// periodic: k·|w|; simple Toeplitz: p₁⋯p_k.
    pub fn approximant_periods(&self, levels: usize) -> Result<Vec<usize>> {
        self.validate(&SubshiftConfig::default())?;
        let mut out = Vec::with_capacity(levels);
        match self {
            SubshiftSpec::Periodic { word } => {
                for k in 1..=levels {
                    out.push(k * word.len());
                }
            }
            SubshiftSpec::Substitution { rules, seed } => {
                let alphabet = self.alphabet()?;
                let mut lengths: Vec<u128> = vec![1; alphabet.len()];
                let seed_idx = alphabet.index_of(symbol_byte(*seed)?).unwrap();
                let images: Vec<&Word> = alphabet.symbols().iter().map(|&s| &rules[&(s as char)]).collect();
                for _ in 0..levels {
                    let next: Vec<u128> = images
                        .iter()
                        .map(|img| img.iter().map(|&s| lengths[alphabet.index_of(s).unwrap()]).sum())
                        .collect();
                    lengths = next;
                    out.push(
                        usize::try_from(lengths[seed_idx])
                            .map_err(|_| Error::LengthExceeded { requested: usize::MAX, max: usize::MAX })?,
                    );
                }
            }
            SubshiftSpec::Sturmian { partial_quotients } => {
                let conv = convergents(partial_quotients);
                if levels > conv.len() {
                    return Err(Error::ContinuedFractionTooShort { terms: conv.len(), required: levels });
                }
                out.extend(conv.iter().take(levels).map(|c| c.q as usize));
            }
            SubshiftSpec::SimpleToeplitz { periods, .. } => {
                let mut q = 1usize;
                for k in 0..levels {
                    q = q.saturating_mul(periods[k % periods.len()]);
                    out.push(q);
                }
            }
            SubshiftSpec::OrbitUnion { .. } => {
                return Err(Error::NotSupported("approximants of a non-minimal orbit union"))
            }
        }
        Ok(out)
    }

    /// Largest prefix length this description can produce exactly.
    pub(crate) fn exact_length_limit(&self) -> usize {
        match self {
            SubshiftSpec::Sturmian { partial_quotients } => {
                convergents(partial_quotients).last().map(|c| (c.q as usize).saturating_sub(2)).unwrap_or(0)
            }
            _ => usize::MAX,
        }
    }
}

fn is_primitive(rules: &BTreeMap<char, Word>, alphabet: &Alphabet) -> bool {
    let k = alphabet.len();
    let mut m = vec![vec![false; k]; k];
    for (i, &s) in alphabet.symbols().iter().enumerate() {
        for &t in rules[&(s as char)].iter() {
            m[i][alphabet.index_of(t).unwrap()] = true;
        }
    }
    // Wielandt: a primitive k×k matrix has M^{(k-1)^2+1} > 0.
    let bound = (k - 1) * (k - 1) + 1;
    let mut power = m.clone();
    for _ in 1..bound {
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        let mut next = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                next[i][j] = (0..k).any(|l| power[i][l] && m[l][j]);
            }
        }
        power = next;
    }
    power.iter().all(|row| row.iter().all(|&x| x))
}

/// First `length` symbols of the canonical element of the subshift.
pub fn expand_prefix(spec: &SubshiftSpec, length: usize) -> Result<Word> {
    expand_prefix_with(spec, length, &SubshiftConfig::default())
}

pub fn expand_prefix_with(spec: &SubshiftSpec, length: usize, cfg: &SubshiftConfig) -> Result<Word> {
    if length == 0 {
        return Err(Error::invalid("prefix length must be at least 1"));
    }
    spec.validate(cfg)?;
    let max = cfg.max_length.min(spec.exact_length_limit());
    if length > max {
        return Err(Error::LengthExceeded { requested: length, max });
    }
    let bytes = match spec {
        SubshiftSpec::Periodic { word } => cyclic(word, length),
        SubshiftSpec::OrbitUnion { words } => cyclic(&words[0], length),
        SubshiftSpec::Substitution { rules, seed } => {
            let mut images = [None::<&[u8]>; 256];
            for (c, w) in rules {
                images[*c as usize] = Some(w.as_bytes());
            }
            let mut word = vec![*seed as u8];
            while word.len() < length {
                let mut next = Vec::with_capacity((word.len() * 2).min(length));
                for &s in &word {
                    next.extend_from_slice(images[s as usize].expect("validated rule"));
                    if next.len() >= length {
                        break;
                    }
                }
                word = next;
            }
            word.truncate(length);
            word
        }
        SubshiftSpec::Sturmian { partial_quotients } => {
            let last = *convergents(partial_quotients).last().expect("validated terms");
            sturmian::characteristic_prefix(last, length)
        }
        SubshiftSpec::SimpleToeplitz { coding, periods } => toeplitz(coding, periods, length),
    };
    Ok(Word(bytes))
}

fn cyclic(word: &[u8], length: usize) -> Vec<u8> {
    word.iter().copied().cycle().take(length).collect()
}

const HOLE: u8 = 0;

fn toeplitz(coding: &[u8], periods: &[usize], length: usize) -> Vec<u8> {
    let mut out = vec![HOLE; length];
    let mut holes: Vec<usize> = (0..length).collect();
    let mut step = 0;
    while !holes.is_empty() {
        let symbol = coding[step % coding.len()];
        let p = periods[step % periods.len()];
        let mut remaining = Vec::with_capacity(holes.len() / p + 1);
        for (i, &pos) in holes.iter().enumerate() {
            if (i + 1) % p == 0 {
                remaining.push(pos);
            } else {
                out[pos] = symbol;
            }
        }
        holes = remaining;
        step += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn periodic_prefix_repeats() {
        let spec = SubshiftSpec::periodic("ab").unwrap();
        assert_eq!(expand_prefix(&spec, 8).unwrap().to_string(), "abababab");
    }

    #[test]
    fn fibonacci_prefix() {
        let w = expand_prefix(&SubshiftSpec::fibonacci(), 8).unwrap();
        assert_eq!(w.to_string(), "abaababa");
    }

    #[test]
    fn golden_sturmian_matches_fibonacci_prefix() {
        let spec = SubshiftSpec::golden_sturmian(30).unwrap();
        assert_eq!(expand_prefix(&spec, 8).unwrap().to_string(), "abaababa");
        let n = 100_000;
        let a = expand_prefix(&spec, n).unwrap();
        let b = expand_prefix(&SubshiftSpec::fibonacci(), n).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sturmian_refuses_beyond_exact_range() {
        let spec = SubshiftSpec::golden_sturmian(10).unwrap();
        // q_10 = 89 for the golden mean
        assert!(expand_prefix(&spec, 87).is_ok());
        assert!(matches!(expand_prefix(&spec, 88), Err(Error::LengthExceeded { requested: 88, max: 87 })));
    }

    #[test]
    fn period_doubling_toeplitz_agrees_with_substitution() {
        let toep = SubshiftSpec::simple_toeplitz("ab", vec![2, 2]).unwrap();
        let n = 4096;
        assert_eq!(expand_prefix(&toep, n).unwrap(), expand_prefix(&SubshiftSpec::period_doubling(), n).unwrap());
    }

    #[test]
    fn non_primitive_rule_is_rejected() {
        // a -> aa, b -> ab never reaches b from a
        let err = SubshiftSpec::substitution(&[('a', "aa"), ('b', "ab")], 'a').unwrap_err();
        assert_eq!(err, Error::NonPrimitiveSubstitution);
        let err = SubshiftSpec::substitution(&[('a', "ab")], 'a').unwrap_err();
        assert_eq!(err, Error::MissingRule('b'));
    }

    #[test]
    fn length_limits() {
        let spec = SubshiftSpec::periodic("ab").unwrap();
        let cfg = SubshiftConfig { max_length: 10, ..Default::default() };
        assert!(expand_prefix_with(&spec, 10, &cfg).is_ok());
        assert!(expand_prefix_with(&spec, 11, &cfg).unwrap_err().is_budget());
        assert!(expand_prefix(&spec, 0).is_err());
    }

    #[test]
    fn alphabet_invariants() {
        assert_eq!(Alphabet::new(vec![]), Err(Error::EmptyAlphabet));
        assert_eq!(Alphabet::new(vec![b'a', b'a']), Err(Error::DuplicateSymbol('a')));
        let a = Alphabet::new(vec![b'b', b'a']).unwrap();
        assert_eq!(a.index_of(b'a'), Some(1));
        assert!(a.check(b"abba").is_ok());
        assert_eq!(a.check(b"abc"), Err(Error::UnknownSymbol('c')));
    }

    #[test]
    fn approximant_periods_by_variant() {
        let fib = SubshiftSpec::fibonacci().approximant_periods(11).unwrap();
        assert_eq!(fib, vec![2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233]);
        let golden = SubshiftSpec::golden_sturmian(12).unwrap().approximant_periods(6).unwrap();
        assert_eq!(golden, vec![1, 2, 3, 5, 8, 13]);
        let per = SubshiftSpec::periodic("ab").unwrap().approximant_periods(3).unwrap();
        assert_eq!(per, vec![2, 4, 6]);
    }
}
