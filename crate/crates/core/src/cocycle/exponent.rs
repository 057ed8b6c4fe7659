use alloc::vec;
use alloc::vec::Vec;

use super::locally_constant::LocallyConstantCocycle;
use super::mat2::LogMat;
use crate::subshift::{factor_set, Exactness, FactorLanguage, Word};
use crate::{Error, Result};

/// Extremes of log‖A_n‖ over Ω at one scale n, with witnessing factors of
/// length n+2r.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExactExtrema {
    pub n: usize,
    pub max_log_norm: f64,
    pub min_log_norm: f64,
    pub argmax: Word,
    pub argmin: Word,
    pub exactness: Exactness,
}

impl ExactExtrema {
    /// max over Ω of (1/n)·log‖A_n‖.
    pub fn sup(&self) -> f64 {
        self.max_log_norm / self.n as f64
    }

    /// min over Ω of (1/n)·log‖A_n‖.
    pub fn inf(&self) -> f64 {
        self.min_log_norm / self.n as f64
    }

    /// max − min of log‖A_n‖ over Ω.
    pub fn spread(&self) -> f64 {
        self.max_log_norm - self.min_log_norm
    }
}

/// [`ExactExtrema`] for every n = 1..=n_max.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentProfile {
    pub points: Vec<ExactExtrema>,
    pub exactness: Exactness,
}

impl ExponentProfile {
    pub fn n_max(&self) -> usize {
        self.points.len()
    }

    /// Extremes at scale n (1-based).
    pub fn at(&self, n: usize) -> Option<&ExactExtrema> {
        n.checked_sub(1).and_then(|i| self.points.get(i))
    }
}

/// Number of matrix products needed to sweep `lang` with a radius-r cocycle.
pub fn enumeration_cost(lang: &FactorLanguage, n_max: usize, radius: usize) -> u64 {
    let mut cost = 0u64;
    let mut prev: Option<&Word> = None;
    for w in lang.iter() {
        let reuse = prev.map_or(0, |p| reusable_depth(p, w, radius)).min(n_max);
        cost += (n_max - reuse) as u64;
        prev = Some(w);
    }
    cost
}

fn reusable_depth(a: &[u8], b: &[u8], radius: usize) -> usize {
    let lcp = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    lcp.saturating_sub(2 * radius)
}

/// Exact extremes of log‖A_n‖ for n = 1..=n_max.
///
/// A_n(ω) only depends on ω_{−r} … ω_{n−1+r}, and every legal word of that
/// length is a prefix of a legal word of length n_max+2r, so one sweep over
/// the latter covers all scales. Products are shared between consecutive
/// sorted words along their common prefix.
pub fn exponent_profile(cocycle: &LocallyConstantCocycle, n_max: usize) -> Result<ExponentProfile> {
    let lang = factor_set(cocycle.base(), n_max + 2 * cocycle.radius())?;
    exponent_profile_over(cocycle, &lang, n_max)
}

/// As [`exponent_profile`], with a precomputed language of length at least
/// n_max+2r (longer languages are truncated).
pub fn exponent_profile_over(
    cocycle: &LocallyConstantCocycle,
    lang: &FactorLanguage,
    n_max: usize,
) -> Result<ExponentProfile> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    let r = cocycle.radius();
    let m = n_max + 2 * r;
    if lang.n < m {
        return Err(Error::WindowLength { expected: m, found: lang.n });
    }
    let truncated;
    let lang = if lang.n > m {
        truncated = lang.truncate(m);
        &truncated
    } else {
        lang
    };
    let cost = enumeration_cost(lang, n_max, r);
    let budget = cocycle.limits().budget;
    if cost > budget {
        return Err(Error::BudgetExceeded { required: cost, budget });
    }

    let mut max_log = vec![f64::NEG_INFINITY; n_max];
    let mut min_log = vec![f64::INFINITY; n_max];
    let mut arg_max = vec![0usize; n_max];
    let mut arg_min = vec![0usize; n_max];
    // stack[d] = product of the first d factors of the current word
    let mut stack: Vec<LogMat> = vec![LogMat::identity(); n_max + 1];
    let mut logs = vec![0.0f64; n_max];
    let mut prev: Option<&Word> = None;
    for (wi, w) in lang.words.iter().enumerate() {
        let reuse = prev.map_or(0, |p| reusable_depth(p, w, r)).min(n_max);
        for d in reuse..n_max {
            let mut next = stack[d];
            next.push(&cocycle.eval(&w[d..d + 2 * r + 1])?);
            logs[d] = next.log_norm().max(0.0);
            stack[d + 1] = next;
        }
        for d in 0..n_max {
            let v = logs[d];
            if v > max_log[d] {
                max_log[d] = v;
                arg_max[d] = wi;
            }
            if v < min_log[d] {
                min_log[d] = v;
                arg_min[d] = wi;
            }
        }
        prev = Some(w);
    }
    if lang.words.is_empty() {
        return Err(Error::EmptyWord);
    }
    let points = (0..n_max)
        .map(|d| {
            let len = d + 1 + 2 * r;
            ExactExtrema {
                n: d + 1,
                max_log_norm: max_log[d],
                min_log_norm: min_log[d],
                argmax: Word::from_bytes_unchecked(lang.words[arg_max[d]][..len].to_vec()),
                argmin: Word::from_bytes_unchecked(lang.words[arg_min[d]][..len].to_vec()),
                exactness: lang.exactness,
            }
        })
        .collect();
    Ok(ExponentProfile { points, exactness: lang.exactness })
}

/// Exact max and min over Ω of (1/n)·log‖A_n‖, with witnessing words.
pub fn sup_exponent_exact(cocycle: &LocallyConstantCocycle, n: usize) -> Result<ExactExtrema> {
    let lang = factor_set(cocycle.base(), n + 2 * cocycle.radius())?;
    sup_exponent_over(cocycle, &lang, n)
}

/// [`sup_exponent_exact`] over a precomputed language of length ≥ n+2r.
pub fn sup_exponent_over(cocycle: &LocallyConstantCocycle, lang: &FactorLanguage, n: usize) -> Result<ExactExtrema> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let r = cocycle.radius();
    let m = n + 2 * r;
    if lang.n < m {
        return Err(Error::WindowLength { expected: m, found: lang.n });
    }
    let truncated;
    let lang = if lang.n > m {
        truncated = lang.truncate(m);
        &truncated
    } else {
        lang
    };
    let required = (lang.len() as u64).saturating_mul(n as u64);
    let budget = cocycle.limits().budget;
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut best: Option<ExactExtrema> = None;
    for w in lang.iter() {
        let v = cocycle.iterate_scaled(w, r, n as isize)?.log_norm().max(0.0);
        match &mut best {
            None => {
                best = Some(ExactExtrema {
                    n,
                    max_log_norm: v,
                    min_log_norm: v,
                    argmax: w.clone(),
                    argmin: w.clone(),
                    exactness: lang.exactness,
                })
            }
            Some(b) => {
                if v > b.max_log_norm {
                    b.max_log_norm = v;
                    b.argmax = w.clone();
                }
                if v < b.min_log_norm {
                    b.min_log_norm = v;
                    b.argmin = w.clone();
                }
            }
        }
    }
    best.ok_or(Error::EmptyWord)
}
