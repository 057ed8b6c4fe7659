use alloc::vec::Vec;
use core::f64::consts::PI;

use super::arc::{min_log_expansion, Arc};
use crate::cocycle::{LocallyConstantCocycle, Mat2};
use crate::subshift::{factor_set, FactorLanguage, Word};
use crate::{Error, Result};

/// Parameters of the cone search.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ConeParams {
    /// Required angular slack (radians) and expansion excess.
    pub margin: f64,
    /// Cones are indexed by windows of length 2ρ+1; ρ below the cocycle
    /// radius is raised to it.
    pub cone_radius: usize,
    pub max_sweeps: usize,
    pub initial_half_width: f64,
}

impl Default for ConeParams {
    fn default() -> Self {
        ConeParams { margin: 1e-3, cone_radius: 0, max_sweeps: 64, initial_half_width: PI / 8.0 }
    }
}

/// A cone family strictly invariant under every block of length N.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConeCertificate {
    pub block_length: usize,
    pub cone_radius: usize,
    pub margin: f64,
    /// Cone per window, sorted by window.
    pub cones: Vec<(Word, Arc)>,
    /// min over blocks and cone vectors of log‖A_N x‖.
    pub min_log_expansion: f64,
    /// (1/N)·min_log_expansion, a lower bound for the uniform exponent.
    pub exponent_lower_bound: f64,
    pub sweeps: usize,
}

/// Why no certificate was produced. Neither case says anything about the
/// cocycle beyond this block length.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "reason", rename_all = "snake_case"))]
pub enum UhRefusal {
    NoInvariantFamily { block_length: usize },
    Budget { block_length: usize, required: u64, budget: u64 },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", content = "detail", rename_all = "snake_case"))]
pub enum UhOutcome {
    Certified(ConeCertificate),
    Refused(UhRefusal),
}

impl UhOutcome {
    pub fn certificate(&self) -> Option<&ConeCertificate> {
        match self {
            UhOutcome::Certified(c) => Some(c),
            UhOutcome::Refused(_) => None,
        }
    }
}

struct Block {
    source: usize,
    target: usize,
    unit: Mat2,
    det: f64,
    log_scale: f64,
}

struct Blocks {
    windows: Vec<Word>,
    blocks: Vec<Block>,
}

fn build_blocks(cocycle: &LocallyConstantCocycle, lang: &FactorLanguage, n: usize, rho: usize) -> Result<Blocks> {
    let wlen = 2 * rho + 1;
    let mut windows: Vec<Word> = lang.iter().map(|w| Word::from_bytes_unchecked(w[..wlen].to_vec())).collect();
    windows.extend(lang.iter().map(|w| Word::from_bytes_unchecked(w[n..n + wlen].to_vec())));
    windows.sort();
    windows.dedup();
    let index = |w: &[u8]| windows.binary_search_by(|k| k.as_bytes().cmp(w)).expect("window listed");
    let mut blocks = Vec::with_capacity(lang.len());
    for w in lang.iter() {
        let prod = cocycle.iterate_scaled(w, rho, n as isize)?;
        let (unit, log_scale) = prod.normalized();
        blocks.push(Block {
            source: index(&w[..wlen]),
            target: index(&w[n..n + wlen]),
            unit,
            det: libm::exp(-2.0 * log_scale),
            log_scale,
        });
    }
    Ok(Blocks { windows, blocks })
}

fn invariant(blocks: &Blocks, cones: &[Arc], margin: f64) -> Option<f64> {
    let mut min_exp = f64::INFINITY;
    let need = libm::log1p(margin);
    for b in &blocks.blocks {
        let src = &cones[b.source];
        if !src.is_proper() || !cones[b.target].is_proper() {
            return None;
        }
        let img = src.image(&b.unit, b.det);
        if !cones[b.target].contains_arc(&img, margin) {
            return None;
        }
        let e = min_log_expansion(&b.unit, b.log_scale, src);
        if !(e >= need) {
            return None;
        }
        min_exp = min_exp.min(e);
    }
    Some(min_exp)
}

/// Searches for a cone family invariant under all blocks of length N.
///
/// Blocks are the legal words of length N+2ρ+1: the cone at the leading
/// window (ω_{−ρ} … ω_ρ) must be mapped by A_N into the cone at the trailing
/// window, with `margin` to spare, while every vector in it grows by at least
/// 1+margin. Cones start at the most expanded input direction of a block
/// leaving the window and are then replaced by the widened hull of their
/// images, sweep after sweep.
pub fn certify_uh(cocycle: &LocallyConstantCocycle, n: usize, params: &ConeParams) -> Result<UhOutcome> {
    if n == 0 {
        return Err(Error::invalid("block length must be at least 1"));
    }
    let rho = params.cone_radius.max(cocycle.radius());
    let len = n + 2 * rho + 1;
    let lang = match factor_set(cocycle.base(), len) {
        Ok(l) => l,
        Err(e) if e.is_budget() => {
            return Ok(UhOutcome::Refused(UhRefusal::Budget {
                block_length: n,
                required: len as u64,
                budget: cocycle.limits().budget,
            }))
        }
        Err(e) => return Err(e),
    };
    certify_uh_over(cocycle, &lang, n, params)
}

/// [`certify_uh`] over a precomputed language of length ≥ N+2ρ+1.
pub fn certify_uh_over(
    cocycle: &LocallyConstantCocycle,
    lang: &FactorLanguage,
    n: usize,
    params: &ConeParams,
) -> Result<UhOutcome> {
    let rho = params.cone_radius.max(cocycle.radius());
    let len = n + 2 * rho + 1;
    if lang.n < len {
        return Err(Error::WindowLength { expected: len, found: lang.n });
    }
    let truncated;
    let lang = if lang.n > len {
        truncated = lang.truncate(len);
        &truncated
    } else {
        lang
    };
    let required = (lang.len() as u64).saturating_mul(n as u64);
    let budget = cocycle.limits().budget;
    if required > budget {
        return Ok(UhOutcome::Refused(UhRefusal::Budget { block_length: n, required, budget }));
    }
    let blocks = build_blocks(cocycle, lang, n, rho)?;
    let margin = params.margin;

    let mut cones: Vec<Arc> = (0..blocks.windows.len())
        .map(|i| {
            let center = blocks.blocks.iter().find(|b| b.source == i).map_or(0.0, |b| b.unit.expanded_input_angle());
            Arc::centered(center, params.initial_half_width)
        })
        .collect();

    let mut best: Option<(Vec<Arc>, f64, usize)> = None;
    let mut incoming: Vec<Vec<Arc>> = alloc::vec![Vec::new(); cones.len()];
    for sweep in 1..=params.max_sweeps {
        incoming.iter_mut().for_each(Vec::clear);
        for b in &blocks.blocks {
            incoming[b.target].push(cones[b.source].image(&b.unit, b.det));
        }
        let mut next = cones.clone();
        let mut covered = false;
        for (t, imgs) in incoming.iter().enumerate() {
            if imgs.is_empty() {
                continue;
            }
            match Arc::hull(imgs) {
                Some(h) if h.len + 4.0 * margin < PI => next[t] = h.widen(2.0 * margin),
                _ => covered = true,
            }
        }
        if covered {
            break;
        }
        let settled = next
            .iter()
            .zip(&cones)
            .all(|(a, b)| (a.len - b.len).abs() <= 1e-13 && libm::fabs(wrap_diff(a.start, b.start)) <= 1e-13);
        cones = next;
        if let Some(e) = invariant(&blocks, &cones, margin) {
            best = Some((cones.clone(), e, sweep));
        }
        if settled {
            break;
        }
    }
    Ok(match best {
        Some((cones, min_exp, sweeps)) => UhOutcome::Certified(ConeCertificate {
            block_length: n,
            cone_radius: rho,
            margin,
            cones: blocks.windows.into_iter().zip(cones).collect(),
            min_log_expansion: min_exp,
            exponent_lower_bound: min_exp / n as f64,
            sweeps,
        }),
        None => UhOutcome::Refused(UhRefusal::NoInvariantFamily { block_length: n }),
    })
}

fn wrap_diff(a: f64, b: f64) -> f64 {
    let d = crate::cocycle::wrap_pi(a - b);
    if d > PI / 2.0 {
        d - PI
    } else {
        d
    }
}

/// Tries block lengths 1, 2, 4, … up to `max_block`; returns the first
/// certificate, or the refusal at the last length tried.
pub fn certify_uh_search(cocycle: &LocallyConstantCocycle, max_block: usize, params: &ConeParams) -> Result<UhOutcome> {
    let rho = params.cone_radius.max(cocycle.radius());
    let lang = match factor_set(cocycle.base(), max_block + 2 * rho + 1) {
        Ok(l) => l,
        Err(e) if e.is_budget() => {
            return Ok(UhOutcome::Refused(UhRefusal::Budget {
                block_length: max_block,
                required: (max_block + 2 * rho + 1) as u64,
                budget: cocycle.limits().budget,
            }))
        }
        Err(e) => return Err(e),
    };
    certify_uh_search_over(cocycle, &lang, max_block, params)
}

/// [`certify_uh_search`] over a precomputed language of length ≥ max_block+2ρ+1.
pub fn certify_uh_search_over(
    cocycle: &LocallyConstantCocycle,
    lang: &FactorLanguage,
    max_block: usize,
    params: &ConeParams,
) -> Result<UhOutcome> {
    let mut n = 1;
    let mut last = UhOutcome::Refused(UhRefusal::NoInvariantFamily { block_length: 0 });
    while n <= max_block.max(1) {
        last = certify_uh_over(cocycle, lang, n, params)?;
        if matches!(last, UhOutcome::Certified(_) | UhOutcome::Refused(UhRefusal::Budget { .. })) {
            return Ok(last);
        }
        n *= 2;
    }
    Ok(last)
}

impl ConeCertificate {
    /// Re-checks invariance and expansion over every block from scratch.
    pub fn verify(&self, cocycle: &LocallyConstantCocycle) -> Result<bool> {
        let lang = factor_set(cocycle.base(), self.block_length + 2 * self.cone_radius + 1)?;
        let blocks = build_blocks(cocycle, &lang, self.block_length, self.cone_radius)?;
        let mut cones = Vec::with_capacity(blocks.windows.len());
        for w in &blocks.windows {
            match self.cones.binary_search_by(|(k, _)| k.cmp(w)) {
                Ok(i) => cones.push(self.cones[i].1),
                Err(_) => return Ok(false),
            }
        }
        Ok(invariant(&blocks, &cones, self.margin).is_some_and(|e| e >= self.min_log_expansion - 1e-12))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{schrodinger_cocycle, LayeredSamplingFunction};
    use crate::subshift::SubshiftSpec;

    fn constant(m: Mat2) -> LocallyConstantCocycle {
        LocallyConstantCocycle::constant(SubshiftSpec::fibonacci(), m).unwrap()
    }

    #[test]
    fn diagonal_certified_at_one() {
        let c = constant(Mat2::diag(2.0, 0.5));
        let cert = match certify_uh(&c, 1, &ConeParams::default()).unwrap() {
            UhOutcome::Certified(c) => c,
            other => panic!("{other:?}"),
        };
        for (_, cone) in &cert.cones {
            assert!(cone.contains(0.0));
            assert!(cone.half_width() > 0.0 && cone.half_width() < PI / 2.0);
        }
        assert!((cert.exponent_lower_bound - libm::log(2.0)).abs() < 1e-2);
        assert!(cert.exponent_lower_bound <= libm::log(2.0) + 1e-15);
        assert!(cert.verify(&c).unwrap());
    }

    #[test]
    fn rotation_is_refused() {
        let c = constant(Mat2::schrodinger(0.0));
        for n in [1, 2, 3, 4, 8, 16] {
            assert_eq!(
                certify_uh(&c, n, &ConeParams::default()).unwrap(),
                UhOutcome::Refused(UhRefusal::NoInvariantFamily { block_length: n })
            );
        }
    }

    #[test]
    fn free_energy_three() {
        let c = constant(Mat2::schrodinger(3.0));
        let cert = certify_uh(&c, 1, &ConeParams::default()).unwrap().certificate().cloned().unwrap();
        let oracle = libm::log((3.0 + libm::sqrt(5.0)) / 2.0);
        assert!((cert.exponent_lower_bound - oracle).abs() < 1e-2);
        // unstable eigen-direction of [[3,−1],[1,0]] is (λ, 1)
        let lambda = (3.0 + libm::sqrt(5.0)) / 2.0;
        let u = libm::atan2(1.0, lambda);
        assert!(cert.cones.iter().all(|(_, a)| a.contains(u)));
    }

    #[test]
    fn fibonacci_gap_energy_needs_longer_blocks_or_certifies() {
        let f = LayeredSamplingFunction::indicator('b', 1.0).unwrap();
        let c = schrodinger_cocycle(&f, SubshiftSpec::fibonacci(), 3.2).unwrap();
        let out = certify_uh_search(&c, 64, &ConeParams::default()).unwrap();
        let cert = out.certificate().expect("3.2 lies outside the spectrum");
        assert!(cert.verify(&c).unwrap());
        // doubled blocks expand by at least (1+margin)²
        let n2 = 2 * cert.block_length;
        let lang = factor_set(c.base(), n2 + 2 * c.radius()).unwrap();
        for w in lang.iter() {
            let ln = c.iterate_scaled(w, c.radius(), n2 as isize).unwrap().log_norm();
            assert!(ln >= 2.0 * libm::log1p(cert.margin));
        }
    }
}
