use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cocycle::{Layer, LayeredSamplingFunction, Limits, SchrodingerFamily};
use crate::rng::{child_seed, random_layer, seeded};
use crate::spectrum::EnergyGrid;
use crate::subshift::{factor_set, FactorLanguage, SubshiftSpec};
use crate::uniformity::{classify_slice, SliceClass, WParams};
use crate::{Error, Executor, Result};

/// Label carried by every construction log.
pub const PROXY_LABEL: &str = "proxy-certified";
const PROXY_NOTE: &str = "membership in W_eps is checked by a finite-horizon, finite-grid proxy \
(UH certificate or exponent below eps at every grid energy) and by seeded random perturbation trials; \
it is not proved";

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstructionParams {
    /// ε_1 > ε_2 > … ; one stage per entry.
    pub epsilons: Vec<f64>,
    pub grid: EnergyGrid,
    pub w: WParams,
    /// Random perturbations tested per candidate δ.
    pub trials: usize,
    /// First δ tried at stage 1.
    pub delta_start: f64,
    pub delta_min: f64,
    pub seed: u64,
    pub limits: Limits,
}

impl ConstructionParams {
    pub fn new(epsilons: Vec<f64>, grid: EnergyGrid) -> Self {
        ConstructionParams {
            epsilons,
            grid,
            w: WParams::default(),
            trials: 16,
            delta_start: 0.5,
            delta_min: 1e-6,
            seed: 0,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyCheck {
    pub energy: f64,
    pub class: String,
    pub exponent: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaAttempt {
    pub delta: f64,
    pub trials_passed: usize,
    pub trials: usize,
    pub partial_sum_passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StageLog {
    pub stage: usize,
    pub epsilon: f64,
    pub attempts: Vec<DeltaAttempt>,
    pub delta: Option<f64>,
    pub generator_radius: usize,
    /// Proxy detail for the accepted partial sum.
    pub energies: Vec<EnergyCheck>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstructionLog {
    pub label: String,
    pub note: String,
    pub params: ConstructionParams,
    pub stages: Vec<StageLog>,
    pub delta_schedule: Vec<f64>,
    pub completed: bool,
    pub diagnostic: Option<String>,
    /// g0 + Σ (δ_k/2)·g_k over the completed stages.
    pub potential: LayeredSamplingFunction,
}

/// Random generators of sup one, one per radius.
pub fn random_generators(base: &SubshiftSpec, radii: &[usize], seed: u64) -> Result<Vec<Layer>> {
    radii.iter().enumerate().map(|(i, &r)| random_layer(&mut seeded(child_seed(seed, i as u64)), base, r)).collect()
}

struct Proxy<'a, X> {
    base: &'a SubshiftSpec,
    params: &'a ConstructionParams,
    exec: &'a X,
    langs: BTreeMap<usize, FactorLanguage>,
}

impl<X: Executor> Proxy<'_, X> {
    fn language(&mut self, radius: usize) -> Result<&FactorLanguage> {
        let n = self.params.w.language_length(radius);
        if !self.langs.contains_key(&n) {
            let lang = factor_set(self.base, n)?;
            self.langs.insert(n, lang);
        }
        Ok(&self.langs[&n])
    }

    /// Runs the per-energy test on every candidate potential at once.
    fn check(&mut self, potentials: &[LayeredSamplingFunction], epsilon: f64) -> Result<Vec<Vec<EnergyCheck>>> {
        let radius = potentials.iter().map(|g| g.radius()).max().unwrap_or(0);
        let params = self.params;
        let base = self.base;
        let exec = self.exec;
        let lang = self.language(radius)?;
        let families = potentials
            .iter()
            .map(|g| SchrodingerFamily::new(g.clone(), base.clone()).map(|f| f.with_limits(params.limits)))
            .collect::<Result<Vec<_>>>()?;
        let energies = params.grid.points();
        let items: Vec<(usize, f64)> =
            (0..families.len()).flat_map(|i| energies.iter().map(move |&e| (i, e))).collect();
        let results = exec.map(&items, |&(i, energy)| -> Result<EnergyCheck> {
            let slice = families[i].slice(energy)?;
            let (class, exponent, budget_limited) = match classify_slice(&slice, lang, epsilon, &params.w) {
                Ok(c) => c,
                Err(e) if e.is_budget() => (SliceClass::Fail, None, true),
                Err(e) => return Err(e),
            };
            let passed = !budget_limited
                && (matches!(class, SliceClass::UhCertified { .. }) || exponent.is_some_and(|x| x < epsilon));
            Ok(EnergyCheck { energy, class: class.label().into(), exponent, passed })
        });
        let mut out = vec![Vec::with_capacity(energies.len()); families.len()];
        for ((i, _), r) in items.iter().zip(results) {
            out[*i].push(r?);
        }
        Ok(out)
    }
}

/// Builds g = g0 + Σ_k (δ_k/2)·g_k stage by stage.
///
/// At stage k, δ_k is the first value of δ, δ/2, δ/4, … (starting just
/// below δ_{k−1}/2) for which g_{k−1} + δ·h passes the W_{ε_k} proxy for
/// every seeded random h of sup one, and for which the new partial sum
/// g_{k−1} + (δ/2)·g_k passes as well. Failure to find δ above `delta_min`
/// stops the construction and returns what was built.
pub fn construct_uniform_potential<X: Executor>(
    g0: &LayeredSamplingFunction,
    base: &SubshiftSpec,
    generators: &[Layer],
    params: &ConstructionParams,
    exec: &X,
) -> Result<ConstructionLog> {
    if params.epsilons.is_empty() || params.epsilons.len() != generators.len() {
        return Err(Error::invalid("one generator per stage epsilon is required"));
    }
    if params.epsilons.iter().any(|e| !(*e > 0.0)) || params.epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("stage epsilons must be positive and strictly decreasing"));
    }
    if !(params.delta_min > 0.0 && params.delta_start >= params.delta_min) {
        return Err(Error::invalid("need 0 < delta_min <= delta_start"));
    }
    for g in generators {
        if g.coefficient().abs() * g.sup() > 1.0 + 1e-12 {
            return Err(Error::invalid("generators must have sup at most one"));
        }
    }

    let mut proxy = Proxy { base, params, exec, langs: BTreeMap::new() };
    let mut current = g0.clone();
    let mut stages = Vec::new();
    let mut schedule: Vec<f64> = Vec::new();
    let mut diagnostic = None;

    for (k, (&epsilon, generator)) in params.epsilons.iter().zip(generators).enumerate() {
        let stage = k + 1;
        let gen = LayeredSamplingFunction::new(vec![generator.clone()], 0.0)?;
        let perturbations = (0..params.trials)
            .map(|t| {
                let seed = child_seed(params.seed, (stage as u64) << 32 | t as u64);
                let h = random_layer(&mut seeded(seed), base, generator.radius())?;
                LayeredSamplingFunction::new(vec![h], 0.0)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut delta = match schedule.last() {
            None => params.delta_start,
            Some(&d) => 0.5 * d * (1.0 - f64::EPSILON),
        };
        let mut log = StageLog {
            stage,
            epsilon,
            attempts: Vec::new(),
            delta: None,
            generator_radius: generator.radius(),
            energies: Vec::new(),
            passed: false,
        };
        while delta >= params.delta_min {
            let partial = current.plus(&gen.scaled(0.5 * delta));
            let mut candidates = vec![partial.clone()];
            for h in &perturbations {
                candidates.push(current.plus(&h.scaled(delta)));
            }
            let checks = proxy.check(&candidates, epsilon)?;
            let ok: Vec<bool> = checks.iter().map(|c| c.iter().all(|e| e.passed)).collect();
            let trials_passed = ok[1..].iter().filter(|&&b| b).count();
            log.attempts.push(DeltaAttempt { delta, trials_passed, trials: params.trials, partial_sum_passed: ok[0] });
            if ok.iter().all(|&b| b) {
                log.delta = Some(delta);
                log.energies = checks.into_iter().next().unwrap();
                log.passed = true;
                current = partial;
                schedule.push(delta);
                break;
            }
            delta *= 0.5;
        }
        let passed = log.passed;
        stages.push(log);
        if !passed {
            diagnostic = Some(format!(
                "stage {stage}: no delta >= {:e} passed the W_eps proxy at eps = {epsilon}",
                params.delta_min
            ));
            break;
        }
    }

    Ok(ConstructionLog {
        label: PROXY_LABEL.into(),
        note: PROXY_NOTE.into(),
        params: params.clone(),
        completed: diagnostic.is_none(),
        stages,
        delta_schedule: schedule,
        diagnostic,
        potential: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Sequential;

    fn small(epsilons: Vec<f64>) -> ConstructionParams {
        let grid = EnergyGrid::uniform(-3.0, 3.0, 1.5).unwrap();
        let mut p = ConstructionParams::new(epsilons, grid);
        p.w = WParams { horizon: 32, max_block: 32, ..WParams::default() };
        p.trials = 4;
        p
    }

    #[test]
    fn zero_generators_keep_g0() {
        let spec = SubshiftSpec::fibonacci();
        let zero = Layer::new(1, BTreeMap::new(), Some(0.0), 1.0).unwrap();
        let g0 = LayeredSamplingFunction::constant(0.0);
        let p = small(vec![0.9, 0.8]);
        let log = construct_uniform_potential(&g0, &spec, &[zero.clone(), zero], &p, &Sequential).unwrap();
        assert!(log.completed);
        assert_eq!(log.label, PROXY_LABEL);
        assert_eq!(log.stages.len(), 2);
        assert_eq!(log.potential.sup_distance(&g0, &spec).unwrap(), 0.0);
        assert_eq!(log.delta_schedule.len(), 2);
    }

    #[test]
    fn schedule_halves_strictly() {
        let spec = SubshiftSpec::fibonacci();
        let gens = random_generators(&spec, &[1, 2], 5).unwrap();
        let p = small(vec![0.9, 0.8]);
        let log = construct_uniform_potential(&LayeredSamplingFunction::zero(), &spec, &gens, &p, &Sequential).unwrap();
        assert!(log.completed, "{:?}", log.diagnostic);
        let d = &log.delta_schedule;
        assert_eq!(d.len(), 2);
        assert!(d[0] < 1.0 && d[1] < d[0] / 2.0);
        assert!(d.iter().sum::<f64>() <= 2.0 * d[0]);
        assert!(log.stages.iter().all(|s| s.passed && s.energies.iter().all(|e| e.passed)));
        let radii: alloc::collections::BTreeSet<usize> = log.potential.layers().iter().map(|l| l.radius()).collect();
        assert_eq!(radii.len(), 2);

        let again =
            construct_uniform_potential(&LayeredSamplingFunction::zero(), &spec, &gens, &p, &Sequential).unwrap();
        assert_eq!(log, again);
    }

    #[test]
    fn unreachable_epsilon_reports_stage() {
        let spec = SubshiftSpec::fibonacci();
        let gens = random_generators(&spec, &[1], 5).unwrap();
        let mut p = small(vec![1e-4]);
        p.delta_min = 0.1;
        let log = construct_uniform_potential(&LayeredSamplingFunction::zero(), &spec, &gens, &p, &Sequential).unwrap();
        assert!(!log.completed);
        assert!(log.diagnostic.as_deref().unwrap().starts_with("stage 1"));
        assert_eq!(log.potential, LayeredSamplingFunction::zero());
    }

    #[test]
    fn validates_inputs() {
        let spec = SubshiftSpec::fibonacci();
        let gens = random_generators(&spec, &[1, 1], 5).unwrap();
        let g0 = LayeredSamplingFunction::zero();
        assert!(construct_uniform_potential(&g0, &spec, &gens, &small(vec![0.5, 0.5]), &Sequential).is_err());
        assert!(construct_uniform_potential(&g0, &spec, &gens[..1], &small(vec![0.5, 0.4]), &Sequential).is_err());
        let big = Layer::new(0, BTreeMap::new(), Some(1.0), 2.0).unwrap();
        assert!(construct_uniform_potential(&g0, &spec, &[big], &small(vec![0.5]), &Sequential).is_err());
    }
}
