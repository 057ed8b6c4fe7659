//! JSON configuration accepted by each command. See `docs/config.md`.

use cocycle_core::approximation::CoverParams;
use cocycle_core::cocycle::{CocycleFamily, LayeredSamplingFunction, LocallyConstantCocycle};
use cocycle_core::hyperbolicity::{ConeParams, SplittingParams};
use cocycle_core::spectrum::{EnergyGrid, ScanParams};
use cocycle_core::subshift::{SubshiftConfig, SubshiftSpec};
use cocycle_core::uniformity::{AvalancheParams, WParams};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SampledStat {
    pub n: usize,
    pub sample_length: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileStat {
    pub n_max: usize,
    pub sample_length: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SubshiftRun {
    pub subshift: SubshiftSpec,
    #[serde(default)]
    pub limits: SubshiftConfig,
    pub prefix: Option<usize>,
    pub factors: Option<usize>,
    pub frequencies: Option<SampledStat>,
    pub boshernitzan: Option<ProfileStat>,
}

fn default_epsilon() -> f64 {
    0.1
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentRun {
    /// A single cocycle, or a family sampled on `grid`.
    pub cocycle: Option<LocallyConstantCocycle>,
    pub family: Option<CocycleFamily>,
    pub grid: Option<EnergyGrid>,
    pub horizons: Vec<usize>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub w: WParams,
}

fn default_max_block() -> usize {
    256
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SplittingRun {
    pub n: usize,
    #[serde(default)]
    pub params: SplittingParams,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct UhRun {
    pub cocycle: LocallyConstantCocycle,
    #[serde(default = "default_max_block")]
    pub max_block: usize,
    #[serde(default)]
    pub cone: ConeParams,
    pub splitting: Option<SplittingRun>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OpennessRun {
    pub epsilon_prime: f64,
    pub delta: f64,
    pub trials: usize,
}

fn default_validation_horizon() -> usize {
    4096
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AvalancheRun {
    pub cocycle: LocallyConstantCocycle,
    /// The exponent L the certificate is built around.
    pub lyapunov: f64,
    pub epsilon: f64,
    /// Defaults to the smallest ℓ allowed by (a3), (a4).
    pub ell: Option<usize>,
    #[serde(default = "default_validation_horizon")]
    pub validation_horizon: usize,
    #[serde(default)]
    pub params: AvalancheParams,
    pub openness: Option<OpennessRun>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRun {
    pub grid: EnergyGrid,
    #[serde(default)]
    pub params: ScanParams,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximantRun {
    pub levels: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureRun {
    pub intervals: Vec<(f64, f64)>,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub m: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SemicontinuityRun {
    pub g: LayeredSamplingFunction,
    pub level: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumRun {
    pub subshift: SubshiftSpec,
    pub potential: LayeredSamplingFunction,
    pub scan: Option<ScanRun>,
    pub approximants: Option<ApproximantRun>,
    pub measure: Option<MeasureRun>,
    pub semicontinuity: Option<SemicontinuityRun>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyRun {
    pub family: CocycleFamily,
    pub lo: f64,
    pub hi: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub cover: CoverParams,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizeRun {
    pub potential: LayeredSamplingFunction,
    pub radius: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximateRun {
    pub family: Option<FamilyRun>,
    pub discretize: Option<DiscretizeRun>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Generators {
    /// One seeded random layer of sup one per radius.
    RandomRadii(Vec<usize>),
    /// Sampling functions with exactly one layer each.
    Explicit(Vec<LayeredSamplingFunction>),
}

fn default_trials() -> usize {
    16
}

fn default_delta_start() -> f64 {
    0.5
}

fn default_delta_min() -> f64 {
    1e-6
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructRun {
    pub subshift: SubshiftSpec,
    pub g0: LayeredSamplingFunction,
    pub generators: Generators,
    pub epsilons: Vec<f64>,
    pub grid: EnergyGrid,
    #[serde(default)]
    pub w: WParams,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_delta_start")]
    pub delta_start: f64,
    #[serde(default = "default_delta_min")]
    pub delta_min: f64,
}

/// Splits the optional top-level `seed` off a config document.
pub fn take_seed(doc: &mut serde_json::Value) -> LabResult<Option<u64>> {
    let Some(obj) = doc.as_object_mut() else {
        return Err(LabError::config("config must be a JSON object"));
    };
    match obj.remove("seed") {
        None => Ok(None),
        Some(v) => v.as_u64().map(Some).ok_or_else(|| LabError::config("`seed` must be an unsigned integer")),
    }
}

pub fn parse<T: DeserializeOwned>(doc: serde_json::Value) -> LabResult<T> {
    serde_json::from_value(doc).map_err(|e| LabError::config(e.to_string()))
}
