use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::model::PopulationModel;
use crate::montecarlo::{Check, ExperimentConfig};

/// Master seed used by the built-in default configurations.
pub const DEFAULT_SEED: u64 = 20_241_016;

/// Deviation thresholds evaluated by the bounds check.
pub const BOUND_G_GRID: [f64; 4] = [0.05, 0.1, 0.2, 0.5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub label_prob: f64,
    pub cond_p: Vec<f64>,
    pub cond_q: Vec<f64>,
}

/// JSON form of an experiment:
///
/// ```json
/// {
///   "model": { "label_prob": 0.5, "cond_p": [0.5, 0.5], "cond_q": [0.25, 0.75] },
///   "n_values": [1000, 10000],
///   "replications": 1000,
///   "master_seed": 20241016,
///   "ci_level": 0.95,
///   "checks": ["lln", "clt", "coverage", "bounds"]
/// }
/// ```
///
/// Unknown keys are rejected. `checks` may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub n_values: Vec<u64>,
    pub replications: usize,
    pub master_seed: u64,
    pub ci_level: f64,
    #[serde(default)]
    pub checks: Vec<Check>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_experiment(&self) -> crate::Result<ExperimentConfig> {
        let model = PopulationModel::from_probs(self.model.label_prob, &self.model.cond_p, &self.model.cond_q)?;
        let config = ExperimentConfig {
            model,
            n_values: self.n_values.clone(),
            replications: self.replications,
            master_seed: self.master_seed,
            ci_level: self.ci_level,
            checks: self.checks.iter().copied().collect::<BTreeSet<_>>(),
        };
        config.validate()?;
        Ok(config)
    }

    fn reference(n_values: Vec<u64>, replications: usize, checks: Vec<Check>) -> Self {
        Self {
            model: ModelSpec { label_prob: 0.5, cond_p: vec![0.5, 0.5], cond_q: vec![0.25, 0.75] },
            n_values,
            replications,
            master_seed: DEFAULT_SEED,
            ci_level: 0.95,
            checks,
        }
    }

    /// Reference model `p = 1/2`, `p_vec = (1/2, 1/2)`, `q_vec = (1/4, 3/4)` at
    /// `n ∈ {10³, 10⁴}`, 1000 replications, no checks.
    pub fn default_simulate() -> Self {
        Self::reference(vec![1_000, 10_000], 1_000, vec![])
    }

    /// Reference model at `n = 10⁴`, 2000 replications, `clt` + `coverage`.
    pub fn default_clt() -> Self {
        Self::reference(vec![10_000], 2_000, vec![Check::Clt, Check::Coverage])
    }

    /// Reference model at `n ∈ {10³, 10⁴, 10⁵}`, 200 replications, `lln`.
    pub fn default_lln() -> Self {
        Self::reference(vec![1_000, 10_000, 100_000], 200, vec![Check::Lln])
    }

    /// Reference model at `n ∈ {10², 10³, 10⁴}`, 10⁵ replications per point, `bounds`.
    pub fn default_bounds() -> Self {
        Self::reference(vec![100, 1_000, 10_000], 100_000, vec![Check::Bounds])
    }
}
