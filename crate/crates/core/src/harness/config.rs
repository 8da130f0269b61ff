//! Sweep configuration: JSON file, validation, and the run manifest.

use crate::attack::{AttackParams, StartPolicy};
use crate::group::{GroupContext, GroupKind};
use crate::meanset::DescentParams;
use crate::protocol::{ChallengeMode, KeygenMode};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

fn default_group() -> GroupKind {
    GroupKind::Braid
}
fn default_n() -> u32 {
    5
}
fn default_l_grid() -> Vec<u32> {
    vec![10]
}
fn default_k_grid() -> Vec<u32> {
    vec![10, 20, 40, 80, 160]
}
fn default_trials() -> u32 {
    50
}
fn default_keygen() -> KeygenMode {
    KeygenMode::Classical
}
fn default_challenge() -> ChallengeMode {
    ChallengeMode::Balanced
}
fn default_start() -> StartPolicy {
    StartPolicy::MinWeightSample
}
fn default_delta_directions() -> bool {
    true
}
fn default_node_budget() -> u64 {
    1_000_000
}
fn default_work_budget() -> u64 {
    50_000_000
}
fn default_seed() -> u64 {
    1
}

/// One sweep: a grid of (L, k) cells, T trials each, all derived from one
/// master seed. Serialized as camelCase JSON; every field has a default, so
/// `{}` is a valid config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_group")]
    pub group: GroupKind,
    /// Strand count for braids, rank otherwise.
    #[serde(default = "default_n")]
    pub n: u32,
    /// Key lengths: letters (classical) or permutation-braid factors
    /// (alternative).
    #[serde(rename = "L", default = "default_l_grid")]
    pub l_grid: Vec<u32>,
    /// Protocol round counts.
    #[serde(rename = "k", default = "default_k_grid")]
    pub k_grid: Vec<u32>,
    #[serde(default = "default_trials")]
    pub trials: u32,
    #[serde(default = "default_keygen")]
    pub keygen: KeygenMode,
    #[serde(default = "default_challenge")]
    pub challenge: ChallengeMode,
    #[serde(default = "default_start")]
    pub start: StartPolicy,
    /// Cap on accepted descent steps; absent = 10 * (avg length + n).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    /// Include Δ, Δ^-1 as extra braid descent directions.
    #[serde(default = "default_delta_directions")]
    pub delta_directions: bool,
    /// Conjugate-and-reduce passes in the braid length approximation.
    #[serde(default)]
    pub conjugation_passes: u32,
    /// Shorten accepted descent points (see the group context flag).
    #[serde(default)]
    pub settle_points: bool,
    /// Shorten sample words before descent.
    #[serde(default)]
    pub shorten_samples: bool,
    /// Error-ball radius for attack2; 0 = plain mean-set attack.
    #[serde(rename = "kErr", default)]
    pub k_err: u32,
    /// Enumeration cap for the error ball.
    #[serde(default = "default_node_budget")]
    pub node_budget: u64,
    /// Per-trial budget in distance evaluations (the deterministic stand-in
    /// for a wall-clock timeout; reproducible across machines).
    #[serde(default = "default_work_budget")]
    pub work_budget: u64,
    /// Optional per-trial wall-clock backstop. Non-deterministic by nature;
    /// off by default so reruns stay bit-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial_timeout_ms: Option<u64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Output directory for results.csv / results.md / trials.jsonl /
    /// run-manifest.json.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config uses defaults")
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let n_floor = match self.group {
            GroupKind::Braid => 3,
            _ => 1,
        };
        if self.n < n_floor {
            return Err(Error::Config(format!(
                "n={} too small for {:?} (need at least {n_floor})",
                self.n, self.group
            )));
        }
        if self.keygen == KeygenMode::Alternative && self.group != GroupKind::Braid {
            return Err(Error::Config(
                "alternative keygen needs a braid context".into(),
            ));
        }
        for (name, grid) in [("L", &self.l_grid), ("k", &self.k_grid)] {
            if grid.is_empty() {
                return Err(Error::Config(format!("{name} grid is empty")));
            }
            if grid.iter().any(|&v| v == 0) {
                return Err(Error::Config(format!("{name} grid contains 0")));
            }
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.node_budget == 0 || self.work_budget == 0 {
            return Err(Error::Config("budgets must be positive".into()));
        }
        if self.max_steps == Some(0) {
            return Err(Error::Config("maxSteps must be positive".into()));
        }
        Ok(())
    }

    pub fn context(&self) -> Result<GroupContext> {
        self.validate()?;
        Ok(GroupContext::from_kind(self.group, self.n)?
            .with_delta_directions(self.delta_directions)
            .with_conjugation_passes(self.conjugation_passes)
            .with_settle_points(self.settle_points))
    }

    pub fn attack_params(&self) -> AttackParams {
        AttackParams {
            descent: DescentParams {
                max_steps: self.max_steps,
                trace: false,
            },
            start: self.start,
            shorten_samples: self.shorten_samples,
            node_budget: self.node_budget,
        }
    }
}

/// Echo of the config plus provenance, written next to the results. A
/// manifest is itself a valid input to `load_config`, so a sweep can be
/// rerun from its own output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub package: String,
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
}

impl RunManifest {
    pub fn for_config(config: &ExperimentConfig) -> Self {
        RunManifest {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.clone(),
        }
    }
}

/// Parse a config from JSON text; accepts either a bare ExperimentConfig or
/// a run manifest wrapping one.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let config = if value.get("config").is_some() {
        serde_json::from_value::<RunManifest>(value)?.config
    } else {
        serde_json::from_value(value)?
    };
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}
