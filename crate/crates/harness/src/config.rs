//! Experiment configuration (TOML).

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use mdb_core::ltr::FixtureSpec;
use mdb_core::multileave::ClickModelKind;
use mdb_core::policy::PolicyConfig;
use mdb_core::sim::Cadence;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    /// One Gaussian score per arm and round.
    #[default]
    Gaussian,
    /// Independent Bernoulli draw per pair from the induced matrix.
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegretMode {
    Condorcet,
    Ndcg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    /// A named utility dataset.
    Synthetic {
        name: String,
        #[serde(default)]
        mechanism: Mechanism,
    },
    /// Explicit utilities.
    Utilities {
        utilities: Vec<f64>,
        #[serde(default)]
        mechanism: Mechanism,
    },
    /// A preference matrix, inline or from a whitespace-separated file.
    Matrix {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<Vec<Vec<f64>>>,
    },
    /// A LETOR file with one ranker per listed feature (all features when omitted).
    Ltr {
        path: PathBuf,
        click_model: ClickModelKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        features: Option<Vec<u32>>,
        #[serde(default = "default_ground_truth_samples")]
        ground_truth_samples: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subset: Option<RankerSubset>,
    },
    /// A generated LETOR fixture.
    Fixture {
        click_model: ClickModelKind,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        fixture: FixtureSpec,
        #[serde(default = "default_ground_truth_samples")]
        ground_truth_samples: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subset: Option<RankerSubset>,
    },
}

fn default_ground_truth_samples() -> u64 {
    10_000
}

/// Subset sizes of the ranker scaling study.
pub const SCALING_SUBSET_SIZES: [usize; 10] = [10, 25, 40, 55, 70, 85, 100, 115, 130, 145];

/// Restricts an LTR environment to a random subset of its rankers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankerSubset {
    pub size: usize,
    /// Seed of the subset draws, independent of the experiment seed.
    #[serde(default)]
    pub seed: u64,
    /// Keep the first draw whose estimated preferences have a Condorcet winner.
    #[serde(default)]
    pub require_condorcet: bool,
    #[serde(default = "default_max_draws")]
    pub max_draws: u64,
}

fn default_max_draws() -> u64 {
    100
}

impl EnvironmentSpec {
    pub fn is_ltr(&self) -> bool {
        matches!(self, EnvironmentSpec::Ltr { .. } | EnvironmentSpec::Fixture { .. })
    }

    pub fn subset(&self) -> Option<&RankerSubset> {
        match self {
            EnvironmentSpec::Ltr { subset, .. } | EnvironmentSpec::Fixture { subset, .. } => subset.as_ref(),
            _ => None,
        }
    }
}

/// A policy with an optional display label (defaults to the policy name).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub policy: PolicyConfig,
}

impl PolicyEntry {
    pub fn new(policy: PolicyConfig) -> Self {
        PolicyEntry { label: None, policy }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.policy.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            alphas: vec![0.5, 1.0, 1.5],
            betas: vec![1.25, 1.5, 2.0, 4.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurrogateSpec {
    pub arms: usize,
    pub margin: f64,
}

impl Default for SurrogateSpec {
    fn default() -> Self {
        SurrogateSpec { arms: 20, margin: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistortionSpec {
    pub subset_sizes: Vec<usize>,
    /// Click models for LTR environments; ignored by the surrogate.
    pub click_models: Vec<ClickModelKind>,
    pub draws: usize,
    pub rounds: u64,
    /// Use a margin matrix instead of the configured environment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surrogate: Option<SurrogateSpec>,
}

impl Default for DistortionSpec {
    fn default() -> Self {
        DistortionSpec {
            subset_sizes: vec![3, 10],
            click_models: ClickModelKind::ALL.to_vec(),
            draws: 30,
            rounds: 3000,
            surrogate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub policies: Vec<PolicyEntry>,
    pub horizon: u64,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Defaults to `ndcg` for LTR environments and `condorcet` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regret: Option<RegretMode>,
    #[serde(default)]
    pub cadence: Cadence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion: Option<DistortionSpec>,
}

fn default_replicates() -> u64 {
    10
}

impl ExperimentConfig {
    pub fn new(environment: EnvironmentSpec, policies: Vec<PolicyEntry>, horizon: u64) -> Self {
        ExperimentConfig {
            environment,
            policies,
            horizon,
            replicates: default_replicates(),
            seed: 0,
            output: None,
            regret: None,
            cadence: Cadence::default(),
            sweep: None,
            distortion: None,
        }
    }

    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Loads `path`; relative data paths are resolved against its directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        match &mut cfg.environment {
            EnvironmentSpec::Matrix { path: Some(p), .. } | EnvironmentSpec::Ltr { path: p, .. }
                if p.is_relative() && p != Path::new("-") =>
            {
                *p = base.join(&*p);
            }
            _ => {}
        }
        Ok(cfg)
    }

    pub fn regret_mode(&self) -> RegretMode {
        self.regret.unwrap_or(if self.environment.is_ltr() {
            RegretMode::Ndcg
        } else {
            RegretMode::Condorcet
        })
    }

    /// Checks everything that can be checked without loading data.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.horizon == 0 {
            bail!("horizon must be at least 1");
        }
        if self.replicates == 0 {
            bail!("replicates must be at least 1");
        }
        for p in &self.policies {
            p.policy.validate().with_context(|| format!("policy {}", p.label()))?;
        }
        let mut labels: Vec<&str> = self.policies.iter().map(PolicyEntry::label).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            bail!("policy label `{}` used twice; set distinct labels", w[0]);
        }
        self.cadence.validate()?;
        if self.regret_mode() == RegretMode::Ndcg && !self.environment.is_ltr() {
            bail!("ndcg regret needs an LTR environment");
        }
        match &self.environment {
            EnvironmentSpec::Matrix { path, rows } if path.is_some() == rows.is_some() => {
                bail!("matrix environment needs exactly one of `path` and `rows`")
            }
            EnvironmentSpec::Ltr {
                ground_truth_samples: 0,
                ..
            }
            | EnvironmentSpec::Fixture {
                ground_truth_samples: 0,
                ..
            } => {
                bail!("ground_truth_samples must be at least 1")
            }
            _ => {}
        }
        if let Some(s) = self.environment.subset() {
            if s.size < 2 || s.max_draws == 0 {
                bail!("ranker subsets need at least 2 rankers and 1 draw");
            }
        }
        if let Some(s) = &self.sweep {
            if s.alphas.is_empty() || s.betas.is_empty() {
                bail!("sweep grid must not be empty");
            }
        }
        if let Some(d) = &self.distortion {
            if d.draws == 0 || d.rounds == 0 || d.subset_sizes.is_empty() {
                bail!("distortion needs draws, rounds and subset sizes");
            }
            if let Some(&s) = d.subset_sizes.iter().find(|&&s| s < 2) {
                bail!("distortion subset size {s} must be at least 2");
            }
        }
        Ok(())
    }
}
