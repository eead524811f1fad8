//! The single-replicate simulation loop.

use alloc::format;
use alloc::vec::Vec;

use rand::RngCore;

use crate::env::Environment;
use crate::model::{ndcg_set_regret, set_regret, ArmId, PreferenceMatrix, RegretTrace};
use crate::policy::Policy;
use crate::{Error, Result};

/// How the regret of a selected set is measured.
#[derive(Debug, Clone, PartialEq)]
pub enum RegretModel {
    /// Mean preference of the Condorcet winner over the set, minus 1/2.
    Condorcet { matrix: PreferenceMatrix, star: ArmId },
    /// Mean NDCG shortfall of the set against the best ranker.
    Ndcg { table: Vec<f64> },
}

impl RegretModel {
    pub fn condorcet(matrix: PreferenceMatrix) -> Result<Self> {
        let star = matrix
            .condorcet_winner()
            .ok_or_else(|| Error::Precondition("preference matrix has no Condorcet winner".into()))?;
        Ok(RegretModel::Condorcet { matrix, star })
    }

    pub fn num_arms(&self) -> usize {
        match self {
            RegretModel::Condorcet { matrix, .. } => matrix.num_arms(),
            RegretModel::Ndcg { table } => table.len(),
        }
    }

    /// The arm whose singleton has zero regret.
    pub fn best_arm(&self) -> Option<ArmId> {
        match self {
            RegretModel::Condorcet { star, .. } => Some(*star),
            RegretModel::Ndcg { table } => {
                let mut best: Option<usize> = None;
                for (i, v) in table.iter().enumerate() {
                    if best.is_none_or(|b| *v > table[b]) {
                        best = Some(i);
                    }
                }
                best.map(ArmId)
            }
        }
    }

    pub fn regret(&self, set: &[ArmId]) -> Result<f64> {
        match self {
            RegretModel::Condorcet { matrix, star } => set_regret(matrix, *star, set),
            RegretModel::Ndcg { table } => ndcg_set_regret(table, set),
        }
    }
}

/// Which rounds get a trace point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum Cadence {
    /// `1, ⌈r⌉, ⌈r²⌉, …` deduplicated, plus the horizon.
    Geometric { ratio: f64 },
    /// Every `interval` rounds, plus the horizon.
    Every { interval: u64 },
}

impl Default for Cadence {
    fn default() -> Self {
        Cadence::Geometric { ratio: 1.3 }
    }
}

impl Cadence {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Cadence::Geometric { ratio } if !(ratio > 1.0 && ratio.is_finite()) => Err(Error::Config(format!(
                "geometric cadence ratio must exceed 1, got {ratio}"
            ))),
            Cadence::Every { interval: 0 } => Err(Error::Config("cadence interval must be positive".into())),
            _ => Ok(()),
        }
    }

    /// Sorted checkpoint rounds within `1..=horizon`.
    pub fn checkpoints(&self, horizon: u64) -> Result<Vec<u64>> {
        self.validate()?;
        let mut out = Vec::new();
        if horizon == 0 {
            return Ok(out);
        }
        match *self {
            Cadence::Geometric { ratio } => {
                let mut x = 1.0f64;
                while x <= horizon as f64 {
                    let t = libm::ceil(x) as u64;
                    if out.last() != Some(&t) {
                        out.push(t);
                    }
                    x *= ratio;
                }
            }
            Cadence::Every { interval } => out.extend((interval..=horizon).step_by(interval as usize)),
        }
        if out.last() != Some(&horizon) {
            out.push(horizon);
        }
        Ok(out)
    }
}

/// Result of one policy run. `error` is set when the run stopped early;
/// the trace then covers the completed rounds only.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub trace: RegretTrace,
    pub error: Option<Error>,
}

impl ReplicateOutcome {
    pub fn is_valid(&self) -> bool {
        self.error.is_none()
    }
}

/// Plays `policy` against `env` for rounds `1..=horizon`. The environment
/// and the policy draw from separate streams. `on_round` sees every
/// selected set.
#[allow(clippy::too_many_arguments)]
pub fn run_replicate<E, F>(
    policy: &mut dyn Policy,
    env: &E,
    regret: &RegretModel,
    horizon: u64,
    checkpoints: &[u64],
    env_rng: &mut dyn RngCore,
    policy_rng: &mut dyn RngCore,
    mut on_round: F,
) -> ReplicateOutcome
where
    E: Environment + ?Sized,
    F: FnMut(u64, &[ArmId]),
{
    let mut trace = RegretTrace::new();
    let mut next = checkpoints.iter().peekable();
    for t in 1..=horizon {
        let set = policy.select(t, policy_rng);
        let step = env
            .round(&set, env_rng)
            .and_then(|outcomes| policy.observe(&outcomes))
            .and_then(|()| regret.regret(&set));
        let r = match step {
            Ok(r) => r,
            Err(e) => {
                log::warn!("{} stopped at round {t}: {e}", policy.name());
                return ReplicateOutcome { trace, error: Some(e) };
            }
        };
        while next.peek().is_some_and(|&&c| c < t) {
            next.next();
        }
        let log = next.peek().is_some_and(|&&c| c == t);
        trace.push(r, log);
        on_round(t, &set);
    }
    ReplicateOutcome { trace, error: None }
}
