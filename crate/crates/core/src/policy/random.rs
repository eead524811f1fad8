use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::{all_arms, DuelLog, Policy};
use crate::model::{ArmId, DuelOutcome, WinCountMatrix};
use crate::{Error, Result};

/// Uniform random subsets. A fixed `subset_size` draws subsets of that size;
/// `None` first draws the size uniformly from `1..=K`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct RandomConfig {
    pub subset_size: Option<usize>,
}

impl RandomConfig {
    pub fn validate(&self) -> Result<()> {
        if self.subset_size == Some(0) {
            return Err(Error::Config("random subset size must be >= 1".into()));
        }
        Ok(())
    }
}

/// Uniformly random `m`-subset of `K` arms, sorted.
pub fn random_select(k: usize, m: usize, rng: &mut dyn RngCore) -> Result<Vec<ArmId>> {
    if m == 0 || m > k {
        return Err(Error::Precondition(format!("subset size {m} not in 1..={k}")));
    }
    let mut s: Vec<ArmId> = rand::seq::index::sample(rng, k, m).into_iter().map(ArmId).collect();
    s.sort_unstable();
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct RandomPolicy {
    cfg: RandomConfig,
    log: DuelLog,
}

impl RandomPolicy {
    pub fn new(k: usize, cfg: RandomConfig) -> Result<Self> {
        cfg.validate()?;
        if let Some(m) = cfg.subset_size {
            if m > k {
                return Err(Error::Config(format!("random subset size {m} exceeds {k} arms")));
            }
        }
        Ok(RandomPolicy {
            cfg,
            log: DuelLog::new(k),
        })
    }
}

impl Policy for RandomPolicy {
    fn name(&self) -> &'static str {
        "Random"
    }

    fn num_arms(&self) -> usize {
        self.log.wins.num_arms()
    }

    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> Vec<ArmId> {
        let k = self.num_arms();
        let chosen = if t <= 1 {
            all_arms(k)
        } else {
            let m = self.cfg.subset_size.unwrap_or_else(|| rng.random_range(1..=k));
            random_select(k, m, rng).expect("size validated")
        };
        self.log.mark(&chosen);
        chosen
    }

    fn observe(&mut self, outcomes: &[DuelOutcome]) -> Result<()> {
        self.log.record(outcomes)
    }

    fn wins(&self) -> &WinCountMatrix {
        &self.log.wins
    }
}
