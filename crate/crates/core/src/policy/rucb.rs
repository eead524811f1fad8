//! Relative upper confidence bound (RUCB) dueling bandit.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::{all_arms, argmax_random, pair_bound, pair_selection, DuelLog, Policy};
use crate::model::{ArmId, DuelOutcome, WinCountMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct RucbConfig {
    pub alpha: f64,
}

impl Default for RucbConfig {
    fn default() -> Self {
        RucbConfig { alpha: 0.51 }
    }
}

impl RucbConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha > 0.0 && self.alpha.is_finite() {
            Ok(())
        } else {
            Err(Error::Config(format!("RUCB alpha must be > 0, got {}", self.alpha)))
        }
    }
}

/// Members `i` of `members` with `u_ij(t) ≥ 1/2` for every other member `j`.
pub fn rucb_champion_candidates(wins: &WinCountMatrix, members: &[ArmId], ln_t: f64, alpha: f64) -> Vec<ArmId> {
    members
        .iter()
        .copied()
        .filter(|&i| {
            members
                .iter()
                .all(|&j| j == i || pair_bound(wins, i, j, ln_t, alpha) >= 0.5)
        })
        .collect()
}

/// Champion/challenger rule restricted to `members`.
///
/// The champion is uniform over the candidates (all members if there are
/// none). The challenger maximises `u_jc` over all members, where
/// `u_cc = 1/2`; it equals the champion once every rival is confidently
/// beaten, in which case the champion is played alone.
pub fn rucb_select(
    wins: &WinCountMatrix,
    members: &[ArmId],
    t: u64,
    alpha: f64,
    rng: &mut dyn RngCore,
) -> (ArmId, ArmId) {
    debug_assert!(!members.is_empty());
    let ln_t = libm::log(t as f64);
    let mut candidates = rucb_champion_candidates(wins, members, ln_t, alpha);
    if candidates.is_empty() {
        candidates = members.to_vec();
    }
    let champion = candidates[rng.random_range(0..candidates.len())];
    let challenger = argmax_random(rng, members.iter().copied(), |j| {
        pair_bound(wins, j, champion, ln_t, alpha)
    })
    .expect("members is non-empty");
    (champion, challenger)
}

#[derive(Debug, Clone)]
pub struct Rucb {
    cfg: RucbConfig,
    log: DuelLog,
    arms: Vec<ArmId>,
}

impl Rucb {
    pub fn new(k: usize, cfg: RucbConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Rucb {
            cfg,
            log: DuelLog::new(k),
            arms: all_arms(k),
        })
    }
}

impl Policy for Rucb {
    fn name(&self) -> &'static str {
        "RUCB"
    }

    fn num_arms(&self) -> usize {
        self.arms.len()
    }

    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> Vec<ArmId> {
        let chosen = if t <= 1 {
            self.arms.clone()
        } else {
            let (c, d) = rucb_select(&self.log.wins, &self.arms, t, self.cfg.alpha, rng);
            pair_selection(c, d)
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
