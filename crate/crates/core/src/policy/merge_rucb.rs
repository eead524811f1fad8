//! MergeRUCB: divide-and-conquer RUCB over small batches of arms.
//!
//! Arms are shuffled into batches of at most `batch_size`. Batches are
//! visited round-robin and the RUCB rule is applied within the current
//! batch. After each duel, arms whose bound against a batch-mate drops below
//! 1/2 are eliminated. Whenever the surviving arm count halves, batches are
//! merged pairwise (small with large); a batch left with a single arm is
//! folded into another batch straight away.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::RngCore;

use super::rucb::rucb_select;
use super::{all_arms, pair_bound, pair_selection, DuelLog, Policy};
use crate::model::{ArmId, DuelOutcome, WinCountMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct MergeRucbConfig {
    pub alpha: f64,
    pub batch_size: usize,
}

impl Default for MergeRucbConfig {
    fn default() -> Self {
        MergeRucbConfig {
            alpha: 1.01,
            batch_size: 4,
        }
    }
}

impl MergeRucbConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!(
                "MergeRUCB alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if self.batch_size < 2 {
            return Err(Error::Config(format!(
                "MergeRUCB batch size must be >= 2, got {}",
                self.batch_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MergeRucb {
    cfg: MergeRucbConfig,
    log: DuelLog,
    k: usize,
    batches: Vec<Vec<ArmId>>,
    cursor: usize,
    /// Surviving arm count at the last merge.
    stage_size: usize,
    /// Batch and round of the last pairwise duel, pruned on observe.
    pending: Option<(usize, u64)>,
}

impl MergeRucb {
    pub fn new(k: usize, cfg: MergeRucbConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(MergeRucb {
            cfg,
            log: DuelLog::new(k),
            k,
            batches: Vec::new(),
            cursor: 0,
            stage_size: k,
            pending: None,
        })
    }

    /// Current batches of surviving arms.
    pub fn batches(&self) -> &[Vec<ArmId>] {
        &self.batches
    }

    pub fn survivors(&self) -> usize {
        self.batches.iter().map(Vec::len).sum()
    }

    fn partition(&mut self, rng: &mut dyn RngCore) {
        let mut arms = all_arms(self.k);
        arms.shuffle(rng);
        self.batches = arms
            .chunks(self.cfg.batch_size)
            .map(|c| {
                let mut b = c.to_vec();
                b.sort_unstable();
                b
            })
            .collect();
    }

    /// Removes arms of `batch` confidently beaten by a batch-mate.
    fn prune(&mut self, batch: usize, t: u64) {
        let ln_t = libm::log(t as f64);
        let alpha = self.cfg.alpha;
        let wins = &self.log.wins;
        let members = &self.batches[batch];
        let keep: Vec<ArmId> = members
            .iter()
            .copied()
            .filter(|&i| members.iter().all(|&j| pair_bound(wins, i, j, ln_t, alpha) >= 0.5))
            .collect();
        if keep.is_empty() {
            // cyclic eliminations: keep the arm with the largest worst-case bound
            let best = members
                .iter()
                .copied()
                .max_by(|&a, &b| {
                    let worst = |i: ArmId| {
                        members
                            .iter()
                            .map(|&j| pair_bound(wins, i, j, ln_t, alpha))
                            .fold(f64::INFINITY, f64::min)
                    };
                    worst(a).total_cmp(&worst(b))
                })
                .expect("batch is non-empty");
            self.batches[batch] = alloc::vec![best];
        } else {
            self.batches[batch] = keep;
        }
        self.consolidate();
    }

    fn consolidate(&mut self) {
        if self.batches.len() > 1 && self.survivors() * 2 <= self.stage_size {
            self.batches.sort_by_key(Vec::len);
            let mut merged = Vec::with_capacity(self.batches.len().div_ceil(2));
            let (mut lo, mut hi) = (0usize, self.batches.len() - 1);
            while lo < hi {
                let mut b = core::mem::take(&mut self.batches[lo]);
                b.append(&mut self.batches[hi]);
                b.sort_unstable();
                merged.push(b);
                lo += 1;
                hi -= 1;
            }
            if lo == hi {
                merged.push(core::mem::take(&mut self.batches[lo]));
            }
            self.batches = merged;
            self.stage_size = self.survivors();
            self.cursor = 0;
        }
        while self.batches.len() > 1 {
            let Some(pos) = self.batches.iter().position(|b| b.len() == 1) else {
                break;
            };
            let lone = self.batches.remove(pos)[0];
            let target = (0..self.batches.len())
                .min_by_key(|&i| self.batches[i].len())
                .expect("at least one other batch");
            self.batches[target].push(lone);
            self.batches[target].sort_unstable();
        }
        if self.cursor >= self.batches.len() {
            self.cursor = 0;
        }
    }
}

impl Policy for MergeRucb {
    fn name(&self) -> &'static str {
        "MergeRUCB"
    }

    fn num_arms(&self) -> usize {
        self.k
    }

    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> Vec<ArmId> {
        if self.batches.is_empty() {
            self.partition(rng);
            self.consolidate();
        }
        self.pending = None;
        let chosen = if t <= 1 {
            all_arms(self.k)
        } else {
            let b = self.cursor;
            self.cursor = (self.cursor + 1) % self.batches.len();
            let members = &self.batches[b];
            if members.len() == 1 {
                members.clone()
            } else {
                let (c, d) = rucb_select(&self.log.wins, members, t, self.cfg.alpha, rng);
                self.pending = Some((b, t));
                pair_selection(c, d)
            }
        };
        self.log.mark(&chosen);
        chosen
    }

    fn observe(&mut self, outcomes: &[DuelOutcome]) -> Result<()> {
        self.log.record(outcomes)?;
        if let Some((b, t)) = self.pending.take() {
            if !outcomes.is_empty() {
                self.prune(b, t);
            }
        }
        Ok(())
    }

    fn wins(&self) -> &WinCountMatrix {
        &self.log.wins
    }
}
