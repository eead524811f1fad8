//! Relative minimum empirical divergence (RMED1).
//!
//! Each arm `i` carries the empirical divergence
//! `I_i = Σ_{j: p̂_ij ≤ 1/2} n_ij · d(p̂_ij, 1/2)`, the log-likelihood that it
//! is the Condorcet winner. Arms with `I_i ≤ ln t + f(K)` stay in the
//! candidate set `J(t)`, which is visited in cycles; each visited arm duels
//! the arm most likely to beat it.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use rand::RngCore;

use super::{all_arms, argmin_random, pair_selection, DuelLog, Policy};
use crate::math::binary_kl;
use crate::model::{ArmId, DuelOutcome, WinCountMatrix};
use crate::{Error, Result};

/// `f(K) = 0.3 K^1.01`.
pub fn rmed_f(k: usize) -> f64 {
    0.3 * libm::pow(k as f64, 1.01)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct RmedConfig {
    /// Overrides `f(K)`; `None` uses [`rmed_f`].
    pub f_of_k: Option<f64>,
}

impl RmedConfig {
    pub fn validate(&self) -> Result<()> {
        match self.f_of_k {
            Some(f) if !(f >= 0.0 && f.is_finite()) => Err(Error::Config(format!("RMED1 f(K) must be >= 0, got {f}"))),
            _ => Ok(()),
        }
    }

    pub fn resolve(&self, k: usize) -> f64 {
        self.f_of_k.unwrap_or_else(|| rmed_f(k))
    }
}

/// Empirical divergence `I_i(t)` of arm `i`.
pub fn rmed_divergence(wins: &WinCountMatrix, i: ArmId) -> f64 {
    (0..wins.num_arms())
        .map(ArmId)
        .filter(|&j| j != i)
        .map(|j| {
            let n = wins.comparisons(i, j);
            if n == 0 {
                return 0.0;
            }
            let p = wins.wins(i, j) as f64 / n as f64;
            if p <= 0.5 {
                n as f64 * binary_kl(p, 0.5)
            } else {
                0.0
            }
        })
        .sum()
}

/// `J(t) = {i : I_i ≤ ln t + f(K)}` given cached divergences.
pub fn rmed_candidates(divergences: &[f64], t: u64, f_of_k: f64) -> Vec<ArmId> {
    let threshold = libm::log(t as f64) + f_of_k;
    divergences
        .iter()
        .enumerate()
        .filter(|(_, &d)| d <= threshold)
        .map(|(i, _)| ArmId(i))
        .collect()
}

#[derive(Debug, Clone)]
pub struct Rmed1 {
    f_of_k: f64,
    log: DuelLog,
    divergence: Vec<f64>,
    queue: VecDeque<ArmId>,
}

impl Rmed1 {
    pub fn new(k: usize, cfg: RmedConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Rmed1 {
            f_of_k: cfg.resolve(k),
            log: DuelLog::new(k),
            divergence: alloc::vec![0.0; k],
            queue: VecDeque::new(),
        })
    }

    pub fn f_of_k(&self) -> f64 {
        self.f_of_k
    }

    pub fn divergences(&self) -> &[f64] {
        &self.divergence
    }

    fn opponent(&self, l: ArmId, rng: &mut dyn RngCore) -> ArmId {
        let wins = &self.log.wins;
        let k = wins.num_arms();
        let best = argmin_random(rng, all_arms(k), |i| self.divergence[i.0]).expect("at least one arm");
        let mut beaten_by_any = false;
        let mut best_beats_l = false;
        for j in (0..k).map(ArmId).filter(|&j| j != l) {
            if wins.empirical(l, j) <= 0.5 {
                beaten_by_any = true;
                best_beats_l |= j == best;
            }
        }
        if !beaten_by_any || best_beats_l {
            // undefeated arms face the empirical best, which may be `l` itself
            best
        } else {
            argmin_random(rng, (0..k).map(ArmId).filter(|&j| j != l), |j| wins.empirical(l, j))
                .expect("at least two arms")
        }
    }
}

impl Policy for Rmed1 {
    fn name(&self) -> &'static str {
        "RMED1"
    }

    fn num_arms(&self) -> usize {
        self.divergence.len()
    }

    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> Vec<ArmId> {
        let k = self.num_arms();
        let chosen = if t <= 1 || k == 1 {
            all_arms(k)
        } else {
            if self.queue.is_empty() {
                let mut next = rmed_candidates(&self.divergence, t, self.f_of_k);
                if next.is_empty() {
                    let best = argmin_random(rng, all_arms(k), |i| self.divergence[i.0]);
                    next.extend(best);
                }
                self.queue.extend(next);
            }
            let l = self.queue.pop_front().expect("queue refilled above");
            let m = self.opponent(l, rng);
            pair_selection(l, m)
        };
        self.log.mark(&chosen);
        chosen
    }

    fn observe(&mut self, outcomes: &[DuelOutcome]) -> Result<()> {
        self.log.record(outcomes)?;
        let mut touched = alloc::vec![false; self.num_arms()];
        for o in outcomes {
            touched[o.winner.0] = true;
            touched[o.loser.0] = true;
        }
        for (i, _) in touched.iter().enumerate().filter(|(_, &t)| t) {
            self.divergence[i] = rmed_divergence(&self.log.wins, ArmId(i));
        }
        Ok(())
    }

    fn wins(&self) -> &WinCountMatrix {
        &self.log.wins
    }
}
