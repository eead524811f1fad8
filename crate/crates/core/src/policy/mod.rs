//! Arm-selection algorithms behind a common select/observe contract.
//!
//! Every policy owns its [`WinCountMatrix`]. Round `t` starts at 1 and is the
//! global round counter used in the `ln t` confidence radius. At `t = 1`
//! every policy plays the full arm set so that each pair is observed once.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore};

use crate::model::{check_arm, ArmId, DuelOutcome, WinCountMatrix};
use crate::{Error, Result};

mod mdb;
mod merge_rucb;
mod random;
mod rmed;
mod rucb;

pub use mdb::{candidate_sets, mdb_choice, Mdb, MdbConfig};
pub use merge_rucb::{MergeRucb, MergeRucbConfig};
pub use random::{random_select, RandomConfig, RandomPolicy};
pub use rmed::{rmed_candidates, rmed_divergence, rmed_f, Rmed1, RmedConfig};
pub use rucb::{rucb_champion_candidates, rucb_select, Rucb, RucbConfig};

/// A (multi-)dueling bandit algorithm.
pub trait Policy: Send + fmt::Debug {
    /// Short display name, e.g. `"MDB"`.
    fn name(&self) -> &'static str;

    fn num_arms(&self) -> usize;

    /// Chooses the arm set `S_t` for round `t` (1-based). The result is
    /// sorted, duplicate-free and never empty.
    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> Vec<ArmId>;

    /// Feeds back the duels resolved among the arms of the last selection.
    fn observe(&mut self, outcomes: &[DuelOutcome]) -> Result<()>;

    fn wins(&self) -> &WinCountMatrix;
}

/// Upper confidence bound `w/n + sqrt(width · ln t / n)`; `+∞` when `n = 0`.
pub fn ucb(w: u64, n: u64, t: u64, width: f64) -> Result<f64> {
    if !width.is_finite() || width <= 0.0 {
        return Err(Error::Config(format!("confidence width must be > 0, got {width}")));
    }
    Ok(bound(w, n, libm::log(t as f64), width))
}

#[inline]
pub(crate) fn bound(w: u64, n: u64, ln_t: f64, width: f64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let n = n as f64;
    w as f64 / n + libm::sqrt(width * ln_t / n)
}

/// `u_ij(t)` from a win matrix, with `u_ii = 1/2`.
#[inline]
pub(crate) fn pair_bound(wins: &WinCountMatrix, i: ArmId, j: ArmId, ln_t: f64, width: f64) -> f64 {
    if i == j {
        0.5
    } else {
        bound(wins.wins(i, j), wins.comparisons(i, j), ln_t, width)
    }
}

/// Uniform choice over the maximisers of `key`.
pub(crate) fn argmax_random<I, F>(rng: &mut dyn RngCore, items: I, mut key: F) -> Option<ArmId>
where
    I: IntoIterator<Item = ArmId>,
    F: FnMut(ArmId) -> f64,
{
    let mut best = None;
    let mut best_val = f64::NEG_INFINITY;
    let mut ties = 0u32;
    for a in items {
        let v = key(a);
        if best.is_none() || v > best_val {
            best = Some(a);
            best_val = v;
            ties = 1;
        } else if v == best_val {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                best = Some(a);
            }
        }
    }
    best
}

pub(crate) fn argmin_random<I, F>(rng: &mut dyn RngCore, items: I, mut key: F) -> Option<ArmId>
where
    I: IntoIterator<Item = ArmId>,
    F: FnMut(ArmId) -> f64,
{
    argmax_random(rng, items, |a| -key(a))
}

pub(crate) fn all_arms(k: usize) -> Vec<ArmId> {
    (0..k).map(ArmId).collect()
}

pub(crate) fn pair_selection(a: ArmId, b: ArmId) -> Vec<ArmId> {
    match a.cmp(&b) {
        core::cmp::Ordering::Less => vec![a, b],
        core::cmp::Ordering::Greater => vec![b, a],
        core::cmp::Ordering::Equal => vec![a],
    }
}

/// Win counts plus the membership mask of the most recent selection.
#[derive(Debug, Clone)]
pub(crate) struct DuelLog {
    pub(crate) wins: WinCountMatrix,
    selected: Vec<bool>,
}

impl DuelLog {
    pub(crate) fn new(k: usize) -> Self {
        DuelLog {
            wins: WinCountMatrix::new(k),
            selected: vec![false; k],
        }
    }

    pub(crate) fn mark(&mut self, selection: &[ArmId]) {
        self.selected.iter_mut().for_each(|s| *s = false);
        for a in selection {
            self.selected[a.0] = true;
        }
    }

    /// Validates that every outcome involves selected arms, then records.
    pub(crate) fn record(&mut self, outcomes: &[DuelOutcome]) -> Result<()> {
        let k = self.wins.num_arms();
        for o in outcomes {
            check_arm(o.winner, k)?;
            check_arm(o.loser, k)?;
            if !self.selected[o.winner.0] || !self.selected[o.loser.0] {
                return Err(Error::UnselectedArm {
                    winner: o.winner.0,
                    loser: o.loser.0,
                });
            }
        }
        self.wins.record_duels(outcomes)
    }
}

/// Declarative description of a policy and its parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum PolicyConfig {
    Mdb(MdbConfig),
    Rucb(RucbConfig),
    Rmed1(RmedConfig),
    MergeRucb(MergeRucbConfig),
    Random(RandomConfig),
}

impl PolicyConfig {
    pub fn name(&self) -> &'static str {
        match self {
            PolicyConfig::Mdb(_) => "MDB",
            PolicyConfig::Rucb(_) => "RUCB",
            PolicyConfig::Rmed1(_) => "RMED1",
            PolicyConfig::MergeRucb(_) => "MergeRUCB",
            PolicyConfig::Random(_) => "Random",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PolicyConfig::Mdb(c) => c.validate(),
            PolicyConfig::Rucb(c) => c.validate(),
            PolicyConfig::Rmed1(c) => c.validate(),
            PolicyConfig::MergeRucb(c) => c.validate(),
            PolicyConfig::Random(c) => c.validate(),
        }
    }

    /// Instantiates the policy for `k` arms.
    pub fn build(&self, k: usize) -> Result<Box<dyn Policy>> {
        if k == 0 {
            return Err(Error::Config("a policy needs at least one arm".into()));
        }
        Ok(match self {
            PolicyConfig::Mdb(c) => Box::new(Mdb::new(k, *c)?),
            PolicyConfig::Rucb(c) => Box::new(Rucb::new(k, *c)?),
            PolicyConfig::Rmed1(c) => Box::new(Rmed1::new(k, *c)?),
            PolicyConfig::MergeRucb(c) => Box::new(MergeRucb::new(k, *c)?),
            PolicyConfig::Random(c) => Box::new(RandomPolicy::new(k, *c)?),
        })
    }
}
