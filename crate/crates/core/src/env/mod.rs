//! Comparison mechanisms: turn a selected arm set into resolved duels.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::model::{check_arm, ArmId, DuelOutcome};
use crate::{Error, Result};

mod ltr;
mod matrix;
mod synthetic;

pub use ltr::{LtrEnvironment, LtrRound};
pub use matrix::{margin_matrix, MatrixEnvironment};
pub use synthetic::{make_synthetic_dataset, UtilityEnvironment, SYNTHETIC_DATASETS};

/// Anything that can run one comparison round over a set of arms.
pub trait Environment: Send + Sync {
    fn num_arms(&self) -> usize;

    /// Resolves the duels of one round over `arms` (sorted, distinct).
    fn round(&self, arms: &[ArmId], rng: &mut dyn RngCore) -> Result<Vec<DuelOutcome>>;
}

/// Outcome of a comparison where `a` scored `sa` and `b` scored `sb`;
/// equal scores are settled by a fair coin.
pub(crate) fn resolve(a: ArmId, sa: f64, b: ArmId, sb: f64, rng: &mut dyn RngCore) -> DuelOutcome {
    let a_wins = if sa == sb { rng.random_bool(0.5) } else { sa > sb };
    if a_wins {
        DuelOutcome::new(a, b)
    } else {
        DuelOutcome::new(b, a)
    }
}

pub(crate) fn check_arms(arms: &[ArmId], k: usize) -> Result<()> {
    if arms.is_empty() {
        return Err(Error::Precondition("a round needs at least one arm".into()));
    }
    arms.iter().try_for_each(|&a| check_arm(a, k))
}

/// Fraction of arms in `arms` (other than `star`) whose empirical win rate
/// against `star` exceeds 1/2 after `rounds` full-set comparison rounds.
pub fn distortion_fraction<E: Environment + ?Sized>(
    env: &E,
    arms: &[ArmId],
    star: ArmId,
    rounds: u64,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    if arms.len() < 2 {
        return Err(Error::Precondition("distortion needs at least two arms".into()));
    }
    if !arms.contains(&star) {
        return Err(Error::Precondition("star must be among the compared arms".into()));
    }
    if rounds == 0 {
        return Err(Error::Precondition("distortion needs at least one round".into()));
    }
    let mut sorted = arms.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let k = env.num_arms();
    // [beats star, loses to star] per arm
    let mut tally = vec![[0u64; 2]; k];
    for _ in 0..rounds {
        for o in env.round(&sorted, rng)? {
            if o.loser == star {
                tally[o.winner.0][0] += 1;
            } else if o.winner == star {
                tally[o.loser.0][1] += 1;
            }
        }
    }
    let beaters = sorted
        .iter()
        .filter(|&&a| a != star)
        .filter(|&&a| {
            let [w, l] = tally[a.0];
            w + l > 0 && 2 * w > w + l
        })
        .count();
    Ok(beaters as f64 / (sorted.len() - 1) as f64)
}
