//! The multi-dueling bandit (MDB) selection rule.
//!
//! Two optimistic bounds are kept per pair: the narrow `u_ij` (width `α`)
//! and the wide `v_ij` (width `βα`). `E` holds the arms whose narrow bounds
//! are all at least 1/2 and `F` the same under the wide bounds. A single
//! candidate in `E` is exploited alone; several candidates trigger a
//! comparison of all of `F`; an empty `E` compares every arm.

use alloc::format;
use alloc::vec::Vec;

use rand::RngCore;

use super::{all_arms, bound, DuelLog, Policy};
use crate::model::{ArmId, DuelOutcome, WinCountMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct MdbConfig {
    /// Width of the narrow confidence bound.
    pub alpha: f64,
    /// Widening factor of the second bound, `β ≥ 1`.
    pub beta: f64,
}

impl Default for MdbConfig {
    fn default() -> Self {
        MdbConfig { alpha: 0.5, beta: 1.5 }
    }
}

impl MdbConfig {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let c = MdbConfig { alpha, beta };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("MDB alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.beta >= 1.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!("MDB beta must be >= 1, got {}", self.beta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Membership {
    in_e: bool,
    in_f: bool,
    /// An opponent that pushed `i` out of `F`, if any.
    f_blocker: Option<usize>,
}

/// Classifies arm `i`, scanning opponents starting from `start`.
fn classify(wins: &WinCountMatrix, i: usize, ln_t: f64, cfg: &MdbConfig, start: usize) -> Membership {
    let k = wins.num_arms();
    let wide = cfg.beta * cfg.alpha;
    let mut in_e = true;
    for step in 0..k {
        let j = (start + step) % k;
        if j == i {
            continue;
        }
        let (a, b) = (ArmId(i), ArmId(j));
        let n = wins.comparisons(a, b);
        if n == 0 {
            continue;
        }
        let w = wins.wins(a, b);
        if bound(w, n, ln_t, wide) < 0.5 {
            return Membership {
                in_e: false,
                in_f: false,
                f_blocker: Some(j),
            };
        }
        if in_e && bound(w, n, ln_t, cfg.alpha) < 0.5 {
            in_e = false;
        }
    }
    Membership {
        in_e,
        in_f: true,
        f_blocker: None,
    }
}

/// The candidate sets `(E, F)` at round `t`.
pub fn candidate_sets(wins: &WinCountMatrix, t: u64, cfg: &MdbConfig) -> (Vec<ArmId>, Vec<ArmId>) {
    let ln_t = libm::log(t as f64);
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 0..wins.num_arms() {
        let m = classify(wins, i, ln_t, cfg, 0);
        if m.in_e {
            e.push(ArmId(i));
        }
        if m.in_f {
            f.push(ArmId(i));
        }
    }
    (e, f)
}

/// Applies the MDB branch rule to precomputed candidate sets.
pub fn mdb_choice(e: &[ArmId], f: &[ArmId], k: usize) -> Vec<ArmId> {
    match e.len() {
        0 => all_arms(k),
        1 => e.to_vec(),
        _ => f.to_vec(),
    }
}

/// Multi-dueling bandit policy state.
#[derive(Debug, Clone)]
pub struct Mdb {
    cfg: MdbConfig,
    log: DuelLog,
    /// Last opponent found to exclude each arm from `F`; checked first.
    hints: Vec<usize>,
}

impl Mdb {
    pub fn new(k: usize, cfg: MdbConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Mdb {
            cfg,
            log: DuelLog::new(k),
            hints: (0..k).map(|i| (i + 1) % k.max(1)).collect(),
        })
    }

    pub fn config(&self) -> &MdbConfig {
        &self.cfg
    }

    fn sets(&mut self, t: u64) -> (Vec<ArmId>, Vec<ArmId>) {
        let ln_t = libm::log(t as f64);
        let mut e = Vec::new();
        let mut f = Vec::new();
        for i in 0..self.log.wins.num_arms() {
            let m = classify(&self.log.wins, i, ln_t, &self.cfg, self.hints[i]);
            if let Some(j) = m.f_blocker {
                self.hints[i] = j;
            }
            if m.in_e {
                e.push(ArmId(i));
            }
            if m.in_f {
                f.push(ArmId(i));
            }
        }
        (e, f)
    }
}

impl Policy for Mdb {
    fn name(&self) -> &'static str {
        "MDB"
    }

    fn num_arms(&self) -> usize {
        self.log.wins.num_arms()
    }

    fn select(&mut self, t: u64, _rng: &mut dyn RngCore) -> Vec<ArmId> {
        let k = self.num_arms();
        let chosen = if t <= 1 {
            all_arms(k)
        } else {
            let (e, f) = self.sets(t);
            mdb_choice(&e, &f, k)
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

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ids(v: &[usize]) -> Vec<ArmId> {
        v.iter().copied().map(ArmId).collect()
    }

    #[test]
    fn unobserved_pairs_make_everyone_a_candidate() {
        let w = WinCountMatrix::new(5);
        let (e, f) = candidate_sets(&w, 50, &MdbConfig::default());
        assert_eq!(e, ids(&[0, 1, 2, 3, 4]));
        assert_eq!(f, e);
    }

    #[test]
    fn two_arm_narrow_versus_wide() {
        let w = WinCountMatrix::from_counts(2, vec![0, 10, 0, 0]).unwrap();
        let cfg = MdbConfig::new(0.5, 1.5).unwrap();
        let (e, f) = candidate_sets(&w, 100, &cfg);
        assert_eq!(e, ids(&[0]));
        assert_eq!(f, ids(&[0, 1]));
        // u_10 = 0.479853 < 1/2 <= v_10 = 0.587697
        let u10 = super::super::ucb(0, 10, 100, 0.5).unwrap();
        let v10 = super::super::ucb(0, 10, 100, 0.75).unwrap();
        assert!((u10 - 0.479_852_591_218_808).abs() < 1e-12);
        assert!((v10 - 0.587_697_000_119_2).abs() < 1e-12);
    }

    #[test]
    fn branch_rule() {
        assert_eq!(mdb_choice(&ids(&[3]), &ids(&[1, 3, 5]), 6), ids(&[3]));
        assert_eq!(mdb_choice(&ids(&[1, 3]), &ids(&[1, 3, 5]), 6), ids(&[1, 3, 5]));
        assert_eq!(mdb_choice(&[], &ids(&[2]), 3), ids(&[0, 1, 2]));
    }

    #[test]
    fn first_round_plays_everything() {
        let mut p = Mdb::new(4, MdbConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(p.select(1, &mut rng), ids(&[0, 1, 2, 3]));
    }

    #[test]
    fn exploitation_round_records_nothing() {
        let mut counts = vec![0u64; 9];
        counts[1] = 200;
        counts[2] = 200;
        let mut p = Mdb::new(3, MdbConfig::default()).unwrap();
        p.log.wins = WinCountMatrix::from_counts(3, counts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = p.select(100, &mut rng);
        assert_eq!(s, ids(&[0]));
        let before = p.wins().clone();
        p.observe(&[]).unwrap();
        assert_eq!(p.wins(), &before);
        let stray = [DuelOutcome::new(ArmId(0), ArmId(1))];
        assert!(matches!(p.observe(&stray), Err(Error::UnselectedArm { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(MdbConfig::new(0.0, 1.5).is_err());
        assert!(MdbConfig::new(0.5, 0.99).is_err());
        assert!(MdbConfig::new(0.5, 1.0).is_ok());
    }

    fn arb_counts() -> impl Strategy<Value = (usize, Vec<u64>)> {
        (2usize..8).prop_flat_map(|k| (Just(k), proptest::collection::vec(0u64..60, k * k)))
    }

    fn zero_diag(k: usize, mut c: Vec<u64>) -> WinCountMatrix {
        for i in 0..k {
            c[i * k + i] = 0;
        }
        WinCountMatrix::from_counts(k, c).unwrap()
    }

    proptest! {
        #[test]
        fn e_subset_of_f((k, c) in arb_counts(), t in 2u64..100_000, alpha in 0.1f64..2.0, beta in 1.0f64..4.0) {
            let w = zero_diag(k, c);
            let (e, f) = candidate_sets(&w, t, &MdbConfig::new(alpha, beta).unwrap());
            prop_assert!(e.iter().all(|a| f.contains(a)));
        }

        #[test]
        fn beta_one_makes_sets_equal((k, c) in arb_counts(), t in 2u64..100_000, alpha in 0.1f64..2.0) {
            let w = zero_diag(k, c);
            let (e, f) = candidate_sets(&w, t, &MdbConfig::new(alpha, 1.0).unwrap());
            prop_assert_eq!(e, f);
        }

        #[test]
        fn stateful_select_matches_sets((k, c) in arb_counts(), t in 2u64..10_000) {
            let w = zero_diag(k, c);
            let cfg = MdbConfig::default();
            let (e, f) = candidate_sets(&w, t, &cfg);
            let mut p = Mdb::new(k, cfg).unwrap();
            p.log.wins = w;
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            // twice, so the hint cache is exercised
            let first = p.select(t, &mut rng);
            let second = p.select(t, &mut rng);
            prop_assert_eq!(&first, &mdb_choice(&e, &f, k));
            prop_assert_eq!(&first, &second);
            prop_assert!(!first.is_empty());
            if e.len() == 1 {
                prop_assert_eq!(first, e);
            }
        }
    }
}
