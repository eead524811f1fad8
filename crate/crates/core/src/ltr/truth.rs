//! Offline ground truth for ranker comparisons.

use alloc::vec::Vec;

use rand::RngCore;

use super::{LtrDataset, RankingTable};
use crate::env::{distortion_fraction, LtrEnvironment};
use crate::model::{ArmId, PreferenceMatrix};
use crate::multileave::{ndcg_at_k, ClickModel, PAGE_DEPTH};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub matrix: Option<PreferenceMatrix>,
    pub ndcg: Vec<f64>,
}

impl GroundTruth {
    /// Arm with the highest mean NDCG; the lowest index wins ties.
    pub fn ndcg_best(&self) -> Option<ArmId> {
        let mut best: Option<usize> = None;
        for (i, v) in self.ndcg.iter().enumerate() {
            if best.is_none_or(|b| *v > self.ndcg[b]) {
                best = Some(i);
            }
        }
        best.map(ArmId)
    }
}

/// Mean NDCG@10 per ranker over every query of `ds`.
pub fn ndcg_table(ds: &LtrDataset, table: &RankingTable) -> Vec<f64> {
    let n = ds.num_queries().max(1) as f64;
    (0..table.rankers().len())
        .map(|r| {
            ds.queries()
                .iter()
                .enumerate()
                .map(|(qi, q)| {
                    let all = q.grades();
                    let ranked: Vec<u8> = table
                        .list(qi, r)
                        .docs()
                        .iter()
                        .take(PAGE_DEPTH)
                        .map(|d| all[d.0 as usize])
                        .collect();
                    ndcg_at_k(&ranked, &all, PAGE_DEPTH)
                })
                .sum::<f64>()
                / n
        })
        .collect()
}

/// Fraction of `m` two-ranker rounds in which arm `i` beats arm `j`.
pub fn estimate_pair(env: &LtrEnvironment, i: ArmId, j: ArmId, m: u64, rng: &mut dyn RngCore) -> Result<f64> {
    if m == 0 {
        return Err(Error::Precondition("at least one sample per pair is required".into()));
    }
    let pair = if i < j { [i, j] } else { [j, i] };
    let mut wins = 0u64;
    for _ in 0..m {
        if env.ltr_round(&pair, rng)?.outcomes[0].winner == i {
            wins += 1;
        }
    }
    Ok(wins as f64 / m as f64)
}

/// Estimates every pair with `m` rounds each (pairs in row-major order of
/// the upper triangle) and computes the NDCG table.
pub fn estimate_ground_truth(
    ds: &LtrDataset,
    rankers: &[u32],
    model: &ClickModel,
    m: u64,
    rng: &mut dyn RngCore,
) -> Result<GroundTruth> {
    let env = LtrEnvironment::new(ds, rankers, model.clone())?;
    let k = rankers.len();
    let mut upper = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            upper.push(estimate_pair(&env, ArmId(i), ArmId(j), m, rng)?);
        }
    }
    let mut next = upper.into_iter();
    let matrix = PreferenceMatrix::from_upper(k, |_, _| next.next().expect("one estimate per pair"))?;
    Ok(GroundTruth {
        matrix: Some(matrix),
        ndcg: env.ndcg_table().to_vec(),
    })
}

/// Distortion of multileaved comparisons among `rankers` relative to `star`.
pub fn ltr_distortion_fraction(
    ds: &LtrDataset,
    rankers: &[u32],
    star: ArmId,
    model: &ClickModel,
    rounds: u64,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    let env = LtrEnvironment::new(ds, rankers, model.clone())?;
    let arms: Vec<ArmId> = (0..rankers.len()).map(ArmId).collect();
    distortion_fraction(&env, &arms, star, rounds, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltr::{generate_fixture, Document, FixtureSpec};
    use crate::multileave::ClickModelKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // feature 1 = grade, feature 2 = −grade, feature 3 = grade again
    fn graded(queries: u64) -> LtrDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut ds = LtrDataset::new();
        for q in 0..queries {
            for d in 0..12u32 {
                let g = ((d * 7 + q as u32) % 3) as u8;
                let noise = rand::Rng::random::<f64>(&mut rng) * 0.1;
                let v = g as f64 + noise;
                ds.push(q, Document::new(g, alloc::vec![(1, v), (2, -v), (3, v)]).unwrap());
            }
        }
        ds
    }

    #[test]
    fn grade_sorter_beats_reverse() {
        let ds = graded(10);
        let model = ClickModel::preset(ClickModelKind::Perfect, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let gt = estimate_ground_truth(&ds, &[1, 2], &model, 5000, &mut rng).unwrap();
        let p = gt.matrix.clone().unwrap();
        assert!(p.get(ArmId(0), ArmId(1)) >= 0.95);
        assert_eq!(p.get(ArmId(0), ArmId(1)) + p.get(ArmId(1), ArmId(0)), 1.0);
        assert_eq!(gt.ndcg[0], 1.0);
        assert_eq!(gt.ndcg_best(), Some(ArmId(0)));
    }

    #[test]
    fn identical_rankers_are_even() {
        let ds = graded(10);
        let model = ClickModel::preset(ClickModelKind::Navigational, 2).unwrap();
        let env = LtrEnvironment::new(&ds, &[1, 3], model).unwrap();
        let m = 20_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = estimate_pair(&env, ArmId(0), ArmId(1), m, &mut rng).unwrap();
        let sigma = (0.25 / m as f64).sqrt();
        assert!((p - 0.5).abs() <= 3.0 * sigma, "{p}");
        assert!(estimate_pair(&env, ArmId(0), ArmId(1), 0, &mut rng).is_err());
    }

    #[test]
    fn distortion_on_fixture_is_a_fraction() {
        let spec = FixtureSpec {
            queries: 10,
            features: 4,
            ..FixtureSpec::default()
        };
        let ds = generate_fixture(&spec, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let model = ClickModel::preset(ClickModelKind::Perfect, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = ltr_distortion_fraction(&ds, &[1, 2, 3, 4], ArmId(0), &model, 300, &mut rng).unwrap();
        assert!((0.0..=1.0).contains(&f));
        // the dominant ranker is not beaten under perfect clicks
        assert_eq!(f, 0.0);
    }
}
