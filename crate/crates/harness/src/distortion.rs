//! How often multileaved comparisons let other rankers beat the best one.

use anyhow::{bail, Context};
use mdb_core::env::{distortion_fraction, margin_matrix, Environment, LtrEnvironment, MatrixEnvironment};
use mdb_core::sim::RegretModel;
use mdb_core::ArmId;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{DistortionSpec, ExperimentConfig};
use crate::environment::{click_model, load_dataset, prepare, select_rankers};

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionRow {
    pub setting: String,
    /// Mean fraction over draws, one per subset size.
    pub fractions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionTable {
    pub subset_sizes: Vec<usize>,
    pub rows: Vec<DistortionRow>,
}

/// Draws a subset of `size` arms out of `k`. With `anchor`, the subset
/// always contains it.
fn draw_subset(k: usize, size: usize, anchor: Option<ArmId>, rng: &mut ChaCha8Rng) -> Vec<ArmId> {
    let mut arms: Vec<ArmId> = match anchor {
        Some(a) => {
            let mut s: Vec<ArmId> = sample(rng, k - 1, size - 1)
                .into_iter()
                .map(|i| ArmId(if i >= a.0 { i + 1 } else { i }))
                .collect();
            s.push(a);
            s
        }
        None => sample(rng, k, size).into_iter().map(ArmId).collect(),
    };
    arms.sort_unstable();
    arms
}

/// Mean distortion over `draws` subsets of `size` arms. `star_of` picks
/// the reference arm of a subset; `anchor` forces one arm into every draw.
#[allow(clippy::too_many_arguments)]
fn cell<E, S>(
    env: &E,
    size: usize,
    anchor: Option<ArmId>,
    star_of: S,
    draws: usize,
    rounds: u64,
    seed: u64,
    stream: u64,
) -> anyhow::Result<f64>
where
    E: Environment,
    S: Fn(&[ArmId]) -> ArmId + Sync,
{
    let k = env.num_arms();
    if size > k {
        bail!("subset size {size} exceeds the {k} available rankers");
    }
    let fractions = (0..draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream * draws as u64 + d as u64);
            let arms = draw_subset(k, size, anchor, &mut rng);
            let star = star_of(&arms);
            distortion_fraction(env, &arms, star, rounds, &mut rng)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(fractions.iter().sum::<f64>() / draws as f64)
}

/// One row per click model for LTR environments, otherwise a single row
/// for the configured (or surrogate) matrix environment. Rankers of an LTR
/// subset are judged against the subset's NDCG-best ranker; other
/// environments anchor every subset on the Condorcet winner.
pub fn distortion_report(cfg: &ExperimentConfig, spec: &DistortionSpec) -> anyhow::Result<DistortionTable> {
    let mut cfg = cfg.clone();
    cfg.distortion = Some(spec.clone());
    cfg.validate()?;
    let mut rows = Vec::new();
    if let Some(s) = spec.surrogate {
        let env = MatrixEnvironment::new(margin_matrix(s.arms, s.margin)?);
        let fractions = spec
            .subset_sizes
            .iter()
            .enumerate()
            .map(|(i, &size)| {
                cell(
                    &env,
                    size,
                    Some(ArmId(0)),
                    |_| ArmId(0),
                    spec.draws,
                    spec.rounds,
                    cfg.seed,
                    i as u64,
                )
            })
            .collect::<anyhow::Result<_>>()?;
        rows.push(DistortionRow {
            setting: format!("surrogate margin {}", s.margin),
            fractions,
        });
    } else if cfg.environment.is_ltr() {
        let ds = load_dataset(&cfg.environment)?.expect("LTR spec yields a dataset");
        for (m, &kind) in spec.click_models.iter().enumerate() {
            let model = click_model(kind, &ds)?;
            let rankers = select_rankers(&cfg.environment, &ds, &model, cfg.seed)?;
            let env = LtrEnvironment::new(&ds, &rankers, model)?;
            let ndcg = env.ndcg_table().to_vec();
            let best_of = |arms: &[ArmId]| {
                *arms
                    .iter()
                    .reduce(|a, b| if ndcg[b.0] > ndcg[a.0] { b } else { a })
                    .expect("subsets are non-empty")
            };
            let fractions = spec
                .subset_sizes
                .iter()
                .enumerate()
                .map(|(i, &size)| {
                    let stream = (m * spec.subset_sizes.len() + i) as u64;
                    cell(&env, size, None, best_of, spec.draws, spec.rounds, cfg.seed, stream)
                })
                .collect::<anyhow::Result<_>>()
                .with_context(|| format!("{} click model", kind.name()))?;
            rows.push(DistortionRow {
                setting: kind.name().to_string(),
                fractions,
            });
        }
    } else {
        let prepared = prepare(&cfg)?;
        let star = match prepared.regret {
            RegretModel::Condorcet { star, .. } => star,
            RegretModel::Ndcg { .. } => unreachable!("non-LTR environments use Condorcet regret"),
        };
        let fractions = spec
            .subset_sizes
            .iter()
            .enumerate()
            .map(|(i, &size)| {
                cell(
                    &prepared.env,
                    size,
                    Some(star),
                    |_| star,
                    spec.draws,
                    spec.rounds,
                    cfg.seed,
                    i as u64,
                )
            })
            .collect::<anyhow::Result<_>>()?;
        rows.push(DistortionRow {
            setting: "environment".to_string(),
            fractions,
        });
    }
    Ok(DistortionTable {
        subset_sizes: spec.subset_sizes.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchored_subsets_contain_anchor() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let s = draw_subset(10, 4, Some(ArmId(3)), &mut rng);
            assert_eq!(s.len(), 4);
            assert!(s.contains(&ArmId(3)));
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|a| a.0 < 10));
        }
        let s = draw_subset(5, 5, None, &mut rng);
        assert_eq!(s, (0..5).map(ArmId).collect::<Vec<_>>());
    }
}
