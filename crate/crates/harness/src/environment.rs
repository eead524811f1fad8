//! Turns an [`EnvironmentSpec`] into a live environment and regret model.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use mdb_core::env::{Environment, LtrEnvironment, MatrixEnvironment, UtilityEnvironment};
use mdb_core::ltr::{estimate_pair, generate_fixture, LtrDataset};
use mdb_core::multileave::{ClickModel, ClickModelKind};
use mdb_core::sim::RegretModel;
use mdb_core::{ArmId, DuelOutcome, PreferenceMatrix};
use rand::seq::index::sample;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{EnvironmentSpec, ExperimentConfig, Mechanism, RegretMode};
#[cfg(test)]
use crate::config::{RankerSubset, SCALING_SUBSET_SIZES};
use crate::letor::read_letor;

/// Largest ranker set for which a full preference matrix is estimated.
pub const MAX_ESTIMATED_RANKERS: usize = 20;

#[derive(Debug, Clone)]
pub enum BuiltEnvironment {
    Utility(UtilityEnvironment),
    Matrix(MatrixEnvironment),
    Ltr(LtrEnvironment),
}

impl Environment for BuiltEnvironment {
    fn num_arms(&self) -> usize {
        match self {
            BuiltEnvironment::Utility(e) => e.num_arms(),
            BuiltEnvironment::Matrix(e) => e.num_arms(),
            BuiltEnvironment::Ltr(e) => e.num_arms(),
        }
    }

    fn round(&self, arms: &[ArmId], rng: &mut dyn RngCore) -> mdb_core::Result<Vec<DuelOutcome>> {
        match self {
            BuiltEnvironment::Utility(e) => e.round(arms, rng),
            BuiltEnvironment::Matrix(e) => e.round(arms, rng),
            BuiltEnvironment::Ltr(e) => e.round(arms, rng),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Prepared {
    pub env: BuiltEnvironment,
    pub regret: RegretModel,
}

impl Prepared {
    pub fn num_arms(&self) -> usize {
        self.env.num_arms()
    }
}

/// Parses a whitespace-separated square matrix; `#` starts a comment.
pub fn parse_matrix(text: &str) -> anyhow::Result<PreferenceMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let row = body
            .split_whitespace()
            .map(|v| v.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("line {}: invalid number", i + 1))?;
        rows.push(row);
    }
    matrix_from_rows(&rows)
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> anyhow::Result<PreferenceMatrix> {
    let k = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
        bail!("matrix row {} has {} entries, expected {k}", i + 1, r.len());
    }
    Ok(PreferenceMatrix::new(k, rows.concat())?)
}

fn gaussian_or_matrix(utilities: Vec<f64>, mechanism: Mechanism) -> BuiltEnvironment {
    let env = UtilityEnvironment::new(utilities);
    match mechanism {
        Mechanism::Gaussian => BuiltEnvironment::Utility(env),
        Mechanism::Matrix => BuiltEnvironment::Matrix(MatrixEnvironment::new(env.preference_matrix().clone())),
    }
}

fn matrix_of(env: &BuiltEnvironment) -> Option<&PreferenceMatrix> {
    match env {
        BuiltEnvironment::Utility(e) => Some(e.preference_matrix()),
        BuiltEnvironment::Matrix(e) => Some(e.preference_matrix()),
        BuiltEnvironment::Ltr(_) => None,
    }
}

/// Loads or generates the dataset of an LTR environment.
pub fn load_dataset(spec: &EnvironmentSpec) -> anyhow::Result<Option<LtrDataset>> {
    Ok(match spec {
        EnvironmentSpec::Ltr { path, .. } => {
            Some(read_letor(path).with_context(|| format!("reading {}", path.display()))?)
        }
        EnvironmentSpec::Fixture { seed, fixture, .. } => {
            Some(generate_fixture(fixture, &mut ChaCha8Rng::seed_from_u64(*seed))?)
        }
        _ => None,
    })
}

/// Ranker features of an LTR environment: the configured list or every feature.
pub fn ranker_features(spec: &EnvironmentSpec, ds: &LtrDataset) -> Vec<u32> {
    match spec {
        EnvironmentSpec::Ltr { features: Some(f), .. } => f.clone(),
        _ => ds.feature_ids(),
    }
}

fn ground_truth_samples(spec: &EnvironmentSpec) -> u64 {
    match spec {
        EnvironmentSpec::Ltr {
            ground_truth_samples, ..
        }
        | EnvironmentSpec::Fixture {
            ground_truth_samples, ..
        } => *ground_truth_samples,
        _ => 0,
    }
}

/// The rankers an LTR environment plays with: [`ranker_features`], cut down
/// to the configured random subset. Draw `d` uses stream `d` of the subset
/// seed; with `require_condorcet`, draws continue until the preferences
/// estimated under `model` and `truth_seed` have a Condorcet winner.
pub fn select_rankers(
    spec: &EnvironmentSpec,
    ds: &LtrDataset,
    model: &ClickModel,
    truth_seed: u64,
) -> anyhow::Result<Vec<u32>> {
    let all = ranker_features(spec, ds);
    let Some(subset) = spec.subset() else {
        return Ok(all);
    };
    if subset.size > all.len() {
        bail!(
            "ranker subset of {} exceeds the {} available rankers",
            subset.size,
            all.len()
        );
    }
    if subset.require_condorcet && subset.size > MAX_ESTIMATED_RANKERS {
        bail!("a Condorcet winner can only be checked on at most {MAX_ESTIMATED_RANKERS} rankers");
    }
    for d in 0..subset.max_draws {
        let mut rng = ChaCha8Rng::seed_from_u64(subset.seed);
        rng.set_stream(d);
        let mut picked: Vec<u32> = sample(&mut rng, all.len(), subset.size)
            .into_iter()
            .map(|i| all[i])
            .collect();
        picked.sort_unstable();
        if !subset.require_condorcet {
            return Ok(picked);
        }
        let env = LtrEnvironment::new(ds, &picked, model.clone())?;
        let matrix = estimate_matrix(&env, ground_truth_samples(spec), truth_seed)?;
        if matrix.condorcet_winner().is_some() {
            log::info!("ranker subset draw {d} has a Condorcet winner");
            return Ok(picked);
        }
    }
    bail!("no ranker subset with a Condorcet winner in {} draws", subset.max_draws)
}

pub fn click_model(kind: ClickModelKind, ds: &LtrDataset) -> anyhow::Result<ClickModel> {
    ClickModel::preset(kind, ds.grade_scale()).with_context(|| format!("dataset grades reach {}", ds.max_grade()))
}

/// Estimates the preference matrix of an LTR environment with `m` rounds
/// per pair. Pairs run in parallel, each on its own stream of `seed`.
pub fn estimate_matrix(env: &LtrEnvironment, m: u64, seed: u64) -> anyhow::Result<PreferenceMatrix> {
    let k = env.num_arms();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
    let estimates = pairs
        .par_iter()
        .enumerate()
        .map(|(idx, &(i, j))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            estimate_pair(env, ArmId(i), ArmId(j), m, &mut rng)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let mut next = estimates.into_iter();
    Ok(PreferenceMatrix::from_upper(k, |_, _| {
        next.next().expect("one estimate per pair")
    })?)
}

pub fn prepare(cfg: &ExperimentConfig) -> anyhow::Result<Prepared> {
    let mode = cfg.regret_mode();
    let env = match &cfg.environment {
        EnvironmentSpec::Synthetic { name, mechanism } => {
            gaussian_or_matrix(mdb_core::env::make_synthetic_dataset(name)?, *mechanism)
        }
        EnvironmentSpec::Utilities { utilities, mechanism } => {
            if utilities.is_empty() {
                bail!("utilities must not be empty");
            }
            gaussian_or_matrix(utilities.clone(), *mechanism)
        }
        EnvironmentSpec::Matrix { path, rows } => {
            let m = match (path, rows) {
                (Some(p), None) => read_matrix(p)?,
                (None, Some(r)) => matrix_from_rows(r)?,
                _ => bail!("matrix environment needs exactly one of `path` and `rows`"),
            };
            BuiltEnvironment::Matrix(MatrixEnvironment::new(m))
        }
        spec
        @ (EnvironmentSpec::Ltr { click_model: kind, .. } | EnvironmentSpec::Fixture { click_model: kind, .. }) => {
            let ds = load_dataset(spec)?.expect("LTR spec yields a dataset");
            let model = click_model(*kind, &ds)?;
            let rankers = select_rankers(spec, &ds, &model, cfg.seed)?;
            BuiltEnvironment::Ltr(LtrEnvironment::new(&ds, &rankers, model)?)
        }
    };
    let regret = match (mode, &env) {
        (RegretMode::Ndcg, BuiltEnvironment::Ltr(e)) => RegretModel::Ndcg {
            table: e.ndcg_table().to_vec(),
        },
        (RegretMode::Ndcg, _) => bail!("ndcg regret needs an LTR environment"),
        (RegretMode::Condorcet, BuiltEnvironment::Ltr(e)) => {
            if e.num_arms() > MAX_ESTIMATED_RANKERS {
                bail!(
                    "condorcet regret on {} rankers needs {} pairwise estimates; use ndcg regret above {} rankers",
                    e.num_arms(),
                    e.num_arms() * (e.num_arms() - 1) / 2,
                    MAX_ESTIMATED_RANKERS
                );
            }
            let m = ground_truth_samples(&cfg.environment);
            log::info!("estimating ground-truth preferences with {m} rounds per pair");
            let matrix = estimate_matrix(e, m, cfg.seed)?;
            RegretModel::condorcet(matrix).context("estimated preferences")?
        }
        (RegretMode::Condorcet, other) => {
            RegretModel::condorcet(matrix_of(other).expect("non-LTR environments carry a matrix").clone())?
        }
    };
    Ok(Prepared { env, regret })
}

/// Loads a matrix file.
pub fn read_matrix(path: &Path) -> anyhow::Result<PreferenceMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("parsing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdb_core::ltr::FixtureSpec;

    #[test]
    fn matrix_text() {
        let m = parse_matrix("# two arms\n0.5 0.7\n0.3 0.5\n\n").unwrap();
        assert_eq!(m.get(ArmId(0), ArmId(1)), 0.7);
        assert!(parse_matrix("0.5 0.7\n0.3").is_err());
        assert!(parse_matrix("0.5 0.7\n0.4 0.5").is_err());
        assert!(parse_matrix("0.5 x\n0.3 0.5").is_err());
    }

    #[test]
    fn synthetic_mechanisms_share_regret() {
        let mut cfg = ExperimentConfig::new(
            EnvironmentSpec::Synthetic {
                name: "2good4poor".into(),
                mechanism: Mechanism::Gaussian,
            },
            vec![],
            10,
        );
        let a = prepare(&cfg).unwrap();
        assert!(matches!(a.env, BuiltEnvironment::Utility(_)));
        cfg.environment = EnvironmentSpec::Synthetic {
            name: "2good4poor".into(),
            mechanism: Mechanism::Matrix,
        };
        let b = prepare(&cfg).unwrap();
        assert!(matches!(b.env, BuiltEnvironment::Matrix(_)));
        assert_eq!(a.regret, b.regret);
        assert_eq!(a.regret.best_arm(), Some(ArmId(0)));
    }

    #[test]
    fn fixture_condorcet_regret_estimates_matrix() {
        let fixture = FixtureSpec {
            queries: 8,
            features: 3,
            ..FixtureSpec::default()
        };
        let mut cfg = ExperimentConfig::new(
            EnvironmentSpec::Fixture {
                click_model: ClickModelKind::Perfect,
                seed: 1,
                fixture,
                ground_truth_samples: 400,
                subset: None,
            },
            vec![],
            10,
        );
        cfg.regret = Some(RegretMode::Condorcet);
        let p = prepare(&cfg).unwrap();
        assert_eq!(p.num_arms(), 3);
        assert_eq!(p.regret.best_arm(), Some(ArmId(0)));
        cfg.regret = None;
        let p = prepare(&cfg).unwrap();
        assert!(matches!(p.regret, RegretModel::Ndcg { .. }));
    }

    fn fixture_env(subset: Option<RankerSubset>) -> ExperimentConfig {
        let fixture = FixtureSpec {
            queries: 8,
            features: 12,
            ..FixtureSpec::default()
        };
        ExperimentConfig::new(
            EnvironmentSpec::Fixture {
                click_model: ClickModelKind::Navigational,
                seed: 3,
                fixture,
                ground_truth_samples: 300,
                subset,
            },
            vec![],
            10,
        )
    }

    #[test]
    fn ranker_subsets() {
        let cfg = fixture_env(None);
        let ds = load_dataset(&cfg.environment).unwrap().unwrap();
        let model = click_model(ClickModelKind::Navigational, &ds).unwrap();
        assert_eq!(
            select_rankers(&cfg.environment, &ds, &model, 0).unwrap(),
            (1..=12).collect::<Vec<u32>>()
        );

        let subset = RankerSubset {
            size: 5,
            seed: 9,
            require_condorcet: false,
            max_draws: 1,
        };
        let cfg = fixture_env(Some(subset));
        let a = select_rankers(&cfg.environment, &ds, &model, 0).unwrap();
        assert_eq!(a.len(), 5);
        assert!(a.windows(2).all(|w| w[0] < w[1]) && a.iter().all(|f| (1..=12).contains(f)));
        assert_eq!(a, select_rankers(&cfg.environment, &ds, &model, 0).unwrap());
        assert_eq!(prepare(&cfg).unwrap().num_arms(), 5);

        let cfg = fixture_env(Some(RankerSubset {
            require_condorcet: true,
            max_draws: 20,
            ..subset
        }));
        let rankers = select_rankers(&cfg.environment, &ds, &model, 0).unwrap();
        let env = LtrEnvironment::new(&ds, &rankers, model.clone()).unwrap();
        assert!(estimate_matrix(&env, 300, 0).unwrap().condorcet_winner().is_some());

        let cfg = fixture_env(Some(RankerSubset { size: 13, ..subset }));
        assert!(select_rankers(&cfg.environment, &ds, &model, 0).is_err());
    }

    #[test]
    fn scaling_sizes_are_evenly_spaced() {
        assert!(SCALING_SUBSET_SIZES.windows(2).all(|w| w[1] - w[0] == 15));
    }
}
