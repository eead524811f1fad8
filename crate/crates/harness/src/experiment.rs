//! Seeded, parallel replicates of every configured policy.

use anyhow::{bail, Context};
use mdb_core::sim::{run_replicate, Cadence, ReplicateOutcome};
use mdb_core::ArmId;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, PolicyEntry};
use crate::environment::{prepare, Prepared};

/// One policy run on one replicate seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateRun {
    pub policy: String,
    pub replicate: u64,
    pub seed: u64,
    pub outcome: ReplicateOutcome,
    /// Fraction of the last tenth of rounds spent on the zero-regret singleton.
    pub tail_best_rate: f64,
}

impl ReplicateRun {
    pub fn final_regret(&self) -> f64 {
        self.outcome.trace.cumulative()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicySummary {
    pub policy: String,
    /// Final cumulative regret of each valid replicate.
    pub finals: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single replicate.
    pub std: f64,
    pub invalid: usize,
    pub tail_best_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunResult {
    /// Ordered by policy, then replicate.
    pub runs: Vec<ReplicateRun>,
    pub summaries: Vec<PolicySummary>,
}

impl RunResult {
    pub fn summary(&self, policy: &str) -> Option<&PolicySummary> {
        self.summaries.iter().find(|s| s.policy == policy)
    }

    pub fn all_valid(&self) -> bool {
        self.runs.iter().all(|r| r.outcome.is_valid())
    }
}

pub fn replicate_seed(base: u64, replicate: u64) -> u64 {
    base ^ replicate
}

/// Independent environment and policy streams for policy `p` under `seed`.
pub fn cell_rngs(seed: u64, p: usize) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut env = ChaCha8Rng::seed_from_u64(seed);
    env.set_stream(2 * p as u64);
    let mut policy = ChaCha8Rng::seed_from_u64(seed);
    policy.set_stream(2 * p as u64 + 1);
    (env, policy)
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn summarize(policy: &str, runs: &[ReplicateRun]) -> PolicySummary {
    let valid: Vec<&ReplicateRun> = runs.iter().filter(|r| r.outcome.is_valid()).collect();
    let finals: Vec<f64> = valid.iter().map(|r| r.final_regret()).collect();
    let (mean, std) = mean_std(&finals);
    let tails: Vec<f64> = valid.iter().map(|r| r.tail_best_rate).collect();
    PolicySummary {
        policy: policy.to_string(),
        mean,
        std,
        invalid: runs.len() - valid.len(),
        tail_best_rate: mean_std(&tails).0,
        finals,
    }
}

/// Runs `policies × replicates` cells against an already prepared environment.
pub fn run_prepared(
    prepared: &Prepared,
    policies: &[PolicyEntry],
    horizon: u64,
    replicates: u64,
    seed: u64,
    cadence: &Cadence,
) -> anyhow::Result<RunResult> {
    let k = prepared.num_arms();
    if prepared.regret.num_arms() != k {
        bail!(
            "regret model covers {} arms, environment has {k}",
            prepared.regret.num_arms()
        );
    }
    for p in policies {
        p.policy.build(k).with_context(|| format!("policy {}", p.label()))?;
    }
    let checkpoints = cadence.checkpoints(horizon)?;
    let best = prepared.regret.best_arm().unwrap_or(ArmId(0));
    let tail_start = horizon - horizon.div_ceil(10);
    let cells: Vec<(usize, u64)> = (0..policies.len())
        .flat_map(|p| (0..replicates).map(move |r| (p, r)))
        .collect();
    let runs: Vec<ReplicateRun> = cells
        .par_iter()
        .map(|&(p, r)| {
            let entry = &policies[p];
            let seed = replicate_seed(seed, r);
            let (mut env_rng, mut policy_rng) = cell_rngs(seed, p);
            let mut policy = entry.policy.build(k).expect("checked above");
            let mut tail_hits = 0u64;
            let outcome = run_replicate(
                policy.as_mut(),
                &prepared.env,
                &prepared.regret,
                horizon,
                &checkpoints,
                &mut env_rng,
                &mut policy_rng,
                |t, set| {
                    if t > tail_start && set == [best] {
                        tail_hits += 1;
                    }
                },
            );
            ReplicateRun {
                policy: entry.label().to_string(),
                replicate: r,
                seed,
                outcome,
                tail_best_rate: tail_hits as f64 / (horizon - tail_start) as f64,
            }
        })
        .collect();
    for run in runs.iter().filter(|r| !r.outcome.is_valid()) {
        log::warn!(
            "{} replicate {} is invalid after {} rounds: {}",
            run.policy,
            run.replicate,
            run.outcome.trace.rounds(),
            run.outcome.error.as_ref().expect("invalid runs carry an error")
        );
    }
    let summaries = policies
        .iter()
        .enumerate()
        .map(|(p, entry)| {
            let chunk = &runs[p * replicates as usize..(p + 1) * replicates as usize];
            summarize(entry.label(), chunk)
        })
        .collect();
    Ok(RunResult { runs, summaries })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<RunResult> {
    cfg.validate()?;
    if cfg.policies.is_empty() {
        bail!("no policies configured");
    }
    let prepared = prepare(cfg)?;
    log::info!(
        "{} arms, {} policies, {} replicates, horizon {}",
        prepared.num_arms(),
        cfg.policies.len(),
        cfg.replicates,
        cfg.horizon
    );
    run_prepared(
        &prepared,
        &cfg.policies,
        cfg.horizon,
        cfg.replicates,
        cfg.seed,
        &cfg.cadence,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_std() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - 1.2909944487358056).abs() < 1e-15);
        assert!(mean_std(&[]).0.is_nan());
    }

    #[test]
    fn seeds_differ_per_replicate_and_policy() {
        use rand::RngCore;
        assert_eq!(replicate_seed(42, 0), 42);
        assert_ne!(replicate_seed(42, 1), replicate_seed(42, 2));
        let (mut a, mut b) = cell_rngs(7, 0);
        let (mut c, _) = cell_rngs(7, 1);
        let x = [a.next_u64(), b.next_u64(), c.next_u64()];
        assert!(x[0] != x[1] && x[1] != x[2] && x[0] != x[2]);
    }
}
