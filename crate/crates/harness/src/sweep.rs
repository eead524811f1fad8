//! Grid search over the MDB parameters.

use anyhow::bail;
use mdb_core::policy::{MdbConfig, PolicyConfig};

use crate::config::{ExperimentConfig, PolicyEntry, SweepSpec};
use crate::environment::prepare;
use crate::experiment::run_prepared;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub mean_final_regret: f64,
    pub std_final_regret: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Alphas outer, betas inner, in grid order.
    pub rows: Vec<SweepRow>,
    pub best: SweepRow,
}

/// Runs MDB at every grid point on the configured environment, with the
/// same replicate seeds at every point. The first point with the lowest
/// mean final regret wins.
pub fn sweep(cfg: &ExperimentConfig, grid: &SweepSpec) -> anyhow::Result<SweepResult> {
    cfg.validate()?;
    if grid.alphas.is_empty() || grid.betas.is_empty() {
        bail!("sweep grid must not be empty");
    }
    let prepared = prepare(cfg)?;
    let mut rows = Vec::with_capacity(grid.alphas.len() * grid.betas.len());
    for &alpha in &grid.alphas {
        for &beta in &grid.betas {
            let entry = PolicyEntry::new(PolicyConfig::Mdb(MdbConfig::new(alpha, beta)?));
            let result = run_prepared(&prepared, &[entry], cfg.horizon, cfg.replicates, cfg.seed, &cfg.cadence)?;
            let s = &result.summaries[0];
            if s.invalid > 0 {
                bail!("alpha {alpha}, beta {beta}: {} invalid replicates", s.invalid);
            }
            log::info!("alpha {alpha} beta {beta}: mean final regret {:.3}", s.mean);
            rows.push(SweepRow {
                alpha,
                beta,
                mean_final_regret: s.mean,
                std_final_regret: s.std,
            });
        }
    }
    let best = *rows
        .iter()
        .reduce(|a, b| {
            if b.mean_final_regret < a.mean_final_regret {
                b
            } else {
                a
            }
        })
        .expect("non-empty grid");
    Ok(SweepResult { rows, best })
}
