//! CSV emission.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;

use crate::distortion::DistortionTable;
use crate::experiment::RunResult;
use crate::sweep::SweepResult;

pub const TRACE_HEADER: [&str; 5] = [
    "policy",
    "replicate",
    "checkpoint_t",
    "instantaneous_regret",
    "cumulative_regret",
];

/// One row per logged checkpoint, in policy then replicate order.
pub fn write_trace_csv<W: Write>(result: &RunResult, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRACE_HEADER)?;
    for run in &result.runs {
        for p in run.outcome.trace.points() {
            out.serialize((&run.policy, run.replicate, p.t, p.instantaneous, p.cumulative))?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(result: &SweepResult, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["alpha", "beta", "mean_final_regret", "std_final_regret"])?;
    for r in &result.rows {
        out.serialize((r.alpha, r.beta, r.mean_final_regret, r.std_final_regret))?;
    }
    out.flush()?;
    Ok(())
}

/// Settings down, subset sizes across, percentages with one decimal.
pub fn write_distortion_csv<W: Write>(table: &DistortionTable, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["setting".to_string()];
    header.extend(table.subset_sizes.iter().map(|s| s.to_string()));
    out.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![row.setting.clone()];
        rec.extend(row.fractions.iter().map(|f| format!("{:.1}", 100.0 * f)));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Runs `write` against `path`, or standard output when `path` is `None` or `-`.
pub fn with_output<F>(path: Option<&Path>, write: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut dyn Write) -> csv::Result<()>,
{
    match path.filter(|p| *p != Path::new("-")) {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            write(&mut w).with_context(|| format!("writing {}", p.display()))?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}

pub fn emit_csv(result: &RunResult, path: &Path) -> anyhow::Result<()> {
    with_output(Some(path), |w| write_trace_csv(result, w))
}
