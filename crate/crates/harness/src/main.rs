use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mdb_core::ltr::{generate_fixture, FixtureSpec};
use mdb_harness::config::ExperimentConfig;
use mdb_harness::letor::write_letor;
use mdb_harness::output::{with_output, write_distortion_csv, write_sweep_csv, write_trace_csv};
use mdb_harness::{distortion_report, run_experiment, sweep};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "mdb", version, about = "Multi-dueling bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured policy and write the regret traces as CSV.
    Run(Common),
    /// Grid search over MDB's alpha and beta.
    Sweep(Common),
    /// Fraction of rankers that beat the best one after many multileavings.
    Distortion(Common),
    /// Write a synthetic LETOR dataset.
    FixtureGen(FixtureArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output file; standard output for `-` or when absent from both flag and config.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    replicates: Option<u64>,
    #[arg(long, value_name = "N")]
    horizon: Option<u64>,
}

impl Common {
    fn load(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.replicates {
            cfg.replicates = r;
        }
        if let Some(h) = self.horizon {
            cfg.horizon = h;
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct FixtureArgs {
    /// TOML file with fixture parameters; defaults otherwise.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn run(common: &Common) -> anyhow::Result<ExitCode> {
    let cfg = common.load()?;
    let result = run_experiment(&cfg)?;
    with_output(cfg.output.as_deref(), |w| write_trace_csv(&result, w))?;
    eprintln!(
        "{:<16} {:>14} {:>12} {:>10}",
        "policy", "mean regret", "std", "tail best"
    );
    for s in &result.summaries {
        eprintln!(
            "{:<16} {:>14.3} {:>12.3} {:>10.4}",
            s.policy, s.mean, s.std, s.tail_best_rate
        );
    }
    if result.all_valid() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("some replicates stopped early; their rows cover completed rounds only");
        Ok(ExitCode::from(2))
    }
}

fn run_sweep(common: &Common) -> anyhow::Result<ExitCode> {
    let cfg = common.load()?;
    let grid = cfg.sweep.clone().unwrap_or_default();
    let result = sweep(&cfg, &grid)?;
    with_output(cfg.output.as_deref(), |w| write_sweep_csv(&result, w))?;
    eprintln!("best: alpha = {}, beta = {}", result.best.alpha, result.best.beta);
    Ok(ExitCode::SUCCESS)
}

fn run_distortion(common: &Common) -> anyhow::Result<ExitCode> {
    let cfg = common.load()?;
    let spec = cfg.distortion.clone().unwrap_or_default();
    let table = distortion_report(&cfg, &spec)?;
    with_output(cfg.output.as_deref(), |w| write_distortion_csv(&table, w))?;
    Ok(ExitCode::SUCCESS)
}

fn fixture_gen(args: &FixtureArgs) -> anyhow::Result<ExitCode> {
    let spec: FixtureSpec = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => FixtureSpec::default(),
    };
    let ds = generate_fixture(&spec, &mut ChaCha8Rng::seed_from_u64(args.seed))?;
    match args.out.as_deref().filter(|p| *p != Path::new("-")) {
        Some(p) => {
            let file = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            write_letor(&ds, io::BufWriter::new(file))?;
        }
        None => write_letor(&ds, io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(c) => run(c),
        Command::Sweep(c) => run_sweep(c),
        Command::Distortion(c) => run_distortion(c),
        Command::FixtureGen(a) => fixture_gen(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
