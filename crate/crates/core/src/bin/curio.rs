use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curio::config::ExperimentConfig;
use curio::harness::{self, CheckpointArg};

#[derive(Parser)]
#[command(name = "curio", version, about = "Curiosity-driven graph exploration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
    /// Small fast settings, applied before the config file.
    #[arg(long)]
    smoke: bool,
    /// Overwrite existing outputs.
    #[arg(long)]
    force: bool,
    /// Checkpoint to load; `pagerank` takes `igt=PATH` and `cpt=PATH`.
    #[arg(long)]
    checkpoint: Vec<CheckpointArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the train/validation/test environments.
    Gen(Common),
    /// Train a Q-network (resumes from --checkpoint).
    Train(Common),
    /// Evaluate baselines and the network on the test environments.
    Eval(Common),
    /// Evaluate across horizons and graph sizes.
    Generalize(Common),
    /// Time the network against the exact reward computations.
    Bench(Common),
    /// Fit and compare plain and curiosity-biased PageRank.
    Pagerank(Common),
}

impl Common {
    fn resolve(&self) -> curio::Result<ExperimentConfig> {
        let mut cfg = if self.smoke {
            ExperimentConfig::smoke()
        } else {
            ExperimentConfig::default()
        };
        if let Some(path) = &self.config {
            cfg.apply_text(&std::fs::read_to_string(path)?)?;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out_dir = o.display().to_string();
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn single_checkpoint(&self) -> curio::Result<Option<PathBuf>> {
        match self.checkpoint.as_slice() {
            [] => Ok(None),
            [c] => Ok(Some(c.path.clone())),
            _ => Err(curio::Error::Config("expected a single --checkpoint".into())),
        }
    }
}

fn run(cli: Cli) -> curio::Result<()> {
    match cli.command {
        Command::Gen(c) => {
            let r = harness::cmd_gen(&c.resolve()?, c.force)?;
            println!("wrote {} graphs", r.files.len());
        }
        Command::Train(c) => {
            let cfg = c.resolve()?;
            let resume = c.single_checkpoint()?;
            let ckpt = cfg.out_path().join(harness::CHECKPOINT_FILE);
            if resume.is_none() && ckpt.exists() && !c.force {
                return Err(curio::Error::Config(format!(
                    "{} exists (use --force to overwrite or --checkpoint to resume)",
                    ckpt.display()
                )));
            }
            let r = harness::cmd_train(&cfg, resume.as_deref())?;
            println!(
                "episodes {} best validation {:.4} -> {}",
                r.progress.episodes,
                r.best_validation,
                r.checkpoint.display()
            );
        }
        Command::Eval(c) => {
            let r = harness::cmd_eval(&c.resolve()?, c.single_checkpoint()?.as_deref())?;
            for a in &r.summary {
                println!("{:<11} {:.4} ± {:.4}", a.agent, a.overall.mean, a.overall.se);
            }
        }
        Command::Generalize(c) => {
            let points = harness::cmd_generalize(&c.resolve()?, c.single_checkpoint()?.as_deref())?;
            for p in &points {
                println!(
                    "{:<7} T={:<3} n={:<5} {:<7} {:.4}",
                    p.sweep, p.horizon, p.n, p.agent, p.result.mean
                );
            }
        }
        Command::Bench(c) => {
            let r = harness::cmd_bench(&c.resolve()?, c.single_checkpoint()?.as_deref())?;
            let (g, i, p) = r.slopes;
            println!("log-log slopes: gnn {g:.2} igt {i:.2} cpt {p:.2}");
        }
        Command::Pagerank(c) => {
            let r = harness::cmd_pagerank(&c.resolve()?, &c.checkpoint)?;
            println!(
                "windows {} (train {}, test {}) improvement {:.2}%",
                r.windows,
                r.train_windows,
                r.test_windows,
                r.improvement_percent()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
