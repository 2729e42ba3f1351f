//! Flat `key = value` experiment configuration.
//!
//! Blank lines and `#` comments are ignored, unknown keys are errors, and
//! [`ExperimentConfig::to_text`] writes every key so a run can be repeated
//! from its resolved config alone.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dqn::TrainConfig;
use crate::explore::{EpisodeConfig, RewardKind};
use crate::graph::Family;
use crate::qnet::QNetConfig;
use crate::{Error, Result};

/// Comma-separated list of sizes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct List(pub Vec<usize>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(List)
    }
}

impl fmt::Display for List {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A float that may be left to a computed default.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Auto {
    #[default]
    Auto,
    Value(f64),
}

impl FromStr for Auto {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            Ok(Auto::Auto)
        } else {
            s.parse().map(Auto::Value).map_err(|e| format!("{e}"))
        }
    }
}

impl fmt::Display for Auto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Auto::Auto => f.write_str("auto"),
            Auto::Value(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for RewardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Restart mode of the biased walkers used for window predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkerRestart {
    Fresh,
    Context,
}

impl FromStr for WalkerRestart {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fresh" => Ok(Self::Fresh),
            "context" => Ok(Self::Context),
            _ => Err(format!("unknown walker restart {s:?} (fresh, context)")),
        }
    }
}

impl fmt::Display for WalkerRestart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fresh => "fresh",
            Self::Context => "context",
        })
    }
}

/// Where a curiosity scorer for the PageRank pipeline comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScorerSource {
    None,
    /// One-step reward of each candidate.
    Myopic,
    /// A trained network passed with `--checkpoint kind=path`.
    Network,
}

impl FromStr for ScorerSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(Self::None),
            "myopic" => Ok(Self::Myopic),
            "network" => Ok(Self::Network),
            _ => Err(format!("unknown scorer {s:?} (none, myopic, network)")),
        }
    }
}

impl fmt::Display for ScorerSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Myopic => "myopic",
            Self::Network => "network",
        })
    }
}

macro_rules! experiment_config {
    ($($(#[$doc:meta])* $name:ident : $ty:ty = $default:expr;)*) => {
        #[derive(Debug, Clone, PartialEq)]
        pub struct ExperimentConfig {
            $($(#[$doc])* pub $name: $ty,)*
        }

        impl Default for ExperimentConfig {
            fn default() -> Self {
                Self { $($name: $default,)* }
            }
        }

        impl ExperimentConfig {
            pub const KEYS: &'static [&'static str] = &[$(stringify!($name),)*];

            /// Sets one key from its text form.
            pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
                match key {
                    $(stringify!($name) => {
                        self.$name = value.parse::<$ty>().map_err(|e| {
                            Error::Config(format!("{key} = {value:?}: {e}"))
                        })?;
                    })*
                    _ => return Err(Error::Config(format!("unknown key {key:?}"))),
                }
                Ok(())
            }

            /// Every key with its current value, one `key = value` per line.
            pub fn to_text(&self) -> String {
                let mut s = String::new();
                $(s.push_str(&format!("{} = {}\n", stringify!($name), self.$name));)*
                s
            }
        }
    };
}

experiment_config! {
    seed: u64 = 0;
    out_dir: String = "runs/default".into();
    workers: usize = 1;

    /// RG, WS, BA or ER.
    family: String = "RG".into();
    n: usize = 50;
    rg_radius: Auto = Auto::Auto;
    ws_k: usize = 6;
    ws_p: f64 = 0.1;
    ba_m: usize = 3;
    er_p: Auto = Auto::Auto;
    train_envs: usize = 100;
    validation_envs: usize = 10;
    test_envs: usize = 10;

    reward: RewardKind = RewardKind::Igt;
    horizon: usize = 10;

    layers: usize = 2;
    hidden: usize = 64;

    discount: f64 = 0.99;
    buffer_capacity: usize = 10_000;
    batch_size: usize = 64;
    learning_rate: f64 = 1e-3;
    target_sync: usize = 500;
    eps_start: f64 = 1.0;
    eps_end: f64 = 0.05;
    eps_decay_steps: usize = 5_000;
    warmup: usize = 500;
    episodes_per_env: usize = 20;
    validation_interval: usize = 200;
    validation_episodes: usize = 10;

    eval_episodes: usize = 20;

    generalize_horizons: List = List(vec![5, 10, 20, 40]);
    generalize_sizes: List = List(vec![20, 50, 100, 500, 1000, 5000]);
    generalize_graphs: usize = 10;
    generalize_episodes: usize = 5;

    bench_sizes: List = List(vec![25, 50, 100, 200, 400]);
    bench_graphs: usize = 50;

    pagerank_family: String = "BA".into();
    pagerank_n: usize = 200;
    pagerank_trajectories: usize = 500;
    pagerank_trajectory_length: usize = 20;
    /// Edge list for a real dataset; empty means synthetic trajectories.
    pagerank_edges: String = String::new();
    pagerank_paths: String = String::new();
    n_burn_in: usize = 5;
    p_g: f64 = 0.2;
    split_fraction: f64 = 0.8;
    search_budget: usize = 300;
    alpha_max: f64 = 0.95;
    walker_restart: WalkerRestart = WalkerRestart::Context;
    walker_paths: usize = 4;
    walker_moves: usize = 10;
    igt_scorer: ScorerSource = ScorerSource::Myopic;
    cpt_scorer: ScorerSource = ScorerSource::None;
}

impl ExperimentConfig {
    /// Shrunken constants that exercise every command in minutes.
    pub fn smoke() -> Self {
        Self {
            out_dir: "runs/smoke".into(),
            train_envs: 5,
            validation_envs: 2,
            test_envs: 2,
            hidden: 16,
            buffer_capacity: 1_000,
            batch_size: 16,
            target_sync: 50,
            eps_decay_steps: 300,
            warmup: 50,
            episodes_per_env: 10,
            validation_interval: 10,
            validation_episodes: 3,
            eval_episodes: 3,
            generalize_horizons: List(vec![5, 10]),
            generalize_sizes: List(vec![20, 50]),
            generalize_graphs: 2,
            generalize_episodes: 2,
            bench_sizes: List(vec![10, 20, 40]),
            bench_graphs: 3,
            pagerank_n: 60,
            pagerank_trajectories: 40,
            pagerank_trajectory_length: 10,
            search_budget: 30,
            walker_paths: 2,
            walker_moves: 5,
            ..Self::default()
        }
    }

    /// Applies `key = value` lines on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (k, v) = t.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key = value, got {t:?}"),
            })?;
            self.set(k.trim(), v.trim()).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn out_path(&self) -> PathBuf {
        PathBuf::from(&self.out_dir)
    }

    pub fn family(&self) -> Result<Family> {
        self.family_at(self.n)
    }

    /// The configured family with parameters for `n` nodes.
    pub fn family_at(&self, n: usize) -> Result<Family> {
        family_with(&self.family, n, self)
    }

    pub fn pagerank_family(&self) -> Result<Family> {
        family_with(&self.pagerank_family, self.pagerank_n, self)
    }

    pub fn net(&self) -> QNetConfig {
        QNetConfig {
            layers: self.layers,
            hidden: self.hidden,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            reward: self.reward,
            horizon: self.horizon,
            discount: self.discount,
            buffer_capacity: self.buffer_capacity,
            batch_size: self.batch_size,
            learning_rate: self.learning_rate,
            target_sync: self.target_sync,
            eps_start: self.eps_start,
            eps_end: self.eps_end,
            eps_decay_steps: self.eps_decay_steps,
            warmup: self.warmup,
            episodes_per_env: self.episodes_per_env,
            validation_interval: self.validation_interval,
            validation_episodes: self.validation_episodes,
            net: self.net(),
            seed: self.seed,
        }
    }

    /// Undiscounted evaluation episodes at horizon `horizon`.
    pub fn eval_episode_config(&self, horizon: usize, tag: u64) -> EpisodeConfig {
        EpisodeConfig::new(horizon, self.reward, crate::seed::derive(self.seed, &[0xe7a1, tag]))
    }

    /// Checks cross-field constraints that single-key parsing cannot.
    pub fn validate(&self) -> Result<()> {
        self.family()?;
        self.pagerank_family()?;
        self.train_config().validate()?;
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.n < 2 || self.horizon == 0 {
            return bad("n must be at least 2 and horizon at least 1");
        }
        if self.eval_episodes == 0 || self.generalize_episodes == 0 || self.bench_graphs == 0 {
            return bad("episode and graph counts must be positive");
        }
        if !(self.p_g >= 0.0 && self.p_g <= 1.0) {
            return bad("p_g must lie in [0, 1]");
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return bad("split_fraction must lie in (0, 1)");
        }
        if !(self.alpha_max >= 0.0 && self.alpha_max < 1.0) {
            return bad("alpha_max must lie in [0, 1)");
        }
        if self.n_burn_in == 0 || self.search_budget == 0 || self.walker_paths == 0 {
            return bad("n_burn_in, search_budget and walker_paths must be positive");
        }
        if self.pagerank_edges.is_empty() != self.pagerank_paths.is_empty() {
            return bad("pagerank_edges and pagerank_paths go together");
        }
        Ok(())
    }
}

fn family_with(name: &str, n: usize, c: &ExperimentConfig) -> Result<Family> {
    let base = Family::default_for(name, n)?;
    Ok(match base {
        Family::RandomGeometric { radius } => Family::RandomGeometric {
            radius: match c.rg_radius {
                Auto::Auto => radius,
                Auto::Value(r) => r,
            },
        },
        Family::WattsStrogatz { .. } => Family::WattsStrogatz { k: c.ws_k, p: c.ws_p },
        Family::BarabasiAlbert { .. } => Family::BarabasiAlbert { m: c.ba_m },
        Family::ErdosRenyi { p } => Family::ErdosRenyi {
            p: match c.er_p {
                Auto::Auto => p,
                Auto::Value(v) => v,
            },
        },
    })
}
