//! Trains a small Q-network on IGT and compares it to the greedy explorer.
//!
//! Uses a reduced budget so it finishes in seconds; the full setup is
//! `curio train` with the default config.

use curio::dqn::{evaluate, train, EnvironmentSuite, TrainConfig};
use curio::explore::{baseline_agent, BaselineKind, EpisodeConfig, RewardKind};
use curio::graph::Family;
use curio::qnet::QNetConfig;

fn main() -> curio::Result<()> {
    let suite = EnvironmentSuite::generate(Family::default_for("RG", 50)?, 50, (40, 4, 4), 3)?;
    let cfg = TrainConfig {
        net: QNetConfig { layers: 2, hidden: 32 },
        episodes_per_env: 15,
        eps_decay_steps: 3000,
        warmup: 200,
        target_sync: 200,
        validation_interval: 100,
        validation_episodes: 4,
        seed: 3,
        ..TrainConfig::default()
    };
    let outcome = train(&suite, &cfg)?;
    println!(
        "trained {} episodes, best validation return {:.3}",
        outcome.progress.episodes, outcome.best_validation
    );

    let ecfg = EpisodeConfig::new(cfg.horizon, RewardKind::Igt, 11);
    let gnn = evaluate(&outcome.best, &suite.test, &ecfg, 10)?;
    let greedy = curio::dqn::episode_returns(&suite.test, &ecfg, 10, || {
        baseline_agent(BaselineKind::Greedy, RewardKind::Igt)
    })?;
    let greedy = curio::dqn::MeanSe::of(&greedy);
    println!(
        "test return: gnn {:.3} ± {:.3}, greedy {:.3} ± {:.3}",
        gnn.mean, gnn.se, greedy.mean, greedy.se
    );
    Ok(())
}
