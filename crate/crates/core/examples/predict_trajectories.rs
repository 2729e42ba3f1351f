//! Predicts the next node of exploration trajectories with plain and
//! curiosity-biased PageRank, fitted on training windows.

use curio::config::ExperimentConfig;
use curio::explore::RewardKind;
use curio::graph::GeneratorSpec;
use curio::harness::{greedy_trajectories, pagerank_pipeline};

fn main() -> curio::Result<()> {
    let cfg = ExperimentConfig {
        pagerank_trajectories: 150,
        search_budget: 60,
        ..ExperimentConfig::default()
    };
    let g = GeneratorSpec::new(cfg.pagerank_family()?, cfg.pagerank_n, 11).generate()?;
    let paths = greedy_trajectories(
        &g,
        RewardKind::Igt,
        cfg.pagerank_trajectories,
        cfg.pagerank_trajectory_length,
        12,
    )?;
    let r = pagerank_pipeline(&g, &paths, &cfg, &[], None)?;
    println!(
        "{} windows ({} dropped), {} train / {} test",
        r.windows, r.dropped, r.train_windows, r.test_windows
    );
    let (u, b) = (&r.fit.unbiased, &r.fit.biased);
    println!("plain:  alpha {:.3}", u.alpha);
    println!("biased: alpha {:.3}, weights {:.3?}", b.alpha, b.weights);
    println!("held-out improvement {:+.2}%", r.improvement_percent());
    Ok(())
}
