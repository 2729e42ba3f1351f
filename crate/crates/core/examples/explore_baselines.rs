//! Runs the heuristic explorers on random geometric graphs.

use curio::dqn::MeanSe;
use curio::explore::{baseline_agent, run_episode, BaselineKind, EpisodeConfig, RewardKind};
use curio::graph::{Family, GeneratorSpec};
use curio::seed::derive;

fn main() -> curio::Result<()> {
    let graphs = (0..20)
        .map(|i| GeneratorSpec::new(Family::default_for("RG", 50)?, 50, derive(1, &[i])).generate())
        .collect::<curio::Result<Vec<_>>>()?;
    for reward in [RewardKind::Igt, RewardKind::Cpt] {
        println!("{reward}, T = 10");
        for kind in BaselineKind::ALL {
            let mut returns = Vec::new();
            for (gi, g) in graphs.iter().enumerate() {
                let cfg = EpisodeConfig::new(10, reward, derive(2, &[gi as u64]));
                let trace = run_episode(g, &cfg, &mut baseline_agent(kind, reward))?;
                returns.push(trace.rewards().iter().sum());
            }
            let m = MeanSe::of(&returns);
            println!("  {kind:?}: {:.3} ± {:.3}", m.mean, m.se);
        }
    }
    Ok(())
}
