//! Plain PageRank against the Monte Carlo curiosity-biased walker.

use curio::explore::RewardKind;
use curio::graph::{Family, GeneratorSpec};
use curio::pagerank::{biased_pagerank, pagerank, uniform_teleport, MonteCarloConfig, Restart, RewardScorer};

fn main() -> curio::Result<()> {
    let g = GeneratorSpec::new(Family::BarabasiAlbert { m: 2 }, 40, 5).generate()?;
    let q = uniform_teleport(g.node_count());
    let plain = pagerank(&g, 0.85, &q)?;
    let mc = MonteCarloConfig {
        block_steps: 20_000,
        ..MonteCarloConfig::default()
    };
    let biased = biased_pagerank(
        &g,
        &RewardScorer(RewardKind::Igt),
        0.85,
        &q,
        0.3,
        Restart::Fresh,
        &mc,
        9,
    )?;

    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| plain[b].total_cmp(&plain[a]));
    println!("{:>4} {:>6} {:>9} {:>9}", "node", "degree", "pagerank", "biased");
    for &v in order.iter().take(10) {
        println!("{v:>4} {:>6} {:>9.4} {:>9.4}", g.degree(v), plain[v], biased[v]);
    }
    Ok(())
}
