//! Mean distance from the start node for a random walker and a
//! curiosity-biased walker.

use curio::explore::RewardKind;
use curio::graph::{Family, GeneratorSpec};
use curio::pagerank::{walker_diffusion, DiffusionWalker, RewardScorer};

fn main() -> curio::Result<()> {
    let g = GeneratorSpec::new(Family::default_for("RG", 200)?, 200, 4).generate()?;
    let scorer = RewardScorer(RewardKind::Igt);
    let plain = walker_diffusion(&g, &DiffusionWalker::Unbiased, 20, 200, 1)?;
    let biased = walker_diffusion(
        &g,
        &DiffusionWalker::Biased {
            scorer: &scorer,
            p_g: 0.2,
        },
        20,
        200,
        1,
    )?;
    println!("{:>4} {:>8} {:>8}", "step", "random", "biased");
    for t in (0..=20).step_by(2) {
        println!("{t:>4} {:>8.3} {:>8.3}", plain[t], biased[t]);
    }
    Ok(())
}
