//! Generates a train/validation/test suite and writes it as edge lists.

use curio::data::write_edge_list;
use curio::dqn::EnvironmentSuite;
use curio::graph::Family;

fn main() -> curio::Result<()> {
    let dir = std::env::temp_dir().join("curio_environments");
    std::fs::create_dir_all(&dir)?;
    for name in ["RG", "WS", "BA", "ER"] {
        let suite = EnvironmentSuite::generate(Family::default_for(name, 50)?, 50, (4, 1, 1), 7)?;
        let degree: f64 = suite
            .train
            .iter()
            .map(|g| 2.0 * g.edge_count() as f64 / g.node_count() as f64)
            .sum::<f64>()
            / suite.train.len() as f64;
        println!(
            "{name}: mean degree {degree:.2} over {} training graphs",
            suite.train.len()
        );
        for (i, g) in suite.test.iter().enumerate() {
            write_edge_list(g, &dir.join(format!("{name}_test_{i}.edges")))?;
        }
    }
    println!("test graphs written to {}", dir.display());
    Ok(())
}
