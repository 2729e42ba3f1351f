//! Per-candidate cost of the network against exact reward computation.

use curio::config::ExperimentConfig;
use curio::harness::benchmark;
use curio::qnet::init_params;

fn main() -> curio::Result<()> {
    let cfg = ExperimentConfig::default();
    let params = init_params(cfg.layers, cfg.hidden, 0)?;
    let (_, report) = benchmark(&[25, 50, 100, 200], 5, &cfg, &params)?;
    println!("{:>5} {:>12} {:>12} {:>12}", "n", "gnn s", "igt s", "cpt s");
    for m in &report.medians {
        println!(
            "{:>5} {:>12.3e} {:>12.3e} {:>12.3e}",
            m.size, m.gnn_seconds, m.igt_seconds, m.cpt_seconds
        );
    }
    let (a, b, c) = report.slopes;
    println!("log-log slopes: gnn {a:.2}, igt {b:.2}, cpt {c:.2}");
    Ok(())
}
