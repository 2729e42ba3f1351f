//! Entropy rate, rate-distortion curve and compressibility of a graph.

use curio::compression::{compressibility_from_curve, rate_distortion_curve, walk_model};
use curio::graph::{Family, GeneratorSpec, Graph};

fn report(name: &str, g: &Graph) -> curio::Result<()> {
    let w = walk_model(g)?;
    let curve = rate_distortion_curve(&w);
    println!(
        "{name}: entropy rate {:.4} bits, compressibility {:.4}",
        w.entropy,
        compressibility_from_curve(&w, &curve)
    );
    let rates: Vec<String> = curve.rates.iter().map(|r| format!("{r:.3}")).collect();
    println!("  R(k) for k = 1..{}: {}", curve.node_count, rates.join(" "));
    Ok(())
}

fn main() -> curio::Result<()> {
    report("cycle C12", &Graph::cycle(12))?;
    report("complete K8", &Graph::complete(8))?;
    let ws = GeneratorSpec::new(Family::WattsStrogatz { k: 4, p: 0.1 }, 16, 3).generate()?;
    report("Watts-Strogatz n=16", &ws)?;
    Ok(())
}
