mod common;

use common::rng;
use curio::explore::ExplorationState;
use curio::graph::{random_permutation, Family, GeneratorSpec, Graph};
use curio::qnet::{forward, grad, init_params, q_values, CandidateBatch, QNetworkParams};
use curio::seed;
use rand::Rng;

/// A state of 2..=6 visited nodes on a small random geometric graph.
fn random_batch(r: &mut impl Rng) -> (Graph, Vec<usize>) {
    loop {
        let n = r.gen_range(6..14);
        let g = GeneratorSpec::new(Family::RandomGeometric { radius: 0.45 }, n, r.gen())
            .generate()
            .unwrap();
        let mut s = ExplorationState::new(&g, r.gen_range(0..n)).unwrap();
        let steps = r.gen_range(1..6);
        for _ in 0..steps {
            let c = s.candidate_actions();
            if c.is_empty() {
                break;
            }
            s.advance(c[r.gen_range(0..c.len())]).unwrap();
        }
        let visited = s.visited().to_vec();
        if !s.candidate_actions().is_empty() {
            return (g, visited);
        }
    }
}

fn objective(batch: &CandidateBatch, params: &QNetworkParams, upstream: &[f64]) -> f64 {
    q_values(batch, params).iter().zip(upstream).map(|(q, u)| q * u).sum()
}

#[test]
fn gradients_match_central_differences() {
    let mut r = rng(31);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for inst in 0..20 {
        let (g, visited) = random_batch(&mut r);
        let state = ExplorationState::from_visited(&g, &visited).unwrap();
        let batch = CandidateBatch::from_state(&state, &state.candidate_actions());
        let params = init_params(2, 8, inst).unwrap();
        let upstream: Vec<f64> = (0..batch.len()).map(|_| r.gen_range(-1.0..1.0)).collect();
        let analytic = grad(&upstream, &batch, &params);
        for _ in 0..5 {
            let k = r.gen_range(0..params.len());
            let mut plus = params.clone();
            plus.as_mut_slice()[k] += h;
            let mut minus = params.clone();
            minus.as_mut_slice()[k] -= h;
            let fd = (objective(&batch, &plus, &upstream) - objective(&batch, &minus, &upstream)) / (2.0 * h);
            let a = analytic.as_slice()[k];
            let rel = (a - fd).abs() / a.abs().max(fd.abs()).max(1e-6);
            worst = worst.max(rel);
        }
    }
    assert!(worst < 1e-4, "worst relative error {worst}");
}

#[test]
fn q_is_invariant_to_relabelling() {
    let mut r = seed::rng(4);
    let params = init_params(2, 16, 1).unwrap();
    for n in 2..12 {
        let g = GeneratorSpec::new(Family::ErdosRenyi { p: 0.4 }, n, n as u64)
            .generate()
            .unwrap();
        for c in 0..n {
            let q = forward(&g, c, &params).q;
            let p = random_permutation(n, &mut r);
            assert!((forward(&g.permuted(&p), p[c], &params).q - q).abs() < 1e-9);
        }
    }
}

#[test]
fn q_ignores_environment_beyond_the_state() {
    let params = init_params(2, 16, 3).unwrap();
    // path 0-1-2-3-4-5 explored from 0 to 2; the rest of the environment changes
    let base = Graph::path(6);
    let mut extra: Vec<_> = base.edges().collect();
    extra.extend([(4, 6), (5, 6), (6, 7), (3, 7)]);
    let grown = Graph::from_edges(8, extra).unwrap();
    let visited = [0, 1, 2];
    let qs = |g: &Graph| {
        let s = ExplorationState::from_visited(g, &visited).unwrap();
        let cands = s.candidate_actions();
        (
            cands.clone(),
            q_values(&CandidateBatch::from_state(&s, &cands), &params),
        )
    };
    assert_eq!(qs(&base), qs(&grown));
}
