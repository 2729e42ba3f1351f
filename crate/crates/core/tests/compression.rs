mod common;

use common::{clustered_rate_oracle, connected_graph, entropy_oracle, exact_rate_curve, rng, set_partitions};
use curio::compression::{clustered_rate, compressibility, cpt_value, rate_distortion_curve, walk_model, Partition};
use curio::graph::{random_permutation, Graph};
use curio::seed;

fn oracle_compressibility(g: &Graph) -> f64 {
    let curve = exact_rate_curve(g);
    entropy_oracle(g) - curve.iter().sum::<f64>() / curve.len() as f64
}

#[test]
fn bell_numbers() {
    let counts: Vec<usize> = (1..=8).map(|n| set_partitions(n).len()).collect();
    assert_eq!(counts, [1, 2, 5, 15, 52, 203, 877, 4140]);
}

#[test]
fn rates_match_oracle_on_random_partitions() {
    let mut r = rng(2);
    for _ in 0..40 {
        let g = connected_graph(&mut r, 7);
        let w = walk_model(&g).unwrap();
        assert!((w.entropy - entropy_oracle(&g)).abs() < 1e-12);
        for p in set_partitions(g.node_count()).into_iter().step_by(7) {
            let ours = clustered_rate(&w, &Partition::new(p.clone()).unwrap()).unwrap();
            assert!((ours - clustered_rate_oracle(&g, &p)).abs() < 1e-12);
        }
    }
}

#[test]
fn greedy_curve_dominates_exhaustive_search() {
    let mut r = rng(3);
    for _ in 0..60 {
        let g = connected_graph(&mut r, 7);
        let w = walk_model(&g).unwrap();
        let greedy = rate_distortion_curve(&w);
        let exact = exact_rate_curve(&g);
        for k in 1..=g.node_count() {
            assert!(greedy.rate_at(k) >= exact[k - 1] - 1e-12, "k = {k}");
        }
        assert!(compressibility(&g).unwrap() <= oracle_compressibility(&g) + 1e-12);
    }
}

#[test]
fn k4_matches_exhaustive_oracle() {
    let k4 = Graph::complete(4);
    let greedy = rate_distortion_curve(&walk_model(&k4).unwrap());
    let exact = exact_rate_curve(&k4);
    for k in 1..=4 {
        assert!((greedy.rate_at(k) - exact[k - 1]).abs() < 1e-9);
    }
    assert!((compressibility(&k4).unwrap() - oracle_compressibility(&k4)).abs() < 1e-9);
}

#[test]
fn c4_opposite_pairing_is_beyond_adjacent_merges() {
    // pairing opposite nodes of a square gives rate 0, but opposite nodes are
    // not adjacent, so the greedy search never tries it
    let c4 = Graph::cycle(4);
    let exact = exact_rate_curve(&c4);
    assert_eq!((exact[0], exact[1], exact[3]), (0.0, 0.0, 1.0));
    assert!((exact[2] - 0.5).abs() < 1e-12);
    let greedy = rate_distortion_curve(&walk_model(&c4).unwrap());
    assert!(greedy.rate_at(2) > exact[1]);
    assert!(compressibility(&c4).unwrap() < oracle_compressibility(&c4));
}

#[test]
fn k5_minus_edge_state() {
    let edges: Vec<_> = Graph::complete(5).edges().filter(|&e| e != (0, 1)).collect();
    let g = Graph::from_edges(5, edges).unwrap();
    let c = compressibility(&g).unwrap();
    assert_eq!(cpt_value(&g), c);
    assert!((c - oracle_compressibility(&g)).abs() < 1e-9);
}

#[test]
fn compressibility_is_bounded_by_entropy() {
    let mut r = rng(4);
    for _ in 0..500 {
        let g = connected_graph(&mut r, 20);
        let h = walk_model(&g).unwrap().entropy;
        let c = compressibility(&g).unwrap();
        assert!((0.0..=h).contains(&c), "C = {c}, H = {h}");
    }
}

#[test]
fn relabelling_symmetric_graphs_keeps_compressibility() {
    let mut r = seed::rng(6);
    for n in 3..10 {
        for g in [Graph::cycle(n), Graph::complete(n)] {
            let c = compressibility(&g).unwrap();
            for _ in 0..3 {
                let p = random_permutation(n, &mut r);
                assert!((compressibility(&g.permuted(&p)).unwrap() - c).abs() < 1e-12);
            }
        }
    }
}
