//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's algorithms; only `Graph` is shared.
#![allow(dead_code, clippy::needless_range_loop)]

use curio::graph::{Family, GeneratorSpec, Graph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank over the rationals by exact row reduction.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Triangles `u < v < w` by brute force over all triples.
pub fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let n = g.node_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                if g.has_edge(u, v) && g.has_edge(v, w) && g.has_edge(u, w) {
                    out.push([u, v, w]);
                }
            }
        }
    }
    out
}

/// Oriented edge-by-triangle boundary matrix with ±1 entries.
pub fn signed_boundary(g: &Graph) -> Vec<Vec<i64>> {
    let n = g.node_count();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                edges.push((u, v));
            }
        }
    }
    let tris = triangles(g);
    let idx = |a: usize, b: usize| edges.iter().position(|&e| e == (a, b)).unwrap();
    let mut m = vec![vec![0i64; tris.len()]; edges.len()];
    for (t, &[a, b, c]) in tris.iter().enumerate() {
        m[idx(b, c)][t] = 1;
        m[idx(a, c)][t] = -1;
        m[idx(a, b)][t] = 1;
    }
    m
}

/// Components by depth-first search on the adjacency test.
pub fn components(g: &Graph) -> usize {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if !seen[v] && g.has_edge(u, v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// (β₀, β₁, rank ∂₂) over the rationals.
pub fn betti_oracle(g: &Graph) -> (usize, usize, usize) {
    let b0 = components(g);
    let m = signed_boundary(g);
    let rank = if m.is_empty() { 0 } else { rational_rank(&m) };
    let e = g.edge_count();
    (b0, e + b0 - g.node_count() - rank, rank)
}

/// Every set partition of `0..n` as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            rec(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        let mut p = vec![0];
        rec(&mut p, 0, n, &mut out);
    }
    out
}

/// Entropy rate in bits of the simple random walk.
pub fn entropy_oracle(g: &Graph) -> f64 {
    let two_m = 2.0 * g.edge_count() as f64;
    (0..g.node_count())
        .map(|i| {
            let d = g.degree(i) as f64;
            d / two_m * d.log2()
        })
        .sum()
}

/// Entropy rate of the cluster-aggregated walk.
pub fn clustered_rate_oracle(g: &Graph, assignment: &[usize]) -> f64 {
    let k = assignment.iter().max().map_or(0, |m| m + 1);
    let two_m = 2.0 * g.edge_count() as f64;
    let mut flow = vec![vec![0.0; k]; k];
    for (u, v) in g.edges() {
        flow[assignment[u]][assignment[v]] += 1.0 / two_m;
        flow[assignment[v]][assignment[u]] += 1.0 / two_m;
    }
    let mut rate = 0.0;
    for a in 0..k {
        let pi_a: f64 = flow[a].iter().sum();
        for b in 0..k {
            if flow[a][b] > 0.0 {
                rate -= flow[a][b] * (flow[a][b] / pi_a).log2();
            }
        }
    }
    rate
}

/// Minimum aggregated rate at each cluster count `1..=n` (index `k − 1`).
pub fn exact_rate_curve(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut best = vec![f64::INFINITY; n];
    for p in set_partitions(n) {
        let k = p.iter().max().unwrap() + 1;
        let r = clustered_rate_oracle(g, &p);
        if r < best[k - 1] {
            best[k - 1] = r;
        }
    }
    best
}

/// Solves `a x = b` by partial-pivot Gaussian elimination.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// PageRank from `(I − α Pᵀ) η = (1 − α) q`, with dangling rows set to `q`.
pub fn pagerank_oracle(g: &Graph, alpha: f64, q: &[f64]) -> Vec<f64> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = 1.0;
    }
    for j in 0..n {
        let d = g.degree(j);
        for i in 0..n {
            let p_ji = if d == 0 {
                q[i]
            } else if g.has_edge(j, i) {
                1.0 / d as f64
            } else {
                0.0
            };
            a[i][j] -= alpha * p_ji;
        }
    }
    dense_solve(a, q.iter().map(|x| (1.0 - alpha) * x).collect())
}

/// A random small graph from a mix of families.
pub fn mixed_graph(r: &mut ChaCha8Rng, max_n: usize) -> Graph {
    loop {
        let n = r.gen_range(3..=max_n);
        let family = match r.gen_range(0..3) {
            0 => Family::ErdosRenyi {
                p: r.gen_range(0.15..0.9),
            },
            1 if n >= 5 => Family::WattsStrogatz {
                k: if n >= 7 && r.gen_bool(0.5) { 4 } else { 2 },
                p: r.gen_range(0.0..0.6),
            },
            _ => Family::RandomGeometric {
                radius: r.gen_range(0.25..0.7),
            },
        };
        // the geometric generator gives up on radii too small to connect
        if let Ok(g) = GeneratorSpec::new(family, n, r.gen()).generate() {
            return g;
        }
    }
}

/// A random connected Erdős–Rényi graph with `2..=max_n` nodes.
pub fn connected_graph(r: &mut ChaCha8Rng, max_n: usize) -> Graph {
    loop {
        let n = r.gen_range(2..=max_n);
        let p = r.gen_range(0.2..0.9);
        let g = GeneratorSpec::new(Family::ErdosRenyi { p }, n, r.gen())
            .generate()
            .unwrap();
        if components(&g) == 1 {
            return g;
        }
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
