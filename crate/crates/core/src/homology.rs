//! Betti numbers of the 2-skeleton of a graph's clique complex.
//!
//! The information-gap reward is β₁: the number of independent loops of
//! edges that cannot be filled by triangles. It is computed as
//! `|E| − |V| + β₀ − rank(∂₂)` with the rank of the edge×triangle boundary
//! matrix taken over GF(2) by bit-packed column elimination.

use crate::graph::Graph;

/// Vertices, edges and triangles of a graph's clique complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueComplex2 {
    pub vertex_count: usize,
    /// Sorted `(u, v)` pairs with `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// Sorted triples, lexicographically ordered.
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BettiPair {
    pub beta0: usize,
    pub beta1: usize,
}

pub fn build_complex(g: &Graph) -> CliqueComplex2 {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut triangles = Vec::new();
    for u in 0..g.node_count() {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            // sorted intersection of N(u) and N(v), restricted to w > v
            let nv = g.neighbors(v);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            triangles.push([u, v, nu[i]]);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    CliqueComplex2 {
        vertex_count: g.node_count(),
        edges,
        triangles,
    }
}

/// Rank over GF(2) of the boundary map from triangles to edges.
pub fn boundary_rank(c: &CliqueComplex2) -> usize {
    let rows = c.edges.len();
    if rows == 0 || c.triangles.is_empty() {
        return 0;
    }
    let words = rows.div_ceil(64);
    let edge_index = |a: usize, b: usize| -> usize {
        c.edges
            .binary_search(&(a, b))
            .expect("triangle edge missing from complex")
    };
    // pivot[row] holds the reduced column whose highest set bit is `row`
    let mut pivot: Vec<Option<Vec<u64>>> = vec![None; rows];
    let mut rank = 0;
    let mut col = vec![0u64; words];
    for &[a, b, d] in &c.triangles {
        col.iter_mut().for_each(|w| *w = 0);
        for e in [edge_index(a, b), edge_index(a, d), edge_index(b, d)] {
            col[e / 64] |= 1 << (e % 64);
        }
        let mut top = words - 1;
        loop {
            while top > 0 && col[top] == 0 {
                top -= 1;
            }
            if col[top] == 0 {
                break;
            }
            let low = top * 64 + 63 - col[top].leading_zeros() as usize;
            match &pivot[low] {
                Some(p) => {
                    for (x, y) in col[..=top].iter_mut().zip(&p[..=top]) {
                        *x ^= *y;
                    }
                }
                None => {
                    pivot[low] = Some(col[..=top].to_vec());
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Number of connected components via union-find over the edges.
pub fn component_count(g: &Graph) -> usize {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut count = n;
    for (u, v) in g.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            count -= 1;
        }
    }
    count
}

pub fn betti(g: &Graph) -> BettiPair {
    let complex = build_complex(g);
    let beta0 = component_count(g);
    let rank = boundary_rank(&complex);
    let beta1 = g.edge_count() + beta0 - g.node_count() - rank;
    BettiPair { beta0, beta1 }
}

/// The information-gap reward of a visited subgraph: its β₁.
pub fn igt_value(subgraph: &Graph) -> f64 {
    betti(subgraph).beta1 as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_counts() {
        assert_eq!(build_complex(&Graph::cycle(4)).triangles.len(), 0);
        assert_eq!(build_complex(&Graph::complete(4)).triangles.len(), 4);
        assert_eq!(build_complex(&Graph::complete(5)).triangles.len(), 10);
        let k4 = build_complex(&Graph::complete(4));
        assert_eq!(k4.triangles, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
    }

    #[test]
    fn ranks() {
        assert_eq!(boundary_rank(&build_complex(&Graph::complete(3))), 1);
        assert_eq!(boundary_rank(&build_complex(&Graph::cycle(5))), 0);
        assert_eq!(boundary_rank(&build_complex(&Graph::complete(4))), 3);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti(&Graph::cycle(4)), BettiPair { beta0: 1, beta1: 1 });
        let two_edges = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(betti(&two_edges), BettiPair { beta0: 2, beta1: 0 });
        assert_eq!(betti(&Graph::complete(4)), BettiPair { beta0: 1, beta1: 0 });
        assert_eq!(betti(&Graph::empty(0)), BettiPair { beta0: 0, beta1: 0 });
    }

    #[test]
    fn octahedron_has_no_one_cycles() {
        // K_{2,2,2}: every 4-cycle is filled by triangles
        let edges = (0..6)
            .flat_map(|u| (u + 1..6).map(move |v| (u, v)))
            .filter(|&(u, v)| !(u % 3 == v % 3));
        let g = Graph::from_edges(6, edges).unwrap();
        assert_eq!(betti(&g).beta1, 0);
    }

    #[test]
    fn wide_rank_crosses_word_boundaries() {
        // K9 has 36 edges and 84 triangles; rank(∂2) = C(8,2) = 28
        assert_eq!(boundary_rank(&build_complex(&Graph::complete(9))), 28);
        // K13 has 78 edges spanning two words
        assert_eq!(boundary_rank(&build_complex(&Graph::complete(13))), 66);
    }
}
