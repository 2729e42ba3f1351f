//! Undirected simple graphs, the four synthetic environment families, induced
//! subgraphs and local degree profile features.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::seed;
use crate::{Error, Result};

/// Immutable undirected simple graph on nodes `0..n`.
///
/// Neighbor lists are sorted and symmetric; there are no self-loops or
/// duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Self-loops are rejected, duplicate
    /// edges (in either orientation) are collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at node {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut twice = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok(Self {
            adj,
            edge_count: twice / 2,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Appends a node adjacent to the given existing nodes; returns its id.
    pub(crate) fn push_node(&mut self, neighbors: &[usize]) -> usize {
        let id = self.adj.len();
        let mut list = neighbors.to_vec();
        list.sort_unstable();
        list.dedup();
        for &w in &list {
            debug_assert!(w < id);
            // new id is larger than every existing one, so push keeps order
            self.adj[w].push(id);
        }
        self.edge_count += list.len();
        self.adj.push(list);
        id
    }

    /// Component label per node (labels are `0..count` in order of first node).
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().1 == 1
    }

    /// Hop distances from `source`; unreachable nodes get `usize::MAX`.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Largest finite eccentricity.
    pub fn diameter(&self) -> usize {
        (0..self.node_count())
            .map(|s| {
                self.bfs_distances(s)
                    .into_iter()
                    .filter(|&d| d != usize::MAX)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// The subgraph induced by `nodes`. Node `i` of the result is `nodes[i]`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Subgraph> {
        let n = self.node_count();
        let mut local = vec![usize::MAX; n];
        for (i, &v) in nodes.iter().enumerate() {
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            if local[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!("node {v} listed twice")));
            }
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        let mut twice = 0;
        for (i, &v) in nodes.iter().enumerate() {
            let list = &mut adj[i];
            list.extend(self.adj[v].iter().map(|&w| local[w]).filter(|&j| j != usize::MAX));
            list.sort_unstable();
            twice += list.len();
        }
        Ok(Subgraph {
            graph: Graph {
                adj,
                edge_count: twice / 2,
            },
            original: nodes.to_vec(),
        })
    }

    /// Relabels nodes so that old node `u` becomes `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.node_count();
        assert_eq!(perm.len(), n, "permutation length");
        let mut adj = vec![Vec::new(); n];
        for (u, list) in self.adj.iter().enumerate() {
            let mut mapped: Vec<usize> = list.iter().map(|&v| perm[v]).collect();
            mapped.sort_unstable();
            adj[perm[u]] = mapped;
        }
        Graph {
            adj,
            edge_count: self.edge_count,
        }
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|u| (u - 1, u))).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }
}

/// An induced subgraph together with the original id of each of its nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub original: Vec<usize>,
}

/// Synthetic environment family and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Random geometric graph in the unit square.
    RandomGeometric { radius: f64 },
    /// Ring lattice of even degree `k`, each edge rewired with probability `p`.
    WattsStrogatz { k: usize, p: f64 },
    /// Preferential attachment with `m` edges per new node from an `m`-clique.
    BarabasiAlbert { m: usize },
    /// Each pair independently with probability `p`.
    ErdosRenyi { p: f64 },
}

impl Family {
    pub fn short_name(&self) -> &'static str {
        match self {
            Family::RandomGeometric { .. } => "RG",
            Family::WattsStrogatz { .. } => "WS",
            Family::BarabasiAlbert { .. } => "BA",
            Family::ErdosRenyi { .. } => "ER",
        }
    }

    /// Default parameters for `n` nodes.
    ///
    /// RG targets mean degree 8, raised to `ln n + 2` when that is larger so
    /// that big environments stay connected.
    pub fn default_for(name: &str, n: usize) -> Result<Family> {
        Ok(match name.to_ascii_uppercase().as_str() {
            "RG" => Family::RandomGeometric {
                radius: default_rg_radius(n),
            },
            "WS" => Family::WattsStrogatz {
                k: 6.min(n.saturating_sub(1) & !1).max(2),
                p: 0.1,
            },
            "BA" => Family::BarabasiAlbert {
                m: 3.min(n.saturating_sub(1)).max(1),
            },
            "ER" => Family::ErdosRenyi {
                p: if n > 1 { (6.0 / (n - 1) as f64).min(1.0) } else { 0.0 },
            },
            other => return Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        })
    }
}

/// Radius giving the target mean degree in the unit square, boundary effects
/// included: `E[deg] = (n − 1)(πr² − 8r³/3 + r⁴/2)` for `r ≤ 1`.
pub fn default_rg_radius(n: usize) -> f64 {
    let n = n.max(2) as f64;
    let target = 8.0f64.max(n.ln() + 2.0);
    let mean_degree = |r: f64| (n - 1.0) * (std::f64::consts::PI * r * r - 8.0 * r.powi(3) / 3.0 + r.powi(4) / 2.0);
    if mean_degree(1.0) <= target {
        return std::f64::consts::SQRT_2;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mean_degree(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Recipe for one synthetic environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

const RG_MAX_ATTEMPTS: usize = 200;

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self { family, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n == 0 {
            return bad("node count must be at least 1".into());
        }
        match self.family {
            Family::RandomGeometric { radius } => {
                if !(radius.is_finite() && radius >= 0.0) {
                    return bad(format!("radius {radius} must be finite and nonnegative"));
                }
            }
            Family::WattsStrogatz { k, p } => {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("rewire probability {p} outside [0,1]"));
                }
                if k % 2 != 0 || k >= self.n {
                    return bad(format!("ring degree {k} must be even and < n = {}", self.n));
                }
            }
            Family::BarabasiAlbert { m } => {
                if m == 0 || m >= self.n {
                    return bad(format!("attachment count {m} must be in 1..n = {}", self.n));
                }
            }
            Family::ErdosRenyi { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("edge probability {p} outside [0,1]"));
                }
            }
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Graph> {
        self.validate()?;
        let mut rng = seed::rng(self.seed);
        let n = self.n;
        match self.family {
            Family::RandomGeometric { radius } => {
                for _ in 0..RG_MAX_ATTEMPTS {
                    let g = random_geometric(n, radius, &mut rng);
                    if g.is_connected() {
                        return Ok(g);
                    }
                }
                Err(Error::InvalidParameter(format!(
                    "random geometric graph with n = {n}, radius = {radius} stayed disconnected after {RG_MAX_ATTEMPTS} attempts"
                )))
            }
            Family::WattsStrogatz { k, p } => Ok(watts_strogatz(n, k, p, &mut rng)),
            Family::BarabasiAlbert { m } => Ok(barabasi_albert(n, m, &mut rng)),
            Family::ErdosRenyi { p } => Ok(erdos_renyi(n, p, &mut rng)),
        }
    }
}

/// Convenience wrapper over [`GeneratorSpec::generate`].
pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    spec.generate()
}

fn random_geometric(n: usize, radius: f64, rng: &mut seed::Rng) -> Graph {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dx = pts[i].0 - pts[j].0;
            let dy = pts[i].1 - pts[j].1;
            if dx * dx + dy * dy <= r2 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid edges")
}

fn watts_strogatz(n: usize, k: usize, p: f64, rng: &mut seed::Rng) -> Graph {
    let mut adj: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    // rewire the lattice edges (u, u + j) in the usual order: by offset, then node
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.gen::<f64>() >= p || !adj[u].contains(&v) {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges: Vec<(usize, usize)> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, s)| s.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect();
    Graph::from_edges(n, edges).expect("valid edges")
}

fn barabasi_albert(n: usize, m: usize, rng: &mut seed::Rng) -> Graph {
    let mut edges = Vec::new();
    // each endpoint occurrence is one unit of attachment weight
    let mut ends: Vec<usize> = Vec::new();
    for u in 0..m {
        for v in u + 1..m {
            edges.push((u, v));
            ends.push(u);
            ends.push(v);
        }
    }
    for new in m..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            // a 1-node seed has no edges yet; attach uniformly in that case
            let t = if ends.is_empty() {
                rng.gen_range(0..new)
            } else {
                ends[rng.gen_range(0..ends.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            edges.push((new, t));
            ends.push(new);
            ends.push(t);
        }
    }
    Graph::from_edges(n, edges).expect("valid edges")
}

fn erdos_renyi(n: usize, p: f64, rng: &mut seed::Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid edges")
}

/// Local degree profile: degree, then min, max, mean and population standard
/// deviation of the neighbor degrees. Isolated nodes get all zeros.
pub type LdpFeature = [f64; 5];

pub fn ldp_features(g: &Graph) -> Vec<LdpFeature> {
    let deg = g.degrees();
    (0..g.node_count())
        .map(|u| {
            let nb = g.neighbors(u);
            if nb.is_empty() {
                return [0.0; 5];
            }
            let (mut lo, mut hi, mut sum) = (usize::MAX, 0usize, 0usize);
            for &v in nb {
                lo = lo.min(deg[v]);
                hi = hi.max(deg[v]);
                sum += deg[v];
            }
            let k = nb.len() as f64;
            let mean = sum as f64 / k;
            let var = nb
                .iter()
                .map(|&v| {
                    let d = deg[v] as f64 - mean;
                    d * d
                })
                .sum::<f64>()
                / k;
            [nb.len() as f64, lo as f64, hi as f64, mean, var.sqrt()]
        })
        .collect()
}

/// Shuffled copy of `0..n`, handy for relabeling tests and examples.
pub fn random_permutation(n: usize, rng: &mut seed::Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
