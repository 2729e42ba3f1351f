//! Random-walk entropy, rate-distortion curves and network compressibility.
//!
//! A walk on an undirected graph has transitions `P_ij = 1/deg_i` and
//! stationary distribution `π_i = deg_i / 2|E|`. Clustering nodes coarse-grains
//! the walk; its information rate is estimated as the entropy rate of the
//! aggregated (lumped) chain. Compressibility averages the rate reduction over
//! every number of clusters `n = t..1`.

use crate::graph::Graph;
use crate::{Error, Result};

/// Simple random walk on a connected graph, all rates in bits.
#[derive(Debug, Clone)]
pub struct WalkModel {
    /// Sparse rows of the transition matrix: `(j, P_ij)` with `P_ij > 0`.
    pub transition: Vec<Vec<(usize, f64)>>,
    pub stationary: Vec<f64>,
    pub entropy: f64,
}

impl WalkModel {
    pub fn node_count(&self) -> usize {
        self.stationary.len()
    }
}

pub fn walk_model(g: &Graph) -> Result<WalkModel> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Domain(format!("random walk needs at least 2 nodes, got {n}")));
    }
    if let Some(u) = (0..n).find(|&u| g.degree(u) == 0) {
        return Err(Error::Domain(format!("node {u} is isolated")));
    }
    if !g.is_connected() {
        return Err(Error::Domain("graph is disconnected".into()));
    }
    let two_q = 2.0 * g.edge_count() as f64;
    let mut transition = Vec::with_capacity(n);
    let mut stationary = Vec::with_capacity(n);
    let mut entropy = 0.0;
    for u in 0..n {
        let d = g.degree(u) as f64;
        let p = 1.0 / d;
        transition.push(g.neighbors(u).iter().map(|&v| (v, p)).collect());
        let pi = d / two_q;
        stationary.push(pi);
        // −Σ_j P_ij log P_ij = log deg_i for a uniform row
        entropy += pi * d.log2();
    }
    Ok(WalkModel {
        transition,
        stationary,
        entropy,
    })
}

/// Assignment of nodes to `cluster_count` nonempty clusters labelled `0..count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    cluster_count: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let count = assignment.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut seen = vec![false; count];
        for &c in &assignment {
            seen[c] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter("partition has an empty cluster".into()));
        }
        Ok(Self {
            assignment,
            cluster_count: count,
        })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            cluster_count: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            cluster_count: usize::from(n > 0),
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }
}

/// `x log₂ x` with the `0 log 0 = 0` convention.
fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Entropy rate of the aggregated chain induced by `p`.
pub fn clustered_rate(w: &WalkModel, p: &Partition) -> Result<f64> {
    let n = w.node_count();
    if p.assignment.len() != n {
        return Err(Error::InvalidParameter(format!(
            "partition covers {} nodes, walk has {n}",
            p.assignment.len()
        )));
    }
    let k = p.cluster_count;
    let mut mass = vec![0.0; k];
    let mut flow = vec![0.0; k * k];
    for i in 0..n {
        let a = p.assignment[i];
        mass[a] += w.stationary[i];
        for &(j, pij) in &w.transition[i] {
            flow[a * k + p.assignment[j]] += w.stationary[i] * pij;
        }
    }
    let mut rate = 0.0;
    for a in 0..k {
        if mass[a] <= 0.0 {
            continue;
        }
        for b in 0..k {
            let f = flow[a * k + b];
            if f > 0.0 {
                let pab = f / mass[a];
                rate -= mass[a] * pab * pab.log2();
            }
        }
    }
    Ok(rate.max(0.0))
}

/// Best rate found at each cluster count, indexed so that `rates[n - 1]` is
/// the rate with `n` clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct RateDistortionCurve {
    pub node_count: usize,
    pub rates: Vec<f64>,
}

impl RateDistortionCurve {
    pub fn rate_at(&self, clusters: usize) -> f64 {
        self.rates[clusters - 1]
    }

    /// `(s, R(s))` pairs from the finest scale to the coarsest.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let t = self.node_count as f64;
        (1..=self.node_count)
            .rev()
            .map(|n| (1.0 - (n as f64 - 1.0) / t, self.rate_at(n)))
            .collect()
    }
}

/// Greedy agglomerative search for low-rate clusterings at every scale.
///
/// Starting from singletons, repeatedly merges the pair of clusters with the
/// lowest resulting rate, considering only pairs joined by at least one edge
/// (all pairs when none is joined). The curve is smoothed with a running
/// minimum so it never increases as clusters are merged.
pub fn rate_distortion_curve(w: &WalkModel) -> RateDistortionCurve {
    let t = w.node_count();
    // dense joint flow F_ab = Σ π_i P_ij between clusters, indexed by slot
    let mut flow = vec![0.0; t * t];
    for i in 0..t {
        for &(j, pij) in &w.transition[i] {
            flow[i * t + j] += w.stationary[i] * pij;
        }
    }
    let mut mass = w.stationary.clone();
    let mut active: Vec<usize> = (0..t).collect();
    let mut rates = vec![0.0; t];
    rates[t - 1] = w.entropy;

    // rate = Σ_a h(Π_a) − Σ_ab h(F_ab), with h(x) = x log₂ x
    let exact_rate = |flow: &[f64], mass: &[f64], active: &[usize]| -> f64 {
        let mut r = 0.0;
        for &a in active {
            r += xlogx(mass[a]);
            for &b in active {
                r -= xlogx(flow[a * t + b]);
            }
        }
        r.max(0.0)
    };

    while active.len() > 1 {
        let k = active.len();
        let mut best: Option<(f64, usize, usize)> = None;
        let mut any_joined = false;
        for pass in 0..2 {
            for ia in 0..k {
                for ib in ia + 1..k {
                    let (a, b) = (active[ia], active[ib]);
                    let joined = flow[a * t + b] > 0.0 || flow[b * t + a] > 0.0;
                    if pass == 0 && !joined {
                        continue;
                    }
                    any_joined |= joined;
                    let delta = merge_delta(&flow, &mass, &active, t, a, b);
                    if best.is_none_or(|(d, _, _)| delta < d) {
                        best = Some((delta, a, b));
                    }
                }
            }
            if any_joined {
                break;
            }
        }
        let (_, a, b) = best.expect("at least one pair");
        // merge b into a
        mass[a] += mass[b];
        mass[b] = 0.0;
        for &x in &active {
            if x == a || x == b {
                continue;
            }
            flow[a * t + x] += flow[b * t + x];
            flow[x * t + a] += flow[x * t + b];
            flow[b * t + x] = 0.0;
            flow[x * t + b] = 0.0;
        }
        let self_flow = flow[a * t + a] + flow[a * t + b] + flow[b * t + a] + flow[b * t + b];
        flow[a * t + a] = self_flow;
        flow[a * t + b] = 0.0;
        flow[b * t + a] = 0.0;
        flow[b * t + b] = 0.0;
        active.retain(|&x| x != b);
        let r = exact_rate(&flow, &mass, &active);
        rates[active.len() - 1] = if active.len() == 1 { 0.0 } else { r };
    }
    // running minimum from fine to coarse
    for n in (0..t.saturating_sub(1)).rev() {
        rates[n] = rates[n].min(rates[n + 1]);
    }
    RateDistortionCurve { node_count: t, rates }
}

/// Change in rate from merging clusters `a` and `b`; O(k) per pair.
fn merge_delta(flow: &[f64], mass: &[f64], active: &[usize], t: usize, a: usize, b: usize) -> f64 {
    let mut delta = xlogx(mass[a] + mass[b]) - xlogx(mass[a]) - xlogx(mass[b]);
    let (faa, fab, fba, fbb) = (flow[a * t + a], flow[a * t + b], flow[b * t + a], flow[b * t + b]);
    delta -= xlogx(faa + fab + fba + fbb) - xlogx(faa) - xlogx(fab) - xlogx(fba) - xlogx(fbb);
    for &x in active {
        if x == a || x == b {
            continue;
        }
        let (fax, fbx) = (flow[a * t + x], flow[b * t + x]);
        let (fxa, fxb) = (flow[x * t + a], flow[x * t + b]);
        if fax > 0.0 || fbx > 0.0 {
            delta -= xlogx(fax + fbx) - xlogx(fax) - xlogx(fbx);
        }
        if fxa > 0.0 || fxb > 0.0 {
            delta -= xlogx(fxa + fxb) - xlogx(fxa) - xlogx(fxb);
        }
    }
    delta
}

/// `C = H − (1/t) Σ_{n=1..t} R(n)`.
pub fn compressibility_from_curve(w: &WalkModel, curve: &RateDistortionCurve) -> f64 {
    let t = curve.node_count as f64;
    let mean: f64 = curve.rates.iter().sum::<f64>() / t;
    (w.entropy - mean).clamp(0.0, w.entropy)
}

pub fn compressibility(g: &Graph) -> Result<f64> {
    let w = walk_model(g)?;
    let curve = rate_distortion_curve(&w);
    Ok(compressibility_from_curve(&w, &curve))
}

/// Compression reward of a visited subgraph.
///
/// Disconnected subgraphs are scored per component with at least one edge,
/// weighted by that component's share of the edges; isolated nodes are
/// ignored and an edgeless subgraph scores 0.
pub fn cpt_value(subgraph: &Graph) -> f64 {
    let m = subgraph.edge_count();
    if m == 0 {
        return 0.0;
    }
    let (label, count) = subgraph.components();
    if count == 1 {
        return compressibility(subgraph).expect("connected graph with edges");
    }
    let mut members = vec![Vec::new(); count];
    for (u, &c) in label.iter().enumerate() {
        members[c].push(u);
    }
    members
        .iter()
        .filter(|nodes| nodes.len() >= 2)
        .map(|nodes| {
            let comp = subgraph.induced_subgraph(nodes).expect("valid nodes").graph;
            let share = comp.edge_count() as f64 / m as f64;
            share * compressibility(&comp).expect("connected component")
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        for n in [3, 5, 8] {
            assert!((walk_model(&Graph::cycle(n)).unwrap().entropy - 1.0).abs() < 1e-12);
            let kn = walk_model(&Graph::complete(n)).unwrap().entropy;
            assert!((kn - ((n - 1) as f64).log2()).abs() < 1e-12);
        }
        assert!((walk_model(&Graph::path(3)).unwrap().entropy - 0.5).abs() < 1e-12);
    }

    #[test]
    fn walk_model_domain_errors() {
        assert!(matches!(walk_model(&Graph::empty(1)), Err(Error::Domain(_))));
        let with_isolated = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(walk_model(&with_isolated), Err(Error::Domain(_))));
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(walk_model(&split), Err(Error::Domain(_))));
    }

    #[test]
    fn walk_model_invariants() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let w = walk_model(&g).unwrap();
        assert!((w.stationary.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for row in &w.transition {
            assert!((row.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let mut pi_p = [0.0; 5];
        for (i, row) in w.transition.iter().enumerate() {
            for &(j, p) in row {
                pi_p[j] += w.stationary[i] * p;
            }
        }
        for (a, b) in pi_p.iter().zip(&w.stationary) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn clustered_rate_extremes() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 1)]).unwrap();
        let w = walk_model(&g).unwrap();
        let single = clustered_rate(&w, &Partition::singletons(5)).unwrap();
        assert!((single - w.entropy).abs() < 1e-12);
        assert_eq!(clustered_rate(&w, &Partition::single(5)).unwrap(), 0.0);
    }

    #[test]
    fn c4_opposite_pairs_alternate_deterministically() {
        let w = walk_model(&Graph::cycle(4)).unwrap();
        let p = Partition::new(vec![0, 1, 0, 1]).unwrap();
        assert!(clustered_rate(&w, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn partition_rejects_gaps() {
        assert!(Partition::new(vec![0, 2, 2]).is_err());
        assert_eq!(Partition::new(vec![1, 0, 1]).unwrap().cluster_count(), 2);
    }

    #[test]
    fn two_node_curve_is_flat_zero() {
        let w = walk_model(&Graph::path(2)).unwrap();
        let c = rate_distortion_curve(&w);
        assert_eq!(c.rates, vec![0.0, 0.0]);
        assert_eq!(compressibility(&Graph::path(2)).unwrap(), 0.0);
    }

    #[test]
    fn curve_endpoints_and_monotonicity() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        let w = walk_model(&g).unwrap();
        let c = rate_distortion_curve(&w);
        assert_eq!(c.rate_at(6), w.entropy);
        assert_eq!(c.rate_at(1), 0.0);
        for n in 1..6 {
            assert!(c.rate_at(n) <= c.rate_at(n + 1));
        }
        let pts = c.points();
        assert!((pts[0].0 - 1.0 / 6.0).abs() < 1e-15 && pts[5].0 == 1.0);
    }

    #[test]
    fn cpt_value_conventions() {
        assert_eq!(cpt_value(&Graph::empty(1)), 0.0);
        assert_eq!(cpt_value(&Graph::path(2)), 0.0);
        assert_eq!(cpt_value(&Graph::empty(4)), 0.0);
        // two triangles: each component weighted by its half of the edges
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let tri = compressibility(&Graph::complete(3)).unwrap();
        assert!((cpt_value(&two) - tri).abs() < 1e-12);
        // isolated node ignored
        let plus = Graph::from_edges(4, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!((cpt_value(&plus) - tri).abs() < 1e-12);
    }
}
