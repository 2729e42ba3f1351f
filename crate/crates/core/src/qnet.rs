//! GraphSAGE Q-network over candidate subgraphs.
//!
//! Each candidate `v` is scored on the subgraph `S_t ∪ {v}`. Node inputs are
//! local degree profiles computed on that subgraph. `L` rounds of
//!
//! ```text
//! h_u ← ReLU(θ_C h_u + θ_A mean_{w ∈ N(u)} h_w + b)
//! ```
//!
//! are followed by a readout of `[mean_u h_u ; h_v]` through a two-layer MLP
//! to a scalar. Gradients are computed by an explicit reverse pass.
//!
//! All weights live in one flat buffer; matrices are stored input-major
//! (`w[i * out + o]`).

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::Rng as _;

use crate::explore::ExplorationState;
use crate::graph::{ldp_features, Graph};
use crate::seed;
use crate::{Error, Result};

pub const FEATURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QNetConfig {
    pub layers: usize,
    pub hidden: usize,
}

impl Default for QNetConfig {
    fn default() -> Self {
        Self { layers: 2, hidden: 64 }
    }
}

#[derive(Debug, Clone, Copy)]
struct LayerSlots {
    input: usize,
    combine: usize,
    aggregate: usize,
    bias: usize,
}

#[derive(Debug, Clone, Copy)]
struct ReadoutSlots {
    hidden_w: usize,
    hidden_b: usize,
    out_w: usize,
    out_b: usize,
}

fn layout(cfg: QNetConfig) -> (Vec<LayerSlots>, ReadoutSlots, usize) {
    let d = cfg.hidden;
    let mut off = 0;
    let mut layers = Vec::with_capacity(cfg.layers);
    for l in 0..cfg.layers {
        let input = if l == 0 { FEATURES } else { d };
        let slots = LayerSlots {
            input,
            combine: off,
            aggregate: off + input * d,
            bias: off + 2 * input * d,
        };
        off += 2 * input * d + d;
        layers.push(slots);
    }
    let readout = ReadoutSlots {
        hidden_w: off,
        hidden_b: off + 2 * d * d,
        out_w: off + 2 * d * d + d,
        out_b: off + 2 * d * d + 2 * d,
    };
    (layers, readout, off + 2 * d * d + 2 * d + 1)
}

/// Every weight of the Q-network, or a gradient with the same shape.
#[derive(Debug, Clone, PartialEq)]
pub struct QNetworkParams {
    config: QNetConfig,
    data: Vec<f64>,
}

/// Named view of one parameter tensor: `(name, rows, cols, offset)`.
pub type TensorInfo = (String, usize, usize, usize);

impl QNetworkParams {
    pub fn zeros(config: QNetConfig) -> Self {
        let (_, _, len) = layout(config);
        Self {
            config,
            data: vec![0.0; len],
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.config)
    }

    pub fn config(&self) -> QNetConfig {
        self.config
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn fill(&mut self, value: f64) {
        self.data.iter_mut().for_each(|x| *x = value);
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &QNetworkParams, scale: f64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    pub fn tensors(&self) -> Vec<TensorInfo> {
        let (layers, r, _) = layout(self.config);
        let d = self.config.hidden;
        let mut out = Vec::new();
        for (l, s) in layers.iter().enumerate() {
            out.push((format!("layer{l}.combine"), s.input, d, s.combine));
            out.push((format!("layer{l}.aggregate"), s.input, d, s.aggregate));
            out.push((format!("layer{l}.bias"), 1, d, s.bias));
        }
        out.push(("readout.hidden_weight".into(), 2 * d, d, r.hidden_w));
        out.push(("readout.hidden_bias".into(), 1, d, r.hidden_b));
        out.push(("readout.out_weight".into(), d, 1, r.out_w));
        out.push(("readout.out_bias".into(), 1, 1, r.out_b));
        out
    }

    /// Zeroes the readout MLP so every Q-value equals the output bias.
    pub fn zero_readout(&mut self, bias: f64) {
        let (_, r, len) = layout(self.config);
        self.data[r.hidden_w..len].iter_mut().for_each(|x| *x = 0.0);
        self.data[r.out_b] = bias;
    }

    pub fn save(&self, path: &Path, meta: &[(String, String)]) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_text(meta).as_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<(Self, Vec<(String, String)>)> {
        Self::from_text(std::fs::File::open(path)?)
    }

    /// Text checkpoint: header, metadata, then each tensor's shape line and
    /// its row-major values. Values use shortest round-trip formatting, so
    /// loading is bit-exact.
    pub fn to_text(&self, meta: &[(String, String)]) -> String {
        let mut s = String::new();
        writeln!(s, "curio-qnet 1").unwrap();
        writeln!(s, "layers {}", self.config.layers).unwrap();
        writeln!(s, "hidden {}", self.config.hidden).unwrap();
        for (k, v) in meta {
            writeln!(s, "meta {k} {v}").unwrap();
        }
        for (name, rows, cols, off) in self.tensors() {
            writeln!(s, "tensor {name} {rows} {cols}").unwrap();
            for r in 0..rows {
                let row = &self.data[off + r * cols..off + (r + 1) * cols];
                let line: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
                writeln!(s, "{}", line.join(" ")).unwrap();
            }
        }
        writeln!(s, "end").unwrap();
        s
    }

    pub fn from_text<R: Read>(reader: R) -> Result<(Self, Vec<(String, String)>)> {
        let mut lines = BufReader::new(reader).lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, Ok(l))) => Ok((i + 1, l)),
                Some((i, Err(e))) => Err(Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                }),
                None => Err(Error::Parse {
                    line: 0,
                    msg: format!("unexpected end of checkpoint, expected {what}"),
                }),
            }
        };
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let (ln, header) = next("header")?;
        if header.trim() != "curio-qnet 1" {
            return Err(perr(ln, format!("unsupported checkpoint header {header:?}")));
        }
        let mut field = |key: &str| -> Result<usize> {
            let (ln, l) = next(key)?;
            l.strip_prefix(key)
                .and_then(|r| r.trim().parse().ok())
                .ok_or_else(|| perr(ln, format!("expected `{key} <int>`")))
        };
        let layers = field("layers")?;
        let hidden = field("hidden")?;
        if layers == 0 || hidden == 0 {
            return Err(perr(3, "layers and hidden must be positive".into()));
        }
        let mut params = QNetworkParams::zeros(QNetConfig { layers, hidden });
        let mut meta = Vec::new();
        let mut expected = params.tensors().into_iter();
        loop {
            let (ln, l) = next("tensor or end")?;
            let l = l.trim();
            if l == "end" {
                break;
            }
            if let Some(rest) = l.strip_prefix("meta ") {
                let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                meta.push((k.to_string(), v.to_string()));
                continue;
            }
            let parts: Vec<&str> = l.split_whitespace().collect();
            let (name, rows, cols, off) = expected
                .next()
                .ok_or_else(|| perr(ln, "more tensors than the architecture has".into()))?;
            if parts.len() != 4
                || parts[0] != "tensor"
                || parts[1] != name
                || parts[2].parse::<usize>().ok() != Some(rows)
                || parts[3].parse::<usize>().ok() != Some(cols)
            {
                return Err(perr(ln, format!("expected `tensor {name} {rows} {cols}`")));
            }
            for r in 0..rows {
                let (ln, row) = next("tensor row")?;
                let vals: Vec<f64> = row
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| perr(ln, e.to_string()))?;
                if vals.len() != cols {
                    return Err(perr(ln, format!("expected {cols} values, got {}", vals.len())));
                }
                params.data[off + r * cols..off + (r + 1) * cols].copy_from_slice(&vals);
            }
        }
        if expected.next().is_some() {
            return Err(perr(0, "checkpoint is missing tensors".into()));
        }
        Ok((params, meta))
    }
}

/// Seeded Glorot-uniform initialization; biases start at zero.
pub fn init_params(layers: usize, hidden: usize, seed_value: u64) -> Result<QNetworkParams> {
    if layers == 0 || hidden == 0 {
        return Err(Error::InvalidParameter(
            "layers and hidden width must be positive".into(),
        ));
    }
    let mut p = QNetworkParams::zeros(QNetConfig { layers, hidden });
    let mut rng = seed::rng(seed_value);
    for (name, rows, cols, off) in p.tensors() {
        if name.ends_with("bias") {
            continue;
        }
        let bound = (6.0 / (rows + cols) as f64).sqrt();
        for x in &mut p.data[off..off + rows * cols] {
            *x = rng.gen_range(-bound..=bound);
        }
    }
    Ok(p)
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

#[inline]
fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Activations recorded by a forward pass, needed for the reverse pass.
#[derive(Debug, Clone)]
pub struct Forward {
    candidate: usize,
    /// Per layer: node inputs `n × in`, mean aggregates `n × in`,
    /// post-activation outputs `n × d`.
    inputs: Vec<Vec<f64>>,
    aggregates: Vec<Vec<f64>>,
    outputs: Vec<Vec<f64>>,
    readout_in: Vec<f64>,
    hidden: Vec<f64>,
    pub q: f64,
}

impl Forward {
    /// Final per-node embeddings, `n × d` row-major.
    pub fn embeddings(&self) -> &[f64] {
        self.outputs.last().expect("at least one layer")
    }
}

fn mean_aggregate(g: &Graph, h: &[f64], width: usize) -> Vec<f64> {
    let n = g.node_count();
    let mut agg = vec![0.0; n * width];
    for u in 0..n {
        let nb = g.neighbors(u);
        if nb.is_empty() {
            continue;
        }
        let row = &mut agg[u * width..(u + 1) * width];
        for &w in nb {
            for (a, x) in row.iter_mut().zip(&h[w * width..(w + 1) * width]) {
                *a += x;
            }
        }
        let inv = 1.0 / nb.len() as f64;
        row.iter_mut().for_each(|a| *a *= inv);
    }
    agg
}

/// One flattened node-by-feature matrix per layer.
type Rows = Vec<Vec<f64>>;

fn embed(g: &Graph, params: &QNetworkParams) -> (Rows, Rows, Rows) {
    let (layers, _, _) = layout(params.config);
    let d = params.config.hidden;
    let n = g.node_count();
    let w = &params.data;
    let mut h: Vec<f64> = ldp_features(g).into_iter().flatten().collect();
    let (mut inputs, mut aggs, mut outs) = (Vec::new(), Vec::new(), Vec::new());
    for s in &layers {
        let agg = mean_aggregate(g, &h, s.input);
        let mut out = vec![0.0; n * d];
        for u in 0..n {
            let row = &mut out[u * d..(u + 1) * d];
            row.copy_from_slice(&w[s.bias..s.bias + d]);
            let hu = &h[u * s.input..(u + 1) * s.input];
            let au = &agg[u * s.input..(u + 1) * s.input];
            for i in 0..s.input {
                if hu[i] != 0.0 {
                    axpy(row, hu[i], &w[s.combine + i * d..s.combine + (i + 1) * d]);
                }
                if au[i] != 0.0 {
                    axpy(row, au[i], &w[s.aggregate + i * d..s.aggregate + (i + 1) * d]);
                }
            }
            row.iter_mut().for_each(|x| *x = x.max(0.0));
        }
        inputs.push(std::mem::take(&mut h));
        aggs.push(agg);
        h = out.clone();
        outs.push(out);
    }
    (inputs, aggs, outs)
}

/// Per-node embeddings after all message-passing rounds.
pub fn sage_forward(g: &Graph, params: &QNetworkParams) -> Vec<Vec<f64>> {
    let d = params.config.hidden;
    let (_, _, outs) = embed(g, params);
    outs.last()
        .map(|h| h.chunks(d).map(<[f64]>::to_vec).collect())
        .unwrap_or_default()
}

/// Forward pass scoring node `candidate` of `g`.
pub fn forward(g: &Graph, candidate: usize, params: &QNetworkParams) -> Forward {
    assert!(candidate < g.node_count(), "candidate outside subgraph");
    let (_, r, _) = layout(params.config);
    let d = params.config.hidden;
    let n = g.node_count();
    let w = &params.data;
    let (inputs, aggregates, outputs) = embed(g, params);
    let h = outputs.last().expect("at least one layer");
    let mut readout_in = vec![0.0; 2 * d];
    for u in 0..n {
        for (z, x) in readout_in[..d].iter_mut().zip(&h[u * d..(u + 1) * d]) {
            *z += x;
        }
    }
    readout_in[..d].iter_mut().for_each(|z| *z /= n as f64);
    readout_in[d..].copy_from_slice(&h[candidate * d..(candidate + 1) * d]);
    let mut hidden = w[r.hidden_b..r.hidden_b + d].to_vec();
    for (i, &z) in readout_in.iter().enumerate() {
        if z != 0.0 {
            axpy(&mut hidden, z, &w[r.hidden_w + i * d..r.hidden_w + (i + 1) * d]);
        }
    }
    hidden.iter_mut().for_each(|x| *x = x.max(0.0));
    let q = w[r.out_b] + dot(&hidden, &w[r.out_w..r.out_w + d]);
    Forward {
        candidate,
        inputs,
        aggregates,
        outputs,
        readout_in,
        hidden,
        q,
    }
}

/// Accumulates `upstream · ∂q/∂θ` into `grads`.
pub fn backward(g: &Graph, fwd: &Forward, params: &QNetworkParams, upstream: f64, grads: &mut QNetworkParams) {
    if upstream == 0.0 {
        return;
    }
    let (layers, r, _) = layout(params.config);
    let d = params.config.hidden;
    let n = g.node_count();
    let w = &params.data;
    let gd = &mut grads.data;

    gd[r.out_b] += upstream;
    axpy(&mut gd[r.out_w..r.out_w + d], upstream, &fwd.hidden);
    let dhidden: Vec<f64> = (0..d)
        .map(|o| {
            if fwd.hidden[o] > 0.0 {
                upstream * w[r.out_w + o]
            } else {
                0.0
            }
        })
        .collect();
    axpy(&mut gd[r.hidden_b..r.hidden_b + d], 1.0, &dhidden);
    let mut dz = vec![0.0; 2 * d];
    for i in 0..2 * d {
        let z = fwd.readout_in[i];
        let wrow = &w[r.hidden_w + i * d..r.hidden_w + (i + 1) * d];
        dz[i] = dot(wrow, &dhidden);
        if z != 0.0 {
            axpy(&mut gd[r.hidden_w + i * d..r.hidden_w + (i + 1) * d], z, &dhidden);
        }
    }

    // gradient w.r.t. final embeddings
    let mut dh = vec![0.0; n * d];
    let inv_n = 1.0 / n as f64;
    for u in 0..n {
        for (x, z) in dh[u * d..(u + 1) * d].iter_mut().zip(&dz[..d]) {
            *x = z * inv_n;
        }
    }
    axpy(&mut dh[fwd.candidate * d..(fwd.candidate + 1) * d], 1.0, &dz[d..]);

    for (l, s) in layers.iter().enumerate().rev() {
        let out = &fwd.outputs[l];
        let input = &fwd.inputs[l];
        let agg = &fwd.aggregates[l];
        let width = s.input;
        let mut dinput = vec![0.0; n * width];
        let mut dagg = vec![0.0; width];
        let mut dpre = vec![0.0; d];
        for u in 0..n {
            let mut any = false;
            for o in 0..d {
                let v = if out[u * d + o] > 0.0 { dh[u * d + o] } else { 0.0 };
                dpre[o] = v;
                any |= v != 0.0;
            }
            if !any {
                continue;
            }
            axpy(&mut gd[s.bias..s.bias + d], 1.0, &dpre);
            let hu = &input[u * width..(u + 1) * width];
            let au = &agg[u * width..(u + 1) * width];
            for i in 0..width {
                if hu[i] != 0.0 {
                    axpy(&mut gd[s.combine + i * d..s.combine + (i + 1) * d], hu[i], &dpre);
                }
                if au[i] != 0.0 {
                    axpy(&mut gd[s.aggregate + i * d..s.aggregate + (i + 1) * d], au[i], &dpre);
                }
            }
            if l == 0 {
                continue;
            }
            for i in 0..width {
                dinput[u * width + i] += dot(&w[s.combine + i * d..s.combine + (i + 1) * d], &dpre);
                dagg[i] = dot(&w[s.aggregate + i * d..s.aggregate + (i + 1) * d], &dpre);
            }
            let nb = g.neighbors(u);
            if !nb.is_empty() {
                let share = 1.0 / nb.len() as f64;
                for &v in nb {
                    axpy(&mut dinput[v * width..(v + 1) * width], share, &dagg);
                }
            }
        }
        dh = dinput;
    }
}

/// Candidate subgraphs `S_t ∪ {v}` for a set of candidates; the candidate is
/// always the last node of its subgraph.
#[derive(Debug, Clone)]
pub struct CandidateBatch {
    pub visited: Vec<usize>,
    pub candidates: Vec<usize>,
    pub subgraphs: Vec<Graph>,
}

impl CandidateBatch {
    pub fn from_state(state: &ExplorationState<'_>, candidates: &[usize]) -> Self {
        Self {
            visited: state.visited().to_vec(),
            candidates: candidates.to_vec(),
            subgraphs: candidates.iter().map(|&v| state.candidate_subgraph(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// Q-value of scoring the last node of `g`.
pub fn q_value(g: &Graph, params: &QNetworkParams) -> f64 {
    forward(g, g.node_count() - 1, params).q
}

pub fn q_values(batch: &CandidateBatch, params: &QNetworkParams) -> Vec<f64> {
    batch.subgraphs.iter().map(|g| q_value(g, params)).collect()
}

/// Gradients of `Σ_k upstream[k] · Q_k` over the batch candidates.
pub fn grad(upstream: &[f64], batch: &CandidateBatch, params: &QNetworkParams) -> QNetworkParams {
    assert_eq!(upstream.len(), batch.len(), "one upstream value per candidate");
    let mut grads = params.zeros_like();
    for (g, &u) in batch.subgraphs.iter().zip(upstream) {
        if u != 0.0 {
            let fwd = forward(g, g.node_count() - 1, params);
            backward(g, &fwd, params, u, &mut grads);
        }
    }
    grads
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_permutation;

    fn small() -> QNetworkParams {
        init_params(2, 8, 3).unwrap()
    }

    #[test]
    fn init_is_deterministic_and_bounded() {
        let a = init_params(2, 64, 9).unwrap();
        assert_eq!(a, init_params(2, 64, 9).unwrap());
        assert!(a.is_finite());
        let bound = (6.0f64 / (5.0 + 64.0)).sqrt();
        let (_, _, _, off) = a.tensors()[0].clone();
        assert!(a.as_slice()[off..off + 5 * 64].iter().all(|w| w.abs() <= bound));
        assert!(a.as_slice()[off..off + 5 * 64].iter().any(|w| w.abs() > bound * 0.5));
        assert!(init_params(0, 4, 0).is_err());
    }

    #[test]
    fn single_node_embedding_uses_zero_aggregate() {
        let p = init_params(1, 6, 1).unwrap();
        let g = Graph::empty(1);
        let emb = sage_forward(&g, &p);
        // LDP of an isolated node is zero, so the embedding is ReLU(bias) = 0
        assert!(emb[0].iter().all(|&x| x == 0.0));
        let mut p2 = p.clone();
        let (_, _, _, boff) = p2.tensors()[2].clone();
        p2.as_mut_slice()[boff] = 0.7;
        p2.as_mut_slice()[boff + 1] = -0.7;
        let emb = sage_forward(&g, &p2);
        assert_eq!(emb[0][0], 0.7);
        assert_eq!(emb[0][1], 0.0);
    }

    #[test]
    fn embeddings_are_permutation_equivariant() {
        let p = small();
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let perm = random_permutation(6, &mut seed::rng(2));
        let h = sage_forward(&g, &p);
        let hp = sage_forward(&g.permuted(&perm), &p);
        for u in 0..6 {
            assert_eq!(h[u], hp[perm[u]]);
        }
    }

    #[test]
    fn zero_readout_gives_bias() {
        let mut p = small();
        p.zero_readout(0.25);
        let g = Graph::cycle(5);
        for c in 0..5 {
            assert_eq!(forward(&g, c, &p).q, 0.25);
        }
    }

    #[test]
    fn zero_upstream_gives_zero_gradient() {
        let p = small();
        let env = Graph::complete(5);
        let st = ExplorationState::from_visited(&env, &[0, 1]).unwrap();
        let batch = CandidateBatch::from_state(&st, &[2, 3]);
        let g = grad(&[0.0, 0.0], &batch, &p);
        assert!(g.as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn dead_unit_gets_no_gradient() {
        let mut p = small();
        let d = p.config().hidden;
        // make hidden readout unit 0 permanently inactive
        let (_, _, _, hw) = p.tensors()[6].clone();
        let (_, _, _, hb) = p.tensors()[7].clone();
        for i in 0..2 * d {
            p.as_mut_slice()[hw + i * d] = 0.0;
        }
        p.as_mut_slice()[hb] = -1.0;
        let env = Graph::cycle(6);
        let st = ExplorationState::from_visited(&env, &[0, 1, 2]).unwrap();
        let batch = CandidateBatch::from_state(&st, &[3]);
        let g = grad(&[1.0], &batch, &p);
        assert_eq!(g.as_slice()[hb], 0.0);
        for i in 0..2 * d {
            assert_eq!(g.as_slice()[hw + i * d], 0.0);
        }
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let p = init_params(2, 5, 11).unwrap();
        let meta = vec![("episodes".to_string(), "12".to_string())];
        let text = p.to_text(&meta);
        let (q, m) = QNetworkParams::from_text(text.as_bytes()).unwrap();
        assert_eq!(m, meta);
        assert!(p
            .as_slice()
            .iter()
            .zip(q.as_slice())
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn checkpoint_rejects_garbage() {
        assert!(QNetworkParams::from_text("hello\n".as_bytes()).is_err());
        let p = init_params(1, 2, 0).unwrap();
        let text = p
            .to_text(&[])
            .replace("tensor layer0.bias 1 2", "tensor layer0.bias 1 3");
        assert!(matches!(
            QNetworkParams::from_text(text.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }
}
