//! Personalized PageRank and its curiosity-biased, non-Markovian variant.
//!
//! The biased walker keeps the path since its last (re)start, never revisits
//! path nodes and ranks the candidates with a scorer (normally a trained
//! Q-network). Candidate `m`-th in rank order is taken with probability
//! `(1 - p_g) p_g^(m-1) / (1 - p_g^|A|)`.
//!
//! A restart (initialization or teleport) either begins a fresh path at the
//! drawn node or, for window-personalized scores, resumes from the user's
//! visited context with the walker placed on the drawn node.
//!
//! Fitting works on window-local score series: a walker that teleports with
//! probability `1 - α` per step is a renewal process, so its visit frequency
//! at node `j` is `Σ_k α^k N_k(j) / Σ_k α^k D_k`, where `N_k(j)` is the
//! chance that a path sits at `j` after `k` moves since its restart and
//! `D_k` the chance that it is still alive. One batch of sampled paths
//! therefore serves every α.

use rand::Rng as _;

use crate::explore::ExplorationState;
use crate::explore::RewardKind;
use crate::graph::Graph;
use crate::qnet::{q_values, CandidateBatch, QNetworkParams};
use crate::seed::{self, Rng};
use crate::{Error, Result};

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 100_000;

/// Uniform distribution over `nodes` (duplicates counted once each time they appear).
pub fn teleport_on(n: usize, nodes: &[usize]) -> Result<Vec<f64>> {
    if nodes.is_empty() {
        return Err(Error::InvalidParameter("teleport set is empty".into()));
    }
    let mut q = vec![0.0; n];
    let w = 1.0 / nodes.len() as f64;
    for &v in nodes {
        if v >= n {
            return Err(Error::NodeOutOfRange { node: v, n });
        }
        q[v] += w;
    }
    Ok(q)
}

pub fn uniform_teleport(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

fn check_setup(g: &Graph, alpha: f64, q: &[f64]) -> Result<()> {
    if g.is_empty() {
        return Err(Error::InvalidParameter("graph has no nodes".into()));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("damping {alpha} outside [0,1)")));
    }
    if q.len() != g.node_count() {
        return Err(Error::InvalidParameter(format!(
            "teleport vector has {} entries for {} nodes",
            q.len(),
            g.node_count()
        )));
    }
    if q.iter().any(|&x| x.is_nan() || x < 0.0) || (q.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter("teleport vector is not a distribution".into()));
    }
    Ok(())
}

/// One application of the PageRank operator; dangling mass teleports per `q`.
fn pagerank_apply(g: &Graph, alpha: f64, q: &[f64], eta: &[f64], out: &mut [f64]) {
    out.fill(0.0);
    let mut dangling = 0.0;
    for (u, &m) in eta.iter().enumerate() {
        let d = g.degree(u);
        if d == 0 {
            dangling += m;
            continue;
        }
        let share = alpha * m / d as f64;
        for &w in g.neighbors(u) {
            out[w] += share;
        }
    }
    let tele = 1.0 - alpha + alpha * dangling;
    for (o, &qj) in out.iter_mut().zip(q) {
        *o += tele * qj;
    }
}

/// Stationary distribution of the teleporting walk, by power iteration.
pub fn pagerank(g: &Graph, alpha: f64, q: &[f64]) -> Result<Vec<f64>> {
    check_setup(g, alpha, q)?;
    let mut eta = q.to_vec();
    let mut next = vec![0.0; eta.len()];
    for _ in 0..POWER_MAX_ITER {
        pagerank_apply(g, alpha, q, &eta, &mut next);
        let delta: f64 = eta.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut eta, &mut next);
        if delta < POWER_TOL {
            return Ok(eta);
        }
    }
    Err(Error::NonConvergence(format!(
        "power iteration residual {} after {POWER_MAX_ITER} iterations",
        stationarity_residual(g, alpha, q, &eta)
    )))
}

/// `‖(I − αPᵀ)η − (1−α)q‖∞`, with dangling rows teleporting per `q`.
pub fn stationarity_residual(g: &Graph, alpha: f64, q: &[f64], eta: &[f64]) -> f64 {
    let mut out = vec![0.0; eta.len()];
    pagerank_apply(g, alpha, q, eta, &mut out);
    eta.iter().zip(&out).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// 1-based ranks by descending score, ties broken by ascending node id.
pub fn candidate_ranks(candidates: &[usize], scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(candidates[a].cmp(&candidates[b])));
    let mut ranks = vec![0; candidates.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r + 1;
    }
    ranks
}

/// Rank-geometric choice probabilities, in candidate order.
///
/// `p_g = 1` is the uniform limit and `p_g = 0` is purely greedy. The
/// entries sum to exactly 1 when added left to right.
pub fn biased_transition_probs(candidates: &[usize], scores: &[f64], p_g: f64) -> Result<Vec<f64>> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    if candidates.len() != scores.len() {
        return Err(Error::InvalidParameter("one score per candidate required".into()));
    }
    if !(0.0..=1.0).contains(&p_g) {
        return Err(Error::InvalidParameter(format!("greediness {p_g} outside [0,1]")));
    }
    let m = candidates.len();
    let mut probs = if p_g == 1.0 {
        vec![1.0 / m as f64; m]
    } else {
        let norm = 1.0 - p_g.powi(m as i32);
        candidate_ranks(candidates, scores)
            .into_iter()
            .map(|r| (1.0 - p_g) * p_g.powi(r as i32 - 1) / norm)
            .collect()
    };
    // The running sum ends with `head + last`. Keep `head` at most 1 by
    // trimming its largest entry, then put the slack on the last entry.
    if m > 1 {
        let k = (0..m - 1).fold(0, |b, i| if probs[i] > probs[b] { i } else { b });
        let mut head: f64 = probs[..m - 1].iter().sum();
        while head > 1.0 {
            probs[k] = next_down(probs[k]);
            head = probs[..m - 1].iter().sum();
        }
        let mut last = 1.0 - head;
        for _ in 0..8 {
            let total = head + last;
            if total == 1.0 {
                break;
            }
            last = if total > 1.0 { next_down(last) } else { next_up(last) };
        }
        probs[m - 1] = last;
    } else {
        probs[0] = 1.0;
    }
    Ok(probs)
}

fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        return f64::from_bits(1);
    }
    f64::from_bits(if x > 0.0 { x.to_bits() + 1 } else { x.to_bits() - 1 })
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// Scores candidate moves from a path state; higher is better.
pub trait CandidateScorer: Sync {
    fn scores(&self, state: &ExplorationState<'_>, candidates: &[usize]) -> Vec<f64>;
}

impl CandidateScorer for QNetworkParams {
    fn scores(&self, state: &ExplorationState<'_>, candidates: &[usize]) -> Vec<f64> {
        q_values(&CandidateBatch::from_state(state, candidates), self)
    }
}

/// Every candidate scores the same, so ranks follow node ids.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantScorer;

impl CandidateScorer for ConstantScorer {
    fn scores(&self, _: &ExplorationState<'_>, candidates: &[usize]) -> Vec<f64> {
        vec![0.0; candidates.len()]
    }
}

/// Myopic scorer: the reward of the subgraph after taking each candidate.
#[derive(Debug, Clone, Copy)]
pub struct RewardScorer(pub RewardKind);

impl CandidateScorer for RewardScorer {
    fn scores(&self, state: &ExplorationState<'_>, candidates: &[usize]) -> Vec<f64> {
        candidates
            .iter()
            .map(|&v| self.0.evaluate(&state.candidate_subgraph(v)))
            .collect()
    }
}

/// Picks the next node of a biased path, or `None` when the path is stuck.
pub fn biased_move<S: CandidateScorer + ?Sized>(
    path: &ExplorationState<'_>,
    scorer: &S,
    p_g: f64,
    rng: &mut Rng,
) -> Result<Option<usize>> {
    let candidates = path.candidate_actions();
    if candidates.is_empty() {
        return Ok(None);
    }
    if candidates.len() == 1 {
        return Ok(Some(candidates[0]));
    }
    let probs = biased_transition_probs(&candidates, &scorer.scores(path, &candidates), p_g)?;
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (&v, &p) in candidates.iter().zip(&probs) {
        acc += p;
        if u < acc {
            return Ok(Some(v));
        }
    }
    Ok(Some(*candidates.last().unwrap()))
}

fn draw(dist: &[f64], rng: &mut Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// Path history after a restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restart<'a> {
    /// The path is just the restart node.
    Fresh,
    /// The path is the visited context followed by the restart node.
    Context(&'a [usize]),
}

/// Path state after restarting at `v`.
pub fn restart_state<'g>(g: &'g Graph, v: usize, restart: Restart<'_>) -> Result<ExplorationState<'g>> {
    match restart {
        Restart::Fresh => ExplorationState::new(g, v),
        Restart::Context(ctx) => {
            let mut order = Vec::with_capacity(ctx.len() + 1);
            // later occurrences win, so a revisited node keeps its last position
            for (i, &w) in ctx.iter().enumerate() {
                if w != v && !ctx[i + 1..].contains(&w) {
                    order.push(w);
                }
            }
            order.push(v);
            ExplorationState::from_visited(g, &order)
        }
    }
}

/// Monte Carlo settings for the biased walker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloConfig {
    pub block_steps: usize,
    /// Stop when cumulative visit frequencies at consecutive block ends are
    /// closer than this in L1.
    pub tol: f64,
    pub max_blocks: usize,
    /// A path that has made this many moves since its restart teleports.
    pub max_moves: usize,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            block_steps: 100_000,
            tol: 1e-3,
            max_blocks: 200,
            max_moves: usize::MAX,
        }
    }
}

/// Long-run visit frequencies of the biased walker.
///
/// Each step teleports with probability `1 − α` (restarting the path at the
/// drawn node), and also teleports when the path is stuck; otherwise it moves
/// by [`biased_transition_probs`].
#[allow(clippy::too_many_arguments)]
pub fn biased_pagerank<S: CandidateScorer + ?Sized>(
    g: &Graph,
    scorer: &S,
    alpha: f64,
    q: &[f64],
    p_g: f64,
    restart: Restart<'_>,
    mc: &MonteCarloConfig,
    seed_value: u64,
) -> Result<Vec<f64>> {
    check_setup(g, alpha, q)?;
    if mc.block_steps == 0 || mc.max_blocks < 2 {
        return Err(Error::InvalidParameter("Monte Carlo budget too small".into()));
    }
    let n = g.node_count();
    let mut rng = seed::rng(seed_value);
    let mut path = restart_state(g, draw(q, &mut rng), restart)?;
    let mut moves = 0usize;
    let mut counts = vec![0u64; n];
    let mut prev: Option<Vec<f64>> = None;
    let mut total = 0u64;
    let mut last_dist = f64::INFINITY;
    for _ in 0..mc.max_blocks {
        for _ in 0..mc.block_steps {
            let moved = if rng.gen::<f64>() < alpha && moves < mc.max_moves {
                biased_move(&path, scorer, p_g, &mut rng)?
            } else {
                None
            };
            match moved {
                Some(v) => {
                    path.advance(v)?;
                    moves += 1;
                }
                None => {
                    path = restart_state(g, draw(q, &mut rng), restart)?;
                    moves = 0;
                }
            }
            counts[path.last()] += 1;
        }
        total += mc.block_steps as u64;
        let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
        if let Some(p) = &prev {
            last_dist = p.iter().zip(&freq).map(|(a, b)| (a - b).abs()).sum();
            if last_dist < mc.tol {
                return Ok(freq);
            }
        }
        prev = Some(freq);
    }
    Err(Error::NonConvergence(format!(
        "biased walker block distance {last_dist} after {} steps",
        total
    )))
}

/// `β̃ η_PR + γ̃ η_IGT + δ̃ η_CPT`, renormalized to sum to one.
pub fn combine_scores(pr: &[f64], igt: &[f64], cpt: &[f64], weights: [f64; 3]) -> Result<Vec<f64>> {
    check_weights(weights)?;
    if pr.len() != igt.len() || pr.len() != cpt.len() {
        return Err(Error::InvalidParameter("score vectors differ in length".into()));
    }
    let [b, c, d] = weights;
    let out: Vec<f64> = (0..pr.len()).map(|i| b * pr[i] + c * igt[i] + d * cpt[i]).collect();
    let sum: f64 = out.iter().sum();
    if sum.is_nan() || sum <= 0.0 || out.iter().any(|&x| x < 0.0) {
        return Err(Error::Domain("combined scores are not a nonnegative vector".into()));
    }
    Ok(out.into_iter().map(|x| x / sum).collect())
}

fn check_weights(w: [f64; 3]) -> Result<()> {
    let norm2: f64 = w.iter().map(|x| x * x).sum();
    if (norm2 - 1.0).abs() > 1e-9 || w.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("bias weights {w:?} are not unit norm")));
    }
    Ok(())
}

/// A trajectory slice of `n_burn_in + 1` nodes; the last one is the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryWindow {
    pub nodes: Vec<usize>,
}

impl TrajectoryWindow {
    pub fn new(nodes: Vec<usize>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter(
                "a window needs a burn-in node and a target".into(),
            ));
        }
        Ok(Self { nodes })
    }

    pub fn burn_in(&self) -> &[usize] {
        &self.nodes[..self.nodes.len() - 1]
    }

    pub fn target(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    pub fn last_burn_in(&self) -> usize {
        self.nodes[self.nodes.len() - 2]
    }

    /// Unvisited neighbors of the last burn-in node, ascending.
    pub fn candidates(&self, g: &Graph) -> Vec<usize> {
        let burn = self.burn_in();
        g.neighbors(self.last_burn_in())
            .iter()
            .copied()
            .filter(|w| !burn.contains(w))
            .collect()
    }
}

/// Mid-rank percentile of `scores[target]`: ascending rank, ties share the
/// mean rank, `(rank − 0.5) / m · 100`.
pub fn percentile_of(scores: &[f64], target: usize) -> f64 {
    let s = scores[target];
    let mut below = 0usize;
    let mut equal = 0usize;
    for &x in scores {
        if x < s {
            below += 1;
        } else if x == s {
            equal += 1;
        }
    }
    let rank = below as f64 + (equal as f64 + 1.0) / 2.0;
    (rank - 0.5) / scores.len() as f64 * 100.0
}

/// Percentile of the window's target among its candidates, or `None` when
/// the target is not a candidate (the window is then excluded).
pub fn rank_percentile(eta: &[f64], window: &TrajectoryWindow, g: &Graph) -> Option<f64> {
    let candidates = window.candidates(g);
    let t = candidates.iter().position(|&c| c == window.target())?;
    let scores: Vec<f64> = candidates.iter().map(|&c| eta[c]).collect();
    Some(percentile_of(&scores, t))
}

/// α-series of a score vector restricted to some nodes:
/// `score(α)[i] = Σ_k α^k num[k][i] / Σ_k α^k den[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSeries {
    pub num: Vec<Vec<f64>>,
    pub den: Vec<f64>,
}

impl ScoreSeries {
    pub fn eval(&self, alpha: f64) -> Vec<f64> {
        let width = self.num.first().map_or(0, Vec::len);
        let mut acc = vec![0.0; width];
        let mut den = 0.0;
        for k in (0..self.den.len()).rev() {
            for (a, &x) in acc.iter_mut().zip(&self.num[k]) {
                *a = *a * alpha + x;
            }
            den = den * alpha + self.den[k];
        }
        if den > 0.0 {
            for a in &mut acc {
                *a /= den;
            }
        }
        acc
    }
}

/// Series for personalized PageRank from `q`, restricted to `nodes`.
pub fn pagerank_series(g: &Graph, q: &[f64], nodes: &[usize], terms: usize) -> ScoreSeries {
    let mut mass = q.to_vec();
    let mut next = vec![0.0; mass.len()];
    let mut num = Vec::with_capacity(terms);
    let mut den = Vec::with_capacity(terms);
    for _ in 0..terms {
        num.push(nodes.iter().map(|&v| mass[v]).collect());
        den.push(mass.iter().sum());
        next.fill(0.0);
        for (u, &m) in mass.iter().enumerate() {
            let d = g.degree(u);
            if d == 0 || m == 0.0 {
                continue;
            }
            let share = m / d as f64;
            for &w in g.neighbors(u) {
                next[w] += share;
            }
        }
        std::mem::swap(&mut mass, &mut next);
    }
    ScoreSeries { num, den }
}

/// Visit counts per move index, for building a [`ScoreSeries`].
struct SeriesCounts {
    num: Vec<Vec<f64>>,
    den: Vec<f64>,
    paths: usize,
}

impl SeriesCounts {
    fn new(width: usize, len: usize) -> Self {
        Self {
            num: vec![vec![0.0; width]; len],
            den: vec![0.0; len],
            paths: 0,
        }
    }

    /// `positions[k]` is where the path sits after `k` moves.
    fn add(&mut self, positions: &[usize], nodes: &[usize]) {
        self.paths += 1;
        for (k, v) in positions.iter().enumerate() {
            self.den[k] += 1.0;
            if let Some(i) = nodes.iter().position(|x| x == v) {
                self.num[k][i] += 1.0;
            }
        }
    }

    fn finish(mut self) -> ScoreSeries {
        let w = 1.0 / self.paths.max(1) as f64;
        for (d, row) in self.den.iter_mut().zip(&mut self.num) {
            *d *= w;
            for x in row {
                *x *= w;
            }
        }
        ScoreSeries {
            num: self.num,
            den: self.den,
        }
    }
}

/// Sampled fresh biased paths from every start node.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerPaths {
    /// `paths[s]` holds the paths started at `s`.
    pub paths: Vec<Vec<Vec<usize>>>,
    pub max_len: usize,
}

impl WalkerPaths {
    /// Samples `per_node` paths of at most `max_len` nodes from each node.
    /// Start `s` uses its own derived stream, so results do not depend on
    /// `workers`.
    pub fn sample<S: CandidateScorer + ?Sized>(
        g: &Graph,
        scorer: &S,
        p_g: f64,
        per_node: usize,
        max_len: usize,
        seed_value: u64,
        workers: usize,
    ) -> Result<Self> {
        if max_len == 0 || per_node == 0 {
            return Err(Error::InvalidParameter("path budget must be positive".into()));
        }
        let starts: Vec<usize> = (0..g.node_count()).collect();
        let paths = seed::par_map(&starts, workers, |&s| -> Result<Vec<Vec<usize>>> {
            let mut rng = seed::rng(seed::derive(seed_value, &[s as u64]));
            let mut out = Vec::with_capacity(per_node);
            for _ in 0..per_node {
                let mut path = ExplorationState::new(g, s)?;
                while path.len() < max_len {
                    match biased_move(&path, scorer, p_g, &mut rng)? {
                        Some(v) => path.advance(v)?,
                        None => break,
                    }
                }
                out.push(path.visited().to_vec());
            }
            Ok(out)
        });
        Ok(Self {
            paths: paths.into_iter().collect::<Result<_>>()?,
            max_len,
        })
    }

    /// Renewal series for teleport distribution uniform over `starts`,
    /// restricted to `nodes`.
    pub fn series(&self, starts: &[usize], nodes: &[usize]) -> ScoreSeries {
        let mut counts = SeriesCounts::new(nodes.len(), self.max_len);
        for &s in starts {
            for p in &self.paths[s] {
                counts.add(p, nodes);
            }
        }
        counts.finish()
    }
}

/// Renewal series for walkers that restart from `context` at a uniformly
/// chosen context position, restricted to `nodes`.
#[allow(clippy::too_many_arguments)]
pub fn context_series<S: CandidateScorer + ?Sized>(
    g: &Graph,
    scorer: &S,
    p_g: f64,
    context: &[usize],
    nodes: &[usize],
    per_start: usize,
    max_moves: usize,
    seed_value: u64,
) -> Result<ScoreSeries> {
    if per_start == 0 || context.is_empty() {
        return Err(Error::InvalidParameter(
            "context walkers need a context and a positive budget".into(),
        ));
    }
    let mut rng = seed::rng(seed_value);
    let mut counts = SeriesCounts::new(nodes.len(), max_moves + 1);
    let mut positions = Vec::with_capacity(max_moves + 1);
    for &v in context {
        for _ in 0..per_start {
            let mut path = restart_state(g, v, Restart::Context(context))?;
            positions.clear();
            positions.push(v);
            while positions.len() <= max_moves {
                match biased_move(&path, scorer, p_g, &mut rng)? {
                    Some(w) => {
                        path.advance(w)?;
                        positions.push(w);
                    }
                    None => break,
                }
            }
            counts.add(&positions, nodes);
        }
    }
    Ok(counts.finish())
}

/// How biased score series are produced for each window.
#[derive(Clone, Copy)]
pub enum WalkerModel<'a> {
    /// Fresh-path walkers, sampled once per start node.
    Fresh(&'a WalkerPaths),
    /// Walkers resuming from each window's burn-in; see [`context_series`].
    Context {
        scorer: &'a dyn CandidateScorer,
        p_g: f64,
        per_start: usize,
        max_moves: usize,
        seed: u64,
    },
}

impl WalkerModel<'_> {
    fn series(&self, g: &Graph, w: &TrajectoryWindow, nodes: &[usize]) -> Result<ScoreSeries> {
        match *self {
            WalkerModel::Fresh(paths) => Ok(paths.series(w.burn_in(), nodes)),
            WalkerModel::Context {
                scorer,
                p_g,
                per_start,
                max_moves,
                seed: base,
            } => {
                // keyed by content so a window's scores do not depend on its position
                let tags: Vec<u64> = w.nodes.iter().map(|&v| v as u64).collect();
                context_series(
                    g,
                    scorer,
                    p_g,
                    w.burn_in(),
                    nodes,
                    per_start,
                    max_moves,
                    seed::derive(base, &tags),
                )
            }
        }
    }
}

/// One window prepared for fast objective evaluation.
#[derive(Debug, Clone)]
pub struct PreparedWindow {
    pub candidates: Vec<usize>,
    pub target: usize,
    pub pr: ScoreSeries,
    pub igt: Option<ScoreSeries>,
    pub cpt: Option<ScoreSeries>,
}

/// Windows of one environment, with the series each score model needs.
#[derive(Debug, Clone)]
pub struct FitProblem {
    pub windows: Vec<PreparedWindow>,
    /// Windows whose target was not a candidate.
    pub excluded: usize,
}

pub const PAGERANK_TERMS: usize = 400;

impl FitProblem {
    pub fn new(
        g: &Graph,
        windows: &[TrajectoryWindow],
        igt: Option<WalkerModel<'_>>,
        cpt: Option<WalkerModel<'_>>,
        workers: usize,
    ) -> Result<Self> {
        let prepared = seed::par_map(windows, workers, |w| -> Result<Option<PreparedWindow>> {
            let candidates = w.candidates(g);
            let Some(target) = candidates.iter().position(|&c| c == w.target()) else {
                return Ok(None);
            };
            let q = teleport_on(g.node_count(), w.burn_in())?;
            Ok(Some(PreparedWindow {
                pr: pagerank_series(g, &q, &candidates, PAGERANK_TERMS),
                igt: igt.map(|m| m.series(g, w, &candidates)).transpose()?,
                cpt: cpt.map(|m| m.series(g, w, &candidates)).transpose()?,
                candidates,
                target,
            }))
        });
        let mut out = Self {
            windows: Vec::new(),
            excluded: 0,
        };
        for p in prepared {
            match p? {
                Some(w) => out.windows.push(w),
                None => out.excluded += 1,
            }
        }
        Ok(out)
    }

    pub fn has_igt(&self) -> bool {
        self.windows.iter().all(|w| w.igt.is_some())
    }

    pub fn has_cpt(&self) -> bool {
        self.windows.iter().all(|w| w.cpt.is_some())
    }

    /// Per-window percentiles of the targets under `η′(α, weights)`.
    pub fn percentiles(&self, alpha: f64, weights: [f64; 3]) -> Vec<f64> {
        self.windows
            .iter()
            .map(|w| {
                let pr = w.pr.eval(alpha);
                let mut s: Vec<f64> = pr.iter().map(|x| weights[0] * x).collect();
                for (series, wt) in [(&w.igt, weights[1]), (&w.cpt, weights[2])] {
                    if let Some(series) = series {
                        for (a, b) in s.iter_mut().zip(series.eval(alpha)) {
                            *a += wt * b;
                        }
                    }
                }
                percentile_of(&s, w.target)
            })
            .collect()
    }

    /// Summed target percentile.
    pub fn objective(&self, alpha: f64, weights: [f64; 3]) -> f64 {
        self.percentiles(alpha, weights).iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedSetup {
    pub alpha: f64,
    pub weights: [f64; 3],
    pub objective: f64,
}

/// Search space and budget for [`fit_parameters`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Objective evaluations per search (at least one).
    pub budget: usize,
    pub alpha_max: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: 300,
            alpha_max: 0.95,
            seed: 0,
        }
    }
}

/// Which bias weights the search may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSpace {
    /// `(1, 0, 0)`: plain PageRank.
    Pinned,
    PrIgt,
    PrCpt,
    All,
}

fn weights_from(space: WeightSpace, theta: f64, phi: f64) -> [f64; 3] {
    match space {
        WeightSpace::Pinned => [1.0, 0.0, 0.0],
        WeightSpace::PrIgt => [theta.cos(), theta.sin(), 0.0],
        WeightSpace::PrCpt => [theta.cos(), 0.0, theta.sin()],
        WeightSpace::All => [theta.cos(), theta.sin() * phi.cos(), theta.sin() * phi.sin()],
    }
}

/// Seeded random search followed by shrinking local perturbations.
///
/// The coordinates are `α ∈ [0, alpha_max]` and polar angles on the
/// nonnegative orthant of the unit sphere.
///
/// `start` (α, θ, φ), when given, is the first point evaluated.
pub fn search(
    problem: &FitProblem,
    space: WeightSpace,
    cfg: &SearchConfig,
    start: Option<[f64; 3]>,
) -> Result<FittedSetup> {
    if cfg.budget == 0 || !(0.0..1.0).contains(&cfg.alpha_max) {
        return Err(Error::InvalidParameter(
            "search needs a positive budget and alpha_max < 1".into(),
        ));
    }
    match space {
        WeightSpace::PrIgt if !problem.has_igt() => return Err(Error::InvalidParameter("no IGT scores".into())),
        WeightSpace::PrCpt if !problem.has_cpt() => return Err(Error::InvalidParameter("no CPT scores".into())),
        WeightSpace::All if !(problem.has_igt() && problem.has_cpt()) => {
            return Err(Error::InvalidParameter("IGT and CPT scores both required".into()))
        }
        _ => {}
    }
    let dims = match space {
        WeightSpace::Pinned => 1,
        WeightSpace::PrIgt | WeightSpace::PrCpt => 2,
        WeightSpace::All => 3,
    };
    let hi = [cfg.alpha_max, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2];
    let mut rng = seed::rng(cfg.seed);
    let eval = |x: &[f64; 3]| {
        let w = weights_from(space, x[1], x[2]);
        FittedSetup {
            alpha: x[0],
            weights: w,
            objective: problem.objective(x[0], w),
        }
    };
    let explore = cfg.budget.div_ceil(2);
    let mut best_x = [0.0; 3];
    let mut best: Option<FittedSetup> = None;
    for i in 0..cfg.budget {
        let x = if let (0, Some(s)) = (i, start) {
            let mut x = [0.0; 3];
            for d in 0..dims {
                x[d] = s[d].clamp(0.0, hi[d]);
            }
            x
        } else if i < explore || best.is_none() {
            let mut x = [0.0; 3];
            for d in 0..dims {
                x[d] = rng.gen::<f64>() * hi[d];
            }
            x
        } else {
            let frac = (i - explore) as f64 / (cfg.budget - explore) as f64;
            let step = 0.25 * (1.0 - frac) + 0.01;
            let mut x = best_x;
            for d in 0..dims {
                x[d] = (x[d] + (rng.gen::<f64>() * 2.0 - 1.0) * step * hi[d]).clamp(0.0, hi[d]);
            }
            x
        };
        let f = eval(&x);
        if best.is_none_or(|b| f.objective > b.objective) {
            best = Some(f);
            best_x = x;
        }
    }
    Ok(best.unwrap())
}

/// Fitted unbiased and biased setups on the training windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub unbiased: FittedSetup,
    pub biased: FittedSetup,
}

pub fn fit_parameters(problem: &FitProblem, biased_space: WeightSpace, cfg: &SearchConfig) -> Result<FitResult> {
    if problem.windows.is_empty() {
        return Err(Error::InvalidParameter("no usable training windows".into()));
    }
    let unbiased = search(problem, WeightSpace::Pinned, cfg, None)?;
    // The biased search starts from the unbiased optimum, which it contains.
    let biased = match biased_space {
        WeightSpace::Pinned => unbiased,
        space => search(problem, space, cfg, Some([unbiased.alpha, 0.0, 0.0]))?,
    };
    Ok(FitResult { unbiased, biased })
}

/// Summed target percentile under the biased fit over the same sum under
/// the unbiased fit.
pub fn improvement_ratio(test: &FitProblem, fit: &FitResult) -> Result<f64> {
    if test.windows.is_empty() {
        return Err(Error::InvalidParameter("no usable test windows".into()));
    }
    let num = test.objective(fit.biased.alpha, fit.biased.weights);
    let den = test.objective(fit.unbiased.alpha, fit.unbiased.weights);
    Ok(num / den)
}

/// Walkers compared in diffusion measurements.
pub enum DiffusionWalker<'a> {
    /// Simple random walk (revisits allowed).
    Unbiased,
    /// Non-revisiting biased walker; when stuck its path restarts at the
    /// current node.
    Biased { scorer: &'a dyn CandidateScorer, p_g: f64 },
}

/// Mean hop distance from the start node after each of `0..=horizon` steps.
pub fn walker_diffusion(
    g: &Graph,
    walker: &DiffusionWalker<'_>,
    horizon: usize,
    trials: usize,
    seed_value: u64,
) -> Result<Vec<f64>> {
    if !g.is_connected() || g.node_count() < 2 {
        return Err(Error::Domain("diffusion needs a connected graph with an edge".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let mut rng = seed::rng(seed_value);
    let mut sums = vec![0.0; horizon + 1];
    for _ in 0..trials {
        let start = rng.gen_range(0..g.node_count());
        let dist = g.bfs_distances(start);
        match walker {
            DiffusionWalker::Unbiased => {
                let mut at = start;
                for s in sums.iter_mut().skip(1) {
                    let nb = g.neighbors(at);
                    at = nb[rng.gen_range(0..nb.len())];
                    *s += dist[at] as f64;
                }
            }
            DiffusionWalker::Biased { scorer, p_g } => {
                let mut path = ExplorationState::new(g, start)?;
                for s in sums.iter_mut().skip(1) {
                    let next = match biased_move(&path, *scorer, *p_g, &mut rng)? {
                        Some(v) => v,
                        None => {
                            path = ExplorationState::new(g, path.last())?;
                            biased_move(&path, *scorer, *p_g, &mut rng)?.ok_or(Error::NoCandidates)?
                        }
                    };
                    path.advance(next)?;
                    *s += dist[next] as f64;
                }
            }
        }
    }
    Ok(sums.into_iter().map(|s| s / trials as f64).collect())
}
