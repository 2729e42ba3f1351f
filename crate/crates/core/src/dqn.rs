//! DQN training of the GraphSAGE Q-network: experience replay, a periodically
//! synchronized target network, a linearly decaying ε-greedy policy and
//! validation-based model selection.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rand::Rng as _;

use crate::explore::{argmax_random_tie, run_episode, Agent, EpisodeConfig, ExplorationState, RewardKind};
use crate::graph::{Family, GeneratorSpec, Graph};
use crate::qnet::{backward, forward, init_params, q_values, CandidateBatch, QNetConfig, QNetworkParams};
use crate::seed::{self, Rng};
use crate::{Error, Result};

/// One environment step as stored in the replay buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub env_id: usize,
    pub state: Vec<usize>,
    pub action: usize,
    pub reward: f64,
    /// `state` followed by `action`.
    pub next_state: Vec<usize>,
    pub terminal: bool,
}

/// Fixed-capacity FIFO buffer with uniform sampling.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    items: VecDeque<Transition>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self {
            capacity,
            items: VecDeque::with_capacity(capacity.min(1 << 16)),
        }
    }

    pub fn push(&mut self, t: Transition) {
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(t);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn get(&self, i: usize) -> &Transition {
        &self.items[i]
    }

    /// `batch` indices drawn uniformly with replacement.
    pub fn sample_indices(&self, batch: usize, rng: &mut Rng) -> Vec<usize> {
        (0..batch).map(|_| rng.gen_range(0..self.items.len())).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub reward: RewardKind,
    pub horizon: usize,
    pub discount: f64,
    pub buffer_capacity: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub target_sync: usize,
    pub eps_start: f64,
    pub eps_end: f64,
    pub eps_decay_steps: usize,
    pub warmup: usize,
    pub episodes_per_env: usize,
    /// Validate every this many episodes (and once at the end).
    pub validation_interval: usize,
    pub validation_episodes: usize,
    pub net: QNetConfig,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            reward: RewardKind::Igt,
            horizon: 10,
            discount: 0.99,
            buffer_capacity: 10_000,
            batch_size: 64,
            learning_rate: 1e-3,
            target_sync: 500,
            eps_start: 1.0,
            eps_end: 0.05,
            eps_decay_steps: 5_000,
            warmup: 500,
            episodes_per_env: 20,
            validation_interval: 200,
            validation_episodes: 10,
            net: QNetConfig::default(),
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(0.0..=1.0).contains(&self.discount) {
            return bad(format!("discount {} outside [0,1]", self.discount));
        }
        if !(0.0 <= self.eps_end && self.eps_end <= self.eps_start && self.eps_start <= 1.0) {
            return bad("need 0 <= eps_end <= eps_start <= 1".into());
        }
        if self.buffer_capacity == 0 || self.batch_size == 0 || self.target_sync == 0 || self.horizon == 0 {
            return bad("capacities, batch size, sync interval and horizon must be positive".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning rate {} must be positive", self.learning_rate));
        }
        if self.net.layers == 0 || self.net.hidden == 0 {
            return bad("network layers and width must be positive".into());
        }
        Ok(())
    }
}

/// Linear decay from `eps_start` to `eps_end` over `eps_decay_steps`.
pub fn epsilon(step: usize, cfg: &TrainConfig) -> f64 {
    if cfg.eps_decay_steps == 0 || step >= cfg.eps_decay_steps {
        return cfg.eps_end;
    }
    let frac = step as f64 / cfg.eps_decay_steps as f64;
    cfg.eps_start + (cfg.eps_end - cfg.eps_start) * frac
}

/// `r` for terminal transitions, otherwise `r + γ max_v Q_target(S', v)`.
pub fn td_target(t: &Transition, env: &Graph, target: &QNetworkParams, discount: f64) -> Result<f64> {
    if t.terminal || discount == 0.0 {
        return Ok(t.reward);
    }
    let next = ExplorationState::from_visited(env, &t.next_state)?;
    let candidates = next.candidate_actions();
    if candidates.is_empty() {
        return Ok(t.reward);
    }
    let qs = q_values(&CandidateBatch::from_state(&next, &candidates), target);
    Ok(bootstrap_target(t.reward, false, &qs, discount))
}

/// `r + γ max(next_q)`, or `r` when terminal or there is nothing to bootstrap from.
pub fn bootstrap_target(reward: f64, terminal: bool, next_q: &[f64], discount: f64) -> f64 {
    if terminal || next_q.is_empty() || discount == 0.0 {
        return reward;
    }
    reward + discount * next_q.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Adam optimizer state.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(len: usize, lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }

    pub fn step(&mut self, params: &mut QNetworkParams, grads: &QNetworkParams) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for (((p, &g), m), v) in params
            .as_mut_slice()
            .iter_mut()
            .zip(grads.as_slice())
            .zip(&mut self.m)
            .zip(&mut self.v)
        {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= self.lr * (*m / c1) / ((*v / c2).sqrt() + self.eps);
        }
    }
}

/// Greedy policy over a Q-network; ties broken on the episode stream.
#[derive(Debug, Clone, Copy)]
pub struct QAgent<'p> {
    pub params: &'p QNetworkParams,
}

impl Agent for QAgent<'_> {
    fn choose(&mut self, state: &ExplorationState<'_>, candidates: &[usize], rng: &mut Rng) -> Result<usize> {
        if candidates.is_empty() {
            return Err(Error::NoCandidates);
        }
        let qs = q_values(&CandidateBatch::from_state(state, candidates), self.params);
        Ok(candidates[argmax_random_tie(&qs, rng)])
    }

    fn name(&self) -> String {
        "gnn".into()
    }
}

/// Train/validation/test environments of one family.
#[derive(Debug, Clone)]
pub struct EnvironmentSuite {
    pub family: Family,
    pub n: usize,
    pub train: Vec<Graph>,
    pub validation: Vec<Graph>,
    pub test: Vec<Graph>,
    /// Generator seeds per split, in the same order as the graphs.
    pub seeds: [Vec<u64>; 3],
}

impl EnvironmentSuite {
    pub const SPLITS: [&'static str; 3] = ["train", "validation", "test"];

    /// Generates `counts = (train, validation, test)` graphs with
    /// split-disjoint seeds derived from `base_seed`.
    pub fn generate(family: Family, n: usize, counts: (usize, usize, usize), base_seed: u64) -> Result<Self> {
        let sizes = [counts.0, counts.1, counts.2];
        let mut seeds: [Vec<u64>; 3] = Default::default();
        let mut graphs: [Vec<Graph>; 3] = Default::default();
        let mut seen = std::collections::HashSet::new();
        for split in 0..3 {
            for i in 0..sizes[split] {
                let s = seed::derive(base_seed, &[0x5017, split as u64, i as u64]);
                if !seen.insert(s) {
                    return Err(Error::InvalidParameter("environment seed collision".into()));
                }
                graphs[split].push(GeneratorSpec::new(family, n, s).generate()?);
                seeds[split].push(s);
            }
        }
        let [train, validation, test] = graphs;
        Ok(Self {
            family,
            n,
            train,
            validation,
            test,
            seeds,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
    pub count: usize,
}

impl MeanSe {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                se: f64::NAN,
                count: 0,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let se = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, se, count: n }
    }
}

/// Undiscounted returns of `agent` on every graph, `episodes_per_graph` each.
///
/// Episode `e` on graph `g` uses a seed derived from `(cfg.seed, g, e)`, so
/// different agents see the same start nodes.
pub fn episode_returns<A, F>(
    graphs: &[Graph],
    cfg: &EpisodeConfig,
    episodes_per_graph: usize,
    mut make_agent: F,
) -> Result<Vec<f64>>
where
    A: Agent,
    F: FnMut() -> A,
{
    let mut out = Vec::with_capacity(graphs.len() * episodes_per_graph);
    for (gi, g) in graphs.iter().enumerate() {
        let mut agent = make_agent();
        for e in 0..episodes_per_graph {
            let mut ecfg = *cfg;
            ecfg.seed = seed::derive(cfg.seed, &[gi as u64, e as u64]);
            let trace = run_episode(g, &ecfg, &mut agent)?;
            out.push(trace.rewards().iter().sum());
        }
    }
    Ok(out)
}

/// Mean ± standard error of the greedy (ε = 0) Q-network policy.
pub fn evaluate(
    params: &QNetworkParams,
    graphs: &[Graph],
    cfg: &EpisodeConfig,
    episodes_per_graph: usize,
) -> Result<MeanSe> {
    let r = episode_returns(graphs, cfg, episodes_per_graph, || QAgent { params })?;
    Ok(MeanSe::of(&r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainLogRow {
    pub episode: usize,
    pub env_id: usize,
    pub episode_return: f64,
    pub epsilon: f64,
    /// Mean squared TD error over this episode's gradient steps (NaN if none).
    pub loss: f64,
    pub validation: Option<f64>,
}

pub fn log_header() -> &'static str {
    "episode,env_id,return,epsilon,loss,validation_return"
}

impl TrainLogRow {
    pub fn csv_line(&self) -> String {
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},",
            self.episode, self.env_id, self.episode_return, self.epsilon, self.loss
        )
        .unwrap();
        if let Some(v) = self.validation {
            write!(s, "{v}").unwrap();
        }
        s
    }
}

/// Progress carried across resumed runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrainProgress {
    pub episodes: usize,
    pub env_steps: usize,
    pub grad_steps: usize,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters with the best validation return.
    pub best: QNetworkParams,
    pub best_validation: f64,
    pub last: QNetworkParams,
    pub log: Vec<TrainLogRow>,
    pub progress: TrainProgress,
}

/// Memo of reward values keyed by environment and visited set.
#[derive(Debug, Default)]
struct RewardCache {
    map: HashMap<(usize, Vec<usize>), f64>,
}

impl RewardCache {
    const LIMIT: usize = 200_000;

    fn get_or_eval(&mut self, env_id: usize, state: &ExplorationState<'_>, kind: RewardKind) -> f64 {
        let mut key = state.visited().to_vec();
        key.sort_unstable();
        if let Some(&v) = self.map.get(&(env_id, key.clone())) {
            return v;
        }
        let v = kind.evaluate(state.subgraph());
        if self.map.len() >= Self::LIMIT {
            self.map.clear();
        }
        self.map.insert((env_id, key), v);
        v
    }
}

/// Trains from scratch (or from `init`) on `suite.train`, selecting the
/// parameters with the best validation return.
pub fn train(suite: &EnvironmentSuite, cfg: &TrainConfig) -> Result<TrainOutcome> {
    train_from(suite, cfg, None, TrainProgress::default())
}

pub fn train_from(
    suite: &EnvironmentSuite,
    cfg: &TrainConfig,
    init: Option<QNetworkParams>,
    resume: TrainProgress,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if suite.train.is_empty() {
        return Err(Error::InvalidParameter("no training environments".into()));
    }
    let mut params = match init {
        Some(p) => {
            if p.config() != cfg.net {
                return Err(Error::InvalidParameter(
                    "initial parameters do not match network config".into(),
                ));
            }
            p
        }
        None => init_params(cfg.net.layers, cfg.net.hidden, seed::derive(cfg.seed, &[0x1417]))?,
    };
    let mut target = params.clone();
    let mut adam = Adam::new(params.len(), cfg.learning_rate);
    let mut buffer = ReplayBuffer::new(cfg.buffer_capacity);
    let mut rng = seed::rng(seed::derive(cfg.seed, &[0x7247, resume.episodes as u64]));
    let mut cache = RewardCache::default();
    let mut progress = resume;
    let mut log = Vec::new();

    let val_cfg = EpisodeConfig {
        discount: 1.0,
        ..EpisodeConfig::new(cfg.horizon, cfg.reward, seed::derive(cfg.seed, &[0x7a1]))
    };
    let validate = |p: &QNetworkParams| -> Result<f64> {
        if suite.validation.is_empty() {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(evaluate(p, &suite.validation, &val_cfg, cfg.validation_episodes)?.mean)
    };
    let mut best = params.clone();
    let mut best_validation = validate(&params)?;

    let total = suite.train.len() * cfg.episodes_per_env;
    for k in 0..total {
        let env_id = k % suite.train.len();
        let env = &suite.train[env_id];
        let mut state = ExplorationState::new(env, rng.gen_range(0..env.node_count()))?;
        let mut ep_return = 0.0;
        let mut ep_loss = 0.0;
        let mut ep_updates = 0usize;
        let eps = epsilon(progress.env_steps, cfg);
        while state.len() < cfg.horizon {
            let candidates = state.candidate_actions();
            if candidates.is_empty() {
                break;
            }
            let eps_now = epsilon(progress.env_steps, cfg);
            let action = if rng.gen::<f64>() < eps_now {
                candidates[rng.gen_range(0..candidates.len())]
            } else {
                let qs = q_values(&CandidateBatch::from_state(&state, &candidates), &params);
                candidates[argmax_random_tie(&qs, &mut rng)]
            };
            let before = state.visited().to_vec();
            state.advance(action)?;
            let reward = cache.get_or_eval(env_id, &state, cfg.reward);
            ep_return += reward;
            let terminal = state.len() >= cfg.horizon || state.candidate_actions().is_empty();
            buffer.push(Transition {
                env_id,
                state: before,
                action,
                reward,
                next_state: state.visited().to_vec(),
                terminal,
            });
            progress.env_steps += 1;

            if buffer.len() >= cfg.warmup.max(1) {
                let loss = gradient_step(&buffer, suite, cfg, &mut params, &target, &mut adam, &mut rng)?;
                ep_loss += loss;
                ep_updates += 1;
                progress.grad_steps += 1;
                if progress.grad_steps.is_multiple_of(cfg.target_sync) {
                    target = params.clone();
                }
            }
        }
        progress.episodes += 1;
        let last_episode = k + 1 == total;
        let validation = if (cfg.validation_interval > 0 && (k + 1) % cfg.validation_interval == 0) || last_episode {
            let v = validate(&params)?;
            if v > best_validation {
                best_validation = v;
                best = params.clone();
            }
            Some(v)
        } else {
            None
        };
        log.push(TrainLogRow {
            episode: progress.episodes,
            env_id,
            episode_return: ep_return,
            epsilon: eps,
            loss: if ep_updates > 0 {
                ep_loss / ep_updates as f64
            } else {
                f64::NAN
            },
            validation,
        });
    }
    Ok(TrainOutcome {
        best,
        best_validation,
        last: params,
        log,
        progress,
    })
}

fn gradient_step(
    buffer: &ReplayBuffer,
    suite: &EnvironmentSuite,
    cfg: &TrainConfig,
    params: &mut QNetworkParams,
    target: &QNetworkParams,
    adam: &mut Adam,
    rng: &mut Rng,
) -> Result<f64> {
    let idx = buffer.sample_indices(cfg.batch_size, rng);
    let mut grads = params.zeros_like();
    let mut loss = 0.0;
    let scale = 1.0 / idx.len() as f64;
    for &i in &idx {
        let t = buffer.get(i);
        let env = &suite.train[t.env_id];
        let y = td_target(t, env, target, cfg.discount)?;
        let sub = env.induced_subgraph(&t.next_state)?.graph;
        let fwd = forward(&sub, sub.node_count() - 1, params);
        let err = fwd.q - y;
        loss += err * err * scale;
        backward(&sub, &fwd, params, 2.0 * err * scale, &mut grads);
    }
    if !loss.is_finite() || !grads.is_finite() {
        return Err(Error::Divergence(format!("non-finite loss {loss}")));
    }
    adam.step(params, &grads);
    Ok(loss)
}
