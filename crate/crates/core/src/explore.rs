//! The exploration MDP: visited-subgraph states, neighbor action sets with
//! the subgraph-boundary fallback, deterministic transitions, episode
//! rollouts and the four baseline agents.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng as _;

use crate::graph::Graph;
use crate::seed::{self, Rng};
use crate::{compression, homology, Error, Result};

/// Which curiosity functional scores a visited subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewardKind {
    /// β₁ of the clique complex.
    Igt,
    /// Network compressibility.
    Cpt,
}

impl RewardKind {
    pub fn evaluate(self, subgraph: &Graph) -> f64 {
        match self {
            RewardKind::Igt => homology::igt_value(subgraph),
            RewardKind::Cpt => compression::cpt_value(subgraph),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RewardKind::Igt => "IGT",
            RewardKind::Cpt => "CPT",
        }
    }
}

impl FromStr for RewardKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "IGT" => Ok(RewardKind::Igt),
            "CPT" => Ok(RewardKind::Cpt),
            _ => Err(Error::Config(format!("unknown reward selector {s:?}"))),
        }
    }
}

/// Visited nodes in order plus the subgraph they induce.
///
/// Node `i` of [`ExplorationState::subgraph`] is `visited()[i]`.
#[derive(Debug, Clone)]
pub struct ExplorationState<'g> {
    env: &'g Graph,
    visited: Vec<usize>,
    local: Vec<usize>,
    subgraph: Graph,
}

const UNVISITED: usize = usize::MAX;

impl<'g> ExplorationState<'g> {
    pub fn new(env: &'g Graph, start: usize) -> Result<Self> {
        let mut s = Self {
            env,
            visited: Vec::new(),
            local: vec![UNVISITED; env.node_count()],
            subgraph: Graph::empty(0),
        };
        if start >= env.node_count() {
            return Err(Error::NodeOutOfRange {
                node: start,
                n: env.node_count(),
            });
        }
        s.push(start);
        Ok(s)
    }

    /// Rebuilds a state from a visit order, e.g. a replay-buffer snapshot.
    pub fn from_visited(env: &'g Graph, visited: &[usize]) -> Result<Self> {
        let (&first, rest) = visited
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("empty visit list".into()))?;
        let mut s = Self::new(env, first)?;
        for &v in rest {
            if v >= env.node_count() {
                return Err(Error::NodeOutOfRange {
                    node: v,
                    n: env.node_count(),
                });
            }
            if s.is_visited(v) {
                return Err(Error::InvalidParameter(format!("node {v} visited twice")));
            }
            s.push(v);
        }
        Ok(s)
    }

    fn push(&mut self, v: usize) {
        let nb: Vec<usize> = self
            .env
            .neighbors(v)
            .iter()
            .map(|&w| self.local[w])
            .filter(|&i| i != UNVISITED)
            .collect();
        let id = self.subgraph.push_node(&nb);
        self.local[v] = id;
        self.visited.push(v);
    }

    pub fn env(&self) -> &'g Graph {
        self.env
    }

    pub fn visited(&self) -> &[usize] {
        &self.visited
    }

    pub fn subgraph(&self) -> &Graph {
        &self.subgraph
    }

    pub fn last(&self) -> usize {
        *self.visited.last().expect("state is never empty")
    }

    /// Number of visited nodes, `t`.
    pub fn len(&self) -> usize {
        self.visited.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visited.is_empty()
    }

    pub fn is_visited(&self, v: usize) -> bool {
        self.local[v] != UNVISITED
    }

    /// Unvisited neighbors of the last node; if none, unvisited neighbors of
    /// any visited node. Sorted ascending; empty means terminal.
    pub fn candidate_actions(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .env
            .neighbors(self.last())
            .iter()
            .copied()
            .filter(|&w| !self.is_visited(w))
            .collect();
        if out.is_empty() {
            let mut mark = vec![false; self.env.node_count()];
            for &v in &self.visited {
                for &w in self.env.neighbors(v) {
                    if !self.is_visited(w) && !mark[w] {
                        mark[w] = true;
                        out.push(w);
                    }
                }
            }
            out.sort_unstable();
        }
        out
    }

    /// Moves to `v` without evaluating a reward.
    pub fn advance(&mut self, v: usize) -> Result<()> {
        if v >= self.env.node_count() || !self.candidate_actions().contains(&v) {
            return Err(Error::IllegalAction { node: v });
        }
        self.push(v);
        Ok(())
    }

    /// Moves to `v` and returns the reward `F(S_{t+1})` of the new subgraph.
    pub fn step(&mut self, v: usize, reward: RewardKind) -> Result<f64> {
        self.advance(v)?;
        Ok(reward.evaluate(&self.subgraph))
    }

    /// The subgraph `S_t ∪ {v}`; the candidate is its last node.
    pub fn candidate_subgraph(&self, v: usize) -> Graph {
        let mut g = self.subgraph.clone();
        let nb: Vec<usize> = self
            .env
            .neighbors(v)
            .iter()
            .map(|&w| self.local[w])
            .filter(|&i| i != UNVISITED)
            .collect();
        g.push_node(&nb);
        g
    }
}

/// How the first node of an episode is picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartPolicy {
    Random,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeConfig {
    /// Number of nodes to visit, `T`.
    pub horizon: usize,
    pub discount: f64,
    pub reward: RewardKind,
    pub start: StartPolicy,
    pub seed: u64,
}

impl EpisodeConfig {
    pub fn new(horizon: usize, reward: RewardKind, seed: u64) -> Self {
        Self {
            horizon,
            discount: 1.0,
            reward,
            start: StartPolicy::Random,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.discount) {
            return Err(Error::InvalidParameter(format!(
                "discount {} outside [0,1]",
                self.discount
            )));
        }
        Ok(())
    }
}

pub fn initial_state<'g>(g: &'g Graph, cfg: &EpisodeConfig, rng: &mut Rng) -> Result<ExplorationState<'g>> {
    if g.is_empty() {
        return Err(Error::InvalidParameter("environment has no nodes".into()));
    }
    let start = match cfg.start {
        StartPolicy::Random => rng.gen_range(0..g.node_count()),
        StartPolicy::Fixed(v) => v,
    };
    ExplorationState::new(g, start)
}

/// Policy interface used by episode rollouts.
pub trait Agent {
    /// Picks one of `candidates` (nonempty, sorted). `rng` is the episode
    /// stream, used for tie-breaking and random choices.
    fn choose(&mut self, state: &ExplorationState<'_>, candidates: &[usize], rng: &mut Rng) -> Result<usize>;

    fn name(&self) -> String;
}

/// Index of a uniformly chosen maximum of `scores`.
pub fn argmax_random_tie(scores: &[f64], rng: &mut Rng) -> usize {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
    if ties.len() == 1 {
        ties[0]
    } else {
        ties[rng.gen_range(0..ties.len())]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Random,
    Greedy,
    MaxDegree,
    MinDegree,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 4] = [
        BaselineKind::Random,
        BaselineKind::MaxDegree,
        BaselineKind::MinDegree,
        BaselineKind::Greedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::Random => "random",
            BaselineKind::Greedy => "greedy",
            BaselineKind::MaxDegree => "max_degree",
            BaselineKind::MinDegree => "min_degree",
        }
    }
}

/// Random, greedy one-step, max-degree and min-degree policies.
#[derive(Debug, Clone, Copy)]
pub struct Baseline {
    pub kind: BaselineKind,
    pub reward: RewardKind,
}

pub fn baseline_agent(kind: BaselineKind, reward: RewardKind) -> Baseline {
    Baseline { kind, reward }
}

impl Agent for Baseline {
    fn choose(&mut self, state: &ExplorationState<'_>, candidates: &[usize], rng: &mut Rng) -> Result<usize> {
        if candidates.is_empty() {
            return Err(Error::NoCandidates);
        }
        let scores: Vec<f64> = match self.kind {
            BaselineKind::Random => return Ok(candidates[rng.gen_range(0..candidates.len())]),
            BaselineKind::Greedy => candidates
                .iter()
                .map(|&v| self.reward.evaluate(&state.candidate_subgraph(v)))
                .collect(),
            BaselineKind::MaxDegree => candidates.iter().map(|&v| state.env().degree(v) as f64).collect(),
            BaselineKind::MinDegree => candidates.iter().map(|&v| -(state.env().degree(v) as f64)).collect(),
        };
        Ok(candidates[argmax_random_tie(&scores, rng)])
    }

    fn name(&self) -> String {
        self.kind.name().to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub candidates: Vec<usize>,
    pub chosen: usize,
    pub reward: f64,
}

/// One rollout: the start node, then one record per action.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub start: usize,
    pub steps: Vec<StepRecord>,
    /// Set when the candidate set ran out before the horizon.
    pub terminal: bool,
}

impl EpisodeTrace {
    /// Number of visited nodes.
    pub fn len(&self) -> usize {
        1 + self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn visited(&self) -> Vec<usize> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|s| s.chosen))
            .collect()
    }

    pub fn rewards(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.reward).collect()
    }

    /// `step,node,reward` lines; step 0 is the start node, whose subgraph
    /// scores 0 under both functionals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,node,reward\n");
        writeln!(out, "0,{},0", self.start).unwrap();
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(out, "{},{},{}", i + 1, s.chosen, s.reward).unwrap();
        }
        out
    }
}

pub fn run_episode<A: Agent + ?Sized>(g: &Graph, cfg: &EpisodeConfig, agent: &mut A) -> Result<EpisodeTrace> {
    cfg.validate()?;
    let mut rng = seed::rng(cfg.seed);
    let mut state = initial_state(g, cfg, &mut rng)?;
    let start = state.last();
    let mut steps = Vec::with_capacity(cfg.horizon.saturating_sub(1));
    let mut terminal = false;
    while state.len() < cfg.horizon {
        let candidates = state.candidate_actions();
        if candidates.is_empty() {
            terminal = true;
            break;
        }
        let v = agent.choose(&state, &candidates, &mut rng)?;
        let reward = state.step(v, cfg.reward)?;
        steps.push(StepRecord {
            candidates,
            chosen: v,
            reward,
        });
    }
    Ok(EpisodeTrace { start, steps, terminal })
}

/// `Σ_k γ^k r_k` over the recorded action rewards.
pub fn episode_return(trace: &EpisodeTrace, discount: f64) -> f64 {
    discounted_sum(&trace.rewards(), discount)
}

pub fn discounted_sum(rewards: &[f64], discount: f64) -> f64 {
    let mut total = 0.0;
    let mut w = 1.0;
    for r in rewards {
        total += w * r;
        w *= discount;
    }
    total
}
