//! Experiment commands behind the `curio` binary.
//!
//! Every command writes CSVs and `<command>.cfg` (the fully resolved config)
//! into the configured output directory and never touches its inputs. Only
//! columns ending in `_seconds` depend on the machine.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{ExperimentConfig, ScorerSource, WalkerRestart};
use crate::data::{self, WindowSet};
use crate::dqn::{self, EnvironmentSuite, MeanSe, QAgent, TrainProgress};
use crate::explore::{baseline_agent, run_episode, Agent, BaselineKind, EpisodeConfig, RewardKind};
use crate::graph::{GeneratorSpec, Graph};
use crate::pagerank::{
    fit_parameters, improvement_ratio, CandidateScorer, FitProblem, RewardScorer, SearchConfig, WalkerModel,
    WalkerPaths, WeightSpace,
};
use crate::qnet::{init_params, q_value, QNetworkParams};
use crate::seed;
use crate::{Error, Result};

pub const CHECKPOINT_FILE: &str = "model.ckpt";
pub const LAST_CHECKPOINT_FILE: &str = "model_last.ckpt";

/// A named checkpoint from `--checkpoint kind=path` (or a bare path).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckpointArg {
    pub kind: Option<String>,
    pub path: PathBuf,
}

impl std::str::FromStr for CheckpointArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once('=') {
            Some((k, p)) if !k.is_empty() && !p.is_empty() => Ok(Self {
                kind: Some(k.to_ascii_lowercase()),
                path: p.into(),
            }),
            Some(_) => Err(format!("bad checkpoint argument {s:?}")),
            None => Ok(Self {
                kind: None,
                path: s.into(),
            }),
        }
    }
}

fn prepare_out(cfg: &ExperimentConfig, command: &str) -> Result<PathBuf> {
    cfg.validate()?;
    let out = cfg.out_path();
    fs::create_dir_all(&out)?;
    fs::write(out.join(format!("{command}.cfg")), cfg.to_text())?;
    Ok(out)
}

fn suite(cfg: &ExperimentConfig) -> Result<EnvironmentSuite> {
    EnvironmentSuite::generate(
        cfg.family()?,
        cfg.n,
        (cfg.train_envs, cfg.validation_envs, cfg.test_envs),
        cfg.seed,
    )
}

fn load_checkpoint(path: &Path) -> Result<(QNetworkParams, Vec<(String, String)>)> {
    QNetworkParams::load(path)
}

/// The checkpoint given on the command line, else the trained model in the
/// output directory.
fn resolve_checkpoint(cfg: &ExperimentConfig, given: Option<&Path>) -> Option<PathBuf> {
    given
        .map(Path::to_path_buf)
        .or_else(|| Some(cfg.out_path().join(CHECKPOINT_FILE)).filter(|p| p.exists()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenReport {
    pub files: Vec<PathBuf>,
}

/// Writes the train/validation/test environments as edge lists.
pub fn cmd_gen(cfg: &ExperimentConfig, force: bool) -> Result<GenReport> {
    let graphs_dir = cfg.out_path().join("graphs");
    if !force && graphs_dir.exists() && fs::read_dir(&graphs_dir)?.next().is_some() {
        return Err(Error::Config(format!(
            "{} is not empty (use --force to overwrite)",
            graphs_dir.display()
        )));
    }
    let out = prepare_out(cfg, "gen")?;
    if graphs_dir.exists() {
        fs::remove_dir_all(&graphs_dir)?;
    }
    fs::create_dir_all(&graphs_dir)?;
    let s = suite(cfg)?;
    let mut manifest = String::from("split,index,seed,nodes,edges,file\n");
    let mut files = Vec::new();
    for (split, graphs) in [&s.train, &s.validation, &s.test].into_iter().enumerate() {
        let name = EnvironmentSuite::SPLITS[split];
        for (i, g) in graphs.iter().enumerate() {
            let file = format!("{name}_{i:03}.edges");
            let path = graphs_dir.join(&file);
            data::write_edge_list(g, &path)?;
            writeln!(
                manifest,
                "{name},{i},{},{},{},{file}",
                s.seeds[split][i],
                g.node_count(),
                g.edge_count()
            )
            .unwrap();
            files.push(path);
        }
    }
    fs::write(out.join("environments.csv"), manifest)?;
    Ok(GenReport { files })
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    pub checkpoint: PathBuf,
    pub log: PathBuf,
    pub best_validation: f64,
    pub progress: TrainProgress,
}

fn progress_meta(cfg: &ExperimentConfig, p: TrainProgress, best_validation: f64) -> Vec<(String, String)> {
    vec![
        ("reward".into(), cfg.reward.to_string()),
        ("family".into(), cfg.family.clone()),
        ("seed".into(), cfg.seed.to_string()),
        ("episodes".into(), p.episodes.to_string()),
        ("env_steps".into(), p.env_steps.to_string()),
        ("grad_steps".into(), p.grad_steps.to_string()),
        ("best_validation".into(), best_validation.to_string()),
    ]
}

fn meta_usize(meta: &[(String, String)], key: &str) -> Result<usize> {
    meta.iter()
        .find(|(k, _)| k == key)
        .and_then(|(_, v)| v.parse().ok())
        .ok_or_else(|| Error::Config(format!("checkpoint lacks {key:?} metadata")))
}

/// Trains a Q-network; with a checkpoint, resumes from it and appends to
/// the existing log.
pub fn cmd_train(cfg: &ExperimentConfig, resume: Option<&Path>) -> Result<TrainReport> {
    let out = prepare_out(cfg, "train")?;
    let s = suite(cfg)?;
    let tcfg = cfg.train_config();
    let log_path = out.join("train_log.csv");
    let (init, progress) = match resume {
        Some(p) => {
            let (params, meta) = load_checkpoint(p)?;
            if let Some((_, r)) = meta.iter().find(|(k, _)| k == "reward") {
                if r.parse::<RewardKind>()? != cfg.reward {
                    return Err(Error::Config(format!(
                        "checkpoint was trained for {r}, config asks for {}",
                        cfg.reward
                    )));
                }
            }
            let progress = TrainProgress {
                episodes: meta_usize(&meta, "episodes")?,
                env_steps: meta_usize(&meta, "env_steps")?,
                grad_steps: meta_usize(&meta, "grad_steps")?,
            };
            (Some(params), progress)
        }
        None => (None, TrainProgress::default()),
    };
    let outcome = dqn::train_from(&s, &tcfg, init, progress)?;

    let mut text = if resume.is_some() && log_path.exists() {
        fs::read_to_string(&log_path)?
    } else {
        format!("{}\n", dqn::log_header())
    };
    for row in &outcome.log {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    fs::write(&log_path, text)?;
    let ckpt = out.join(CHECKPOINT_FILE);
    outcome
        .best
        .save(&ckpt, &progress_meta(cfg, outcome.progress, outcome.best_validation))?;
    outcome.last.save(
        &out.join(LAST_CHECKPOINT_FILE),
        &progress_meta(cfg, outcome.progress, outcome.best_validation),
    )?;
    Ok(TrainReport {
        checkpoint: ckpt,
        log: log_path,
        best_validation: outcome.best_validation,
        progress: outcome.progress,
    })
}

/// Undiscounted returns of one agent on graph `gi`, with episode seeds
/// derived from `(cfg.seed, gi, episode)`.
pub fn graph_returns<A: Agent>(
    g: &Graph,
    gi: usize,
    cfg: &EpisodeConfig,
    episodes: usize,
    agent: &mut A,
) -> Result<Vec<f64>> {
    (0..episodes)
        .map(|e| {
            let mut c = *cfg;
            c.seed = seed::derive(cfg.seed, &[gi as u64, e as u64]);
            Ok(run_episode(g, &c, agent)?.rewards().iter().sum())
        })
        .collect()
}

pub const AGENTS: [&str; 5] = ["random", "max_degree", "min_degree", "greedy", "gnn"];

fn agent_returns(
    name: &str,
    g: &Graph,
    gi: usize,
    cfg: &EpisodeConfig,
    episodes: usize,
    params: Option<&QNetworkParams>,
) -> Result<Option<Vec<f64>>> {
    let kind = match name {
        "gnn" => {
            return match params {
                Some(p) => graph_returns(g, gi, cfg, episodes, &mut QAgent { params: p }).map(Some),
                None => Ok(None),
            }
        }
        "random" => BaselineKind::Random,
        "max_degree" => BaselineKind::MaxDegree,
        "min_degree" => BaselineKind::MinDegree,
        "greedy" => BaselineKind::Greedy,
        other => return Err(Error::Config(format!("unknown agent {other:?}"))),
    };
    graph_returns(g, gi, cfg, episodes, &mut baseline_agent(kind, cfg.reward)).map(Some)
}

/// Per-agent results over a set of graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSummary {
    pub agent: String,
    pub per_graph: Vec<MeanSe>,
    pub overall: MeanSe,
}

/// Runs `agents` on `graphs` in parallel over graphs.
pub fn evaluate_agents(
    graphs: &[Graph],
    cfg: &EpisodeConfig,
    episodes: usize,
    agents: &[&str],
    params: Option<&QNetworkParams>,
    workers: usize,
) -> Result<Vec<AgentSummary>> {
    let indexed: Vec<(usize, &Graph)> = graphs.iter().enumerate().collect();
    let mut out = Vec::new();
    for &agent in agents {
        let results = seed::par_map(&indexed, workers, |&(gi, g)| {
            agent_returns(agent, g, gi, cfg, episodes, params)
        });
        let mut per_graph = Vec::new();
        let mut all = Vec::new();
        let mut skipped = false;
        for r in results {
            match r? {
                Some(v) => {
                    per_graph.push(MeanSe::of(&v));
                    all.extend(v);
                }
                None => skipped = true,
            }
        }
        if !skipped {
            out.push(AgentSummary {
                agent: agent.to_string(),
                per_graph,
                overall: MeanSe::of(&all),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub results: PathBuf,
    pub summary: Vec<AgentSummary>,
}

/// Table-1 style evaluation of the baselines and (if available) the network
/// on the test environments.
pub fn cmd_eval(cfg: &ExperimentConfig, checkpoint: Option<&Path>) -> Result<EvalReport> {
    let out = prepare_out(cfg, "eval")?;
    let s = suite(cfg)?;
    let params = match resolve_checkpoint(cfg, checkpoint) {
        Some(p) => Some(load_checkpoint(&p)?.0),
        None => {
            eprintln!("warning: no checkpoint; skipping the gnn agent");
            None
        }
    };
    let ecfg = cfg.eval_episode_config(cfg.horizon, 0);
    let summary = evaluate_agents(&s.test, &ecfg, cfg.eval_episodes, &AGENTS, params.as_ref(), cfg.workers)?;
    let mut csv = String::from("agent,graph,mean,se,episodes\n");
    for a in &summary {
        for (gi, m) in a.per_graph.iter().enumerate() {
            writeln!(csv, "{},{gi},{},{},{}", a.agent, m.mean, m.se, m.count).unwrap();
        }
        writeln!(
            csv,
            "{},all,{},{},{}",
            a.agent, a.overall.mean, a.overall.se, a.overall.count
        )
        .unwrap();
    }
    let results = out.join("eval.csv");
    fs::write(&results, csv)?;
    Ok(EvalReport { results, summary })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub sweep: &'static str,
    pub horizon: usize,
    pub n: usize,
    pub agent: String,
    pub result: MeanSe,
}

/// Fresh graphs of the configured family for a sweep point.
fn sweep_graphs(cfg: &ExperimentConfig, n: usize) -> Result<Vec<Graph>> {
    let fam = cfg.family_at(n)?;
    (0..cfg.generalize_graphs)
        .map(|i| GeneratorSpec::new(fam, n, seed::derive(cfg.seed, &[0x6e17, n as u64, i as u64])).generate())
        .collect()
}

/// Runs the trained network outside its training regime: other horizons at
/// the training size, and other sizes at the training horizon.
pub fn generalization_sweep(cfg: &ExperimentConfig, params: &QNetworkParams) -> Result<Vec<SweepPoint>> {
    let agents = ["random", "greedy", "gnn"];
    let mut points = Vec::new();
    let mut run = |sweep: &'static str, horizon: usize, n: usize, graphs: &[Graph]| -> Result<()> {
        let ecfg = cfg.eval_episode_config(horizon, 1 + n as u64 * 1000 + horizon as u64);
        for a in evaluate_agents(
            graphs,
            &ecfg,
            cfg.generalize_episodes,
            &agents,
            Some(params),
            cfg.workers,
        )? {
            points.push(SweepPoint {
                sweep,
                horizon,
                n,
                agent: a.agent,
                result: a.overall,
            });
        }
        Ok(())
    };
    let base = sweep_graphs(cfg, cfg.n)?;
    for &t in &cfg.generalize_horizons.0 {
        run("horizon", t, cfg.n, &base)?;
    }
    for &n in &cfg.generalize_sizes.0 {
        let graphs = sweep_graphs(cfg, n)?;
        run("size", cfg.horizon, n, &graphs)?;
    }
    Ok(points)
}

pub fn cmd_generalize(cfg: &ExperimentConfig, checkpoint: Option<&Path>) -> Result<Vec<SweepPoint>> {
    let out = prepare_out(cfg, "generalize")?;
    let path = resolve_checkpoint(cfg, checkpoint)
        .ok_or_else(|| Error::Config("generalize needs a checkpoint (train first or pass --checkpoint)".into()))?;
    let params = load_checkpoint(&path)?.0;
    let points = generalization_sweep(cfg, &params)?;
    let mut csv = String::from("sweep,horizon,n,agent,mean,se,episodes\n");
    for p in &points {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            p.sweep, p.horizon, p.n, p.agent, p.result.mean, p.result.se, p.result.count
        )
        .unwrap();
    }
    fs::write(out.join("generalize.csv"), csv)?;
    Ok(points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub gnn_seconds: f64,
    pub igt_seconds: f64,
    pub cpt_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    /// Median seconds per size.
    pub medians: Vec<BenchRow>,
    /// Log-log slopes of the medians: (gnn, igt, cpt).
    pub slopes: (f64, f64, f64),
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len();
    if m % 2 == 1 {
        xs[m / 2]
    } else {
        0.5 * (xs[m / 2 - 1] + xs[m / 2])
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Seconds per call of `f`, repeating short calls to get above timer noise.
fn time_call(mut f: impl FnMut()) -> f64 {
    let mut reps = 1usize;
    loop {
        let t = Instant::now();
        for _ in 0..reps {
            f();
        }
        let e = t.elapsed().as_secs_f64();
        if e > 2e-3 || reps >= 1 << 16 {
            return e / reps as f64;
        }
        reps *= 4;
    }
}

/// Times one candidate evaluation on subgraphs of each size: a GNN forward
/// pass against computing β₁ (greedy IGT) and compressibility (greedy CPT).
pub fn benchmark(
    sizes: &[usize],
    graphs: usize,
    cfg: &ExperimentConfig,
    params: &QNetworkParams,
) -> Result<(Vec<BenchRow>, BenchReport)> {
    if sizes.len() < 2 {
        return Err(Error::Config("bench needs at least two sizes".into()));
    }
    let mut rows = Vec::new();
    let mut medians = Vec::new();
    for &s in sizes {
        let fam = cfg.family_at(s)?;
        let mut cols = [Vec::new(), Vec::new(), Vec::new()];
        for i in 0..graphs {
            let g = GeneratorSpec::new(fam, s, seed::derive(cfg.seed, &[0xbe7c, s as u64, i as u64])).generate()?;
            let row = BenchRow {
                size: s,
                gnn_seconds: time_call(|| {
                    std::hint::black_box(q_value(&g, params));
                }),
                igt_seconds: time_call(|| {
                    std::hint::black_box(RewardKind::Igt.evaluate(&g));
                }),
                cpt_seconds: time_call(|| {
                    std::hint::black_box(RewardKind::Cpt.evaluate(&g));
                }),
            };
            cols[0].push(row.gnn_seconds);
            cols[1].push(row.igt_seconds);
            cols[2].push(row.cpt_seconds);
            rows.push(row);
        }
        medians.push(BenchRow {
            size: s,
            gnn_seconds: median(&mut cols[0]),
            igt_seconds: median(&mut cols[1]),
            cpt_seconds: median(&mut cols[2]),
        });
    }
    let slope =
        |f: fn(&BenchRow) -> f64| log_log_slope(&medians.iter().map(|r| (r.size as f64, f(r))).collect::<Vec<_>>());
    let slopes = (
        slope(|r| r.gnn_seconds),
        slope(|r| r.igt_seconds),
        slope(|r| r.cpt_seconds),
    );
    Ok((rows, BenchReport { medians, slopes }))
}

pub fn cmd_bench(cfg: &ExperimentConfig, checkpoint: Option<&Path>) -> Result<BenchReport> {
    let out = prepare_out(cfg, "bench")?;
    let params = match resolve_checkpoint(cfg, checkpoint) {
        Some(p) => load_checkpoint(&p)?.0,
        // timing does not depend on the weights
        None => init_params(cfg.layers, cfg.hidden, cfg.seed)?,
    };
    let (rows, report) = benchmark(&cfg.bench_sizes.0, cfg.bench_graphs, cfg, &params)?;
    let mut csv = String::from("size,graph,gnn_seconds,igt_seconds,cpt_seconds\n");
    let mut last = 0;
    let mut gi = 0;
    for r in &rows {
        if r.size != last {
            last = r.size;
            gi = 0;
        }
        writeln!(
            csv,
            "{},{gi},{},{},{}",
            r.size, r.gnn_seconds, r.igt_seconds, r.cpt_seconds
        )
        .unwrap();
        gi += 1;
    }
    fs::write(out.join("bench.csv"), csv)?;
    let mut summary = String::from("size,gnn_median_seconds,igt_median_seconds,cpt_median_seconds\n");
    for m in &report.medians {
        writeln!(
            summary,
            "{},{},{},{}",
            m.size, m.gnn_seconds, m.igt_seconds, m.cpt_seconds
        )
        .unwrap();
    }
    let (a, b, c) = report.slopes;
    writeln!(summary, "slope,{a},{b},{c}").unwrap();
    fs::write(out.join("bench_summary.csv"), summary)?;
    Ok(report)
}

/// Trajectories of the greedy baseline with the given reward, from random
/// starts; the synthetic stand-in for human exploration paths.
pub fn greedy_trajectories(
    g: &Graph,
    reward: RewardKind,
    count: usize,
    length: usize,
    seed_value: u64,
) -> Result<Vec<Vec<usize>>> {
    (0..count)
        .map(|i| {
            let cfg = EpisodeConfig::new(length, reward, seed::derive(seed_value, &[0x7a7, i as u64]));
            Ok(run_episode(g, &cfg, &mut baseline_agent(BaselineKind::Greedy, reward))?.visited())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PagerankReport {
    pub windows: usize,
    pub dropped: usize,
    pub train_windows: usize,
    pub test_windows: usize,
    pub excluded: usize,
    pub fit: crate::pagerank::FitResult,
    /// `r` on the test windows.
    pub ratio: f64,
    /// `r` with the bias weights pinned to (1, 0, 0).
    pub pinned_ratio: f64,
}

impl PagerankReport {
    pub fn improvement_percent(&self) -> f64 {
        (self.ratio - 1.0) * 100.0
    }
}

enum Scorer {
    Myopic(RewardScorer),
    Network(QNetworkParams),
}

impl Scorer {
    fn as_dyn(&self) -> &dyn CandidateScorer {
        match self {
            Scorer::Myopic(s) => s,
            Scorer::Network(p) => p,
        }
    }
}

fn pick_scorer(source: ScorerSource, kind: RewardKind, checkpoints: &[CheckpointArg]) -> Result<Option<Scorer>> {
    let tag = kind.name().to_ascii_lowercase();
    Ok(match source {
        ScorerSource::None => None,
        ScorerSource::Myopic => Some(Scorer::Myopic(RewardScorer(kind))),
        ScorerSource::Network => {
            let c = checkpoints
                .iter()
                .find(|c| c.kind.as_deref() == Some(tag.as_str()))
                .ok_or_else(|| Error::Config(format!("{tag} scorer needs --checkpoint {tag}=PATH")))?;
            Some(Scorer::Network(load_checkpoint(&c.path)?.0))
        }
    })
}

fn walker_model<'a>(
    cfg: &ExperimentConfig,
    scorer: Option<&'a Scorer>,
    paths: Option<&'a WalkerPaths>,
    tag: u64,
) -> Option<WalkerModel<'a>> {
    let s = scorer?;
    Some(match paths {
        Some(p) => WalkerModel::Fresh(p),
        None => WalkerModel::Context {
            scorer: s.as_dyn(),
            p_g: cfg.p_g,
            per_start: cfg.walker_paths,
            max_moves: cfg.walker_moves,
            seed: seed::derive(cfg.seed, &[0xc0e7, tag]),
        },
    })
}

/// Runs the window-prediction pipeline: fit plain and curiosity-biased
/// PageRank on training windows and compare them on held-out windows.
pub fn cmd_pagerank(cfg: &ExperimentConfig, checkpoints: &[CheckpointArg]) -> Result<PagerankReport> {
    let out = prepare_out(cfg, "pagerank")?;
    let (g, trajectories) = if cfg.pagerank_edges.is_empty() {
        let g = GeneratorSpec::new(
            cfg.pagerank_family()?,
            cfg.pagerank_n,
            seed::derive(cfg.seed, &[0x9a6e]),
        )
        .generate()?;
        let t = greedy_trajectories(
            &g,
            RewardKind::Igt,
            cfg.pagerank_trajectories,
            cfg.pagerank_trajectory_length,
            seed::derive(cfg.seed, &[0x7a7]),
        )?;
        data::write_edge_list(&g, &out.join("pagerank_graph.edges"))?;
        fs::write(out.join("pagerank_paths.txt"), data::trajectories_text(&t))?;
        (g, t)
    } else {
        let ds = data::Dataset::load(
            "dataset",
            Path::new(&cfg.pagerank_edges),
            Path::new(&cfg.pagerank_paths),
        )?;
        fs::write(out.join("pagerank_ids.txt"), ds.graph.id_map_text())?;
        if ds.graph.duplicate_edges > 0 || ds.graph.self_loops > 0 {
            eprintln!(
                "warning: collapsed {} duplicate edges, dropped {} self-loops",
                ds.graph.duplicate_edges, ds.graph.self_loops
            );
        }
        (ds.graph.graph, ds.trajectories)
    };
    let report = pagerank_pipeline(&g, &trajectories, cfg, checkpoints, Some(&out))?;
    Ok(report)
}

/// The prediction pipeline on a given graph and trajectories; writes its
/// CSVs to `out` when given.
pub fn pagerank_pipeline(
    g: &Graph,
    trajectories: &[Vec<usize>],
    cfg: &ExperimentConfig,
    checkpoints: &[CheckpointArg],
    out: Option<&Path>,
) -> Result<PagerankReport> {
    let set: WindowSet = data::extract_windows(trajectories, g, cfg.n_burn_in)?;
    let split = data::split_windows(&set, cfg.split_fraction, seed::derive(cfg.seed, &[0x5b1]))?;
    if let Some(w) = &split.warning {
        eprintln!("warning: {w}");
    }
    let igt = pick_scorer(cfg.igt_scorer, RewardKind::Igt, checkpoints)?;
    let cpt = pick_scorer(cfg.cpt_scorer, RewardKind::Cpt, checkpoints)?;

    let fresh_paths = |s: &Scorer, tag: u64| -> Result<WalkerPaths> {
        WalkerPaths::sample(
            g,
            s.as_dyn(),
            cfg.p_g,
            cfg.walker_paths,
            cfg.walker_moves + 1,
            seed::derive(cfg.seed, &[0xf2e5, tag]),
            cfg.workers,
        )
    };
    let igt_paths = match (&igt, cfg.walker_restart) {
        (Some(s), WalkerRestart::Fresh) => Some(fresh_paths(s, 1)?),
        _ => None,
    };
    let cpt_paths = match (&cpt, cfg.walker_restart) {
        (Some(s), WalkerRestart::Fresh) => Some(fresh_paths(s, 2)?),
        _ => None,
    };
    let igt_model = walker_model(cfg, igt.as_ref(), igt_paths.as_ref(), 1);
    let cpt_model = walker_model(cfg, cpt.as_ref(), cpt_paths.as_ref(), 2);
    let train = FitProblem::new(g, &split.train, igt_model, cpt_model, cfg.workers)?;
    let test = FitProblem::new(g, &split.test, igt_model, cpt_model, cfg.workers)?;
    let space = match (igt.is_some(), cpt.is_some()) {
        (false, false) => WeightSpace::Pinned,
        (true, false) => WeightSpace::PrIgt,
        (false, true) => WeightSpace::PrCpt,
        (true, true) => WeightSpace::All,
    };
    let search = SearchConfig {
        budget: cfg.search_budget,
        alpha_max: cfg.alpha_max,
        seed: seed::derive(cfg.seed, &[0x5ea7]),
    };
    let fit = fit_parameters(&train, space, &search)?;
    let ratio = improvement_ratio(&test, &fit)?;
    let pinned = fit_parameters(&train, WeightSpace::Pinned, &search)?;
    let pinned_ratio = improvement_ratio(&test, &pinned)?;
    let report = PagerankReport {
        windows: set.windows.len(),
        dropped: set.dropped,
        train_windows: train.windows.len(),
        test_windows: test.windows.len(),
        excluded: train.excluded + test.excluded,
        fit,
        ratio,
        pinned_ratio,
    };
    if let Some(out) = out {
        let u = &report.fit.unbiased;
        let b = &report.fit.biased;
        let mut csv = String::from("key,value\n");
        for (k, v) in [
            ("windows", report.windows.to_string()),
            ("dropped_windows", report.dropped.to_string()),
            ("excluded_windows", report.excluded.to_string()),
            ("train_windows", report.train_windows.to_string()),
            ("test_windows", report.test_windows.to_string()),
            ("unbiased_alpha", u.alpha.to_string()),
            ("unbiased_objective", u.objective.to_string()),
            ("biased_alpha", b.alpha.to_string()),
            ("beta", b.weights[0].to_string()),
            ("gamma", b.weights[1].to_string()),
            ("delta", b.weights[2].to_string()),
            ("biased_objective", b.objective.to_string()),
            ("ratio", report.ratio.to_string()),
            ("improvement_percent", report.improvement_percent().to_string()),
            (
                "pinned_improvement_percent",
                ((report.pinned_ratio - 1.0) * 100.0).to_string(),
            ),
        ] {
            writeln!(csv, "{k},{v}").unwrap();
        }
        fs::write(out.join("pagerank_report.csv"), csv)?;
        let mut ranks = String::from("window,candidates,target,unbiased_percentile,biased_percentile\n");
        let pu = test.percentiles(u.alpha, u.weights);
        let pb = test.percentiles(b.alpha, b.weights);
        for (i, w) in test.windows.iter().enumerate() {
            writeln!(
                ranks,
                "{i},{},{},{},{}",
                w.candidates.len(),
                w.candidates[w.target],
                pu[i],
                pb[i]
            )
            .unwrap();
        }
        fs::write(out.join("pagerank_ranks.csv"), ranks)?;
    }
    Ok(report)
}
