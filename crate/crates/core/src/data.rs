//! Edge lists, trajectory files, window extraction and train/test splits.
//!
//! Edge-list format: one `u v` pair per line, whitespace separated, `#`
//! lines ignored. A `# nodes N` line declares `N` integer-labelled nodes
//! `0..N`, which keeps isolated nodes and ids stable across a round trip.
//! Otherwise labels are remapped to contiguous ids: numerically when every
//! label is an integer, by first appearance when not.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;

use crate::graph::Graph;
use crate::pagerank::TrajectoryWindow;
use crate::seed;
use crate::{Error, Result};

/// A graph read from an edge list, with its label mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `labels[i]` is the original label of node `i`.
    pub labels: Vec<String>,
    /// Repeated edges (either orientation) that were collapsed.
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl LoadedGraph {
    pub fn index(&self) -> HashMap<&str, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }

    /// Two-column `label id` text.
    pub fn id_map_text(&self) -> String {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{l} {i}\n"))
            .collect()
    }
}

fn parse_nodes_directive(line: &str) -> Option<&str> {
    let rest = line.trim_start_matches('#').trim();
    let mut it = rest.split_whitespace();
    (it.next() == Some("nodes")).then(|| it.next()).flatten()
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut declared: Option<usize> = None;
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        let lineno = i + 1;
        if t.is_empty() {
            continue;
        }
        if t.starts_with('#') {
            if let Some(v) = parse_nodes_directive(t) {
                declared = Some(v.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad node count {v:?}"),
                })?);
            }
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected two node ids, found {}", fields.len()),
            });
        }
        pairs.push((fields[0].to_string(), fields[1].to_string()));
    }

    let all_int = pairs
        .iter()
        .all(|(a, b)| a.parse::<u64>().is_ok() && b.parse::<u64>().is_ok());
    let labels: Vec<String> = match declared {
        Some(n) => {
            if !all_int {
                return Err(Error::Parse {
                    line: 0,
                    msg: "a node count directive needs integer ids".into(),
                });
            }
            if let Some((a, b)) = pairs
                .iter()
                .find(|(a, b)| a.parse::<usize>().unwrap() >= n || b.parse::<usize>().unwrap() >= n)
            {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("edge {a} {b} exceeds declared node count {n}"),
                });
            }
            (0..n).map(|i| i.to_string()).collect()
        }
        None if all_int => {
            let mut ids: Vec<u64> = pairs
                .iter()
                .flat_map(|(a, b)| [a.parse().unwrap(), b.parse().unwrap()])
                .collect();
            ids.sort_unstable();
            ids.dedup();
            ids.iter().map(u64::to_string).collect()
        }
        None => {
            let mut seen = HashMap::new();
            let mut labels = Vec::new();
            for (a, b) in &pairs {
                for l in [a, b] {
                    if !seen.contains_key(l) {
                        seen.insert(l.clone(), labels.len());
                        labels.push(l.clone());
                    }
                }
            }
            labels
        }
    };
    // Integer labels compare numerically, so "01" and "1" are one node.
    let key = |l: &str| -> String {
        if all_int {
            l.parse::<u64>().unwrap().to_string()
        } else {
            l.to_string()
        }
    };
    let index: HashMap<String, usize> = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
    let mut self_loops = 0;
    let mut edges = Vec::with_capacity(pairs.len());
    for (a, b) in &pairs {
        let (u, v) = (index[&key(a)], index[&key(b)]);
        if u == v {
            self_loops += 1;
        } else {
            edges.push((u.min(v), u.max(v)));
        }
    }
    let listed = edges.len();
    edges.sort_unstable();
    edges.dedup();
    let duplicate_edges = listed - edges.len();
    Ok(LoadedGraph {
        graph: Graph::from_edges(labels.len(), edges)?,
        labels,
        duplicate_edges,
        self_loops,
    })
}

pub fn load_graph(path: &Path) -> Result<LoadedGraph> {
    parse_edge_list(BufReader::new(fs::File::open(path)?))
}

/// Edge list with a node-count directive; loading it gives back the same graph.
pub fn edge_list_text(g: &Graph) -> String {
    let mut s = format!("# nodes {}\n", g.node_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    fs::write(path, edge_list_text(g))?;
    Ok(())
}

/// Parses one trajectory per line, resolving labels through `index`.
pub fn parse_trajectories<R: BufRead>(reader: R, index: &HashMap<&str, usize>) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut traj = Vec::new();
        for tok in t.split_whitespace() {
            let id = index.get(tok).copied().or_else(|| {
                // integer labels may be written with leading zeros
                tok.parse::<u64>()
                    .ok()
                    .and_then(|x| index.get(x.to_string().as_str()).copied())
            });
            match id {
                Some(v) => traj.push(v),
                None => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("unknown node {tok:?}"),
                    })
                }
            }
        }
        out.push(traj);
    }
    Ok(out)
}

pub fn load_trajectories(path: &Path, graph: &LoadedGraph) -> Result<Vec<Vec<usize>>> {
    parse_trajectories(BufReader::new(fs::File::open(path)?), &graph.index())
}

pub fn trajectories_text(trajectories: &[Vec<usize>]) -> String {
    let mut s = String::new();
    for t in trajectories {
        let line: Vec<String> = t.iter().map(usize::to_string).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// A graph with exploration trajectories over it.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub source: Option<PathBuf>,
    pub graph: LoadedGraph,
    pub trajectories: Vec<Vec<usize>>,
}

impl Dataset {
    pub fn load(name: &str, edges: &Path, trajectories: &Path) -> Result<Self> {
        let graph = load_graph(edges)?;
        let trajectories = load_trajectories(trajectories, &graph)?;
        Ok(Self {
            name: name.to_string(),
            source: Some(edges.to_path_buf()),
            graph,
            trajectories,
        })
    }
}

/// Windows with the index of the trajectory each came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WindowSet {
    pub windows: Vec<TrajectoryWindow>,
    pub source: Vec<usize>,
    /// Windows dropped for containing a non-edge step.
    pub dropped: usize,
}

/// Sliding windows of `n_burn_in + 1` nodes whose consecutive pairs are all edges.
pub fn extract_windows(trajectories: &[Vec<usize>], g: &Graph, n_burn_in: usize) -> Result<WindowSet> {
    if n_burn_in == 0 {
        return Err(Error::InvalidParameter("n_burn_in must be at least 1".into()));
    }
    let len = n_burn_in + 1;
    let mut set = WindowSet::default();
    for (ti, t) in trajectories.iter().enumerate() {
        if t.len() < len {
            continue;
        }
        let n = g.node_count();
        let ok: Vec<bool> = t
            .windows(2)
            .map(|p| p[0] < n && p[1] < n && g.has_edge(p[0], p[1]))
            .collect();
        for start in 0..=t.len() - len {
            if ok[start..start + len - 1].iter().all(|&b| b) {
                set.windows.push(TrajectoryWindow::new(t[start..start + len].to_vec())?);
                set.source.push(ti);
            } else {
                set.dropped += 1;
            }
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<TrajectoryWindow>,
    pub test: Vec<TrajectoryWindow>,
    pub train_trajectories: Vec<usize>,
    pub test_trajectories: Vec<usize>,
    pub fraction: f64,
    pub seed: u64,
    /// Set when the split is degenerate.
    pub warning: Option<String>,
}

/// Trajectory-level split: trajectories are shuffled and `fraction` of them
/// (at least one on each side when possible) go to training.
pub fn split_windows(set: &WindowSet, fraction: f64, seed_value: u64) -> Result<Split> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "split fraction {fraction} outside (0,1)"
        )));
    }
    let mut trajs: Vec<usize> = set.source.clone();
    trajs.sort_unstable();
    trajs.dedup();
    let mut rng = seed::rng(seed_value);
    trajs.shuffle(&mut rng);
    let count = trajs.len();
    let (cut, warning) = if count <= 1 {
        (
            count,
            Some(format!("{count} trajectory with windows; all windows go to training")),
        )
    } else {
        (((fraction * count as f64).round() as usize).clamp(1, count - 1), None)
    };
    let mut train_trajectories = trajs[..cut].to_vec();
    let mut test_trajectories = trajs[cut..].to_vec();
    train_trajectories.sort_unstable();
    test_trajectories.sort_unstable();
    let mut split = Split {
        train: Vec::new(),
        test: Vec::new(),
        train_trajectories,
        test_trajectories,
        fraction,
        seed: seed_value,
        warning,
    };
    for (w, src) in set.windows.iter().zip(&set.source) {
        if split.train_trajectories.binary_search(src).is_ok() {
            split.train.push(w.clone());
        } else {
            split.test.push(w.clone());
        }
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<LoadedGraph> {
        parse_edge_list(s.as_bytes())
    }

    #[test]
    fn path_from_text() {
        let l = parse("0 1\n1 2").unwrap();
        assert_eq!(l.graph, Graph::path(3));
    }

    #[test]
    fn comments_and_duplicates() {
        let l = parse("# hello\n0 1\n\n1 0\n# another\n1 2\n2 2\n").unwrap();
        assert_eq!(l.graph.edge_count(), 2);
        assert_eq!(l.duplicate_edges, 1);
        assert_eq!(l.self_loops, 1);
    }

    #[test]
    fn malformed_line_reports_number() {
        match parse("0 1\n1 2 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn labels_are_remapped() {
        let l = parse("10 30\n30 20\n").unwrap();
        assert_eq!(l.labels, vec!["10", "20", "30"]);
        assert!(l.graph.has_edge(0, 2) && l.graph.has_edge(2, 1));
        let s = parse("bob alice\nalice carol\n").unwrap();
        assert_eq!(s.labels, vec!["bob", "alice", "carol"]);
        assert_eq!(s.id_map_text(), "bob 0\nalice 1\ncarol 2\n");
    }

    #[test]
    fn round_trip_keeps_isolated_nodes() {
        let g = Graph::from_edges(6, [(0, 1), (1, 4), (4, 5)]).unwrap();
        let l = parse(&edge_list_text(&g)).unwrap();
        assert_eq!(l.graph, g);
    }

    #[test]
    fn trajectories_resolve_labels() {
        let l = parse("a b\nb c\n").unwrap();
        let t = parse_trajectories("a b c\n# skip\nc b\n".as_bytes(), &l.index()).unwrap();
        assert_eq!(t, vec![vec![0, 1, 2], vec![2, 1]]);
        assert!(parse_trajectories("a z\n".as_bytes(), &l.index()).is_err());
    }

    #[test]
    fn window_counts() {
        let g = Graph::path(6);
        let w = extract_windows(&[vec![0, 1, 2, 3, 4]], &g, 3).unwrap();
        assert_eq!(w.windows.len(), 2);
        let w = extract_windows(&[vec![0, 1, 2]], &g, 3).unwrap();
        assert!(w.windows.is_empty());
        // 2 -> 4 is not an edge
        let w = extract_windows(&[vec![0, 1, 2, 4, 5, 4]], &g, 2).unwrap();
        let kept: Vec<Vec<usize>> = w.windows.iter().map(|w| w.nodes.clone()).collect();
        assert_eq!(kept, vec![vec![0, 1, 2], vec![4, 5, 4]]);
        assert_eq!(w.dropped, 2);
    }

    #[test]
    fn split_by_trajectory() {
        let g = Graph::complete(4);
        let trajs: Vec<Vec<usize>> = (0..10).map(|i| vec![i % 4, (i + 1) % 4, (i + 2) % 4]).collect();
        let set = extract_windows(&trajs, &g, 1).unwrap();
        let s = split_windows(&set, 0.8, 3).unwrap();
        assert_eq!((s.train_trajectories.len(), s.test_trajectories.len()), (8, 2));
        assert_eq!(s.train.len() + s.test.len(), set.windows.len());
        assert_eq!(s, split_windows(&set, 0.8, 3).unwrap());

        let one = extract_windows(&trajs[..1], &g, 1).unwrap();
        let s = split_windows(&one, 0.5, 0).unwrap();
        assert!(s.warning.is_some() && s.test.is_empty());
    }
}
