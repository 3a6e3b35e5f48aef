//! Bounded search for a move sequence turning a pair's presentation into the
//! (possibly stabilized) trivial one.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dual_pair::{DualPair, MapKind};
use crate::error::MoveError;
use crate::moves::{apply_move, check_preconditions, AcMove};
use crate::word::Sign;
use crate::presentation::abelian_invariants;
use crate::snf::nonunit_factors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Bfs,
    Greedy,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Strategy, String> {
        match s {
            "bfs" => Ok(Strategy::Bfs),
            "greedy" => Ok(Strategy::Greedy),
            other => Err(format!("unknown strategy {other:?} (bfs or greedy)")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Bfs => "bfs",
            Strategy::Greedy => "greedy",
        })
    }
}

/// One search step: a move, or a re-choice of the correspondence that swaps
/// the images of positions `k1` and `k2` under one map (`P` and `P*` are
/// unchanged). Re-choices are only emitted right before a `Move5` they make
/// applicable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Move(AcMove),
    Swap { kind: MapKind, i: usize, j: usize, k1: usize, k2: usize },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Move(mv) => mv.fmt(f),
            Step::Swap { kind, i, j, k1, k2 } => write!(f, "swap {kind} {i} {j} {k1} {k2}"),
        }
    }
}

impl FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> Result<Step, String> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        match tokens.as_slice() {
            ["swap", kind, rest @ ..] if rest.len() == 4 => {
                let kind = match *kind {
                    "f" => MapKind::F,
                    "fbar" => MapKind::FBar,
                    other => return Err(format!("unknown map {other:?}")),
                };
                let n: Vec<usize> = rest
                    .iter()
                    .map(|t| t.parse().map_err(|_| format!("bad index {t:?} in {s:?}")))
                    .collect::<Result<_, _>>()?;
                Ok(Step::Swap { kind, i: n[0], j: n[1], k1: n[2], k2: n[3] })
            }
            _ => s.parse::<AcMove>().map(Step::Move).map_err(|e| e.to_string()),
        }
    }
}

impl Serialize for Step {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Step {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Step, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StepError {
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error("step {0}: no such positions to swap")]
    Swap(String),
}

pub fn apply_step(pair: &DualPair, step: Step) -> Result<DualPair, StepError> {
    match step {
        Step::Move(mv) => Ok(apply_move(pair, mv)?),
        Step::Swap { kind, i, j, k1, k2 } => {
            if !(1..=pair.d()).contains(&i) || !(1..=pair.d()).contains(&j) {
                return Err(StepError::Swap(step.to_string()));
            }
            pair.swap_images(kind, i, j, k1, k2).ok_or_else(|| StepError::Swap(step.to_string()))
        }
    }
}

/// Applies every step in order.
pub fn replay_steps(pair: &DualPair, steps: &[Step]) -> Result<DualPair, StepError> {
    steps.iter().try_fold(pair.clone(), |cur, &step| apply_step(&cur, step))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Maximum number of distinct states generated, the start included.
    pub budget: usize,
    pub strategy: Strategy,
    /// Stabilizations allowed beyond the starting rank.
    pub extra_generators: usize,
    /// Letters allowed beyond the starting total length of P.
    pub length_slack: usize,
    /// Worker threads for breadth-first layers; `None` reads `ACH_THREADS`.
    pub threads: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig { budget: 100_000, strategy: Strategy::Greedy, extra_generators: 1, length_slack: 6, threads: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { moves: Vec<Step>, nodes: usize },
    /// No sequence within the limits. `pruned` is set when the abelian
    /// invariants already rule out the trivial group.
    Exhausted { nodes: usize, budget: usize, pruned: bool },
}

impl SearchOutcome {
    pub fn moves(&self) -> Option<&[Step]> {
        match self {
            SearchOutcome::Found { moves, .. } => Some(moves),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

struct Node {
    pair: DualPair,
    parent: Option<(usize, Vec<Step>)>,
    depth: usize,
}

/// States seen so far, bucketed by canonical key and compared exactly.
#[derive(Default)]
struct Seen {
    buckets: HashMap<Vec<Vec<i64>>, Vec<usize>>,
}

impl Seen {
    fn insert(&mut self, nodes: &[Node], pair: &DualPair, id: usize) -> bool {
        let bucket = self.buckets.entry(pair.canonical_key()).or_default();
        if bucket.iter().any(|&k| nodes[k].pair == *pair) {
            return false;
        }
        bucket.push(id);
        true
    }
}

fn worker_count(config: &SearchConfig) -> usize {
    config
        .threads
        .or_else(|| std::env::var("ACH_THREADS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn all_units(pair: &DualPair) -> bool {
    nonunit_factors(&abelian_invariants(pair.p())).is_empty()
}

/// Re-choices of one map that make `Move5 {i, j, sign}` applicable.
fn rechoices_for_move5(pair: &DualPair, i: usize, j: usize, sign: Sign) -> Vec<(Step, DualPair)> {
    let n = pair.p().relator(i).len();
    let mut out = Vec::new();
    for (k, s) in [(n - 1, sign), (n, sign.flip())] {
        let kind = MapKind::for_sign(s);
        for &other in pair.family().map(kind, j, i).keys() {
            if other == k {
                continue;
            }
            let step = Step::Swap { kind, i: j, j: i, k1: k.min(other), k2: k.max(other) };
            let Some(swapped) = pair.swap_images(kind, j, i, k, other) else { continue };
            if check_preconditions(&swapped, AcMove::Move5 { i, j, sign }).is_ok() {
                out.push((step, swapped));
            }
        }
    }
    out
}

/// Applicable steps from `pair` whose result stays within the limits.
fn children(pair: &DualPair, max_d: usize, max_len: usize) -> Vec<(Vec<Step>, DualPair)> {
    let mut out = Vec::new();
    for mv in AcMove::all(pair.d()) {
        match check_preconditions(pair, mv) {
            Ok(()) => {
                if let Ok(next) = apply_move(pair, mv) {
                    out.push((vec![Step::Move(mv)], next));
                }
            }
            Err(MoveError::Precondition { reason, .. }) if reason == "dual letters not consecutive" => {
                let AcMove::Move5 { i, j, sign } = mv else { continue };
                for (swap, swapped) in rechoices_for_move5(pair, i, j, sign) {
                    if let Ok(next) = apply_move(&swapped, mv) {
                        out.push((vec![swap, Step::Move(mv)], next));
                    }
                }
            }
            Err(_) => {}
        }
    }
    out.retain(|(_, next)| next.d() <= max_d && next.p().total_length() <= max_len && all_units(next));
    out
}

fn path(nodes: &[Node], mut id: usize) -> Vec<Step> {
    let mut steps = Vec::new();
    while let Some((parent, taken)) = &nodes[id].parent {
        steps.extend(taken.iter().rev());
        id = *parent;
    }
    steps.reverse();
    steps
}

/// Searches for moves making `P` trivial up to relabeling. Deterministic for
/// a fixed configuration, whatever the thread count.
pub fn search_trivialization(start: &DualPair, config: &SearchConfig) -> SearchOutcome {
    if start.p().is_trivial_up_to_relabeling() {
        return SearchOutcome::Found { moves: Vec::new(), nodes: 0 };
    }
    if !all_units(start) {
        return SearchOutcome::Exhausted { nodes: 0, budget: config.budget, pruned: true };
    }
    let max_d = start.d() + config.extra_generators;
    let max_len = start.p().total_length() + config.length_slack;
    let mut nodes = vec![Node { pair: start.clone(), parent: None, depth: 0 }];
    let mut seen = Seen::default();
    seen.insert(&nodes, start, 0);
    match config.strategy {
        Strategy::Greedy => greedy(nodes, seen, config, max_d, max_len),
        Strategy::Bfs => {
            let threads = worker_count(config);
            bfs(&mut nodes, &mut seen, config, max_d, max_len, threads)
        }
    }
}

fn greedy(mut nodes: Vec<Node>, mut seen: Seen, config: &SearchConfig, max_d: usize, max_len: usize) -> SearchOutcome {
    // smallest total length first, then shallowest, then oldest
    let key = |n: &Node, id: usize| Reverse((n.pair.p().total_length(), n.depth, id));
    let mut heap = BinaryHeap::from([key(&nodes[0], 0)]);
    while let Some(Reverse((_, _, id))) = heap.pop() {
        for (mv, next) in children(&nodes[id].pair, max_d, max_len) {
            let new_id = nodes.len();
            if new_id == config.budget {
                return SearchOutcome::Exhausted { nodes: new_id, budget: config.budget, pruned: false };
            }
            if !seen.insert(&nodes, &next, new_id) {
                continue;
            }
            let done = next.p().is_trivial_up_to_relabeling();
            nodes.push(Node { pair: next, parent: Some((id, mv)), depth: nodes[id].depth + 1 });
            if done {
                return SearchOutcome::Found { moves: path(&nodes, new_id), nodes: nodes.len() };
            }
            heap.push(key(&nodes[new_id], new_id));
        }
    }
    SearchOutcome::Exhausted { nodes: nodes.len(), budget: config.budget, pruned: false }
}

fn bfs(
    nodes: &mut Vec<Node>,
    seen: &mut Seen,
    config: &SearchConfig,
    max_d: usize,
    max_len: usize,
    threads: usize,
) -> SearchOutcome {
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        // expand the layer in parallel, merge in frontier order
        let chunk = frontier.len().div_ceil(threads);
        let expansions: Vec<Vec<(Vec<Step>, DualPair)>> = {
            let snapshot: &[Node] = nodes;
            std::thread::scope(|s| {
                let handles: Vec<_> = frontier
                    .chunks(chunk)
                    .map(|ids| {
                        s.spawn(move || {
                            ids.iter().map(|&id| children(&snapshot[id].pair, max_d, max_len)).collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
            })
        };
        let mut next_frontier = Vec::new();
        for (&id, kids) in frontier.iter().zip(expansions) {
            for (mv, next) in kids {
                let new_id = nodes.len();
                if new_id == config.budget {
                    return SearchOutcome::Exhausted { nodes: new_id, budget: config.budget, pruned: false };
                }
                if !seen.insert(nodes, &next, new_id) {
                    continue;
                }
                let done = next.p().is_trivial_up_to_relabeling();
                let depth = nodes[id].depth + 1;
                nodes.push(Node { pair: next, parent: Some((id, mv)), depth });
                if done {
                    return SearchOutcome::Found { moves: path(nodes, new_id), nodes: nodes.len() };
                }
                next_frontier.push(new_id);
            }
        }
        frontier = next_frontier;
    }
    SearchOutcome::Exhausted { nodes: nodes.len(), budget: config.budget, pruned: false }
}
