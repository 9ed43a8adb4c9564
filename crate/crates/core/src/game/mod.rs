//! Game semantics: feedback computation, the candidate-set adversary, scripted
//! play, and exhaustive strategy verification.
//!
//! The engine's knowledge of an invisible robber is the candidate set: every
//! vertex consistent with the whole observation history. "Located" means a
//! refinement step leaves a single candidate; the cop never needs to probe
//! the robber's vertex. After each turn the robber may traverse one edge or
//! stay, so candidate sets expand by closed neighborhoods.

use crate::graph::{distances, Distance, DistanceMatrix, Graph, Vertex, VertexSet};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// Which observation the probes produce.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum FeedbackModel {
    /// Ordered partition of the probe set by distance, plus a zero-distance
    /// flag. Unreachable probes tie in a final block.
    Centroidal,
    /// Full distance vector.
    Metric,
}

/// Canonical observation for one probe. Probe order is canonicalized (sorted)
/// so feedback equality is set-based; blocks are ordered nearest first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Feedback {
    pub probe: Vec<Vertex>,
    pub blocks: Vec<Vec<Vertex>>,
    pub zero_hit: Option<Vertex>,
    /// Distances in (sorted) probe order; `None` in the centroidal model.
    pub metric: Option<Vec<Distance>>,
}

impl Feedback {
    /// Index of the block containing `v`, 0 = nearest.
    pub fn block_index(&self, v: Vertex) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&v))
    }

    /// Strictly closer comparison between two probed vertices.
    pub fn closer(&self, a: Vertex, b: Vertex) -> std::cmp::Ordering {
        self.block_index(a)
            .unwrap()
            .cmp(&self.block_index(b).unwrap())
    }

    /// True when `a` is in a strictly earlier block than every vertex of `others`.
    pub fn strictly_closest(&self, a: Vertex, others: impl IntoIterator<Item = Vertex>) -> bool {
        let ra = self.block_index(a).unwrap();
        others
            .into_iter()
            .all(|o| ra < self.block_index(o).unwrap())
    }
}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("probe set is empty")]
    EmptyProbe,
    #[error("probe contains duplicate vertex {0}")]
    DuplicateProbe(Vertex),
    #[error("probe vertex {0} out of range")]
    ProbeOutOfRange(Vertex),
    #[error("strategy emitted {size} probes, budget is {budget}")]
    ProbeTooLarge { size: usize, budget: usize },
    #[error("trajectory is empty")]
    EmptyTrajectory,
    #[error("trajectory step {step}: {from} -> {to} is not an edge or a stay")]
    IllegalTrajectory {
        step: usize,
        from: Vertex,
        to: Vertex,
    },
    #[error("trajectory vertex {0} out of range")]
    TrajectoryOutOfRange(Vertex),
    #[error("memoization table exceeded {limit} entries")]
    MemoLimitExceeded { limit: usize },
}

/// Observation for probing `probe` while the robber sits at `r`.
pub fn feedback_of(
    g: &Graph,
    probe: &[Vertex],
    r: Vertex,
    model: FeedbackModel,
) -> Result<Feedback, GameError> {
    validate_probe(g, probe, probe.len().max(1))?;
    let row = distances(g, r);
    Ok(feedback_from(probe, |v| row.dist[v as usize], model))
}

fn validate_probe(g: &Graph, probe: &[Vertex], budget: usize) -> Result<(), GameError> {
    if probe.is_empty() {
        return Err(GameError::EmptyProbe);
    }
    if probe.len() > budget {
        return Err(GameError::ProbeTooLarge {
            size: probe.len(),
            budget,
        });
    }
    let mut seen = VertexSet::empty(g.n());
    for &v in probe {
        if v as usize >= g.n() {
            return Err(GameError::ProbeOutOfRange(v));
        }
        if seen.contains(v) {
            return Err(GameError::DuplicateProbe(v));
        }
        seen.insert(v);
    }
    Ok(())
}

/// Core feedback builder over any distance accessor.
fn feedback_from(
    probe: &[Vertex],
    d: impl Fn(Vertex) -> Distance,
    model: FeedbackModel,
) -> Feedback {
    let mut sorted_probe: Vec<Vertex> = probe.to_vec();
    sorted_probe.sort_unstable();
    let mut pairs: Vec<(Distance, Vertex)> = sorted_probe.iter().map(|&v| (d(v), v)).collect();
    let metric = match model {
        FeedbackModel::Metric => Some(pairs.iter().map(|&(dist, _)| dist).collect()),
        FeedbackModel::Centroidal => None,
    };
    pairs.sort_unstable();
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    let mut last: Option<Distance> = None;
    for (dist, v) in pairs {
        if last == Some(dist) {
            blocks.last_mut().unwrap().push(v);
        } else {
            blocks.push(vec![v]);
            last = Some(dist);
        }
    }
    let zero_hit = sorted_probe
        .iter()
        .copied()
        .find(|&v| d(v) == Distance::Finite(0));
    Feedback {
        probe: sorted_probe,
        blocks,
        zero_hit,
        metric,
    }
}

/// Groups a candidate set by the feedback each member would produce. Classes
/// are returned in order of their smallest member; they partition `s`.
pub fn partition_candidates(
    g: &Graph,
    probe: &[Vertex],
    s: &VertexSet,
    model: FeedbackModel,
) -> Result<Vec<(Feedback, VertexSet)>, GameError> {
    validate_probe(g, probe, probe.len().max(1))?;
    let dm = DistanceMatrix::new(g);
    Ok(partition_with(&dm, g.n(), probe, s, model))
}

fn partition_with(
    dm: &DistanceMatrix,
    n: usize,
    probe: &[Vertex],
    s: &VertexSet,
    model: FeedbackModel,
) -> Vec<(Feedback, VertexSet)> {
    let mut order: Vec<Feedback> = Vec::new();
    let mut classes: HashMap<Feedback, VertexSet> = HashMap::new();
    for v in s.iter() {
        let fb = feedback_from(probe, |p| dm.d(p, v), model);
        match classes.get_mut(&fb) {
            Some(set) => set.insert(v),
            None => {
                let mut set = VertexSet::empty(n);
                set.insert(v);
                order.push(fb.clone());
                classes.insert(fb, set);
            }
        }
    }
    order
        .into_iter()
        .map(|fb| {
            let set = classes.remove(&fb).unwrap();
            (fb, set)
        })
        .collect()
}

/// One robber move: union of closed neighborhoods (staying put is allowed).
pub fn expand(g: &Graph, s: &VertexSet) -> VertexSet {
    let mut out = s.clone();
    for v in s.iter() {
        for &w in g.neighbors(v) {
            out.insert(w);
        }
    }
    out
}

/// A stateful cop policy: emits the next probe as a pure function of its
/// state, then advances on the observed feedback. `fingerprint` is a
/// canonical serialization of the state, used as a memoization key by the
/// verifier, and must determine all future behavior.
pub trait Strategy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Probe budget k; every emitted probe has size 1..=k.
    fn budget(&self) -> usize;
    fn next_probe(&self) -> Vec<Vertex>;
    fn observe(&mut self, feedback: &Feedback);
    fn fingerprint(&self) -> Vec<u8>;
    fn clone_box(&self) -> Box<dyn Strategy>;
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

/// Fixed probe script; repeats its last probe when exhausted. Used for
/// engine tests and exhaustive small-strategy searches.
#[derive(Clone)]
pub struct ScriptStrategy {
    probes: Vec<Vec<Vertex>>,
    k: usize,
    at: usize,
}

impl ScriptStrategy {
    pub fn new(probes: Vec<Vec<Vertex>>) -> ScriptStrategy {
        assert!(!probes.is_empty(), "script needs at least one probe");
        let k = probes.iter().map(|p| p.len()).max().unwrap();
        ScriptStrategy { probes, k, at: 0 }
    }
}

impl Strategy for ScriptStrategy {
    fn name(&self) -> &'static str {
        "script"
    }
    fn budget(&self) -> usize {
        self.k
    }
    fn next_probe(&self) -> Vec<Vertex> {
        let i = self.at.min(self.probes.len() - 1);
        self.probes[i].clone()
    }
    fn observe(&mut self, _feedback: &Feedback) {
        if self.at + 1 < self.probes.len() {
            self.at += 1;
        }
    }
    fn fingerprint(&self) -> Vec<u8> {
        (self.at as u64).to_le_bytes().to_vec()
    }
    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// How a scripted game ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Located { vertex: Vertex, turn: usize },
    TurnBudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct TurnRecord {
    pub turn: usize,
    pub probe: Vec<Vertex>,
    pub feedback: Feedback,
    pub candidates_after_refine: Vec<Vertex>,
    /// Absent on the final (locating) turn.
    pub candidates_after_expand: Option<Vec<Vertex>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GameTrace {
    pub turns: Vec<TurnRecord>,
    pub outcome: Outcome,
}

impl GameTrace {
    /// One JSON record per turn, then a final record with the outcome.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for t in &self.turns {
            let located = matches!(self.outcome, Outcome::Located { turn, .. } if turn == t.turn);
            let rec = serde_json::json!({
                "turn": t.turn,
                "probe": t.probe,
                "blocks": t.feedback.blocks,
                "zero_hit": t.feedback.zero_hit,
                "candidates_after": t.candidates_after_refine,
                "located": located,
            });
            out.push_str(&rec.to_string());
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "outcome": self.outcome }).to_string());
        out.push('\n');
        out
    }
}

/// Simulates the game against one scripted robber walk. The walk must be
/// legal: consecutive vertices equal or adjacent. The turn budget is the
/// walk length.
pub fn play(
    g: &Graph,
    strategy: &mut dyn Strategy,
    trajectory: &[Vertex],
    model: FeedbackModel,
) -> Result<GameTrace, GameError> {
    if trajectory.is_empty() {
        return Err(GameError::EmptyTrajectory);
    }
    for &v in trajectory {
        if v as usize >= g.n() {
            return Err(GameError::TrajectoryOutOfRange(v));
        }
    }
    for (i, w) in trajectory.windows(2).enumerate() {
        if w[0] != w[1] && !g.has_edge(w[0], w[1]) {
            return Err(GameError::IllegalTrajectory {
                step: i + 1,
                from: w[0],
                to: w[1],
            });
        }
    }
    let dm = DistanceMatrix::new(g);
    let mut candidates = VertexSet::full(g.n());
    let mut turns = Vec::new();
    for (turn, &r) in trajectory.iter().enumerate() {
        let probe = strategy.next_probe();
        validate_probe(g, &probe, strategy.budget())?;
        let fb = feedback_from(&probe, |p| dm.d(p, r), model);
        let mut refined = VertexSet::empty(g.n());
        for v in candidates.iter() {
            if feedback_from(&probe, |p| dm.d(p, v), model) == fb {
                refined.insert(v);
            }
        }
        debug_assert!(refined.contains(r), "engine lost the true robber position");
        if refined.len() == 1 {
            turns.push(TurnRecord {
                turn,
                probe,
                feedback: fb,
                candidates_after_refine: refined.iter().collect(),
                candidates_after_expand: None,
            });
            return Ok(GameTrace {
                turns,
                outcome: Outcome::Located {
                    vertex: refined.first().unwrap(),
                    turn,
                },
            });
        }
        strategy.observe(&fb);
        let expanded = expand(g, &refined);
        turns.push(TurnRecord {
            turn,
            probe,
            feedback: fb,
            candidates_after_refine: refined.iter().collect(),
            candidates_after_expand: Some(expanded.iter().collect()),
        });
        candidates = expanded;
    }
    Ok(GameTrace {
        turns,
        outcome: Outcome::TurnBudgetExceeded,
    })
}

/// One step of a refuting adversarial branch.
#[derive(Clone, Debug, Serialize)]
pub struct BranchStep {
    pub probe: Vec<Vertex>,
    pub feedback: Feedback,
    pub class: Vec<Vertex>,
}

#[derive(Clone, Debug)]
pub enum VerifyOutcome {
    Verified {
        /// Worst-case number of turns over every adversarial branch.
        max_turns: usize,
        states_explored: usize,
    },
    Refuted {
        /// A minimal failing branch (all failing branches have length
        /// `turn_bound`); the candidate set still alive at the horizon.
        branch: Vec<BranchStep>,
        final_candidates: Vec<Vertex>,
    },
}

impl VerifyOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, VerifyOutcome::Verified { .. })
    }
    pub fn max_turns(&self) -> Option<usize> {
        match self {
            VerifyOutcome::Verified { max_turns, .. } => Some(*max_turns),
            VerifyOutcome::Refuted { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Cap on memo entries; exceeding it is a resource error.
    pub memo_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            memo_limit: 1 << 22,
        }
    }
}

#[derive(Clone, Copy, Default)]
struct MemoEntry {
    /// Exact worst-case turns to locate, when fully explored.
    locates: Option<u32>,
    /// Largest remaining budget that is known to fail.
    fails_within: Option<u32>,
}

struct VerifyCtx<'a> {
    g: &'a Graph,
    dm: DistanceMatrix,
    model: FeedbackModel,
    memo: HashMap<(Vec<u8>, VertexSet), MemoEntry>,
    memo_limit: usize,
    states: usize,
}

enum Explore {
    Locates(u32),
    Fails,
}

impl<'a> VerifyCtx<'a> {
    fn record(
        &mut self,
        key: (Vec<u8>, VertexSet),
        f: impl FnOnce(&mut MemoEntry),
    ) -> Result<(), GameError> {
        if self.memo.len() >= self.memo_limit && !self.memo.contains_key(&key) {
            return Err(GameError::MemoLimitExceeded {
                limit: self.memo_limit,
            });
        }
        f(self.memo.entry(key).or_default());
        Ok(())
    }

    fn explore(
        &mut self,
        s: &VertexSet,
        strat: &dyn Strategy,
        remaining: u32,
    ) -> Result<Explore, GameError> {
        debug_assert!(s.len() >= 2);
        let key = (strat.fingerprint(), s.clone());
        if let Some(e) = self.memo.get(&key) {
            if let Some(t) = e.locates {
                return Ok(if t <= remaining {
                    Explore::Locates(t)
                } else {
                    Explore::Fails
                });
            }
            if let Some(b) = e.fails_within {
                if remaining <= b {
                    return Ok(Explore::Fails);
                }
            }
        }
        if remaining == 0 {
            self.record(key, |e| e.fails_within = Some(0))?;
            return Ok(Explore::Fails);
        }
        self.states += 1;
        let probe = strat.next_probe();
        validate_probe(self.g, &probe, strat.budget())?;
        let classes = partition_with(&self.dm, self.g.n(), &probe, s, self.model);
        let mut worst = 1u32;
        for (fb, class) in classes {
            if class.len() == 1 {
                continue;
            }
            let next = expand(self.g, &class);
            let mut child = strat.clone_box();
            child.observe(&fb);
            match self.explore(&next, child.as_ref(), remaining - 1)? {
                Explore::Locates(t) => worst = worst.max(t + 1),
                Explore::Fails => {
                    self.record(key, |e| {
                        e.fails_within = Some(e.fails_within.unwrap_or(0).max(remaining))
                    })?;
                    return Ok(Explore::Fails);
                }
            }
        }
        self.record(key, |e| e.locates = Some(worst))?;
        Ok(Explore::Locates(worst))
    }

    /// After a refuted run, retrace one failing branch using the memo.
    fn reconstruct(
        &mut self,
        mut s: VertexSet,
        mut strat: Box<dyn Strategy>,
        bound: u32,
    ) -> (Vec<BranchStep>, VertexSet) {
        let mut steps = Vec::new();
        let mut remaining = bound;
        'outer: while remaining > 0 {
            let probe = strat.next_probe();
            let classes = partition_with(&self.dm, self.g.n(), &probe, &s, self.model);
            for (fb, class) in classes {
                if class.len() == 1 {
                    continue;
                }
                let next = expand(self.g, &class);
                let mut child = strat.clone_box();
                child.observe(&fb);
                let key = (child.fingerprint(), next.clone());
                let fails = match self.memo.get(&key) {
                    Some(e) => {
                        e.locates.is_some_and(|t| t > remaining - 1)
                            || e.fails_within.is_some_and(|b| b >= remaining - 1)
                    }
                    None => false,
                };
                if fails {
                    steps.push(BranchStep {
                        probe: probe.clone(),
                        feedback: fb,
                        class: class.iter().collect(),
                    });
                    s = next;
                    strat = child;
                    remaining -= 1;
                    continue 'outer;
                }
            }
            unreachable!("refuted verification must expose a failing class");
        }
        (steps, s)
    }
}

/// Explores every adversarial feedback branch from the all-vertices candidate
/// set. Verified means every branch locates within `turn_bound` turns.
/// Branches are memoized on (strategy fingerprint, candidate set).
pub fn verify_strategy(
    g: &Graph,
    strategy: &dyn Strategy,
    model: FeedbackModel,
    turn_bound: usize,
    opts: VerifyOptions,
) -> Result<VerifyOutcome, GameError> {
    assert!(turn_bound >= 1, "turn bound must be at least 1");
    let start = VertexSet::full(g.n());
    if start.len() == 1 {
        return Ok(VerifyOutcome::Verified {
            max_turns: 0,
            states_explored: 0,
        });
    }
    // Deep feedback trees need stack room; run on a dedicated thread.
    let stack = (16 << 20) + 4096 * turn_bound.min(1 << 20);
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(stack)
            .spawn_scoped(scope, || {
                let mut ctx = VerifyCtx {
                    g,
                    dm: DistanceMatrix::new(g),
                    model,
                    memo: HashMap::new(),
                    memo_limit: opts.memo_limit,
                    states: 0,
                };
                match ctx.explore(&start, strategy, turn_bound as u32)? {
                    Explore::Locates(t) => Ok(VerifyOutcome::Verified {
                        max_turns: t as usize,
                        states_explored: ctx.states,
                    }),
                    Explore::Fails => {
                        let (branch, final_candidates) =
                            ctx.reconstruct(start.clone(), strategy.clone_box(), turn_bound as u32);
                        Ok(VerifyOutcome::Refuted {
                            branch,
                            final_candidates: final_candidates.iter().collect(),
                        })
                    }
                }
            })
            .expect("spawn verifier thread")
            .join()
            .expect("verifier thread panicked")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gen(s: &str) -> Graph {
        FamilySpec::parse(s).unwrap().generate().unwrap()
    }

    #[test]
    fn feedback_examples() {
        let p3 = gen("path:3");
        let fb = feedback_of(&p3, &[0, 2], 1, FeedbackModel::Centroidal).unwrap();
        assert_eq!(fb.blocks, vec![vec![0, 2]]);
        assert_eq!(fb.zero_hit, None);

        let fb = feedback_of(&p3, &[0, 1], 0, FeedbackModel::Centroidal).unwrap();
        assert_eq!(fb.blocks, vec![vec![0], vec![1]]);
        assert_eq!(fb.zero_hit, Some(0));

        let c4 = gen("cycle:4");
        let fb = feedback_of(&c4, &[0, 1], 3, FeedbackModel::Centroidal).unwrap();
        assert_eq!(fb.blocks, vec![vec![0], vec![1]]);
    }

    #[test]
    fn feedback_unreachable_block_last() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let fb = feedback_of(&g, &[0, 2, 3], 1, FeedbackModel::Centroidal).unwrap();
        // 0 is at distance 1; 2 and 3 are unreachable and tie in the last block.
        assert_eq!(fb.blocks, vec![vec![0], vec![2, 3]]);
    }

    #[test]
    fn feedback_empty_probe_is_error() {
        let p3 = gen("path:3");
        assert!(matches!(
            feedback_of(&p3, &[], 0, FeedbackModel::Centroidal),
            Err(GameError::EmptyProbe)
        ));
    }

    #[test]
    fn partition_examples() {
        let p3 = gen("path:3");
        let all = VertexSet::full(3);
        let classes = partition_candidates(&p3, &[1], &all, FeedbackModel::Centroidal).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].1, VertexSet::from_iter(3, [0, 2]));
        assert_eq!(classes[1].1, VertexSet::from_iter(3, [1]));

        let classes = partition_candidates(&p3, &[0, 1], &all, FeedbackModel::Centroidal).unwrap();
        assert_eq!(classes.len(), 3);
        assert!(classes.iter().all(|(_, c)| c.len() == 1));

        let single = VertexSet::from_iter(3, [2]);
        let classes = partition_candidates(&p3, &[0], &single, FeedbackModel::Centroidal).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].1, single);
    }

    #[test]
    fn partition_is_a_partition() {
        let g = gen("random_graph:8:0.4:3");
        let all = VertexSet::full(8);
        for model in [FeedbackModel::Centroidal, FeedbackModel::Metric] {
            let classes = partition_candidates(&g, &[0, 3, 5], &all, model).unwrap();
            let mut union = VertexSet::empty(8);
            let mut total = 0;
            for (_, c) in &classes {
                assert!(!c.intersects(&union));
                union.union_with(c);
                total += c.len();
            }
            assert_eq!(union, all);
            assert_eq!(total, 8);
        }
    }

    #[test]
    fn expand_examples() {
        let p3 = gen("path:3");
        assert_eq!(
            expand(&p3, &VertexSet::from_iter(3, [1])),
            VertexSet::full(3)
        );
        assert_eq!(expand(&p3, &VertexSet::full(3)), VertexSet::full(3));
        let c4 = gen("cycle:4");
        assert_eq!(
            expand(&c4, &VertexSet::from_iter(4, [0])),
            VertexSet::from_iter(4, [0, 1, 3])
        );
    }

    #[test]
    fn expand_is_monotone() {
        let g = gen("random_graph:10:0.3:1");
        let a = VertexSet::from_iter(10, [0, 4]);
        let b = VertexSet::from_iter(10, [0, 4, 7]);
        let ea = expand(&g, &a);
        assert!(a.is_subset_of(&ea));
        assert!(ea.is_subset_of(&expand(&g, &b)));
    }

    #[test]
    fn metric_refines_centroidal() {
        // Every centroidal class is a union of metric classes: exhaustive over
        // all graphs with n <= 4 plus samples at n in {5, 6, 7}, all probes of
        // size <= 3.
        let mut graphs = Vec::new();
        for n in 2..=4usize {
            let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
                .flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v)))
                .collect();
            for mask in 0..(1u32 << pairs.len()) {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                graphs.push(Graph::from_edges(n, &edges).unwrap());
            }
        }
        for seed in 0..5u64 {
            for n in [5usize, 6, 7] {
                graphs.push(gen(&format!("random_graph:{n}:0.4:{seed}")));
            }
        }
        for g in &graphs {
            let n = g.n();
            let all = VertexSet::full(n);
            let mut probes: Vec<Vec<Vertex>> = Vec::new();
            for a in 0..n as Vertex {
                probes.push(vec![a]);
                for b in a + 1..n as Vertex {
                    probes.push(vec![a, b]);
                    for c in b + 1..n as Vertex {
                        probes.push(vec![a, b, c]);
                    }
                }
            }
            for probe in &probes {
                let cen = partition_candidates(g, probe, &all, FeedbackModel::Centroidal).unwrap();
                let met = partition_candidates(g, probe, &all, FeedbackModel::Metric).unwrap();
                for (_, mc) in &met {
                    assert!(
                        cen.iter().filter(|(_, cc)| mc.is_subset_of(cc)).count() == 1,
                        "metric class not inside a single centroidal class"
                    );
                }
            }
        }
    }

    #[test]
    fn play_rejects_illegal_trajectory() {
        let p3 = gen("path:3");
        let mut s = ScriptStrategy::new(vec![vec![0]]);
        let err = play(&p3, &mut s, &[0, 2], FeedbackModel::Centroidal).unwrap_err();
        match err {
            GameError::IllegalTrajectory { step, from, to } => {
                assert_eq!((step, from, to), (1, 0, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn play_soundness_random() {
        // The candidate set always contains the true robber position.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for case in 0..30 {
            let n = 5 + (case % 4) * 15;
            let g = gen(&format!("random_graph:{n}:0.15:{case}"));
            let mut traj = vec![rng.gen_range(0..n as Vertex)];
            for _ in 0..12 {
                let cur = *traj.last().unwrap();
                let mut moves = vec![cur];
                moves.extend_from_slice(g.neighbors(cur));
                traj.push(moves[rng.gen_range(0..moves.len())]);
            }
            let probes: Vec<Vec<Vertex>> = (0..13)
                .map(|_| {
                    let a = rng.gen_range(0..n as Vertex);
                    let b = rng.gen_range(0..n as Vertex);
                    if a == b {
                        vec![a]
                    } else {
                        vec![a, b]
                    }
                })
                .collect();
            let mut s = ScriptStrategy::new(probes);
            // play() debug-asserts soundness internally at every turn.
            let trace = play(&g, &mut s, &traj, FeedbackModel::Centroidal).unwrap();
            for t in &trace.turns {
                assert!(t.candidates_after_refine.contains(&traj[t.turn]));
            }
        }
    }

    #[test]
    fn oscillating_robber_survives_single_probes() {
        // Two disjoint edges: a robber mirroring on the other edge survives
        // any k=1 script for 10 turns.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let script: Vec<Vec<Vertex>> = (0..10).map(|i| vec![(i % 2) as Vertex]).collect();
        let mut s = ScriptStrategy::new(script);
        // Robber oscillates on the edge (2,3), never probed at the right time.
        let traj: Vec<Vertex> = (0..10).map(|i| if i % 2 == 0 { 2 } else { 3 }).collect();
        let trace = play(&g, &mut s, &traj, FeedbackModel::Centroidal).unwrap();
        assert_eq!(trace.outcome, Outcome::TurnBudgetExceeded);
    }

    #[test]
    fn verify_rejects_oversized_probe() {
        let p3 = gen("path:3");
        #[derive(Clone)]
        struct Bad;
        impl Strategy for Bad {
            fn name(&self) -> &'static str {
                "bad"
            }
            fn budget(&self) -> usize {
                1
            }
            fn next_probe(&self) -> Vec<Vertex> {
                vec![0, 1]
            }
            fn observe(&mut self, _f: &Feedback) {}
            fn fingerprint(&self) -> Vec<u8> {
                vec![]
            }
            fn clone_box(&self) -> Box<dyn Strategy> {
                Box::new(self.clone())
            }
        }
        assert!(matches!(
            verify_strategy(
                &p3,
                &Bad,
                FeedbackModel::Centroidal,
                5,
                VerifyOptions::default()
            ),
            Err(GameError::ProbeTooLarge { .. })
        ));
    }

    #[test]
    fn verify_refutes_k1_scripts_on_p3() {
        let p3 = gen("path:3");
        let script: Vec<Vec<Vertex>> = vec![vec![0], vec![1], vec![2]];
        let s = ScriptStrategy::new(script);
        let out = verify_strategy(
            &p3,
            &s,
            FeedbackModel::Centroidal,
            30,
            VerifyOptions::default(),
        )
        .unwrap();
        match out {
            VerifyOutcome::Refuted { branch, .. } => assert_eq!(branch.len(), 30),
            VerifyOutcome::Verified { .. } => panic!("single probes cannot win on P3"),
        }
    }

    #[test]
    fn verify_simple_sweep_on_p3() {
        // Probing both ends of each edge sweeps P3 with k=2.
        let p3 = gen("path:3");
        let s = ScriptStrategy::new(vec![vec![0, 1], vec![1, 2], vec![0, 1], vec![1, 2]]);
        let out = verify_strategy(
            &p3,
            &s,
            FeedbackModel::Centroidal,
            4,
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(out.is_verified(), "{out:?}");
    }

    #[test]
    fn trace_serializes_to_jsonl() {
        let p3 = gen("path:3");
        let mut s = ScriptStrategy::new(vec![vec![0, 1], vec![1, 2]]);
        let trace = play(&p3, &mut s, &[2, 2], FeedbackModel::Centroidal).unwrap();
        let text = trace.to_jsonl();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines.len() >= 2);
        for line in &lines {
            serde_json::from_str::<serde_json::Value>(line).unwrap();
        }
        assert!(lines.last().unwrap().contains("outcome"));
    }
}
