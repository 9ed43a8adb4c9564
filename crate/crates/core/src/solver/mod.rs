//! Exact solvers: game values by least-fixpoint attractor, the dimension
//! parameters by subset enumeration, minimum locating sets, and the
//! diameter-2 gadget construction.
//!
//! Everything here is a brute-force oracle for desk-scale graphs. States of
//! the probe game are candidate sets encoded as bit masks; the cop wins from
//! a state iff some probe splits it so that every feedback class is a
//! singleton or leads (after the robber's move) to an already-winning state.
//! The least fixpoint of that operator marks all cop-winning states; states
//! outside it are robber-non-losing, no cycle detection needed.

use crate::game::FeedbackModel;
use crate::graph::{Distance, DistanceMatrix, Graph, GraphError, Vertex};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("graph has {n} vertices, above the limit {limit} for {what}")]
    LimitExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("gadget construction needs diameter at most 2, got {0}")]
    DiameterNot2(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Vertex ceiling for the game fixpoint (mask tables are 2^n).
    pub max_vertices: usize,
    /// Quotient the state space by graph automorphisms. Witness tables are
    /// then expressed over canonical states.
    pub symmetry_reduction: bool,
    /// Skip automorphism reduction when the group is larger than this.
    pub max_group: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_vertices: 12,
            symmetry_reduction: false,
            max_group: 100_000,
        }
    }
}

/// Winning probe per reachable winning state, or a robber-safe region.
#[derive(Clone, Debug, Serialize)]
pub enum Witness {
    /// For each reachable winning candidate set, a probe under which every
    /// feedback class is a singleton or leads to a state of smaller rank.
    CopTable(Vec<(Vec<Vertex>, Vec<Vertex>)>),
    /// Non-winning states closed under "every probe leaves some class of
    /// size >= 2 whose expansion stays in the region".
    RobberRegion(Vec<Vec<Vertex>>),
}

#[derive(Clone, Debug, Serialize)]
pub struct GameValue {
    pub k: usize,
    pub cop_wins: bool,
    pub witness: Option<Witness>,
}

/// Precomputed per-graph data reused across probe budgets.
struct Instance {
    n: usize,
    full: u32,
    nclosed: Vec<u32>,
    dm: DistanceMatrix,
    /// mask -> canonical representative (identity without symmetry).
    canon: Option<Vec<u32>>,
}

impl Instance {
    fn new(g: &Graph, opts: &SolveOptions) -> Instance {
        let n = g.n();
        let full = if n == 32 { !0 } else { (1u32 << n) - 1 };
        let nclosed = (0..n)
            .map(|v| {
                g.neighbors(v as Vertex)
                    .iter()
                    .fold(1u32 << v, |m, &w| m | 1 << w)
            })
            .collect();
        let dm = DistanceMatrix::new(g);
        let canon = if opts.symmetry_reduction {
            automorphisms(g, opts.max_group).map(|perms| {
                let mut canon = vec![0u32; (full as usize) + 1];
                for s in 0..=full {
                    let mut best = s;
                    for p in &perms {
                        let mut img = 0u32;
                        let mut rest = s;
                        while rest != 0 {
                            let v = rest.trailing_zeros() as usize;
                            rest &= rest - 1;
                            img |= 1 << p[v];
                        }
                        best = best.min(img);
                    }
                    canon[s as usize] = best;
                }
                canon
            })
        } else {
            None
        };
        Instance {
            n,
            full,
            nclosed,
            dm,
            canon,
        }
    }

    fn canon(&self, s: u32) -> u32 {
        match &self.canon {
            Some(t) => t[s as usize],
            None => s,
        }
    }

    fn expand(&self, s: u32) -> u32 {
        let mut out = 0u32;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= self.nclosed[v];
        }
        out
    }

    /// Dense signature ids per vertex for one probe; vertices with equal ids
    /// are indistinguishable under this probe.
    fn signatures(&self, probe: &[Vertex], model: FeedbackModel) -> Vec<u32> {
        let mut intern: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut out = vec![0u32; self.n];
        for v in 0..self.n as Vertex {
            let dists: Vec<Distance> = probe.iter().map(|&p| self.dm.d(p, v)).collect();
            let key: Vec<u32> = match model {
                FeedbackModel::Metric => dists
                    .iter()
                    .map(|d| d.finite().map_or(u32::MAX, |x| x))
                    .collect(),
                FeedbackModel::Centroidal => {
                    // Dense rank of each probe's distance, plus the zero flag.
                    let mut sorted: Vec<Distance> = dists.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    dists
                        .iter()
                        .map(|d| {
                            let rank = sorted.iter().position(|x| x == d).unwrap() as u32;
                            rank * 2 + u32::from(*d == Distance::Finite(0))
                        })
                        .collect()
                }
            };
            let next = intern.len() as u32;
            out[v as usize] = *intern.entry(key).or_insert(next);
        }
        out
    }
}

/// All probe sets of size 1..=k, lexicographic.
fn probe_list(n: usize, k: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vertex> = Vec::new();
    fn rec(n: usize, k: usize, start: Vertex, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for v in start..n as Vertex {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Backtracking enumeration of all graph automorphisms; `None` when the
/// group exceeds `cap`.
fn automorphisms(g: &Graph, cap: usize) -> Option<Vec<Vec<usize>>> {
    let n = g.n();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        g: &Graph,
        v: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        perms: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        let n = g.n();
        if v == n {
            perms.push(image.clone());
            return perms.len() <= cap;
        }
        'cand: for w in 0..n {
            if used[w] || g.degree(v as Vertex) != g.degree(w as Vertex) {
                continue;
            }
            for (u, &img) in image.iter().enumerate().take(v) {
                let adj = g.has_edge(v as Vertex, u as Vertex);
                if adj != g.has_edge(w as Vertex, img as Vertex) {
                    continue 'cand;
                }
            }
            image[v] = w;
            used[w] = true;
            let ok = rec(g, v + 1, image, used, perms, cap);
            used[w] = false;
            image[v] = usize::MAX;
            if !ok {
                return false;
            }
        }
        true
    }
    if rec(g, 0, &mut image, &mut used, &mut perms, cap) {
        Some(perms)
    } else {
        None
    }
}

struct Fixpoint {
    win: Vec<bool>,
    rank: Vec<u16>,
}

/// Least-fixpoint attractor over all candidate-set masks. Rounds evaluate
/// undecided states in parallel against the previous round's table, then
/// dominance closes the new winners downward (a win from S wins from any
/// subset of S).
fn attractor(inst: &Instance, probes: &[Vec<Vertex>], model: FeedbackModel) -> Fixpoint {
    let size = inst.full as usize + 1;
    let mut win = vec![false; size];
    let mut rank = vec![0u16; size];
    let sigs: Vec<Vec<u32>> = probes.iter().map(|p| inst.signatures(p, model)).collect();

    let mut todo: Vec<u32> = (0..=inst.full).filter(|&s| inst.canon(s) == s).collect();
    for &s in &todo {
        if s.count_ones() <= 1 {
            win[s as usize] = true;
        }
    }
    todo.retain(|&s| !win[s as usize]);

    let eval = |s: u32, win: &[bool]| -> bool {
        'probe: for sig in &sigs {
            // Bucket the members of s by signature id.
            let mut buckets: HashMap<u32, u32> = HashMap::new();
            let mut rest = s;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                *buckets.entry(sig[v]).or_insert(0) |= 1 << v;
            }
            for (_, class) in buckets {
                if class.count_ones() == 1 {
                    continue;
                }
                let next = inst.canon(inst.expand(class));
                if !win[next as usize] {
                    continue 'probe;
                }
            }
            return true;
        }
        false
    };

    let mut round: u16 = 0;
    loop {
        round += 1;
        let newly: Vec<u32> = todo
            .par_iter()
            .copied()
            .filter(|&s| eval(s, &win))
            .collect();
        if newly.is_empty() {
            break;
        }
        // Downward dominance closure.
        let mut queue = newly;
        while let Some(s) = queue.pop() {
            let s = inst.canon(s);
            if win[s as usize] {
                continue;
            }
            win[s as usize] = true;
            rank[s as usize] = round;
            let mut rest = s;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                let sub = s & !(1 << v);
                if sub != 0 && !win[inst.canon(sub) as usize] {
                    queue.push(sub);
                }
            }
        }
        todo.retain(|&s| !win[s as usize]);
    }
    Fixpoint { win, rank }
}

fn mask_to_vec(mut s: u32) -> Vec<Vertex> {
    let mut out = Vec::new();
    while s != 0 {
        out.push(s.trailing_zeros());
        s &= s - 1;
    }
    out
}

fn check_limit(g: &Graph, opts: &SolveOptions, what: &'static str) -> Result<(), SolverError> {
    let hard = 20;
    let limit = opts.max_vertices.min(hard);
    if g.n() > limit {
        return Err(SolverError::LimitExceeded {
            what,
            n: g.n(),
            limit,
        });
    }
    Ok(())
}

/// Decides the game with probe budget `k` exactly, with a replayable witness.
pub fn cop_wins(
    g: &Graph,
    k: usize,
    model: FeedbackModel,
    opts: &SolveOptions,
) -> Result<GameValue, SolverError> {
    assert!(k >= 1, "probe budget must be at least 1");
    check_limit(g, opts, "exact game solving")?;
    let inst = Instance::new(g, opts);
    let probes = probe_list(g.n(), k);
    let fp = attractor(&inst, &probes, model);
    let start = inst.canon(inst.full);
    let wins = fp.win[start as usize];
    let witness = if wins {
        Some(build_cop_table(&inst, &probes, model, &fp))
    } else {
        Some(build_robber_region(&inst, &probes, model, &fp))
    };
    Ok(GameValue {
        k,
        cop_wins: wins,
        witness,
    })
}

/// For each reachable winning state pick the first probe whose classes are
/// singletons or drop in rank; the table replays to a located robber.
fn build_cop_table(
    inst: &Instance,
    probes: &[Vec<Vertex>],
    model: FeedbackModel,
    fp: &Fixpoint,
) -> Witness {
    let sigs: Vec<Vec<u32>> = probes.iter().map(|p| inst.signatures(p, model)).collect();
    let mut table: Vec<(Vec<Vertex>, Vec<Vertex>)> = Vec::new();
    let mut seen: HashMap<u32, ()> = HashMap::new();
    let mut queue = vec![inst.canon(inst.full)];
    while let Some(s) = queue.pop() {
        if s.count_ones() <= 1 || seen.contains_key(&s) {
            continue;
        }
        seen.insert(s, ());
        let my_rank = fp.rank[s as usize];
        let mut chosen: Option<(usize, Vec<u32>)> = None;
        'probe: for (pi, sig) in sigs.iter().enumerate() {
            let mut buckets: HashMap<u32, u32> = HashMap::new();
            let mut rest = s;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                *buckets.entry(sig[v]).or_insert(0) |= 1 << v;
            }
            let mut nexts = Vec::new();
            for (_, class) in buckets {
                if class.count_ones() == 1 {
                    continue;
                }
                let next = inst.canon(inst.expand(class));
                if !fp.win[next as usize] || fp.rank[next as usize] >= my_rank {
                    continue 'probe;
                }
                nexts.push(next);
            }
            chosen = Some((pi, nexts));
            break;
        }
        let (pi, nexts) = chosen.expect("every winning state admits a rank-decreasing probe");
        table.push((mask_to_vec(s), probes[pi].clone()));
        queue.extend(nexts);
    }
    table.sort();
    Witness::CopTable(table)
}

/// Region of non-winning states reachable while the robber refuses to lose:
/// for every probe some class of size >= 2 expands inside the region.
fn build_robber_region(
    inst: &Instance,
    probes: &[Vec<Vertex>],
    model: FeedbackModel,
    fp: &Fixpoint,
) -> Witness {
    let sigs: Vec<Vec<u32>> = probes.iter().map(|p| inst.signatures(p, model)).collect();
    let mut region: Vec<u32> = Vec::new();
    let mut seen: HashMap<u32, ()> = HashMap::new();
    let mut queue = vec![inst.canon(inst.full)];
    while let Some(s) = queue.pop() {
        if seen.contains_key(&s) {
            continue;
        }
        seen.insert(s, ());
        region.push(s);
        for sig in &sigs {
            let mut buckets: HashMap<u32, u32> = HashMap::new();
            let mut rest = s;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                *buckets.entry(sig[v]).or_insert(0) |= 1 << v;
            }
            // Deterministic pick: the surviving class with smallest mask.
            let bad = buckets
                .values()
                .filter(|c| c.count_ones() >= 2)
                .map(|&c| inst.canon(inst.expand(c)))
                .filter(|&t| !fp.win[t as usize])
                .min();
            let bad = bad.expect("non-winning state must have an escape per probe");
            if !seen.contains_key(&bad) {
                queue.push(bad);
            }
        }
    }
    region.sort_unstable();
    Witness::RobberRegion(region.into_iter().map(mask_to_vec).collect())
}

/// Replays a witness against an independent re-evaluation of the game
/// semantics; true when it certifies the claimed outcome.
pub fn validate_witness(
    g: &Graph,
    k: usize,
    model: FeedbackModel,
    value: &GameValue,
    opts: &SolveOptions,
) -> bool {
    let inst = Instance::new(g, opts);
    let probes = probe_list(g.n(), k);
    let sigs: Vec<(Vec<Vertex>, Vec<u32>)> = probes
        .iter()
        .map(|p| (p.clone(), inst.signatures(p, model)))
        .collect();
    let classes_of = |s: u32, sig: &[u32]| -> Vec<u32> {
        let mut buckets: HashMap<u32, u32> = HashMap::new();
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            *buckets.entry(sig[v]).or_insert(0) |= 1 << v;
        }
        buckets.into_values().collect()
    };
    match &value.witness {
        Some(Witness::CopTable(table)) => {
            let lookup: HashMap<u32, &Vec<Vertex>> = table
                .iter()
                .map(|(s, p)| (s.iter().fold(0u32, |m, &v| m | 1 << v), p))
                .collect();
            // Replay every branch; depth-bounded by the state count so a
            // broken table cannot loop.
            let mut stack = vec![(inst.canon(inst.full), 0usize)];
            while let Some((s, depth)) = stack.pop() {
                if s.count_ones() <= 1 {
                    continue;
                }
                if depth > lookup.len() + 1 {
                    return false;
                }
                let Some(probe) = lookup.get(&s) else {
                    return false;
                };
                let sig = match sigs.iter().find(|(p, _)| &p == probe) {
                    Some((_, sig)) => sig,
                    None => return false,
                };
                for class in classes_of(s, sig) {
                    if class.count_ones() >= 2 {
                        stack.push((inst.canon(inst.expand(class)), depth + 1));
                    }
                }
            }
            value.cop_wins
        }
        Some(Witness::RobberRegion(region)) => {
            let masks: std::collections::HashSet<u32> = region
                .iter()
                .map(|s| s.iter().fold(0u32, |m, &v| m | 1 << v))
                .collect();
            if !masks.contains(&inst.canon(inst.full)) {
                return false;
            }
            for &s in &masks {
                for (_, sig) in &sigs {
                    let ok = classes_of(s, sig).iter().any(|&c| {
                        c.count_ones() >= 2 && masks.contains(&inst.canon(inst.expand(c)))
                    });
                    if !ok {
                        return false;
                    }
                }
            }
            !value.cop_wins
        }
        None => false,
    }
}

/// Minimum budget winning the centroidal game (iterative deepening on k).
pub fn zeta_star(g: &Graph, opts: &SolveOptions) -> Result<usize, SolverError> {
    min_budget(g, FeedbackModel::Centroidal, opts)
}

/// Minimum budget winning the metric game.
pub fn zeta(g: &Graph, opts: &SolveOptions) -> Result<usize, SolverError> {
    min_budget(g, FeedbackModel::Metric, opts)
}

fn min_budget(g: &Graph, model: FeedbackModel, opts: &SolveOptions) -> Result<usize, SolverError> {
    check_limit(g, opts, "exact game solving")?;
    let inst = Instance::new(g, opts);
    for k in 1..=g.n() {
        let probes = probe_list(g.n(), k);
        let fp = attractor(&inst, &probes, model);
        if fp.win[inst.canon(inst.full) as usize] {
            return Ok(k);
        }
    }
    unreachable!("probing every vertex always locates the robber");
}

const SUBSET_LIMIT: usize = 16;

fn combinations(n: usize, size: usize, mut f: impl FnMut(&[Vertex]) -> bool) -> bool {
    fn rec(
        n: usize,
        size: usize,
        start: Vertex,
        cur: &mut Vec<Vertex>,
        f: &mut impl FnMut(&[Vertex]) -> bool,
    ) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for v in start..n as Vertex {
            if n - (v as usize) < size - cur.len() {
                break;
            }
            cur.push(v);
            if rec(n, size, v + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(n, size, 0, &mut Vec::new(), &mut f)
}

/// Metric dimension: smallest landmark set with pairwise distinct distance
/// vectors.
pub fn metric_dimension(g: &Graph) -> Result<usize, SolverError> {
    dimension_by(g, FeedbackModel::Metric, "metric dimension")
}

/// Centroidal dimension: smallest landmark set whose ordered partitions
/// (with zero flags) are pairwise distinct.
pub fn centroidal_dimension(g: &Graph) -> Result<usize, SolverError> {
    dimension_by(g, FeedbackModel::Centroidal, "centroidal dimension")
}

fn dimension_by(g: &Graph, model: FeedbackModel, what: &'static str) -> Result<usize, SolverError> {
    let n = g.n();
    if n > SUBSET_LIMIT {
        return Err(SolverError::LimitExceeded {
            what,
            n,
            limit: SUBSET_LIMIT,
        });
    }
    let inst = Instance::new(
        g,
        &SolveOptions {
            symmetry_reduction: false,
            ..Default::default()
        },
    );
    for size in 0..=n {
        let found = combinations(n, size, |set| {
            let sig = inst.signatures(set, model);
            if set.is_empty() {
                return n == 1;
            }
            let mut seen = std::collections::HashSet::new();
            (0..n).all(|v| seen.insert(sig[v]))
        });
        if found {
            return Ok(size);
        }
    }
    unreachable!("the full vertex set always distinguishes");
}

/// Minimum L whose closed-neighborhood intersections with L are pairwise
/// distinct over the vertices outside L, plus a witness set.
pub fn min_locating_set(g: &Graph) -> Result<(usize, Vec<Vertex>), SolverError> {
    let n = g.n();
    if n > SUBSET_LIMIT {
        return Err(SolverError::LimitExceeded {
            what: "minimum locating set",
            n,
            limit: SUBSET_LIMIT,
        });
    }
    let nclosed: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v as Vertex)
                .iter()
                .fold(1u32 << v, |m, &w| m | 1 << w)
        })
        .collect();
    for size in 0..=n {
        let mut witness = None;
        combinations(n, size, |set| {
            let lmask = set.iter().fold(0u32, |m, &v| m | 1 << v);
            let mut seen = std::collections::HashSet::new();
            let ok = (0..n as Vertex)
                .filter(|&v| lmask >> v & 1 == 0)
                .all(|v| seen.insert(nclosed[v as usize] & lmask));
            if ok {
                witness = Some(set.to_vec());
            }
            ok
        });
        if let Some(w) = witness {
            return Ok((size, w));
        }
    }
    unreachable!("the full vertex set is vacuously locating");
}

/// Coordinate map for the gadget: originals keep their ids, the added
/// mutually non-adjacent vertices are `n..=2n`.
#[derive(Clone, Copy, Debug)]
pub struct GadgetMap {
    pub original_n: usize,
}

impl GadgetMap {
    pub fn added(&self) -> std::ops::RangeInclusive<Vertex> {
        self.original_n as Vertex..=(2 * self.original_n) as Vertex
    }
}

/// Adds n+1 pairwise non-adjacent vertices, each adjacent to every original
/// vertex. Requires diameter at most 2 (and at least one edge) so the
/// original graph embeds isometrically.
pub fn hardness_gadget(g: &Graph) -> Result<(Graph, GadgetMap), SolverError> {
    match g.diameter() {
        Distance::Finite(1) | Distance::Finite(2) => {}
        d => {
            let text = match d {
                Distance::Finite(x) => x.to_string(),
                Distance::Unreachable => "infinite (disconnected)".into(),
            };
            return Err(SolverError::DiameterNot2(text));
        }
    }
    let n = g.n();
    let mut edges = g.edges();
    for x in 0..=n {
        let xv = (n + x) as Vertex;
        for v in 0..n as Vertex {
            edges.push((v, xv));
        }
    }
    let g2 = Graph::from_edges(2 * n + 1, &edges)?;
    Ok((g2, GadgetMap { original_n: n }))
}
