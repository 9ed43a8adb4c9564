//! Outerplanar recognition and the canonical outer-face embedding.
//!
//! The graph is split into biconnected blocks; the outer face of each block
//! with at least three vertices is its unique Hamiltonian cycle, recovered by
//! repeatedly splicing out a degree-2 vertex and re-inserting it. Blocks glue
//! at cut vertices, and each vertex's neighbors within a block get a cyclic
//! rank from the block's fixed orientation.

use super::{Graph, GraphError, Vertex, VertexSet};
use std::collections::HashMap;
use std::fmt;

/// Why a graph failed outerplanarity, named after the witness found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// A block stuck with minimum degree >= 3 (contains a K4 subdivision),
    /// or crossing chords on a block cycle.
    K4Minor,
    /// A spliced-out vertex whose attachment points are separated on the
    /// block cycle (three internally disjoint paths between them).
    K23Minor,
    /// The recovered walk does not close into a Hamiltonian cycle.
    CycleConstruction,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::K4Minor => write!(f, "K4 minor"),
            Obstruction::K23Minor => write!(f, "K2,3 minor"),
            Obstruction::CycleConstruction => write!(f, "outer cycle construction failed"),
        }
    }
}

/// One biconnected block with its outer-face vertex order. Bridge blocks
/// store their two endpoints.
#[derive(Clone, Debug)]
pub struct Block {
    pub cycle: Vec<Vertex>,
    pos: HashMap<Vertex, usize>,
}

impl Block {
    fn new(cycle: Vec<Vertex>) -> Block {
        let pos = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Block { cycle, pos }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.pos.contains_key(&v)
    }

    /// Offset of `x` from `from` along the stored orientation (`forward`) or
    /// against it; 0 means `x == from`.
    pub fn cyclic_key(&self, from: Vertex, x: Vertex, forward: bool) -> usize {
        let b = self.cycle.len();
        let pf = self.pos[&from];
        let px = self.pos[&x];
        if forward {
            (px + b - pf) % b
        } else {
            (pf + b - px) % b
        }
    }
}

/// Fixed outerplanar embedding: blocks with oriented outer cycles plus the
/// cut vertices. The stored cycle direction is the "clockwise" convention.
#[derive(Clone, Debug)]
pub struct OuterEmbedding {
    pub blocks: Vec<Block>,
    pub cut_vertices: VertexSet,
    edge_block: HashMap<(Vertex, Vertex), usize>,
}

impl OuterEmbedding {
    pub fn block_of_edge(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edge_block.get(&(u.min(v), u.max(v))).copied()
    }

    /// Neighbors of `v` lying in `within`, ordered by cyclic rank around `v`
    /// (stored orientation). All of them must share one block, which holds
    /// whenever `within` is contained in a single component hanging off `v`.
    pub fn fan(&self, g: &Graph, v: Vertex, within: &VertexSet) -> Vec<Vertex> {
        let mut nbrs: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| within.contains(w))
            .collect();
        if nbrs.is_empty() {
            return nbrs;
        }
        let bid = self
            .block_of_edge(v, nbrs[0])
            .expect("edge must lie in a block");
        assert!(
            nbrs.iter().all(|&w| self.block_of_edge(v, w) == Some(bid)),
            "fan of {v} spans multiple blocks; the target set is not a single branch"
        );
        let block = &self.blocks[bid];
        nbrs.sort_by_key(|&w| block.cyclic_key(v, w, true));
        nbrs
    }

    /// As `fan`, but ordered by offset from `anchor` in the orientation that
    /// visits `anchor`, then `center`, then `third` in cyclic order.
    pub fn fan_oriented(
        &self,
        g: &Graph,
        center: Vertex,
        within: &VertexSet,
        anchor: Vertex,
        third: Vertex,
    ) -> Vec<Vertex> {
        let mut nbrs: Vec<Vertex> = g
            .neighbors(center)
            .iter()
            .copied()
            .filter(|&w| within.contains(w))
            .collect();
        if nbrs.is_empty() {
            return nbrs;
        }
        let bid = self
            .block_of_edge(center, nbrs[0])
            .expect("edge must lie in a block");
        let block = &self.blocks[bid];
        assert!(
            block.contains(anchor) && block.contains(third),
            "orientation anchors must lie in the fan's block"
        );
        let forward =
            block.cyclic_key(anchor, center, true) < block.cyclic_key(anchor, third, true);
        nbrs.sort_by_key(|&w| block.cyclic_key(anchor, w, forward));
        nbrs
    }
}

/// Computes the canonical outerplanar embedding or reports the obstruction.
pub fn outerplanar_embedding(g: &Graph) -> Result<OuterEmbedding, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected("outerplanar embedding"));
    }
    let (block_edges, cut_vertices) = biconnected_blocks(g);
    let mut blocks = Vec::new();
    let mut edge_block = HashMap::new();
    for edges in block_edges {
        let bid = blocks.len();
        for &(u, v) in &edges {
            edge_block.insert((u.min(v), u.max(v)), bid);
        }
        let cycle = block_outer_cycle(&edges)
            .map_err(|obstruction| GraphError::NotOuterplanar { obstruction })?;
        blocks.push(Block::new(cycle));
    }
    Ok(OuterEmbedding {
        blocks,
        cut_vertices,
        edge_block,
    })
}

/// Iterative Hopcroft-Tarjan block decomposition. Returns per-block edge
/// lists and the set of cut vertices.
fn biconnected_blocks(g: &Graph) -> (Vec<Vec<(Vertex, Vertex)>>, VertexSet) {
    let n = g.n();
    let mut disc = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut time = 0usize;
    let mut cut = VertexSet::empty(n);
    let mut estack: Vec<(Vertex, Vertex)> = Vec::new();
    let mut blocks = Vec::new();

    for root in g.vertices() {
        if disc[root as usize] != 0 {
            continue;
        }
        let mut root_children = 0usize;
        // Frame: (vertex, parent, next neighbor index).
        let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, root, 0)];
        time += 1;
        disc[root as usize] = time;
        low[root as usize] = time;
        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(u) {
                let w = g.neighbors(u)[*idx];
                *idx += 1;
                if w == parent && u != root {
                    continue;
                }
                if disc[w as usize] == 0 {
                    estack.push((u, w));
                    time += 1;
                    disc[w as usize] = time;
                    low[w as usize] = time;
                    stack.push((w, u, 0));
                } else if disc[w as usize] < disc[u as usize] {
                    estack.push((u, w));
                    low[u as usize] = low[u as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p as usize] = low[p as usize].min(low[u as usize]);
                    if low[u as usize] >= disc[p as usize] {
                        // p separates the subtree at u: flush one block.
                        let mut edges = Vec::new();
                        while let Some(&e) = estack.last() {
                            if disc[e.0 as usize] >= disc[u as usize] {
                                edges.push(e);
                                estack.pop();
                            } else {
                                break;
                            }
                        }
                        debug_assert_eq!(estack.last(), Some(&(p, u)));
                        edges.push(estack.pop().unwrap());
                        blocks.push(edges);
                        if p == root {
                            root_children += 1;
                        } else {
                            cut.insert(p);
                        }
                    }
                }
            }
        }
        if root_children >= 2 {
            cut.insert(root);
        }
    }
    (blocks, cut)
}

/// Recovers a block's outer cycle. Bridge blocks yield their endpoint pair;
/// larger blocks go through degree-2 reduction and re-insertion, then the
/// result is validated (Hamiltonicity plus non-crossing chords).
fn block_outer_cycle(edges: &[(Vertex, Vertex)]) -> Result<Vec<Vertex>, Obstruction> {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let b = adj.len();
    if b == 2 {
        let mut vs: Vec<Vertex> = adj.keys().copied().collect();
        vs.sort_unstable();
        return Ok(vs);
    }
    let mut work: HashMap<Vertex, VertexSet> = HashMap::new();
    let universe = adj.keys().map(|&v| v as usize + 1).max().unwrap();
    for (&v, nbrs) in &adj {
        work.insert(v, VertexSet::from_iter(universe, nbrs.iter().copied()));
    }
    let mut removed: Vec<(Vertex, Vertex, Vertex)> = Vec::new();
    while work.len() > 3 {
        let v = work
            .iter()
            .filter(|(_, nb)| nb.len() == 2)
            .map(|(&v, _)| v)
            .min()
            .ok_or(Obstruction::K4Minor)?;
        let nb: Vec<Vertex> = work[&v].iter().collect();
        let (x, y) = (nb[0], nb[1]);
        work.remove(&v);
        work.get_mut(&x).unwrap().remove(v);
        work.get_mut(&y).unwrap().remove(v);
        work.get_mut(&x).unwrap().insert(y);
        work.get_mut(&y).unwrap().insert(x);
        removed.push((v, x, y));
    }

    // Base: three vertices must form a triangle.
    let mut base: Vec<Vertex> = work.keys().copied().collect();
    base.sort_unstable();
    for &v in &base {
        if work[&v].len() != 2 {
            return Err(Obstruction::CycleConstruction);
        }
    }
    let mut cycle = base;

    for &(v, x, y) in removed.iter().rev() {
        let px = cycle.iter().position(|&c| c == x).unwrap();
        let py = cycle.iter().position(|&c| c == y).unwrap();
        let len = cycle.len();
        if (px + 1) % len == py {
            cycle.insert(px + 1, v);
        } else if (py + 1) % len == px {
            cycle.insert(py + 1, v);
        } else {
            return Err(Obstruction::K23Minor);
        }
    }

    // Validate: consecutive cycle pairs are real edges.
    let real: std::collections::HashSet<(Vertex, Vertex)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let len = cycle.len();
    for i in 0..len {
        let u = cycle[i];
        let v = cycle[(i + 1) % len];
        if !real.contains(&(u.min(v), u.max(v))) {
            return Err(Obstruction::CycleConstruction);
        }
    }
    // Validate: chords pairwise non-crossing.
    let pos: HashMap<Vertex, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut chords = Vec::new();
    for &(u, v) in edges {
        let (a, b) = (pos[&u].min(pos[&v]), pos[&u].max(pos[&v]));
        if b - a != 1 && !(a == 0 && b == len - 1) {
            chords.push((a, b));
        }
    }
    for (i, &(a1, b1)) in chords.iter().enumerate() {
        for &(a2, b2) in &chords[i + 1..] {
            if (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1) {
                return Err(Obstruction::K4Minor);
            }
        }
    }

    Ok(canonical_rotation(cycle))
}

/// Rotate to start at the smallest vertex and orient toward its smaller
/// cycle neighbor; this is the fixed "clockwise" convention.
fn canonical_rotation(cycle: Vec<Vertex>) -> Vec<Vertex> {
    let len = cycle.len();
    let start = (0..len).min_by_key(|&i| cycle[i]).unwrap();
    let fwd: Vec<Vertex> = (0..len).map(|i| cycle[(start + i) % len]).collect();
    let bwd: Vec<Vertex> = (0..len).map(|i| cycle[(start + len - i) % len]).collect();
    if fwd[1] <= bwd[1] {
        fwd
    } else {
        bwd
    }
}
