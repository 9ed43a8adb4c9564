//! Graph representation, metrics, structure and file I/O.
//!
//! Graphs are immutable simple undirected graphs on dense vertex ids
//! `0..n-1` with sorted adjacency lists. Everything derived from a graph
//! (distances, components, embeddings, decompositions) is computed by pure
//! functions, so all of it is safe to share across threads.

mod embedding;
mod families;
mod pathwidth;
mod vertex_set;

pub use embedding::{outerplanar_embedding, Block, Obstruction, OuterEmbedding};
pub use families::FamilySpec;
pub use pathwidth::{exact_pathwidth, validate_path_decomposition, PathDecomposition, PdViolation};
pub use vertex_set::VertexSet;

use std::collections::VecDeque;
use thiserror::Error;

pub type Vertex = u32;

/// Graph distance; `Unreachable` compares greater than every finite value and
/// equal to itself, which is exactly how cross-component probes behave in the
/// localization games.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn saturating_add(self, other: Distance) -> Distance {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Unreachable,
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph is not outerplanar: {obstruction}")]
    NotOuterplanar { obstruction: Obstruction },
    #[error("vertex count {n} exceeds limit {limit} for {what}; raise the limit to override")]
    LimitExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("invalid family spec: {0}")]
    InvalidFamily(String),
    #[error("product size overflow: {0} x {1} vertices")]
    ProductOverflow(usize, usize),
    #[error("graph must be connected for {0}")]
    Disconnected(&'static str),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

/// Immutable simple undirected graph with vertices `0..n-1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Invalid(
                "vertex count must be at least 1".into(),
            ));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::Invalid(format!(
                    "edge ({u}, {v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(GraphError::Invalid(format!("loop at vertex {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::Invalid(format!("duplicate edge ({u}, {v})")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n as Vertex
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges as (u, v) with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in self.vertices() {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Closed neighborhood of `v` as a set.
    pub fn closed_neighborhood(&self, v: Vertex) -> VertexSet {
        let mut s = VertexSet::from_iter(self.n, self.neighbors(v).iter().copied());
        s.insert(v);
        s
    }

    pub fn is_connected(&self) -> bool {
        distances(self, 0).dist.iter().all(|d| d.is_finite())
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() == self.n - 1
    }

    /// 2-coloring if the graph is bipartite (connected or not).
    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        let mut color = vec![2u8; self.n];
        let mut queue = VecDeque::new();
        for s in self.vertices() {
            if color[s as usize] != 2 {
                continue;
            }
            color[s as usize] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if color[w as usize] == 2 {
                        color[w as usize] = 1 - color[u as usize];
                        queue.push_back(w);
                    } else if color[w as usize] == color[u as usize] {
                        return None;
                    }
                }
            }
        }
        let a = VertexSet::from_iter(self.n, self.vertices().filter(|&v| color[v as usize] == 0));
        let b = VertexSet::from_iter(self.n, self.vertices().filter(|&v| color[v as usize] == 1));
        Some((a, b))
    }

    /// Maximum finite eccentricity; `Unreachable` when disconnected.
    pub fn diameter(&self) -> Distance {
        let mut best = Distance::Finite(0);
        for v in self.vertices() {
            for d in &distances(self, v).dist {
                best = best.max(*d);
            }
        }
        best
    }

    /// Stable content hash of the edge list, used to tag solver output.
    pub fn content_hash(&self) -> String {
        // FNV-1a over "n" and the sorted edge list.
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.n as u64);
        for (u, v) in self.edges() {
            eat(u as u64);
            eat(v as u64);
        }
        format!("{h:016x}")
    }
}

/// BFS distances from one source.
#[derive(Clone, Debug)]
pub struct DistanceRow {
    pub source: Vertex,
    pub dist: Vec<Distance>,
}

pub fn distances(g: &Graph, source: Vertex) -> DistanceRow {
    assert!((source as usize) < g.n(), "source out of range");
    let mut dist = vec![Distance::Unreachable; g.n()];
    dist[source as usize] = Distance::Finite(0);
    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = match dist[u as usize] {
            Distance::Finite(d) => d,
            Distance::Unreachable => unreachable!(),
        };
        for &w in g.neighbors(u) {
            if dist[w as usize] == Distance::Unreachable {
                dist[w as usize] = Distance::Finite(du + 1);
                queue.push_back(w);
            }
        }
    }
    DistanceRow { source, dist }
}

/// All-pairs distances, one BFS per vertex.
#[derive(Clone)]
pub struct DistanceMatrix {
    n: usize,
    rows: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn new(g: &Graph) -> DistanceMatrix {
        let n = g.n();
        let mut rows = Vec::with_capacity(n * n);
        for v in g.vertices() {
            rows.extend(distances(g, v).dist);
        }
        DistanceMatrix { n, rows }
    }

    pub fn d(&self, u: Vertex, v: Vertex) -> Distance {
        self.rows[u as usize * self.n + v as usize]
    }
}

/// Connected component of `G \ removed`, annotated with its neighborhood
/// inside `removed`. `full` means the neighborhood is all of `removed`.
#[derive(Clone, Debug)]
pub struct Component {
    pub vertices: VertexSet,
    pub neighborhood: VertexSet,
    pub full: bool,
}

/// Connected components of `G \ removed`, ordered by smallest member.
pub fn components(g: &Graph, removed: &VertexSet) -> Vec<Component> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in g.vertices() {
        if removed.contains(s) || seen[s as usize] {
            continue;
        }
        let mut verts = VertexSet::empty(n);
        let mut nbhd = VertexSet::empty(n);
        let mut queue = VecDeque::new();
        seen[s as usize] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            verts.insert(u);
            for &w in g.neighbors(u) {
                if removed.contains(w) {
                    nbhd.insert(w);
                } else if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        let full = nbhd == *removed;
        out.push(Component {
            vertices: verts,
            neighborhood: nbhd,
            full,
        });
    }
    out
}

/// Coordinate map of a cartesian product: vertex `u*h_n + v` <-> `(u, v)`.
#[derive(Clone, Copy, Debug)]
pub struct ProductMap {
    pub g_n: usize,
    pub h_n: usize,
}

impl ProductMap {
    pub fn id(&self, u: Vertex, v: Vertex) -> Vertex {
        (u as usize * self.h_n + v as usize) as Vertex
    }

    pub fn pair(&self, x: Vertex) -> (Vertex, Vertex) {
        (
            (x as usize / self.h_n) as Vertex,
            (x as usize % self.h_n) as Vertex,
        )
    }
}

/// Cartesian product: (u,v) ~ (u',v') iff one coordinate moves along an edge
/// of its factor and the other stays.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<(Graph, ProductMap), GraphError> {
    let n = g
        .n()
        .checked_mul(h.n())
        .filter(|&n| n <= 1 << 20)
        .ok_or(GraphError::ProductOverflow(g.n(), h.n()))?;
    let map = ProductMap {
        g_n: g.n(),
        h_n: h.n(),
    };
    let mut edges = Vec::new();
    for u in g.vertices() {
        for v in h.vertices() {
            for &u2 in g.neighbors(u) {
                if u < u2 {
                    edges.push((map.id(u, v), map.id(u2, v)));
                }
            }
            for &v2 in h.neighbors(v) {
                if v < v2 {
                    edges.push((map.id(u, v), map.id(u, v2)));
                }
            }
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    Ok((graph, map))
}

/// Parses the text graph format: first line `n m`, then `m` lines `u v` with
/// `0 <= u < v < n`. `#` starts a comment; blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let err = |msg: String| GraphError::Parse { line: line_no, msg };
        match header {
            None => {
                let n: usize = it
                    .next()
                    .ok_or_else(|| err("expected 'n m'".into()))?
                    .parse()
                    .map_err(|_| err("vertex count is not a number".into()))?;
                let m: usize = it
                    .next()
                    .ok_or_else(|| err("expected 'n m'".into()))?
                    .parse()
                    .map_err(|_| err("edge count is not a number".into()))?;
                if it.next().is_some() {
                    return Err(err("trailing tokens after 'n m'".into()));
                }
                if n == 0 {
                    return Err(err("vertex count must be at least 1".into()));
                }
                header = Some((n, m));
            }
            Some((n, m)) => {
                edge_lines += 1;
                if edge_lines > m {
                    return Err(err(format!("more than {m} edge lines")));
                }
                let u: Vertex = it
                    .next()
                    .ok_or_else(|| err("expected 'u v'".into()))?
                    .parse()
                    .map_err(|_| err("endpoint is not a number".into()))?;
                let v: Vertex = it
                    .next()
                    .ok_or_else(|| err("expected 'u v'".into()))?
                    .parse()
                    .map_err(|_| err("endpoint is not a number".into()))?;
                if it.next().is_some() {
                    return Err(err("trailing tokens after edge".into()));
                }
                if u >= v {
                    return Err(err(format!("edge ({u}, {v}) must satisfy u < v")));
                }
                if v as usize >= n {
                    return Err(err(format!("vertex {v} out of range for n={n}")));
                }
                if edges.contains(&(u, v)) {
                    return Err(err(format!("duplicate edge ({u}, {v})")));
                }
                edges.push((u, v));
            }
        }
    }
    let (n, m) = header.ok_or(GraphError::Parse {
        line: 0,
        msg: "empty graph file".into(),
    })?;
    if edge_lines != m {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {edge_lines}"),
        });
    }
    Graph::from_edges(n, &edges)
}

/// Renders the `n m` / edge-list format emitted by the CLI.
pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// DOT export for visualization.
pub fn to_dot(g: &Graph) -> String {
    let mut s = String::from("graph G {\n");
    for v in g.vertices() {
        s.push_str(&format!("  {v};\n"));
    }
    for (u, v) in g.edges() {
        s.push_str(&format!("  {u} -- {v};\n"));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path(n: usize) -> Graph {
        FamilySpec::parse(&format!("path:{n}"))
            .unwrap()
            .generate()
            .unwrap()
    }

    #[test]
    fn parse_p3() {
        let g = parse_graph("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn parse_isolated_vertex() {
        let g = parse_graph("1 0\n").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parse_duplicate_edge_is_error() {
        let e = parse_graph("2 2\n0 1\n0 1\n").unwrap_err();
        match e {
            GraphError::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("duplicate"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_comments_and_blanks() {
        let g = parse_graph("# a path\n3 2\n\n0 1 # first\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn distances_on_path_cycle_disconnected() {
        let p3 = path(3);
        assert_eq!(
            distances(&p3, 0).dist,
            vec![
                Distance::Finite(0),
                Distance::Finite(1),
                Distance::Finite(2)
            ]
        );
        let c4 = FamilySpec::parse("cycle:4").unwrap().generate().unwrap();
        assert_eq!(
            distances(&c4, 0).dist,
            vec![
                Distance::Finite(0),
                Distance::Finite(1),
                Distance::Finite(2),
                Distance::Finite(1)
            ]
        );
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(
            distances(&g, 2).dist,
            vec![
                Distance::Unreachable,
                Distance::Unreachable,
                Distance::Finite(0)
            ]
        );
    }

    #[test]
    fn components_with_fullness() {
        let p3 = path(3);
        let removed = VertexSet::from_iter(3, [1]);
        let comps = components(&p3, &removed);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.full));

        let c4 = FamilySpec::parse("cycle:4").unwrap().generate().unwrap();
        let removed = VertexSet::from_iter(4, [0, 2]);
        let comps = components(&c4, &removed);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.full));

        let p4 = path(4);
        let removed = VertexSet::from_iter(4, [1]);
        let comps = components(&p4, &removed);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.full));
        assert_eq!(comps[0].vertices, VertexSet::from_iter(4, [0]));
        assert_eq!(comps[1].vertices, VertexSet::from_iter(4, [2, 3]));
    }

    #[test]
    fn product_k2_k2_is_c4() {
        let k2 = FamilySpec::parse("complete:2").unwrap().generate().unwrap();
        let (p, _) = cartesian_product(&k2, &k2).unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.edge_count(), 4);
        assert!(p.vertices().all(|v| p.degree(v) == 2));
    }

    #[test]
    fn product_k2_p3_is_grid() {
        let k2 = FamilySpec::parse("complete:2").unwrap().generate().unwrap();
        let (p, _) = cartesian_product(&k2, &path(3)).unwrap();
        assert_eq!(p.n(), 6);
        assert_eq!(p.edge_count(), 7);
    }

    #[test]
    fn components_partition_the_remainder() {
        for seed in 0..10u64 {
            let g = FamilySpec::parse(&format!("random_graph:9:0.25:{seed}"))
                .unwrap()
                .generate()
                .unwrap();
            for mask in [0u16, 0b101, 0b1100, 0b10010] {
                let removed = VertexSet::from_iter(
                    9,
                    (0..9).filter(|&v| mask >> v & 1 == 1).map(|v| v as Vertex),
                );
                let comps = components(&g, &removed);
                let mut union = removed.clone();
                for c in &comps {
                    assert!(
                        !c.vertices.intersects(&union),
                        "components must be disjoint"
                    );
                    union.union_with(&c.vertices);
                    assert_eq!(c.full, c.neighborhood == removed);
                    assert!(c.neighborhood.is_subset_of(&removed));
                }
                assert_eq!(
                    union,
                    VertexSet::full(9),
                    "components must cover V minus removed"
                );
            }
        }
    }

    #[test]
    fn product_k2_q2_is_q3() {
        let k2 = FamilySpec::parse("complete:2").unwrap().generate().unwrap();
        let q2 = FamilySpec::parse("hypercube:2")
            .unwrap()
            .generate()
            .unwrap();
        let q3 = FamilySpec::parse("hypercube:3")
            .unwrap()
            .generate()
            .unwrap();
        let (p, map) = cartesian_product(&k2, &q2).unwrap();
        assert_eq!(p, q3);
        // The coordinate map is a bijection.
        for x in p.vertices() {
            let (u, v) = map.pair(x);
            assert_eq!(map.id(u, v), x);
        }
    }

    #[test]
    fn product_distance_law() {
        // d((u,v),(u',v')) = d(u,u') + d(v,v') on products up to 30 vertices.
        let specs = ["path:3", "cycle:5", "complete:3", "star:4", "path:6"];
        for a in specs {
            for b in specs {
                let g = FamilySpec::parse(a).unwrap().generate().unwrap();
                let h = FamilySpec::parse(b).unwrap().generate().unwrap();
                if g.n() * h.n() > 30 {
                    continue;
                }
                let (p, map) = cartesian_product(&g, &h).unwrap();
                let dg = DistanceMatrix::new(&g);
                let dh = DistanceMatrix::new(&h);
                let dp = DistanceMatrix::new(&p);
                for x in p.vertices() {
                    for y in p.vertices() {
                        let (u, v) = map.pair(x);
                        let (u2, v2) = map.pair(y);
                        assert_eq!(dp.d(x, y), dg.d(u, u2).saturating_add(dh.d(v, v2)));
                    }
                }
            }
        }
    }

    #[test]
    fn metric_axioms_exhaustive_small() {
        // Symmetry and triangle inequality on every graph with n <= 4 and a
        // labeled sample at n in {5, 8} (including disconnected graphs).
        let mut graphs: Vec<Graph> = Vec::new();
        for n in 1..=4usize {
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
        for seed in 0..20u64 {
            for n in [5usize, 8] {
                let g = FamilySpec::parse(&format!("random_graph:{n}:0.4:{seed}"))
                    .unwrap()
                    .generate()
                    .unwrap();
                graphs.push(g);
            }
        }
        for g in &graphs {
            let m = DistanceMatrix::new(g);
            for u in g.vertices() {
                assert_eq!(m.d(u, u), Distance::Finite(0));
                for v in g.vertices() {
                    assert_eq!(m.d(u, v), m.d(v, u));
                    for w in g.vertices() {
                        assert!(m.d(u, v) <= m.d(u, w).saturating_add(m.d(w, v)));
                    }
                }
            }
        }
    }

    #[test]
    fn dot_and_edge_list_roundtrip() {
        let g = path(4);
        let text = to_edge_list(&g);
        let g2 = parse_graph(&text).unwrap();
        assert_eq!(g, g2);
        assert!(to_dot(&g).contains("0 -- 1"));
    }
}
