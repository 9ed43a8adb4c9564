//! Named graph families with compact colon-separated specs.

use super::{cartesian_product, Graph, GraphError, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generator spec such as `path:5`, `hypercube:3` or `random_tree:50:7`.
/// Randomized families are fully determined by their seed.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    /// `star:n` is the star on `n` vertices: center 0 plus `n-1` leaves.
    Star(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    Hypercube(usize),
    RandomTree(usize, u64),
    RandomMaximalOuterplanar(usize, u64),
    RandomGraph(usize, f64, u64),
}

impl FamilySpec {
    pub fn parse(s: &str) -> Result<FamilySpec, GraphError> {
        let bad = |msg: &str| GraphError::InvalidFamily(format!("{s}: {msg}"));
        let parts: Vec<&str> = s.split(':').collect();
        let usize_at = |i: usize| -> Result<usize, GraphError> {
            parts
                .get(i)
                .ok_or_else(|| bad("missing parameter"))?
                .parse()
                .map_err(|_| bad("parameter is not an integer"))
        };
        let u64_at = |i: usize| -> Result<u64, GraphError> {
            parts
                .get(i)
                .ok_or_else(|| bad("missing seed"))?
                .parse()
                .map_err(|_| bad("seed is not an integer"))
        };
        let arity = |k: usize| -> Result<(), GraphError> {
            if parts.len() == k + 1 {
                Ok(())
            } else {
                Err(bad("wrong number of parameters"))
            }
        };
        match parts[0] {
            "path" => {
                arity(1)?;
                Ok(FamilySpec::Path(usize_at(1)?))
            }
            "cycle" => {
                arity(1)?;
                Ok(FamilySpec::Cycle(usize_at(1)?))
            }
            "star" => {
                arity(1)?;
                Ok(FamilySpec::Star(usize_at(1)?))
            }
            "complete" => {
                arity(1)?;
                Ok(FamilySpec::Complete(usize_at(1)?))
            }
            "complete_bipartite" => {
                arity(2)?;
                Ok(FamilySpec::CompleteBipartite(usize_at(1)?, usize_at(2)?))
            }
            "hypercube" => {
                arity(1)?;
                Ok(FamilySpec::Hypercube(usize_at(1)?))
            }
            "random_tree" => {
                arity(2)?;
                Ok(FamilySpec::RandomTree(usize_at(1)?, u64_at(2)?))
            }
            "random_maximal_outerplanar" => {
                arity(2)?;
                Ok(FamilySpec::RandomMaximalOuterplanar(
                    usize_at(1)?,
                    u64_at(2)?,
                ))
            }
            "random_graph" => {
                arity(3)?;
                let p: f64 = parts[2]
                    .parse()
                    .map_err(|_| bad("probability is not a number"))?;
                Ok(FamilySpec::RandomGraph(usize_at(1)?, p, u64_at(3)?))
            }
            other => Err(bad(&format!("unknown family '{other}'"))),
        }
    }

    pub fn generate(&self) -> Result<Graph, GraphError> {
        let bad = |msg: String| GraphError::InvalidFamily(msg);
        match *self {
            FamilySpec::Path(n) => {
                if n == 0 {
                    return Err(bad("path needs n >= 1".into()));
                }
                let edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
                Graph::from_edges(n, &edges)
            }
            FamilySpec::Cycle(n) => {
                if n < 3 {
                    return Err(bad("cycle needs n >= 3".into()));
                }
                let mut edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
                edges.push((0, n as Vertex - 1));
                Graph::from_edges(n, &edges)
            }
            FamilySpec::Star(n) => {
                if n == 0 {
                    return Err(bad("star needs n >= 1".into()));
                }
                let edges: Vec<_> = (1..n as Vertex).map(|v| (0, v)).collect();
                Graph::from_edges(n, &edges)
            }
            FamilySpec::Complete(n) => {
                if n == 0 {
                    return Err(bad("complete needs n >= 1".into()));
                }
                let mut edges = Vec::new();
                for u in 0..n as Vertex {
                    for v in u + 1..n as Vertex {
                        edges.push((u, v));
                    }
                }
                Graph::from_edges(n, &edges)
            }
            FamilySpec::CompleteBipartite(a, b) => {
                if a == 0 || b == 0 {
                    return Err(bad("complete_bipartite needs a, b >= 1".into()));
                }
                let mut edges = Vec::new();
                for u in 0..a as Vertex {
                    for v in 0..b as Vertex {
                        edges.push((u, a as Vertex + v));
                    }
                }
                Graph::from_edges(a + b, &edges)
            }
            FamilySpec::Hypercube(d) => {
                // Built by iterated product with K2.
                if d > 16 {
                    return Err(bad("hypercube dimension too large".into()));
                }
                let k2 = Graph::from_edges(2, &[(0, 1)])?;
                let mut g = Graph::from_edges(1, &[])?;
                for _ in 0..d {
                    g = cartesian_product(&k2, &g)?.0;
                }
                Ok(g)
            }
            FamilySpec::RandomTree(n, seed) => {
                if n == 0 {
                    return Err(bad("random_tree needs n >= 1".into()));
                }
                Ok(random_tree(n, seed))
            }
            FamilySpec::RandomMaximalOuterplanar(n, seed) => {
                if n < 3 {
                    return Err(bad("random_maximal_outerplanar needs n >= 3".into()));
                }
                Ok(random_maximal_outerplanar(n, seed))
            }
            FamilySpec::RandomGraph(n, p, seed) => {
                if n == 0 {
                    return Err(bad("random_graph needs n >= 1".into()));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad("edge probability must be in [0, 1]".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut edges = Vec::new();
                for u in 0..n as Vertex {
                    for v in u + 1..n as Vertex {
                        if rng.gen_bool(p) {
                            edges.push((u, v));
                        }
                    }
                }
                Graph::from_edges(n, &edges)
            }
        }
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Star(n) => write!(f, "star:{n}"),
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
            FamilySpec::CompleteBipartite(a, b) => write!(f, "complete_bipartite:{a}:{b}"),
            FamilySpec::Hypercube(d) => write!(f, "hypercube:{d}"),
            FamilySpec::RandomTree(n, s) => write!(f, "random_tree:{n}:{s}"),
            FamilySpec::RandomMaximalOuterplanar(n, s) => {
                write!(f, "random_maximal_outerplanar:{n}:{s}")
            }
            FamilySpec::RandomGraph(n, p, s) => write!(f, "random_graph:{n}:{p}:{s}"),
        }
    }
}

/// Uniform random labeled tree from a random Pruefer sequence.
fn random_tree(n: usize, seed: u64) -> Graph {
    if n == 1 {
        return Graph::from_edges(1, &[]).unwrap();
    }
    if n == 2 {
        return Graph::from_edges(2, &[(0, 1)]).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n as Vertex)).collect();
    let mut degree = vec![1u32; n];
    for &v in &seq {
        degree[v as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // Standard decoding: repeatedly join the smallest leaf to the next code
    // entry; a binary heap keeps it O(n log n).
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<Vertex>> = (0..n as Vertex)
        .filter(|&v| degree[v as usize] == 1)
        .map(std::cmp::Reverse)
        .collect();
    for &v in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().unwrap();
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 {
            leaves.push(std::cmp::Reverse(v));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push((a.min(b), a.max(b)));
    Graph::from_edges(n, &edges).unwrap()
}

/// Cycle `0..n-1` plus a random non-crossing triangulation of its interior:
/// a maximal outerplanar graph by construction.
fn random_maximal_outerplanar(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(Vertex, Vertex)> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
    edges.push((0, n as Vertex - 1));
    // Triangulate the polygon arc i..j (indices along the cycle).
    let mut stack = vec![(0usize, n - 1)];
    while let Some((i, j)) = stack.pop() {
        if j - i < 2 {
            continue;
        }
        let k = rng.gen_range(i + 1..j);
        if k - i >= 2 {
            edges.push((i as Vertex, k as Vertex));
        }
        if j - k >= 2 {
            edges.push((k as Vertex, j as Vertex));
        }
        stack.push((i, k));
        stack.push((k, j));
    }
    Graph::from_edges(n, &edges).unwrap()
}
