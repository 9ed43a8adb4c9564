//! Exact pathwidth by the vertex-separation subset dynamic program.
//!
//! Exponential but exact: an oracle for desk-scale graphs, not a production
//! algorithm. The witness decomposition is rebuilt from the optimal layout
//! and normalized so no bag is contained in an adjacent one.

use super::{Graph, GraphError, Vertex};

/// Ordered bags `X_1..X_t`; width = max bag size - 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<Vertex>>,
}

impl PathDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1
    }
}

/// A violated decomposition invariant, reported by the validator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PdViolation {
    Empty,
    OutOfRange { bag: usize, vertex: Vertex },
    MissingVertex { vertex: Vertex },
    MissingEdge { edge: (Vertex, Vertex) },
    IntervalBroken { vertex: Vertex },
    NotNormalized { bag: usize },
}

impl std::fmt::Display for PdViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PdViolation::Empty => write!(f, "decomposition has no bags"),
            PdViolation::OutOfRange { bag, vertex } => {
                write!(f, "bag {bag} contains out-of-range vertex {vertex}")
            }
            PdViolation::MissingVertex { vertex } => {
                write!(f, "vertex {vertex} appears in no bag")
            }
            PdViolation::MissingEdge { edge } => {
                write!(f, "edge ({}, {}) is in no bag", edge.0, edge.1)
            }
            PdViolation::IntervalBroken { vertex } => {
                write!(f, "bags containing vertex {vertex} are not contiguous")
            }
            PdViolation::NotNormalized { bag } => {
                write!(f, "bag {bag} is contained in its successor")
            }
        }
    }
}

/// Checks all decomposition invariants; empty result means valid.
pub fn validate_path_decomposition(g: &Graph, pd: &PathDecomposition) -> Vec<PdViolation> {
    let mut out = Vec::new();
    if pd.bags.is_empty() {
        return vec![PdViolation::Empty];
    }
    let n = g.n();
    for (i, bag) in pd.bags.iter().enumerate() {
        for &v in bag {
            if v as usize >= n {
                out.push(PdViolation::OutOfRange { bag: i, vertex: v });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    let contains = |i: usize, v: Vertex| pd.bags[i].contains(&v);
    for v in g.vertices() {
        let idxs: Vec<usize> = (0..pd.bags.len()).filter(|&i| contains(i, v)).collect();
        if idxs.is_empty() {
            out.push(PdViolation::MissingVertex { vertex: v });
        } else if idxs.last().unwrap() - idxs[0] + 1 != idxs.len() {
            out.push(PdViolation::IntervalBroken { vertex: v });
        }
    }
    for (u, v) in g.edges() {
        if !(0..pd.bags.len()).any(|i| contains(i, u) && contains(i, v)) {
            out.push(PdViolation::MissingEdge { edge: (u, v) });
        }
    }
    for i in 1..pd.bags.len() {
        let prev_in_next = pd.bags[i - 1].iter().all(|&v| contains(i, v));
        if prev_in_next {
            out.push(PdViolation::NotNormalized { bag: i - 1 });
        }
    }
    out
}

/// Exact pathwidth with a witness decomposition in normalized form.
///
/// Runs the prefix-set DP for the vertex separation number, which equals the
/// pathwidth; `limit` bounds the vertex count (default 20 in the CLI).
pub fn exact_pathwidth(g: &Graph, limit: usize) -> Result<(usize, PathDecomposition), GraphError> {
    let n = g.n();
    if n > limit {
        return Err(GraphError::LimitExceeded {
            what: "exact pathwidth",
            n,
            limit,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v as Vertex)
                .iter()
                .fold(0u32, |m, &w| m | 1 << w)
        })
        .collect();
    let full: u32 = if n == 32 { !0 } else { (1u32 << n) - 1 };
    // boundary(S) = vertices of S with a neighbor outside S.
    let boundary = |s: u32| -> u32 {
        let mut b = 0u32;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[v] & !s != 0 {
                b += 1;
            }
        }
        b
    };
    let mut f = vec![0u8; 1usize << n];
    for s in 1u32..=full {
        let b = boundary(s) as u8;
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            best = best.min(f[(s & !(1 << v)) as usize]);
        }
        f[s as usize] = best.max(b);
    }
    let width = f[full as usize] as usize;

    // Recover an optimal layout by walking back from the full set.
    let mut order = vec![0 as Vertex; n];
    let mut s = full;
    for slot in (0..n).rev() {
        let mut pick = None;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            if f[(s & !(1 << v)) as usize].max(boundary(s) as u8) == f[s as usize] {
                pick = Some(v);
                break;
            }
        }
        let v = pick.expect("DP invariant: some last vertex attains the optimum");
        order[slot] = v;
        s &= !(1 << v);
    }

    // Bags from the layout: X_i = {v_i} plus earlier vertices that still have
    // a neighbor at position >= i. |X_i| <= width + 1 by the DP bound.
    let posn: Vec<usize> = {
        let mut p = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            p[v as usize] = i;
        }
        p
    };
    let mut bags: Vec<Vec<Vertex>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut bag = vec![order[i]];
        for &u in &order[..i] {
            if g.neighbors(u).iter().any(|&w| posn[w as usize] >= i) {
                bag.push(u);
            }
        }
        bag.sort_unstable();
        bags.push(bag);
    }
    // Normalize: drop bags contained in a neighbor until stable.
    loop {
        let mut drop_idx = None;
        for i in 0..bags.len() {
            let sub_of = |j: usize| bags[i].iter().all(|v| bags[j].contains(v));
            if (i + 1 < bags.len() && sub_of(i + 1)) || (i > 0 && sub_of(i - 1)) {
                drop_idx = Some(i);
                break;
            }
        }
        match drop_idx {
            Some(i) if bags.len() > 1 => {
                bags.remove(i);
            }
            _ => break,
        }
    }
    let pd = PathDecomposition { bags };
    debug_assert!(validate_path_decomposition(g, &pd).is_empty());
    debug_assert_eq!(pd.width(), width);
    Ok((width, pd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;

    fn gen(s: &str) -> Graph {
        FamilySpec::parse(s).unwrap().generate().unwrap()
    }

    /// Independent oracle: minimum over all vertex orderings of the maximum
    /// boundary size, by explicit permutation search.
    fn vs_brute(g: &Graph) -> usize {
        fn go(g: &Graph, placed: &mut Vec<Vertex>, rest: &mut Vec<Vertex>, best: &mut usize) {
            if rest.is_empty() {
                let mut worst = 0usize;
                for i in 1..=placed.len() {
                    let prefix = &placed[..i];
                    let b = prefix
                        .iter()
                        .filter(|&&u| g.neighbors(u).iter().any(|w| !prefix.contains(w)))
                        .count();
                    worst = worst.max(b);
                }
                *best = (*best).min(worst);
                return;
            }
            for i in 0..rest.len() {
                let v = rest.remove(i);
                placed.push(v);
                go(g, placed, rest, best);
                placed.pop();
                rest.insert(i, v);
            }
        }
        let mut best = g.n();
        go(g, &mut Vec::new(), &mut g.vertices().collect(), &mut best);
        best
    }

    #[test]
    fn paths_have_width_one() {
        let (w, pd) = exact_pathwidth(&gen("path:5"), 20).unwrap();
        assert_eq!(w, 1);
        assert!(validate_path_decomposition(&gen("path:5"), &pd).is_empty());
    }

    #[test]
    fn clique_needs_everything() {
        let (w, _) = exact_pathwidth(&gen("complete:4"), 20).unwrap();
        assert_eq!(w, 3);
    }

    #[test]
    fn cycle_width_matches_brute_force() {
        // Frozen from the permutation oracle: pw(C5) = 2.
        let c5 = gen("cycle:5");
        assert_eq!(vs_brute(&c5), 2);
        let (w, pd) = exact_pathwidth(&c5, 20).unwrap();
        assert_eq!(w, 2);
        assert!(validate_path_decomposition(&c5, &pd).is_empty());
    }

    #[test]
    fn dp_agrees_with_permutation_oracle() {
        let mut graphs = vec![gen("star:5"), gen("cycle:6"), gen("complete_bipartite:2:3")];
        for seed in 0..8u64 {
            graphs.push(gen(&format!("random_graph:6:0.5:{seed}")));
            graphs.push(gen(&format!("random_tree:7:{seed}")));
        }
        for g in &graphs {
            let (w, pd) = exact_pathwidth(g, 20).unwrap();
            assert_eq!(w, vs_brute(g), "graph {g:?}");
            assert!(validate_path_decomposition(g, &pd).is_empty());
            assert_eq!(pd.width(), w);
        }
    }

    #[test]
    fn limit_respected() {
        let g = gen("path:25");
        match exact_pathwidth(&g, 20) {
            Err(GraphError::LimitExceeded { .. }) => {}
            other => panic!("expected limit error, got {other:?}"),
        }
    }
}
