//! Constructive cop strategies, each implementing [`Strategy`] and each
//! passing exhaustive verification with its declared probe budget.
//!
//! Strategies receive feedback only, never the robber's position; all their
//! bookkeeping (live regions, sweeps, anchors) is a deterministic function of
//! the observation history. Ties and "impossible" observations that would
//! contradict a strategy's invariants fail loudly: they indicate a bug, not
//! an adversary.

mod bipartite;
mod component;
mod outerplanar;
mod pathwidth;
mod product;
mod tree;
mod trivial;

pub use bipartite::{bipartite_strategy, BipartiteStrategy};
pub use component::{component_strategy, ComponentStrategy, StrategyFactory};
pub use outerplanar::{outerplanar_strategy, outerplanar_turn_bound, OuterplanarStrategy};
pub use pathwidth::{pathwidth_strategy, PathwidthStrategy};
pub use product::{product_strategy, ProductStrategy};
pub use tree::{tree_strategy, TreeStrategy};
pub use trivial::{trivial_strategy, TrivialStrategy};

use crate::game::Strategy;
use crate::graph::{Graph, GraphError, PdViolation};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("strategy not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid path decomposition: {}", format_violations(.0))]
    InvalidDecomposition(Vec<PdViolation>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn format_violations(v: &[PdViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Picks a strategy for a graph by its structure: the one-edge sweep,
/// component dispatch, the tree strategy, the bipartite sweep, the
/// outerplanar machine, and finally the bag sweep of an exact path
/// decomposition. Used by the CLI and as the factory for components.
pub fn auto_strategy(g: &Graph) -> Result<Box<dyn Strategy>, StrategyError> {
    if g.edge_count() <= 1 {
        return Ok(Box::new(trivial_strategy(g)?));
    }
    if !g.is_connected() {
        return Ok(Box::new(component_strategy(g, &auto_strategy)?));
    }
    if g.is_tree() && g.n() >= 3 {
        return Ok(Box::new(tree_strategy(g)?));
    }
    // The bipartite sweep beats the outerplanar machine only when the small
    // class is tiny.
    if let Some((a, b)) = g.bipartition() {
        if a.len().min(b.len()) <= 2 {
            return Ok(Box::new(bipartite_strategy(g)?));
        }
    }
    if let Ok(emb) = crate::graph::outerplanar_embedding(g) {
        return Ok(Box::new(outerplanar_strategy(g, emb)?));
    }
    if g.bipartition().is_some() {
        return Ok(Box::new(bipartite_strategy(g)?));
    }
    let (_, pd) = crate::graph::exact_pathwidth(g, 20)?;
    Ok(Box::new(pathwidth_strategy(g, &pd)?))
}
