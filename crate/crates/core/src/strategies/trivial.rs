//! Strategy for graphs with at most one edge, one probe per turn.

use super::StrategyError;
use crate::game::{Feedback, Strategy};
use crate::graph::{Graph, Vertex};

/// Checks all isolated vertices one by one (an isolated robber cannot move),
/// then one endpoint of the unique edge: a zero hit locates directly, its
/// absence pins the other endpoint.
#[derive(Clone)]
pub struct TrivialStrategy {
    script: Vec<Vertex>,
    at: usize,
}

pub fn trivial_strategy(g: &Graph) -> Result<TrivialStrategy, StrategyError> {
    if g.edge_count() > 1 {
        return Err(StrategyError::NotApplicable(format!(
            "single-probe sweep needs at most one edge, graph has {}",
            g.edge_count()
        )));
    }
    let mut script: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) == 0).collect();
    if let Some((u, _)) = g.edges().first() {
        script.push(*u);
    }
    Ok(TrivialStrategy { script, at: 0 })
}

impl Strategy for TrivialStrategy {
    fn name(&self) -> &'static str {
        "trivial"
    }

    fn budget(&self) -> usize {
        1
    }

    fn next_probe(&self) -> Vec<Vertex> {
        vec![self.script[self.at.min(self.script.len() - 1)]]
    }

    fn observe(&mut self, _feedback: &Feedback) {
        if self.at + 1 < self.script.len() {
            self.at += 1;
        }
    }

    fn fingerprint(&self) -> Vec<u8> {
        vec![b't', self.at as u8]
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
