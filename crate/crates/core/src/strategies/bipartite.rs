//! Strategy for connected bipartite graphs with max(2, min(a, b)) probes.

use super::StrategyError;
use crate::game::{Feedback, Strategy};
use crate::graph::{Graph, Vertex};

#[derive(Clone)]
enum State {
    /// Smaller class is one vertex: probe it every turn (so the robber
    /// cannot move without an immediate zero) and sweep the other class.
    StarSweep { at: usize },
    /// Probe the whole smaller class once to find a neighbor of the robber.
    Opening,
    /// Probe the smaller class minus the anchor plus one anchor-neighbor per
    /// turn: any move lands on a probed vertex or exposes the anchor as the
    /// unique nearest probe.
    AnchorSweep { anchor: Vertex, at: usize },
}

#[derive(Clone)]
pub struct BipartiteStrategy {
    g: Graph,
    small: Vec<Vertex>,
    large: Vec<Vertex>,
    k: usize,
    state: State,
}

pub fn bipartite_strategy(g: &Graph) -> Result<BipartiteStrategy, StrategyError> {
    if !g.is_connected() {
        return Err(StrategyError::NotApplicable(
            "bipartite sweep needs a connected graph".into(),
        ));
    }
    let Some((a, b)) = g.bipartition() else {
        return Err(StrategyError::NotApplicable(
            "graph is not bipartite".into(),
        ));
    };
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let small: Vec<Vertex> = small.iter().collect();
    let large: Vec<Vertex> = large.iter().collect();
    let k = small.len().max(2);
    let state = if small.len() == 1 {
        State::StarSweep { at: 0 }
    } else {
        State::Opening
    };
    Ok(BipartiteStrategy {
        g: g.clone(),
        small,
        large,
        k,
        state,
    })
}

impl Strategy for BipartiteStrategy {
    fn name(&self) -> &'static str {
        "bipartite"
    }

    fn budget(&self) -> usize {
        self.k
    }

    fn next_probe(&self) -> Vec<Vertex> {
        match &self.state {
            State::StarSweep { at } => {
                vec![self.small[0], self.large[at % self.large.len()]]
            }
            State::Opening => self.small.clone(),
            State::AnchorSweep { anchor, at } => {
                let mut p: Vec<Vertex> =
                    self.small.iter().copied().filter(|v| v != anchor).collect();
                let nbrs = self.g.neighbors(*anchor);
                p.push(nbrs[at % nbrs.len()]);
                p
            }
        }
    }

    fn observe(&mut self, feedback: &Feedback) {
        match &mut self.state {
            State::StarSweep { at } => *at += 1,
            State::Opening => {
                // No zero hit, so the robber sits in the larger class and the
                // nearest block is exactly its neighborhood in the smaller
                // class; anchor the smallest member.
                let anchor = feedback.blocks[0][0];
                self.state = State::AnchorSweep { anchor, at: 0 };
            }
            State::AnchorSweep { at, .. } => *at += 1,
        }
    }

    fn fingerprint(&self) -> Vec<u8> {
        match &self.state {
            State::StarSweep { at } => {
                let mut f = vec![b'b', b's'];
                f.extend(((at % self.large.len()) as u32).to_le_bytes());
                f
            }
            State::Opening => vec![b'b', b'o'],
            State::AnchorSweep { anchor, at } => {
                let mut f = vec![b'b', b'a'];
                f.extend(anchor.to_le_bytes());
                let cycle = self.g.degree(*anchor).max(1);
                f.extend(((at % cycle) as u32).to_le_bytes());
                f
            }
        }
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
