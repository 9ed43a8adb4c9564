//! Tree strategy: probe a pair of adjacent vertices, descend into the closer
//! side, two probes per turn.

use super::StrategyError;
use crate::game::{Feedback, Strategy};
use crate::graph::{Graph, Vertex, VertexSet};

/// Every edge of a tree is a bridge, so the feedback on an adjacent pair
/// names the side holding the robber (ties are impossible in a tree). The
/// live subtree strictly shrinks every turn: either the anchor steps into a
/// smaller subtree or one anchor branch is ruled out, and the robber cannot
/// cross the probed anchor without a zero hit.
#[derive(Clone)]
pub struct TreeStrategy {
    g: Graph,
    state: State,
}

#[derive(Clone)]
enum State {
    Probe {
        anchor: Vertex,
        target: Vertex,
        live: VertexSet,
        /// Untested anchor neighbors inside `live`, after `target`.
        queue: Vec<Vertex>,
    },
    /// Unreachable under consistent feedback; keeps emitting a fixed probe.
    Dead { a: Vertex, b: Vertex },
}

pub fn tree_strategy(g: &Graph) -> Result<TreeStrategy, StrategyError> {
    if !g.is_tree() {
        return Err(StrategyError::NotApplicable("graph is not a tree".into()));
    }
    if g.n() < 3 {
        return Err(StrategyError::NotApplicable(
            "trees with fewer than 3 vertices use the single-probe sweep".into(),
        ));
    }
    let anchor = 0;
    let nbrs = g.neighbors(anchor);
    Ok(TreeStrategy {
        g: g.clone(),
        state: State::Probe {
            anchor,
            target: nbrs[0],
            live: VertexSet::full(g.n()),
            queue: nbrs[1..].to_vec(),
        },
    })
}

/// Subtree at `root` when the edge toward `blocked` is cut.
fn subtree(g: &Graph, root: Vertex, blocked: Vertex) -> VertexSet {
    let mut s = VertexSet::empty(g.n());
    let mut stack = vec![root];
    s.insert(root);
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if w != blocked && !s.contains(w) {
                s.insert(w);
                stack.push(w);
            }
        }
    }
    s
}

impl Strategy for TreeStrategy {
    fn name(&self) -> &'static str {
        "tree"
    }

    fn budget(&self) -> usize {
        2
    }

    fn next_probe(&self) -> Vec<Vertex> {
        match &self.state {
            State::Probe { anchor, target, .. } => vec![*anchor, *target],
            State::Dead { a, b } => vec![*a, *b],
        }
    }

    fn observe(&mut self, feedback: &Feedback) {
        let State::Probe {
            anchor,
            target,
            live,
            queue,
        } = &self.state
        else {
            return;
        };
        let (anchor, target) = (*anchor, *target);
        debug_assert!(feedback.zero_hit.is_none(), "zero hits always locate");
        match feedback.closer(target, anchor) {
            std::cmp::Ordering::Less => {
                // Descend into the target's subtree.
                let sub = subtree(&self.g, target, anchor);
                let nbrs: Vec<Vertex> = self
                    .g
                    .neighbors(target)
                    .iter()
                    .copied()
                    .filter(|&w| w != anchor)
                    .collect();
                self.state = match nbrs.split_first() {
                    Some((&first, rest)) => State::Probe {
                        anchor: target,
                        target: first,
                        live: sub,
                        queue: rest.to_vec(),
                    },
                    None => State::Dead {
                        a: target,
                        b: anchor,
                    },
                };
            }
            std::cmp::Ordering::Greater => {
                // Rule out the target's branch; test the anchor's next one.
                let mut live = live.clone();
                live.subtract(&subtree(&self.g, target, anchor));
                let mut queue = queue.clone();
                self.state = match queue.split_first() {
                    Some((&next, rest)) => {
                        queue = rest.to_vec();
                        State::Probe {
                            anchor,
                            target: next,
                            live,
                            queue,
                        }
                    }
                    None => State::Dead {
                        a: anchor,
                        b: target,
                    },
                };
            }
            std::cmp::Ordering::Equal => {
                unreachable!("adjacent tree vertices cannot tie")
            }
        }
    }

    fn fingerprint(&self) -> Vec<u8> {
        let mut f = vec![b'T'];
        match &self.state {
            State::Probe {
                anchor,
                target,
                live,
                queue,
            } => {
                f.push(0);
                f.extend(anchor.to_le_bytes());
                f.extend(target.to_le_bytes());
                f.extend((queue.len() as u32).to_le_bytes());
                for q in queue {
                    f.extend(q.to_le_bytes());
                }
                f.extend(live.to_bytes());
            }
            State::Dead { a, b } => {
                f.push(1);
                f.extend(a.to_le_bytes());
                f.extend(b.to_le_bytes());
            }
        }
        f
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
