//! Component dispatch for disconnected graphs.
//!
//! The robber never leaves its starting component and only that component is
//! at finite distance from it. Probing one vertex from each of two components
//! per turn either shows a strictly closer probe (the robber's component) or
//! a tie (the robber is in neither); once the component is known, an inner
//! strategy plays on it alone.

use super::StrategyError;
use crate::game::{Feedback, Strategy};
use crate::graph::{components, Distance, Graph, Vertex, VertexSet};

pub type StrategyFactory<'a> = &'a dyn Fn(&Graph) -> Result<Box<dyn Strategy>, StrategyError>;

#[derive(Clone)]
struct Comp {
    /// local id -> global id (ascending, so sorted order is preserved).
    to_global: Vec<Vertex>,
    inner: Box<dyn Strategy>,
}

impl Comp {
    fn to_local(&self, v: Vertex) -> Vertex {
        self.to_global
            .binary_search(&v)
            .expect("vertex in component") as Vertex
    }
}

#[derive(Clone)]
enum State {
    /// Comparing representatives of components `pair` and `pair+1`.
    Identify {
        pair: usize,
    },
    Delegate {
        comp: usize,
    },
}

#[derive(Clone)]
pub struct ComponentStrategy {
    comps: Vec<Comp>,
    k: usize,
    state: State,
}

pub fn component_strategy(
    g: &Graph,
    inner: StrategyFactory,
) -> Result<ComponentStrategy, StrategyError> {
    let parts = components(g, &VertexSet::empty(g.n()));
    if parts.len() < 2 {
        return Err(StrategyError::NotApplicable(
            "component dispatch needs a disconnected graph".into(),
        ));
    }
    let mut comps = Vec::with_capacity(parts.len());
    for part in &parts {
        let to_global: Vec<Vertex> = part.vertices.iter().collect();
        let mut edges = Vec::new();
        for (li, &gv) in to_global.iter().enumerate() {
            for &w in g.neighbors(gv) {
                let lj = to_global.binary_search(&w).unwrap();
                if li < lj {
                    edges.push((li as Vertex, lj as Vertex));
                }
            }
        }
        let sub = Graph::from_edges(to_global.len(), &edges)?;
        let inner = inner(&sub)?;
        comps.push(Comp { to_global, inner });
    }
    let k = comps.iter().map(|c| c.inner.budget()).max().unwrap().max(2);
    Ok(ComponentStrategy {
        comps,
        k,
        state: State::Identify { pair: 0 },
    })
}

impl ComponentStrategy {
    fn translate_feedback(&self, comp: &Comp, fb: &Feedback) -> Feedback {
        // The mapping local<->global is monotone, so sorted structures map
        // elementwise.
        Feedback {
            probe: fb.probe.iter().map(|&v| comp.to_local(v)).collect(),
            blocks: fb
                .blocks
                .iter()
                .map(|b| b.iter().map(|&v| comp.to_local(v)).collect())
                .collect(),
            zero_hit: fb.zero_hit.map(|v| comp.to_local(v)),
            metric: fb.metric.clone(),
        }
    }
}

impl Strategy for ComponentStrategy {
    fn name(&self) -> &'static str {
        "component"
    }

    fn budget(&self) -> usize {
        self.k
    }

    fn next_probe(&self) -> Vec<Vertex> {
        match &self.state {
            State::Identify { pair } => {
                let a = &self.comps[*pair];
                let b = &self.comps[pair + 1];
                vec![a.to_global[0], b.to_global[0]]
            }
            State::Delegate { comp } => {
                let c = &self.comps[*comp];
                c.inner
                    .next_probe()
                    .iter()
                    .map(|&v| c.to_global[v as usize])
                    .collect()
            }
        }
    }

    fn observe(&mut self, feedback: &Feedback) {
        if let State::Delegate { comp } = &self.state {
            let comp = *comp;
            let local = self.translate_feedback(&self.comps[comp], feedback);
            self.comps[comp].inner.observe(&local);
            return;
        }
        match &mut self.state {
            State::Identify { pair } => {
                let ra = self.comps[*pair].to_global[0];
                let rb = self.comps[*pair + 1].to_global[0];
                match feedback.closer(ra, rb) {
                    std::cmp::Ordering::Less => self.state = State::Delegate { comp: *pair },
                    std::cmp::Ordering::Greater => self.state = State::Delegate { comp: *pair + 1 },
                    std::cmp::Ordering::Equal => {
                        // Both unreachable: the robber is in neither.
                        let next = *pair + 2;
                        if next + 1 < self.comps.len() {
                            self.state = State::Identify { pair: next };
                        } else if next < self.comps.len() {
                            // One component left; it wins by elimination.
                            self.state = State::Delegate { comp: next };
                        } else {
                            unreachable!("robber must live in some component");
                        }
                    }
                }
            }
            State::Delegate { .. } => unreachable!("handled above"),
        }
    }

    fn fingerprint(&self) -> Vec<u8> {
        match &self.state {
            State::Identify { pair } => vec![b'c', b'i', *pair as u8],
            State::Delegate { comp } => {
                let mut f = vec![b'c', b'd', *comp as u8];
                f.extend(self.comps[*comp].inner.fingerprint());
                f
            }
        }
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

// Feedback distances inside a component equal the induced-subgraph distances,
// so delegation needs no metric correction.
#[allow(dead_code)]
fn _distance_note(_d: Distance) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{verify_strategy, FeedbackModel, VerifyOptions};
    use crate::strategies::auto_strategy;

    fn verify(g: &Graph, bound: usize) {
        let s = component_strategy(g, &auto_strategy).unwrap();
        assert_eq!(
            s.budget(),
            2.max(s.comps.iter().map(|c| c.inner.budget()).max().unwrap())
        );
        let out = verify_strategy(
            g,
            &s,
            FeedbackModel::Centroidal,
            bound,
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(out.is_verified(), "{out:?}");
    }

    #[test]
    fn two_disjoint_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        verify(&g, 8);
    }

    #[test]
    fn edge_plus_isolated_vertex() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        verify(&g, 8);
    }

    #[test]
    fn two_paths_with_tree_inside() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        verify(&g, 12);
    }

    #[test]
    fn three_components() {
        let g = Graph::from_edges(8, &[(0, 1), (1, 2), (3, 4), (5, 6), (6, 7)]).unwrap();
        verify(&g, 14);
    }

    #[test]
    fn connected_graph_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            component_strategy(&g, &auto_strategy),
            Err(StrategyError::NotApplicable(_))
        ));
    }
}
