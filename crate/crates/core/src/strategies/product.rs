//! Strategy for cartesian products, budget
//! max(dG+dH+1, dG+kH, kG+dH) where d are the factor max degrees.
//!
//! Phase 1 probes a closed product neighborhood each turn: the center beats
//! all neighbors in one factor direction exactly when that coordinate equals
//! the robber's, and otherwise a strictly closer neighbor exists in each
//! unpinned direction, so stepping to the combined neighbor gains distance 2
//! against a robber moving 1. Phase 2 plays the inner strategy on the free
//! factor through the known coordinate while one probe column over the known
//! coordinate's closed neighborhood re-pins it every turn. A drift turn
//! whose feedback shows a unique nearest inner probe could hide a zero hit;
//! the next turn then probes a closed neighborhood around that suspect,
//! which either pins the free coordinate (switching the known axis) or
//! re-pins the drifted one.

use super::StrategyError;
use crate::game::{Feedback, Strategy};
use crate::graph::{Distance, Graph, ProductMap, Vertex};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    GKnown,
    HKnown,
}

#[derive(Clone)]
enum State {
    Chase {
        anchor: (Vertex, Vertex),
    },
    Locate {
        axis: Axis,
        base: Vertex,
        inner: Box<dyn Strategy>,
        /// Alternation parity: a suspect check just ran, so the next drift
        /// advances the inner strategy instead of checking again.
        just_repaired: bool,
    },
    Repair {
        axis: Axis,
        base: Vertex,
        suspect: Vertex,
        inner: Box<dyn Strategy>,
    },
}

#[derive(Clone)]
pub struct ProductStrategy {
    map: ProductMap,
    g: Graph,
    h: Graph,
    pristine_g: Box<dyn Strategy>,
    pristine_h: Box<dyn Strategy>,
    k: usize,
    state: State,
}

/// Builds the product-game strategy for the graph `cartesian_product(g, h)`
/// from verified strategies for the factors.
pub fn product_strategy(
    g: &Graph,
    h: &Graph,
    inner_g: Box<dyn Strategy>,
    inner_h: Box<dyn Strategy>,
) -> Result<ProductStrategy, StrategyError> {
    if inner_g.budget() == 0 || inner_g.budget() > g.n() {
        return Err(StrategyError::NotApplicable(format!(
            "first factor strategy budget {} does not fit its factor",
            inner_g.budget()
        )));
    }
    if inner_h.budget() == 0 || inner_h.budget() > h.n() {
        return Err(StrategyError::NotApplicable(format!(
            "second factor strategy budget {} does not fit its factor",
            inner_h.budget()
        )));
    }
    let k = (g.max_degree() + h.max_degree() + 1)
        .max(g.max_degree() + inner_h.budget())
        .max(inner_g.budget() + h.max_degree());
    Ok(ProductStrategy {
        map: ProductMap {
            g_n: g.n(),
            h_n: h.n(),
        },
        g: g.clone(),
        h: h.clone(),
        pristine_g: inner_g,
        pristine_h: inner_h,
        k,
        state: State::Chase { anchor: (0, 0) },
    })
}

impl ProductStrategy {
    /// Product id of (base coordinate, free coordinate) on the given axis.
    fn id(&self, axis: Axis, base: Vertex, free: Vertex) -> Vertex {
        match axis {
            Axis::GKnown => self.map.id(base, free),
            Axis::HKnown => self.map.id(free, base),
        }
    }

    fn base_graph(&self, axis: Axis) -> &Graph {
        match axis {
            Axis::GKnown => &self.g,
            Axis::HKnown => &self.h,
        }
    }

    fn free_graph(&self, axis: Axis) -> &Graph {
        match axis {
            Axis::GKnown => &self.h,
            Axis::HKnown => &self.g,
        }
    }

    fn pristine_free(&self, axis: Axis) -> Box<dyn Strategy> {
        match axis {
            Axis::GKnown => self.pristine_h.clone(),
            Axis::HKnown => self.pristine_g.clone(),
        }
    }

    /// Strict minimizer of the probe column `{(x, free) : x in N[base]}`;
    /// it is the robber's base coordinate.
    fn repin(&self, fb: &Feedback, axis: Axis, base: Vertex, free: Vertex) -> Vertex {
        let mut col: Vec<Vertex> = vec![base];
        col.extend_from_slice(self.base_graph(axis).neighbors(base));
        let ranks: Vec<usize> = col
            .iter()
            .map(|&x| fb.block_index(self.id(axis, x, free)).unwrap())
            .collect();
        let best = *ranks.iter().min().unwrap();
        let hits: Vec<Vertex> = col
            .iter()
            .zip(&ranks)
            .filter(|(_, &r)| r == best)
            .map(|(&x, _)| x)
            .collect();
        assert_eq!(
            hits.len(),
            1,
            "probe column must have a unique nearest entry at the robber's coordinate"
        );
        hits[0]
    }

    /// Rebuilds the free-factor observation from the known-coordinate probe
    /// row. `offset` is the base-coordinate distance (0 or 1) to subtract
    /// from metric values; the relative order is offset-invariant.
    fn synthesize(
        &self,
        fb: &Feedback,
        axis: Axis,
        base: Vertex,
        q: &[Vertex],
        offset: u32,
    ) -> Feedback {
        let mut probe: Vec<Vertex> = q.to_vec();
        probe.sort_unstable();
        let rank_of = |v: Vertex| fb.block_index(self.id(axis, base, v)).unwrap();
        let mut order: Vec<(usize, Vertex)> = probe.iter().map(|&v| (rank_of(v), v)).collect();
        order.sort_unstable();
        let mut blocks: Vec<Vec<Vertex>> = Vec::new();
        let mut last = usize::MAX;
        for (r, v) in order {
            if r == last {
                blocks.last_mut().unwrap().push(v);
            } else {
                blocks.push(vec![v]);
                last = r;
            }
        }
        let metric = fb.metric.as_ref().map(|values| {
            probe
                .iter()
                .map(|&v| {
                    let pid = self.id(axis, base, v);
                    let pos = fb.probe.iter().position(|&x| x == pid).unwrap();
                    match values[pos] {
                        Distance::Finite(d) => Distance::Finite(d - offset),
                        Distance::Unreachable => Distance::Unreachable,
                    }
                })
                .collect()
        });
        Feedback {
            probe,
            blocks,
            zero_hit: None,
            metric,
        }
    }
}

impl Strategy for ProductStrategy {
    fn name(&self) -> &'static str {
        "product"
    }

    fn budget(&self) -> usize {
        self.k
    }

    fn next_probe(&self) -> Vec<Vertex> {
        match &self.state {
            State::Chase { anchor: (u, v) } => {
                let mut p = vec![self.map.id(*u, *v)];
                for &u2 in self.g.neighbors(*u) {
                    p.push(self.map.id(u2, *v));
                }
                for &v2 in self.h.neighbors(*v) {
                    p.push(self.map.id(*u, v2));
                }
                p
            }
            State::Locate {
                axis, base, inner, ..
            } => {
                let q = inner.next_probe();
                let mut p: Vec<Vertex> = q.iter().map(|&x| self.id(*axis, *base, x)).collect();
                for &b2 in self.base_graph(*axis).neighbors(*base) {
                    p.push(self.id(*axis, b2, q[0]));
                }
                p
            }
            State::Repair {
                axis,
                base,
                suspect,
                ..
            } => {
                let mut p = vec![self.id(*axis, *base, *suspect)];
                for &b2 in self.base_graph(*axis).neighbors(*base) {
                    p.push(self.id(*axis, b2, *suspect));
                }
                for &q2 in self.free_graph(*axis).neighbors(*suspect) {
                    p.push(self.id(*axis, *base, q2));
                }
                p
            }
        }
    }

    fn observe(&mut self, fb: &Feedback) {
        match std::mem::replace(&mut self.state, State::Chase { anchor: (0, 0) }) {
            State::Chase { anchor: (u, v) } => {
                let center = self.map.id(u, v);
                let g_pinned = self
                    .g
                    .neighbors(u)
                    .iter()
                    .all(|&u2| fb.closer(center, self.map.id(u2, v)).is_lt());
                let h_pinned = self
                    .h
                    .neighbors(v)
                    .iter()
                    .all(|&v2| fb.closer(center, self.map.id(u, v2)).is_lt());
                self.state = match (g_pinned, h_pinned) {
                    (true, true) => State::Chase { anchor: (u, v) },
                    (true, false) => State::Locate {
                        axis: Axis::GKnown,
                        base: u,
                        inner: self.pristine_free(Axis::GKnown),
                        just_repaired: false,
                    },
                    (false, true) => State::Locate {
                        axis: Axis::HKnown,
                        base: v,
                        inner: self.pristine_free(Axis::HKnown),
                        just_repaired: false,
                    },
                    (false, false) => {
                        let u2 = self
                            .g
                            .neighbors(u)
                            .iter()
                            .copied()
                            .find(|&x| fb.closer(self.map.id(x, v), center).is_lt())
                            .expect("unpinned factor has a strictly closer neighbor");
                        let v2 = self
                            .h
                            .neighbors(v)
                            .iter()
                            .copied()
                            .find(|&x| fb.closer(self.map.id(u, x), center).is_lt())
                            .expect("unpinned factor has a strictly closer neighbor");
                        State::Chase { anchor: (u2, v2) }
                    }
                };
            }
            State::Locate {
                axis,
                base,
                inner,
                just_repaired,
            } => {
                let q = inner.next_probe();
                let new_base = self.repin(fb, axis, base, q[0]);
                if new_base == base {
                    // No drift: the probe row is the true free-factor
                    // observation (a product zero would have located).
                    let mut inner = inner;
                    inner.observe(&self.synthesize(fb, axis, base, &q, 0));
                    self.state = State::Locate {
                        axis,
                        base,
                        inner,
                        just_repaired: false,
                    };
                } else {
                    // The robber moved on the known coordinate; its free
                    // coordinate is unchanged. A unique nearest inner probe
                    // may hide a missed zero: check its closed neighborhood,
                    // but only every second step, so persistent drifting
                    // cannot stall the inner sweep.
                    let rank_of = |x: Vertex| fb.block_index(self.id(axis, base, x)).unwrap();
                    let best = q.iter().map(|&x| rank_of(x)).min().unwrap();
                    let hits: Vec<Vertex> =
                        q.iter().copied().filter(|&x| rank_of(x) == best).collect();
                    if hits.len() == 1 && !just_repaired {
                        self.state = State::Repair {
                            axis,
                            base: new_base,
                            suspect: hits[0],
                            inner,
                        };
                    } else {
                        // Either a tie (no probed free coordinate can equal
                        // the robber's, so no zero was missed) or the suspect
                        // check already ran last turn: advance the inner
                        // strategy.
                        let mut inner = inner;
                        inner.observe(&self.synthesize(fb, axis, base, &q, 1));
                        self.state = State::Locate {
                            axis,
                            base: new_base,
                            inner,
                            just_repaired: false,
                        };
                    }
                }
            }
            State::Repair {
                axis,
                base,
                suspect,
                inner,
            } => {
                let center = self.id(axis, base, suspect);
                let free_pinned = self
                    .free_graph(axis)
                    .neighbors(suspect)
                    .iter()
                    .all(|&q2| fb.closer(center, self.id(axis, base, q2)).is_lt());
                if free_pinned {
                    // The suspect is the robber's free coordinate: switch the
                    // known axis and restart the other factor's strategy.
                    let other = match axis {
                        Axis::GKnown => Axis::HKnown,
                        Axis::HKnown => Axis::GKnown,
                    };
                    self.state = State::Locate {
                        axis: other,
                        base: suspect,
                        inner: self.pristine_free(other),
                        just_repaired: false,
                    };
                } else {
                    let new_base = self.repin(fb, axis, base, suspect);
                    self.state = State::Locate {
                        axis,
                        base: new_base,
                        inner,
                        just_repaired: true,
                    };
                }
            }
        }
    }

    fn fingerprint(&self) -> Vec<u8> {
        let mut f = vec![b'P'];
        match &self.state {
            State::Chase { anchor: (u, v) } => {
                f.push(0);
                f.extend(u.to_le_bytes());
                f.extend(v.to_le_bytes());
            }
            State::Locate {
                axis,
                base,
                inner,
                just_repaired,
            } => {
                f.push(1);
                f.push(matches!(axis, Axis::GKnown) as u8);
                f.push(*just_repaired as u8);
                f.extend(base.to_le_bytes());
                f.extend(inner.fingerprint());
            }
            State::Repair {
                axis,
                base,
                suspect,
                inner,
            } => {
                f.push(2);
                f.push(matches!(axis, Axis::GKnown) as u8);
                f.extend(base.to_le_bytes());
                f.extend(suspect.to_le_bytes());
                f.extend(inner.fingerprint());
            }
        }
        f
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
