//! Strategy for connected outerplanar graphs with three probes per turn.
//!
//! The cop maintains one of two situations and shrinks the robber's possible
//! region R at every situation change:
//!
//! * Situation 1: a vertex v with the robber inside R + {v}, R a union of
//!   components of G - v. A disconnected R is reduced one component X at a
//!   time by sweeping v's fan into X in outer-face order: components hanging
//!   between consecutive fan vertices must answer strictly closer to the fan
//!   than to v, and v is probed every turn so X cannot be entered or left
//!   unseen. A connected R either steps across a bridge or hands off to
//!   Situation 2 through the first fan vertex.
//! * Situation 2: a vertex pair {a, b} with the robber inside R + {a, b},
//!   R a union of components of G - {a, b} with at most one full component
//!   and an a-b path outside R. Components pendant to one of the pair are
//!   swept like Situation 1 while re-probing the pair every second turn to
//!   wall the region off. The remaining full component is split along the
//!   unique shortest a-b path through it: the path's first vertex w1 takes
//!   over one side, and the fan of w1 into the side component L is swept
//!   with w1 probed every turn, deciding whether the robber sits in L or in
//!   the rest.
//!
//! Observations that contradict these invariants would mean the bookkeeping
//! lost the robber; the strategy panics loudly instead of guessing.

use super::StrategyError;
use crate::game::{Feedback, Strategy};
use crate::graph::{components, Graph, OuterEmbedding, Vertex, VertexSet};
use std::collections::VecDeque;

#[derive(Clone)]
enum State {
    Init {
        v: Vertex,
    },
    Sit1Sweep {
        v: Vertex,
        x: VertexSet,
        rest: VertexSet,
        fan: Vec<Vertex>,
        i: usize,
    },
    Sit1Bridge {
        v: Vertex,
        w: Vertex,
        r: VertexSet,
    },
    Sit1Enter2 {
        v: Vertex,
        v1: Vertex,
        r: VertexSet,
    },
    Sit2 {
        a: Vertex,
        b: Vertex,
        r: VertexSet,
    },
    PendantSweep {
        a: Vertex,
        b: Vertex,
        attach: Vertex,
        far: Vertex,
        x: VertexSet,
        rest: VertexSet,
        fan: Vec<Vertex>,
        i: usize,
        odd: bool,
    },
    FullProbe {
        a: Vertex,
        b: Vertex,
        w1: Vertex,
        l: Option<VertexSet>,
        rprime: VertexSet,
    },
    FullSweep {
        a: Vertex,
        b: Vertex,
        w1: Vertex,
        l: VertexSet,
        rprime: VertexSet,
        s: Vec<Vertex>,
        j: usize,
        odd: bool,
    },
    /// Unreachable under consistent feedback.
    Dead {
        probe: Vec<Vertex>,
    },
}

#[derive(Clone)]
pub struct OuterplanarStrategy {
    g: Graph,
    emb: OuterEmbedding,
    state: State,
}

pub fn outerplanar_strategy(
    g: &Graph,
    emb: OuterEmbedding,
) -> Result<OuterplanarStrategy, StrategyError> {
    if !g.is_connected() {
        return Err(StrategyError::NotApplicable(
            "outerplanar strategy needs a connected graph".into(),
        ));
    }
    Ok(OuterplanarStrategy {
        g: g.clone(),
        emb,
        state: State::Init { v: 0 },
    })
}

impl OuterplanarStrategy {
    /// Components of `G - removed` that make up `r`.
    fn comps_within(&self, removed: &VertexSet, r: &VertexSet) -> Vec<crate::graph::Component> {
        components(&self.g, removed)
            .into_iter()
            .filter(|c| c.vertices.first().is_some_and(|f| r.contains(f)))
            .inspect(|c| {
                debug_assert!(
                    c.vertices.is_subset_of(r),
                    "region must be a union of components"
                )
            })
            .collect()
    }

    /// Situation-1 dispatch: choose the next probe state for (v, r).
    fn enter_sit1(&self, v: Vertex, r: VertexSet) -> State {
        let removed = VertexSet::from_iter(self.g.n(), [v]);
        let comps = self.comps_within(&removed, &r);
        match comps.len() {
            0 => State::Dead { probe: vec![v] },
            1 => {
                let fan = self.emb.fan(&self.g, v, &r);
                match fan.len() {
                    0 => State::Dead { probe: vec![v] },
                    1 => State::Sit1Bridge { v, w: fan[0], r },
                    _ => State::Sit1Enter2 { v, v1: fan[0], r },
                }
            }
            _ => {
                let x = comps[0].vertices.clone();
                let fan = self.emb.fan(&self.g, v, &x);
                assert!(!fan.is_empty(), "a component of G - v touches v");
                let mut rest = r.clone();
                rest.subtract(&x);
                State::Sit1Sweep {
                    v,
                    x,
                    rest,
                    fan,
                    i: 0,
                }
            }
        }
    }

    /// Unique shortest a-b path with all internal vertices in r, skipping a
    /// direct a-b edge. Uniqueness is an outerplanarity consequence; violated
    /// uniqueness means the embedding bookkeeping is wrong, so it panics.
    fn unique_inner_path(&self, a: Vertex, b: Vertex, r: &VertexSet) -> Vec<Vertex> {
        let n = self.g.n();
        let mut allowed = r.clone();
        allowed.insert(a);
        allowed.insert(b);
        let mut dist = vec![u32::MAX; n];
        let mut count = vec![0u64; n];
        dist[a as usize] = 0;
        count[a as usize] = 1;
        let mut queue = VecDeque::new();
        queue.push_back(a);
        while let Some(u) = queue.pop_front() {
            for &w in self.g.neighbors(u) {
                if !allowed.contains(w) || (u == a && w == b) {
                    continue;
                }
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    count[w as usize] = count[u as usize];
                    queue.push_back(w);
                } else if dist[w as usize] == dist[u as usize] + 1 {
                    count[w as usize] = count[w as usize].saturating_add(count[u as usize]);
                }
            }
        }
        assert!(
            dist[b as usize] != u32::MAX,
            "full component must connect the pair"
        );
        assert_eq!(count[b as usize], 1, "inner shortest path must be unique");
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            let prev = self
                .g
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| {
                    allowed.contains(w)
                        && dist[w as usize] + 1 == dist[cur as usize]
                        && count[w as usize] > 0
                        && !(w == a && cur == b)
                })
                .expect("unique path must have a predecessor chain");
            path.push(prev);
            cur = prev;
        }
        path.reverse();
        path
    }

    /// Situation-2 dispatch after the pair probe {a, b} was answered.
    fn dispatch_sit2(&self, a: Vertex, b: Vertex, r: VertexSet, fb: &Feedback) -> State {
        if r.is_empty() {
            // Candidates are confined to {a, b}; the pair probe locates.
            return State::Sit2 { a, b, r };
        }
        let removed = VertexSet::from_iter(self.g.n(), [a, b]);
        let comps = self.comps_within(&removed, &r);
        let full: Vec<&crate::graph::Component> =
            comps.iter().filter(|c| c.neighborhood == removed).collect();
        assert!(full.len() <= 1, "at most one full component in situation 2");

        for (attach, far) in [(a, b), (b, a)] {
            let single = VertexSet::from_iter(self.g.n(), [attach]);
            if let Some(x) = comps.iter().find(|c| c.neighborhood == single) {
                if fb.closer(attach, far).is_lt() {
                    let fan = self.emb.fan(&self.g, attach, &x.vertices);
                    assert!(!fan.is_empty());
                    let mut rest = r.clone();
                    rest.subtract(&x.vertices);
                    return State::PendantSweep {
                        a,
                        b,
                        attach,
                        far,
                        x: x.vertices.clone(),
                        rest,
                        fan,
                        i: 0,
                        odd: true,
                    };
                }
                // The pendant cannot hold the robber: drop it and re-enter.
                let mut rest = r;
                rest.subtract(&x.vertices);
                return State::Sit2 { a, b, r: rest };
            }
        }

        // No pendants: r is one full component.
        assert_eq!(
            comps.len(),
            1,
            "situation 2 region must be a single full component"
        );
        let path = self.unique_inner_path(a, b, &r);
        let w1 = path[1];
        debug_assert!(r.contains(w1));
        let path_set = VertexSet::from_iter(self.g.n(), path.iter().copied());
        let mut keep = r.clone();
        keep.subtract(&path_set);
        let mut removed2 = VertexSet::full(self.g.n());
        removed2.subtract(&keep);
        let side_comps = components(&self.g, &removed2);
        let target = VertexSet::from_iter(self.g.n(), [a, w1]);
        let l: Vec<&crate::graph::Component> = side_comps
            .iter()
            .filter(|c| c.neighborhood == target)
            .collect();
        assert!(
            l.len() <= 1,
            "at most one component hangs fully on {{a, w1}}"
        );
        match l.first() {
            None => {
                let mut rprime = r;
                rprime.remove(w1);
                State::FullProbe {
                    a,
                    b,
                    w1,
                    l: None,
                    rprime,
                }
            }
            Some(c) => {
                let mut rprime = r;
                rprime.remove(w1);
                rprime.subtract(&c.vertices);
                State::FullProbe {
                    a,
                    b,
                    w1,
                    l: Some(c.vertices.clone()),
                    rprime,
                }
            }
        }
    }
}

impl Strategy for OuterplanarStrategy {
    fn name(&self) -> &'static str {
        "outerplanar"
    }

    fn budget(&self) -> usize {
        3
    }

    fn next_probe(&self) -> Vec<Vertex> {
        match &self.state {
            State::Init { v } => vec![*v],
            State::Sit1Sweep { v, fan, i, .. } => {
                if fan.len() == 1 {
                    vec![*v, fan[0]]
                } else {
                    vec![*v, fan[*i], fan[*i + 1]]
                }
            }
            State::Sit1Bridge { v, w, .. } => vec![*v, *w],
            State::Sit1Enter2 { v, v1, .. } => vec![*v, *v1],
            State::Sit2 { a, b, .. } => vec![*a, *b],
            State::PendantSweep {
                attach,
                far,
                fan,
                i,
                odd,
                ..
            } => {
                let tail = if fan.len() == 1 { fan[0] } else { fan[*i + 1] };
                if *odd {
                    if fan.len() == 1 {
                        vec![*attach, fan[0]]
                    } else {
                        vec![*attach, fan[*i], fan[*i + 1]]
                    }
                } else {
                    vec![*far, *attach, tail]
                }
            }
            State::FullProbe { a, b, w1, .. } => vec![*a, *b, *w1],
            State::FullSweep {
                a,
                b,
                w1,
                s,
                j,
                odd,
                ..
            } => {
                if *odd {
                    if *j == 0 {
                        vec![*a, s[0], *w1]
                    } else {
                        vec![s[*j - 1], s[*j], *w1]
                    }
                } else {
                    vec![*b, *a, *w1]
                }
            }
            State::Dead { probe } => probe.clone(),
        }
    }

    fn observe(&mut self, fb: &Feedback) {
        debug_assert!(fb.zero_hit.is_none(), "zero hits always locate");
        let state = std::mem::replace(&mut self.state, State::Dead { probe: vec![0] });
        self.state = match state {
            State::Init { v } => {
                let mut r = VertexSet::full(self.g.n());
                r.remove(v);
                self.enter_sit1(v, r)
            }
            State::Sit1Sweep { v, x, rest, fan, i } => {
                let probed: Vec<Vertex> = if fan.len() == 1 {
                    vec![fan[0]]
                } else {
                    vec![fan[i], fan[i + 1]]
                };
                if probed.iter().any(|&f| fb.closer(f, v).is_lt()) {
                    // The robber is inside X.
                    self.enter_sit1(v, x)
                } else if fan.len() == 1 || i == fan.len() - 2 {
                    // Swept the whole fan: the robber is not in X.
                    self.enter_sit1(v, rest)
                } else {
                    State::Sit1Sweep {
                        v,
                        x,
                        rest,
                        fan,
                        i: i + 1,
                    }
                }
            }
            State::Sit1Bridge { v, w, r } => {
                let mut r2 = r;
                r2.remove(w);
                let _ = v;
                self.enter_sit1(w, r2)
            }
            State::Sit1Enter2 { v, v1, r } => {
                let mut r2 = r;
                r2.remove(v1);
                State::Sit2 { a: v, b: v1, r: r2 }
            }
            State::Sit2 { a, b, r } => self.dispatch_sit2(a, b, r, fb),
            State::PendantSweep {
                a,
                b,
                attach,
                far,
                x,
                rest,
                fan,
                i,
                odd,
            } => {
                if odd {
                    let probed: Vec<Vertex> = if fan.len() == 1 {
                        vec![fan[0]]
                    } else {
                        vec![fan[i], fan[i + 1]]
                    };
                    if probed.iter().any(|&f| fb.closer(f, attach).is_lt()) {
                        self.enter_sit1(attach, x)
                    } else {
                        State::PendantSweep {
                            a,
                            b,
                            attach,
                            far,
                            x,
                            rest,
                            fan,
                            i,
                            odd: false,
                        }
                    }
                } else if !fb.closer(attach, far).is_lt() {
                    // The robber cannot be in the pendant component.
                    State::Sit2 { a, b, r: rest }
                } else if fan.len() == 1 || i == fan.len() - 2 {
                    State::Sit2 { a, b, r: rest }
                } else {
                    State::PendantSweep {
                        a,
                        b,
                        attach,
                        far,
                        x,
                        rest,
                        fan,
                        i: i + 1,
                        odd: true,
                    }
                }
            }
            State::FullProbe {
                a,
                b,
                w1,
                l,
                rprime,
            } => match l {
                None => State::Sit2 {
                    a: w1,
                    b,
                    r: rprime,
                },
                Some(l) => {
                    if fb.closer(b, a).is_lt() && !fb.closer(b, w1).is_gt() {
                        State::Sit2 {
                            a: w1,
                            b,
                            r: rprime,
                        }
                    } else if fb.closer(a, b).is_lt() && !fb.closer(a, w1).is_gt() {
                        State::Sit2 { a, b: w1, r: l }
                    } else {
                        assert!(
                            fb.closer(w1, a).is_lt() && fb.closer(w1, b).is_lt(),
                            "path head must answer strictly nearest"
                        );
                        let s = self.emb.fan_oriented(&self.g, w1, &l, a, b);
                        assert!(!s.is_empty(), "full side component touches the path head");
                        State::FullSweep {
                            a,
                            b,
                            w1,
                            l,
                            rprime,
                            s,
                            j: 0,
                            odd: true,
                        }
                    }
                }
            },
            State::FullSweep {
                a,
                b,
                w1,
                l,
                rprime,
                s,
                j,
                odd,
            } => {
                if odd {
                    let in_l = if j == 0 {
                        fb.closer(a, w1).is_lt() || fb.closer(s[0], w1).is_lt()
                    } else {
                        !fb.closer(s[j - 1], w1).is_gt() || !fb.closer(s[j], w1).is_gt()
                    };
                    if in_l {
                        State::Sit2 { a, b: w1, r: l }
                    } else {
                        State::FullSweep {
                            a,
                            b,
                            w1,
                            l,
                            rprime,
                            s,
                            j,
                            odd: false,
                        }
                    }
                } else if fb.closer(b, a).is_lt() && !fb.closer(b, w1).is_gt() {
                    State::Sit2 {
                        a: w1,
                        b,
                        r: rprime,
                    }
                } else if fb.closer(a, b).is_lt() && !fb.closer(a, w1).is_gt() {
                    State::Sit2 { a, b: w1, r: l }
                } else {
                    assert!(
                        fb.closer(w1, a).is_lt() && fb.closer(w1, b).is_lt(),
                        "path head must answer strictly nearest between pair probes"
                    );
                    if j + 1 == s.len() {
                        State::Sit2 {
                            a: w1,
                            b,
                            r: rprime,
                        }
                    } else {
                        State::FullSweep {
                            a,
                            b,
                            w1,
                            l,
                            rprime,
                            s,
                            j: j + 1,
                            odd: true,
                        }
                    }
                }
            }
            State::Dead { probe } => State::Dead { probe },
        };
    }

    fn fingerprint(&self) -> Vec<u8> {
        let mut f = vec![b'O'];
        let set = |f: &mut Vec<u8>, s: &VertexSet| f.extend(s.to_bytes());
        match &self.state {
            State::Init { v } => {
                f.push(0);
                f.extend(v.to_le_bytes());
            }
            State::Sit1Sweep { v, x, rest, i, .. } => {
                f.push(1);
                f.extend(v.to_le_bytes());
                f.extend((*i as u32).to_le_bytes());
                set(&mut f, x);
                set(&mut f, rest);
            }
            State::Sit1Bridge { v, w, r } => {
                f.push(2);
                f.extend(v.to_le_bytes());
                f.extend(w.to_le_bytes());
                set(&mut f, r);
            }
            State::Sit1Enter2 { v, v1, r } => {
                f.push(3);
                f.extend(v.to_le_bytes());
                f.extend(v1.to_le_bytes());
                set(&mut f, r);
            }
            State::Sit2 { a, b, r } => {
                f.push(4);
                f.extend(a.to_le_bytes());
                f.extend(b.to_le_bytes());
                set(&mut f, r);
            }
            State::PendantSweep {
                attach,
                far,
                x,
                rest,
                i,
                odd,
                ..
            } => {
                f.push(5);
                f.extend(attach.to_le_bytes());
                f.extend(far.to_le_bytes());
                f.extend((*i as u32).to_le_bytes());
                f.push(*odd as u8);
                set(&mut f, x);
                set(&mut f, rest);
            }
            State::FullProbe {
                a, b, w1, rprime, ..
            } => {
                f.push(6);
                f.extend(a.to_le_bytes());
                f.extend(b.to_le_bytes());
                f.extend(w1.to_le_bytes());
                set(&mut f, rprime);
            }
            State::FullSweep {
                a,
                b,
                w1,
                j,
                odd,
                rprime,
                ..
            } => {
                f.push(7);
                f.extend(a.to_le_bytes());
                f.extend(b.to_le_bytes());
                f.extend(w1.to_le_bytes());
                f.extend((*j as u32).to_le_bytes());
                f.push(*odd as u8);
                set(&mut f, rprime);
            }
            State::Dead { probe } => {
                f.push(8);
                for p in probe {
                    f.extend(p.to_le_bytes());
                }
            }
        }
        f
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Turn bound used by tests and the CLI: quadratic with the constant
/// documented in the README (each situation change costs at most ~2n turns
/// and at most ~2n changes happen).
pub fn outerplanar_turn_bound(n: usize) -> usize {
    5 * n * n + 20
}
