//! The plane game: probing two points per turn, learning only which probe is
//! closer in ceilinged Euclidean distance, while the robber moves at speed 1.
//!
//! Knowledge is tracked as a conservative axis-aligned rectangle. Strict
//! order feedback is exact half-plane information (the ceiling is monotone,
//! so a strictly smaller ceiling means a strictly smaller distance). Equality
//! feedback means the two true distances differ by less than 1, confining
//! the robber between two hyperbola branches around the bisector; the
//! rectangle intersection uses the exact hyperbola width at the region's
//! vertical extent, so the update stays sound for any robber position. With
//! the probe pair placed on the region's center line at a separation at
//! least the region size, that width is below 1, well inside the width-2
//! strap the rectangle arithmetic needs.
//!
//! The bounding phase never relies on equality feedback at all: it drifts
//! the probe pair by delta > 1 per turn in the hunted direction, and the
//! strictly-slower robber is eventually overtaken on both sides. The
//! shrinking phase alternates halving the rectangle's width and height and
//! announces the center once both sides are at most 6 + eps, giving a final
//! error of at most (6+eps)*sqrt(2)/2 <= 3*sqrt(2) + eps.
//!
//! A robber policy here is a falsification harness, not part of the
//! guarantee: the region arithmetic is sound for every speed-1 trajectory.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Snap tolerance before applying the ceiling, against representability
/// artifacts of points constructed from arithmetic.
const CEIL_SNAP: f64 = 1e-12;
/// Tolerance for axis-alignment and emptiness checks.
const GEOM_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> PlanePoint {
        PlanePoint { x, y }
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Graph distance on the plane: the ceiling of the Euclidean distance.
pub fn ceil_distance(a: PlanePoint, b: PlanePoint) -> u64 {
    let d = a.dist(b);
    let snapped = if (d - d.round()).abs() < CEIL_SNAP {
        d.round()
    } else {
        d
    };
    snapped.ceil() as u64
}

/// Relative observation from one probe pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PlaneFeedback {
    D1Less,
    D2Less,
    Equal,
    /// The robber coincides with probe 1 or 2.
    ZeroHit(u8),
}

pub fn plane_feedback(c1: PlanePoint, c2: PlanePoint, r: PlanePoint) -> PlaneFeedback {
    let d1 = ceil_distance(c1, r);
    let d2 = ceil_distance(c2, r);
    if d1 == 0 {
        return PlaneFeedback::ZeroHit(1);
    }
    if d2 == 0 {
        return PlaneFeedback::ZeroHit(2);
    }
    match d1.cmp(&d2) {
        std::cmp::Ordering::Less => PlaneFeedback::D1Less,
        std::cmp::Ordering::Greater => PlaneFeedback::D2Less,
        std::cmp::Ordering::Equal => PlaneFeedback::Equal,
    }
}

#[derive(Debug, Error)]
pub enum EuclidError {
    #[error("the probe drift must exceed the robber speed: delta must be > 1, got {0}")]
    BadDelta(f64),
    #[error("eps must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("shrinking needs a bounded start region")]
    UnboundedRegion,
    #[error("probe pair must be horizontal or vertical and distinct")]
    NonAxisAlignedProbe,
    #[error("observation contradicts the knowledge region: engine bug")]
    EmptyRegion,
    #[error("phase did not terminate within {0} turns")]
    TurnCapExceeded(usize),
}

/// Axis-aligned, possibly unbounded rectangle containing every robber
/// position consistent with history.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KnowledgeRegion {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl KnowledgeRegion {
    pub fn unbounded() -> KnowledgeRegion {
        KnowledgeRegion {
            x_lo: f64::NEG_INFINITY,
            x_hi: f64::INFINITY,
            y_lo: f64::NEG_INFINITY,
            y_hi: f64::INFINITY,
        }
    }

    pub fn point(p: PlanePoint) -> KnowledgeRegion {
        KnowledgeRegion {
            x_lo: p.x,
            x_hi: p.x,
            y_lo: p.y,
            y_hi: p.y,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.x_lo.is_finite()
            && self.x_hi.is_finite()
            && self.y_lo.is_finite()
            && self.y_hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    pub fn center(&self) -> PlanePoint {
        PlanePoint::new((self.x_lo + self.x_hi) / 2.0, (self.y_lo + self.y_hi) / 2.0)
    }

    pub fn half_diagonal(&self) -> f64 {
        self.width().hypot(self.height()) / 2.0
    }

    pub fn contains(&self, p: PlanePoint) -> bool {
        p.x >= self.x_lo - GEOM_EPS
            && p.x <= self.x_hi + GEOM_EPS
            && p.y >= self.y_lo - GEOM_EPS
            && p.y <= self.y_hi + GEOM_EPS
    }

    /// One robber move: every finite bound recedes by `delta`.
    pub fn expand(&self, delta: f64) -> KnowledgeRegion {
        KnowledgeRegion {
            x_lo: self.x_lo - delta,
            x_hi: self.x_hi + delta,
            y_lo: self.y_lo - delta,
            y_hi: self.y_hi + delta,
        }
    }

    fn check(self) -> Result<KnowledgeRegion, EuclidError> {
        if self.x_lo > self.x_hi + GEOM_EPS || self.y_lo > self.y_hi + GEOM_EPS {
            return Err(EuclidError::EmptyRegion);
        }
        Ok(self)
    }
}

/// Half-width of the equal-feedback strap around the bisector of a pair at
/// half-separation `s`, for robber offsets up to `off` from the probe line.
/// Equal ceilings force the true distances within 1 of each other, i.e. the
/// region between the two branches of the hyperbola with transverse semi-axis
/// 1/2 and focal half-distance `s`.
fn strap_half_width(s: f64, off: f64) -> f64 {
    let b2 = s * s - 0.25;
    if b2 <= 0.0 || !off.is_finite() {
        return f64::INFINITY;
    }
    0.5 * (1.0 + off * off / b2).sqrt()
}

/// Intersects the region with what one axis-aligned probe pair's feedback
/// reveals about the robber's position at probe time. The robber's following
/// move is a separate `expand(1.0)`.
pub fn region_update(
    region: &KnowledgeRegion,
    c1: PlanePoint,
    c2: PlanePoint,
    feedback: PlaneFeedback,
) -> Result<KnowledgeRegion, EuclidError> {
    let horizontal = (c1.y - c2.y).abs() <= GEOM_EPS && (c1.x - c2.x).abs() > GEOM_EPS;
    let vertical = (c1.x - c2.x).abs() <= GEOM_EPS && (c1.y - c2.y).abs() > GEOM_EPS;
    if !horizontal && !vertical {
        return Err(EuclidError::NonAxisAlignedProbe);
    }
    if let PlaneFeedback::ZeroHit(i) = feedback {
        let p = if i == 1 { c1 } else { c2 };
        if !region.contains(p) {
            return Err(EuclidError::EmptyRegion);
        }
        return Ok(KnowledgeRegion::point(p));
    }
    let mut out = *region;
    if horizontal {
        let first_is_left = c1.x <= c2.x;
        let mid = (c1.x + c2.x) / 2.0;
        let s = (c1.x - c2.x).abs() / 2.0;
        match feedback {
            PlaneFeedback::D1Less | PlaneFeedback::D2Less => {
                // Strictly smaller ceiling implies strictly smaller distance:
                // a closed half-plane at the bisector, no widening needed.
                let closer_left = matches!(feedback, PlaneFeedback::D1Less) == first_is_left;
                if closer_left {
                    out.x_hi = out.x_hi.min(mid);
                } else {
                    out.x_lo = out.x_lo.max(mid);
                }
            }
            PlaneFeedback::Equal => {
                let off = (region.y_lo - c1.y).abs().max((region.y_hi - c1.y).abs());
                let w = strap_half_width(s, off);
                if w.is_finite() {
                    out.x_lo = out.x_lo.max(mid - w);
                    out.x_hi = out.x_hi.min(mid + w);
                }
            }
            PlaneFeedback::ZeroHit(_) => unreachable!(),
        }
    } else {
        let first_is_low = c1.y <= c2.y;
        let mid = (c1.y + c2.y) / 2.0;
        let s = (c1.y - c2.y).abs() / 2.0;
        match feedback {
            PlaneFeedback::D1Less | PlaneFeedback::D2Less => {
                let closer_low = matches!(feedback, PlaneFeedback::D1Less) == first_is_low;
                if closer_low {
                    out.y_hi = out.y_hi.min(mid);
                } else {
                    out.y_lo = out.y_lo.max(mid);
                }
            }
            PlaneFeedback::Equal => {
                let off = (region.x_lo - c1.x).abs().max((region.x_hi - c1.x).abs());
                let w = strap_half_width(s, off);
                if w.is_finite() {
                    out.y_lo = out.y_lo.max(mid - w);
                    out.y_hi = out.y_hi.min(mid + w);
                }
            }
            PlaneFeedback::ZeroHit(_) => unreachable!(),
        }
    }
    out.check()
}

/// Robber movement policy for simulation. The engine clamps every step to
/// speed 1, so policies cannot cheat.
pub trait RobberPolicy: Send {
    fn start(&mut self) -> PlanePoint;
    fn step(&mut self, probes: (PlanePoint, PlanePoint), current: PlanePoint) -> PlanePoint;
}

/// Scripted list of positions; stays at the last one when exhausted.
pub struct ScriptedPath {
    pub points: Vec<PlanePoint>,
    at: usize,
}

impl ScriptedPath {
    pub fn new(points: Vec<PlanePoint>) -> ScriptedPath {
        assert!(!points.is_empty(), "scripted path needs at least one point");
        ScriptedPath { points, at: 0 }
    }
}

impl RobberPolicy for ScriptedPath {
    fn start(&mut self) -> PlanePoint {
        self.points[0]
    }
    fn step(&mut self, _probes: (PlanePoint, PlanePoint), _current: PlanePoint) -> PlanePoint {
        self.at = (self.at + 1).min(self.points.len() - 1);
        self.points[self.at]
    }
}

/// Runs away from the probe pair's midpoint at full speed.
pub struct FleeFromCenter {
    pub start: PlanePoint,
}

impl RobberPolicy for FleeFromCenter {
    fn start(&mut self) -> PlanePoint {
        self.start
    }
    fn step(&mut self, probes: (PlanePoint, PlanePoint), current: PlanePoint) -> PlanePoint {
        let mid = PlanePoint::new(
            (probes.0.x + probes.1.x) / 2.0,
            (probes.0.y + probes.1.y) / 2.0,
        );
        let (dx, dy) = (current.x - mid.x, current.y - mid.y);
        let n = dx.hypot(dy);
        if n < GEOM_EPS {
            PlanePoint::new(current.x + 1.0, current.y)
        } else {
            PlanePoint::new(current.x + dx / n, current.y + dy / n)
        }
    }
}

/// Moves onto the probe pair's perpendicular bisector whenever it can,
/// trying to keep producing uninformative equality feedback.
pub struct HugBisector {
    pub start: PlanePoint,
}

impl RobberPolicy for HugBisector {
    fn start(&mut self) -> PlanePoint {
        self.start
    }
    fn step(&mut self, probes: (PlanePoint, PlanePoint), current: PlanePoint) -> PlanePoint {
        let (c1, c2) = probes;
        let mx = (c1.x + c2.x) / 2.0;
        let my = (c1.y + c2.y) / 2.0;
        let (ex, ey) = (c2.x - c1.x, c2.y - c1.y);
        let n2 = ex * ex + ey * ey;
        if n2 < GEOM_EPS {
            return current;
        }
        // Project the current position onto the bisector line.
        let t = ((current.x - mx) * ex + (current.y - my) * ey) / n2;
        let target = PlanePoint::new(current.x - t * ex, current.y - t * ey);
        let d = current.dist(target);
        if d <= 1.0 {
            target
        } else {
            PlanePoint::new(
                current.x + (target.x - current.x) / d,
                current.y + (target.y - current.y) / d,
            )
        }
    }
}

/// Seeded random walk with steps of length at most 1.
pub struct RandomWalk {
    pub start: PlanePoint,
    rng: ChaCha8Rng,
}

impl RandomWalk {
    pub fn new(start: PlanePoint, seed: u64) -> RandomWalk {
        RandomWalk {
            start,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl RobberPolicy for RandomWalk {
    fn start(&mut self) -> PlanePoint {
        self.start
    }
    fn step(&mut self, _probes: (PlanePoint, PlanePoint), current: PlanePoint) -> PlanePoint {
        let angle = self.rng.gen_range(0.0..std::f64::consts::TAU);
        let speed = self.rng.gen_range(0.0..=1.0);
        PlanePoint::new(
            current.x + speed * angle.cos(),
            current.y + speed * angle.sin(),
        )
    }
}

/// Feedback oracle against one simulated robber. Positions are recorded per
/// probe so tests can audit region soundness afterwards.
pub struct PlaneEngine {
    policy: Box<dyn RobberPolicy>,
    pos: Option<PlanePoint>,
    pub history: Vec<PlanePoint>,
}

impl PlaneEngine {
    pub fn new(policy: Box<dyn RobberPolicy>) -> PlaneEngine {
        PlaneEngine {
            policy,
            pos: None,
            history: Vec::new(),
        }
    }

    /// Where the robber stands right now (after its latest move), if the
    /// game has started. Test-side auditing only.
    pub fn current_position(&self) -> Option<PlanePoint> {
        self.pos
    }

    pub fn probe(&mut self, c1: PlanePoint, c2: PlanePoint) -> PlaneFeedback {
        let cur = match self.pos {
            Some(p) => p,
            None => self.policy.start(),
        };
        self.history.push(cur);
        let fb = plane_feedback(c1, c2, cur);
        let next = self.policy.step((c1, c2), cur);
        // Clamp to speed 1.
        let d = cur.dist(next);
        self.pos = Some(if d <= 1.0 {
            next
        } else {
            PlanePoint::new(cur.x + (next.x - cur.x) / d, cur.y + (next.y - cur.y) / d)
        });
        fb
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneTurn {
    pub turn: usize,
    pub probes: (PlanePoint, PlanePoint),
    pub feedback: PlaneFeedback,
    /// Region after intersecting this observation (robber at probe time).
    pub region: KnowledgeRegion,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneTrace {
    pub turns: Vec<PlaneTurn>,
    pub announced: Option<PlanePoint>,
    pub error_radius: f64,
}

impl PlaneTrace {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for t in &self.turns {
            out.push_str(&serde_json::to_string(t).unwrap());
            out.push('\n');
        }
        out.push_str(
            &serde_json::json!({
                "announced": self.announced,
                "error_radius": if self.error_radius.is_finite() {
                    serde_json::json!(self.error_radius)
                } else {
                    serde_json::json!(null)
                },
            })
            .to_string(),
        );
        out.push('\n');
        out
    }
}

const PHASE_TURN_CAP: usize = 1_000_000;

struct Driver<'a> {
    engine: &'a mut PlaneEngine,
    region: KnowledgeRegion,
    trace: Vec<PlaneTurn>,
    first: bool,
}

impl<'a> Driver<'a> {
    /// One full turn: account for the robber's pending move (unless the
    /// caller already did at phase entry), probe, intersect.
    fn turn(&mut self, c1: PlanePoint, c2: PlanePoint) -> Result<PlaneFeedback, EuclidError> {
        if self.first {
            self.first = false;
        } else {
            self.region = self.region.expand(1.0);
        }
        let fb = self.engine.probe(c1, c2);
        self.region = region_update(&self.region, c1, c2, fb)?;
        self.trace.push(PlaneTurn {
            turn: self.trace.len(),
            probes: (c1, c2),
            feedback: fb,
            region: self.region,
        });
        Ok(fb)
    }
}

/// Bounding phase: drifting probe pairs overtake the robber on each side of
/// each axis, yielding a bounded rectangle. Equality feedback just keeps the
/// drift going; only strict feedback sets bounds, so every update is exact.
pub fn rectangle_bounding_strategy(
    engine: &mut PlaneEngine,
    delta: f64,
) -> Result<(KnowledgeRegion, PlaneTrace), EuclidError> {
    if delta <= 1.0 {
        return Err(EuclidError::BadDelta(delta));
    }
    let mut drv = Driver {
        engine,
        region: KnowledgeRegion::unbounded(),
        trace: Vec::new(),
        first: true,
    };
    for phase_x in [true, false] {
        let mut mid = 0.0f64;
        let mut dir = -1.0f64;
        loop {
            if drv.trace.len() > PHASE_TURN_CAP {
                return Err(EuclidError::TurnCapExceeded(PHASE_TURN_CAP));
            }
            let bounded = if phase_x {
                drv.region.x_lo.is_finite() && drv.region.x_hi.is_finite()
            } else {
                drv.region.y_lo.is_finite() && drv.region.y_hi.is_finite()
            };
            if bounded {
                break;
            }
            let (c1, c2) = if phase_x {
                (
                    PlanePoint::new(mid - 1.0, 0.0),
                    PlanePoint::new(mid + 1.0, 0.0),
                )
            } else {
                let xc = (drv.region.x_lo + drv.region.x_hi) / 2.0;
                (
                    PlanePoint::new(xc, mid - 1.0),
                    PlanePoint::new(xc, mid + 1.0),
                )
            };
            match drv.turn(c1, c2)? {
                PlaneFeedback::D1Less => {
                    // Robber on the low side: chase downward.
                    dir = -1.0;
                    mid += dir * delta;
                }
                PlaneFeedback::D2Less => {
                    dir = 1.0;
                    mid += dir * delta;
                }
                PlaneFeedback::Equal => {
                    mid += dir * delta;
                }
                PlaneFeedback::ZeroHit(_) => break,
            }
        }
    }
    let region = drv.region;
    let trace = PlaneTrace {
        turns: drv.trace,
        announced: None,
        error_radius: f64::INFINITY,
    };
    Ok((region, trace))
}

/// Shrinking phase: alternate halving width and height by midline probe
/// pairs on the region's center lines until both are at most 6 + eps, then
/// announce the center. The announced error is half the final diagonal,
/// at most 3*sqrt(2) + eps.
pub fn shrink_strategy(
    engine: &mut PlaneEngine,
    region: KnowledgeRegion,
    eps: f64,
) -> Result<(PlanePoint, KnowledgeRegion, PlaneTrace), EuclidError> {
    if eps <= 0.0 {
        return Err(EuclidError::BadEpsilon(eps));
    }
    if !region.is_bounded() {
        return Err(EuclidError::UnboundedRegion);
    }
    // A used engine means the robber has one pending move since the region
    // was established; account for it before the entry stop-check so an
    // immediate announcement stays sound.
    let region = if engine.history.is_empty() {
        region
    } else {
        region.expand(1.0)
    };
    let mut drv = Driver {
        engine,
        region,
        trace: Vec::new(),
        first: true,
    };
    let mut horizontal = true;
    loop {
        if drv.region.width() <= 6.0 + eps && drv.region.height() <= 6.0 + eps {
            break;
        }
        if drv.trace.len() > PHASE_TURN_CAP {
            return Err(EuclidError::TurnCapExceeded(PHASE_TURN_CAP));
        }
        // The probe sees the region after the robber's pending move; place
        // the pair on the inflated region's center line, separated by at
        // least its size so the equal-feedback strap stays within width 2.
        let look = drv.region.expand(1.0);
        let sep = look.width().max(look.height()).max(2.0);
        let c = look.center();
        let (c1, c2) = if horizontal {
            (
                PlanePoint::new(c.x - sep, c.y),
                PlanePoint::new(c.x + sep, c.y),
            )
        } else {
            (
                PlanePoint::new(c.x, c.y - sep),
                PlanePoint::new(c.x, c.y + sep),
            )
        };
        drv.turn(c1, c2)?;
        horizontal = !horizontal;
    }
    let announced = drv.region.center();
    let error_radius = drv.region.half_diagonal();
    let final_region = drv.region;
    let trace = PlaneTrace {
        turns: drv.trace,
        announced: Some(announced),
        error_radius,
    };
    Ok((announced, final_region, trace))
}

/// Full game: bound the robber, then shrink and announce.
pub fn localize(
    engine: &mut PlaneEngine,
    delta: f64,
    eps: f64,
) -> Result<(PlanePoint, f64, PlaneTrace), EuclidError> {
    let (region, mut trace) = rectangle_bounding_strategy(engine, delta)?;
    let (announced, final_region, shrink_trace) = shrink_strategy(engine, region, eps)?;
    let offset = trace.turns.len();
    trace
        .turns
        .extend(shrink_trace.turns.into_iter().map(|mut t| {
            t.turn += offset;
            t
        }));
    trace.announced = Some(announced);
    trace.error_radius = final_region.half_diagonal();
    Ok((announced, trace.error_radius, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feedback_examples() {
        let c1 = PlanePoint::new(0.0, 0.0);
        let c2 = PlanePoint::new(3.0, 0.0);
        assert_eq!(
            plane_feedback(c1, c2, PlanePoint::new(1.5, 2.0)),
            PlaneFeedback::Equal
        );
        assert_eq!(
            plane_feedback(c1, c2, PlanePoint::new(0.4, 0.0)),
            PlaneFeedback::D1Less
        );
        let c2 = PlanePoint::new(2.0, 0.0);
        assert_eq!(
            plane_feedback(c1, c2, PlanePoint::new(0.6, 0.0)),
            PlaneFeedback::D1Less
        );
        assert_eq!(
            plane_feedback(c1, c2, PlanePoint::new(1.4, 0.0)),
            PlaneFeedback::D2Less
        );
        assert_eq!(
            plane_feedback(c1, c2, PlanePoint::new(0.0, 0.0)),
            PlaneFeedback::ZeroHit(1)
        );
    }

    #[test]
    fn ceil_distance_snaps_representation_noise() {
        let a = PlanePoint::new(0.0, 0.0);
        let b = PlanePoint::new(3.0000000000001, 0.0);
        assert_eq!(ceil_distance(a, b), 3);
    }

    #[test]
    fn strict_feedback_is_exact_half_plane() {
        // Oracle check: a strictly smaller ceiling really does mean the
        // robber is strictly on that side of the bisector.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c1 = PlanePoint::new(-3.0, 0.0);
        let c2 = PlanePoint::new(3.0, 0.0);
        for _ in 0..20000 {
            let r = PlanePoint::new(rng.gen_range(-60.0..60.0), rng.gen_range(-60.0..60.0));
            match plane_feedback(c1, c2, r) {
                PlaneFeedback::D1Less => assert!(r.x < 0.0),
                PlaneFeedback::D2Less => assert!(r.x > 0.0),
                _ => {}
            }
        }
    }

    #[test]
    fn equal_feedback_strap_is_sound_by_sampling() {
        // Oracle by dense sampling: every equal-ceiling point within the
        // vertical window lies inside the derived strap.
        let c1 = PlanePoint::new(0.0, 0.0);
        let c2 = PlanePoint::new(10.0, 0.0);
        let s = 5.0;
        for window in [3.0f64, 8.0] {
            let w = strap_half_width(s, window);
            let mut hits = 0;
            let mut x = -20.0;
            while x <= 30.0 {
                let mut y = -window;
                while y <= window {
                    let r = PlanePoint::new(x, y);
                    if plane_feedback(c1, c2, r) == PlaneFeedback::Equal {
                        hits += 1;
                        assert!(
                            (x - 5.0).abs() <= w + GEOM_EPS,
                            "equal point ({x}, {y}) escapes strap half-width {w}"
                        );
                    }
                    y += 0.037;
                }
                x += 0.041;
            }
            assert!(hits > 100, "sampling should find equal-feedback points");
        }
        // Separation at least the offset window keeps the strap within the
        // width-2 budget of the rectangle arithmetic.
        assert!(2.0 * strap_half_width(10.0, 10.0) <= 2.0);
        assert!(2.0 * strap_half_width(2.0, 2.0) <= 2.0);
    }

    #[test]
    fn far_robbers_break_the_naive_strap() {
        // A fixed width-2 strap would be unsound: this equal-feedback point
        // sits 2 away from the bisector. The honest update accounts for it
        // through the region's vertical extent.
        let c1 = PlanePoint::new(0.0, 0.0);
        let c2 = PlanePoint::new(10.0, 0.0);
        let r = PlanePoint::new(7.0, 25.0);
        assert_eq!(plane_feedback(c1, c2, r), PlaneFeedback::Equal);
        let region = KnowledgeRegion {
            x_lo: f64::NEG_INFINITY,
            x_hi: f64::INFINITY,
            y_lo: -30.0,
            y_hi: 30.0,
        };
        let updated = region_update(&region, c1, c2, PlaneFeedback::Equal).unwrap();
        assert!(updated.contains(r), "sound update must keep the witness");
    }

    #[test]
    fn region_update_examples() {
        let c1 = PlanePoint::new(0.0, 0.0);
        let c2 = PlanePoint::new(10.0, 0.0);
        // Bounded vertical extent: the strap sits inside [4, 6] around the
        // bisector at 5.
        let region = KnowledgeRegion {
            x_lo: f64::NEG_INFINITY,
            x_hi: f64::INFINITY,
            y_lo: -3.0,
            y_hi: 3.0,
        };
        let updated = region_update(&region, c1, c2, PlaneFeedback::Equal).unwrap();
        assert!(updated.x_lo >= 4.0 && updated.x_hi <= 6.0);
        assert!(((updated.x_lo + updated.x_hi) / 2.0 - 5.0).abs() < GEOM_EPS);

        // Unbounded vertical extent: equality reveals nothing about x.
        let unbounded = KnowledgeRegion::unbounded();
        let updated = region_update(&unbounded, c1, c2, PlaneFeedback::Equal).unwrap();
        assert!(updated.x_lo.is_infinite() && updated.x_hi.is_infinite());

        // Expansion by one models the robber's move.
        let r = KnowledgeRegion {
            x_lo: 0.0,
            x_hi: 4.0,
            y_lo: 0.0,
            y_hi: 1.0,
        };
        let e = r.expand(1.0);
        assert_eq!((e.x_lo, e.x_hi), (-1.0, 5.0));

        // A half-plane disjoint from the region is an engine bug.
        let r = KnowledgeRegion {
            x_lo: 0.0,
            x_hi: 4.0,
            y_lo: 0.0,
            y_hi: 1.0,
        };
        let far1 = PlanePoint::new(9.0, 0.0);
        let far2 = PlanePoint::new(11.0, 0.0);
        assert!(matches!(
            region_update(&r, far1, far2, PlaneFeedback::D2Less),
            Err(EuclidError::EmptyRegion)
        ));
    }

    #[test]
    fn non_axis_aligned_probe_rejected() {
        let r = KnowledgeRegion::unbounded();
        assert!(matches!(
            region_update(
                &r,
                PlanePoint::new(0.0, 0.0),
                PlanePoint::new(1.0, 1.0),
                PlaneFeedback::Equal
            ),
            Err(EuclidError::NonAxisAlignedProbe)
        ));
    }

    #[test]
    fn delta_and_eps_validation() {
        let mk = || PlaneEngine::new(Box::new(ScriptedPath::new(vec![PlanePoint::new(5.0, 5.0)])));
        assert!(matches!(
            rectangle_bounding_strategy(&mut mk(), 1.0),
            Err(EuclidError::BadDelta(_))
        ));
        assert!(matches!(
            shrink_strategy(&mut mk(), KnowledgeRegion::unbounded(), 0.1),
            Err(EuclidError::UnboundedRegion)
        ));
        assert!(matches!(
            shrink_strategy(
                &mut mk(),
                KnowledgeRegion::point(PlanePoint::new(0.0, 0.0)),
                0.0
            ),
            Err(EuclidError::BadEpsilon(_))
        ));
    }

    fn audit(trace: &PlaneTrace, engine: &PlaneEngine) {
        // Region soundness at every turn against the recorded true positions.
        for t in &trace.turns {
            assert!(
                t.region.contains(engine.history[t.turn]),
                "turn {}: region {:?} lost the robber at {:?}",
                t.turn,
                t.region,
                engine.history[t.turn]
            );
        }
    }

    #[test]
    fn stationary_robber_bounded_and_announced() {
        let mut engine =
            PlaneEngine::new(Box::new(ScriptedPath::new(vec![PlanePoint::new(5.0, 5.0)])));
        let (region, _) = rectangle_bounding_strategy(&mut engine, 2.0).unwrap();
        assert!(region.is_bounded());
        assert!(region.contains(PlanePoint::new(5.0, 5.0)));
        let (p, final_region, trace) = shrink_strategy(&mut engine, region, 0.1).unwrap();
        assert!(final_region.contains(PlanePoint::new(5.0, 5.0)));
        assert!(p.dist(PlanePoint::new(5.0, 5.0)) <= 3.0 * 2f64.sqrt() + 0.1);
        assert!(trace.error_radius <= 3.0 * 2f64.sqrt() + 0.1);
    }

    #[test]
    fn fleeing_robber_still_overtaken() {
        let mut engine = PlaneEngine::new(Box::new(FleeFromCenter {
            start: PlanePoint::new(-20.0, 3.0),
        }));
        let (region, trace) = rectangle_bounding_strategy(&mut engine, 2.0).unwrap();
        assert!(region.is_bounded());
        audit(&trace, &engine);
    }

    #[test]
    fn bisector_hugger_does_not_stall_the_drift() {
        let mut engine = PlaneEngine::new(Box::new(HugBisector {
            start: PlanePoint::new(0.0, 17.0),
        }));
        let (announced, err, trace) = localize(&mut engine, 2.0, 0.1).unwrap();
        audit(&trace, &engine);
        let at_announce = engine.history.last().unwrap();
        assert!(err <= 3.0 * 2f64.sqrt() + 0.1);
        assert!(announced.dist(*at_announce) <= err + GEOM_EPS);
    }

    #[test]
    fn random_walks_full_game() {
        for seed in 0..40u64 {
            let start = PlanePoint::new(
                (seed as f64 * 7.3) % 31.0 - 15.0,
                (seed as f64 * 3.1) % 23.0 - 11.0,
            );
            let mut engine = PlaneEngine::new(Box::new(RandomWalk::new(start, seed)));
            let (announced, err, trace) = localize(&mut engine, 2.0, 0.1).unwrap();
            audit(&trace, &engine);
            assert!(err <= 3.0 * 2f64.sqrt() + 0.1, "seed {seed}: radius {err}");
            let truth = engine.history[trace.turns.len() - 1];
            assert!(
                announced.dist(truth) <= 3.0 * 2f64.sqrt() + 0.1,
                "seed {seed}: announced {announced:?} vs {truth:?}"
            );
        }
    }

    #[test]
    fn width_recurrence_during_shrink() {
        let mut engine =
            PlaneEngine::new(Box::new(RandomWalk::new(PlanePoint::new(3.0, -4.0), 11)));
        let region = KnowledgeRegion {
            x_lo: -60.0,
            x_hi: 60.0,
            y_lo: -50.0,
            y_hi: 70.0,
        };
        let (_, _, trace) = shrink_strategy(&mut engine, region, 0.1).unwrap();
        let widths: Vec<f64> = trace.turns.iter().map(|t| t.region.width()).collect();
        let heights: Vec<f64> = trace.turns.iter().map(|t| t.region.height()).collect();
        assert!(widths.len() >= 4);
        for series in [widths, heights] {
            for i in 0..series.len().saturating_sub(2) {
                assert!(series[i + 2] <= series[i] / 2.0 + 3.0 + GEOM_EPS);
                assert!(series[i + 2] >= 1.0 - GEOM_EPS);
            }
        }
    }

    #[test]
    fn shrink_turn_count_follows_the_recurrence() {
        // Each width/height pair of turns contracts toward the fixed point 6,
        // so 2 * ceil(log2(size / eps)) turns plus slack always suffice.
        for size in [40.0f64, 300.0, 1000.0] {
            let mut engine =
                PlaneEngine::new(Box::new(RandomWalk::new(PlanePoint::new(1.0, 2.0), 3)));
            let region = KnowledgeRegion {
                x_lo: -size / 2.0,
                x_hi: size / 2.0,
                y_lo: -size / 2.0,
                y_hi: size / 2.0,
            };
            let eps = 0.1;
            let (_, _, trace) = shrink_strategy(&mut engine, region, eps).unwrap();
            let budget = 2 * ((size / eps).log2().ceil() as usize) + 4;
            assert!(
                trace.turns.len() <= budget,
                "size {size}: {} turns exceeds {budget}",
                trace.turns.len()
            );
        }
    }

    #[test]
    fn already_small_region_announces_immediately() {
        let mut engine =
            PlaneEngine::new(Box::new(ScriptedPath::new(vec![PlanePoint::new(1.0, 1.0)])));
        let region = KnowledgeRegion {
            x_lo: 0.0,
            x_hi: 5.0,
            y_lo: 0.0,
            y_hi: 5.0,
        };
        let (p, _, trace) = shrink_strategy(&mut engine, region, 0.1).unwrap();
        assert_eq!(trace.turns.len(), 0);
        assert_eq!(p, PlanePoint::new(2.5, 2.5));
    }
}
