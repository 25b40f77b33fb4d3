//! Merged edges and flattened polylines shared by the predicates.

use crate::geometry::{turn_between, Point, Primitive};
use crate::render::{BasePath, Component};

/// Turns below this are treated as straight (radians).
pub const STRAIGHT_TURN: f64 = 1.0 * std::f64::consts::PI / 180.0;

/// Relative tolerance (in unit lengths) for coincident points and centers.
pub const COINCIDENT: f64 = 1e-6;

/// One component with collinear segment runs and co-circular arc runs merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Outline {
    pub edges: Vec<Primitive>,
    pub closed: bool,
    pub unit: f64,
}

fn merge(a: &Primitive, b: &Primitive, unit: f64) -> Option<Primitive> {
    match (*a, *b) {
        (Primitive::Segment { p0, p1 }, Primitive::Segment { p0: q0, p1: q1 }) => {
            (turn_between(p1 - p0, q1 - q0).abs() < STRAIGHT_TURN).then_some(Primitive::Segment { p0, p1: q1 })
        }
        (
            Primitive::Arc { center, radius, start_angle, sweep },
            Primitive::Arc { center: c2, radius: r2, sweep: w2, .. },
        ) => {
            let same = center.dist(c2) <= COINCIDENT * unit
                && (radius - r2).abs() <= COINCIDENT * unit
                && sweep.signum() == w2.signum();
            same.then_some(Primitive::Arc { center, radius, start_angle, sweep: sweep + w2 })
        }
        _ => None,
    }
}

impl Outline {
    pub fn of(comp: &Component) -> Outline {
        let unit = comp.unit();
        let closed = comp.is_closed();
        let mut edges: Vec<Primitive> = Vec::new();
        for p in comp.nonzero_primitives() {
            if let Some(last) = edges.last_mut() {
                if let Some(m) = merge(last, &p, unit) {
                    *last = m;
                    continue;
                }
            }
            edges.push(p);
        }
        if closed && edges.len() > 1 {
            if let Some(m) = merge(&edges[edges.len() - 1], &edges[0], unit) {
                edges[0] = m;
                edges.pop();
            }
        }
        Outline { edges, closed, unit }
    }

    pub fn length(&self) -> f64 {
        self.edges.iter().map(Primitive::length).sum()
    }

    pub fn straight_edges(&self) -> impl Iterator<Item = &Primitive> {
        self.edges.iter().filter(|e| !e.is_arc())
    }

    /// Signed turns at joints between consecutive edges, including the
    /// closing joint of a closed outline.
    pub fn joint_turns(&self) -> Vec<f64> {
        let n = self.edges.len();
        let joints = if self.closed { n } else { n.saturating_sub(1) };
        (0..joints)
            .map(|i| {
                let a = &self.edges[i];
                let b = &self.edges[(i + 1) % n];
                turn_between(a.end_tangent(), b.start_tangent())
            })
            .collect()
    }
}

pub fn outlines(bp: &BasePath) -> Vec<Outline> {
    bp.components.iter().map(Outline::of).collect()
}

/// Flattened outline. Closed polylines do not repeat their first point.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub closed: bool,
}

fn chord_points(p: &Primitive, max_sagitta: f64) -> Vec<Point> {
    let Primitive::Arc { radius, sweep, .. } = *p else {
        return vec![p.end()];
    };
    let step = if max_sagitta >= radius {
        std::f64::consts::FRAC_PI_2
    } else {
        2.0 * (1.0 - max_sagitta / radius).acos()
    };
    let n = ((sweep.abs() / step).ceil() as usize).max(2);
    let len = p.length();
    (1..=n).map(|k| p.point_at(len * k as f64 / n as f64)).collect()
}

/// Flatten arcs into chords with sagitta at most `tol` unit lengths.
pub fn polygonize(o: &Outline, tol: f64) -> Polyline {
    let mut points = Vec::new();
    if let Some(first) = o.edges.first() {
        points.push(first.start());
    }
    for e in &o.edges {
        points.extend(chord_points(e, tol * o.unit));
    }
    if o.closed && points.len() > 1 {
        points.pop();
    }
    Polyline { points, closed: o.closed }
}

/// Merged, flattened polyline for every component.
pub fn canonical_polygonization(bp: &BasePath, tol: f64) -> Vec<Polyline> {
    outlines(bp).iter().map(|o| polygonize(o, tol)).collect()
}
