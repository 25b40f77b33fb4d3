//! Planar points, segments and circular arcs.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn rotate(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub const EMPTY: Rect = Rect {
        min: Point::new(f64::INFINITY, f64::INFINITY),
        max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    };

    pub fn new(min: Point, max: Point) -> Self {
        Rect { min, max }
    }

    pub fn include(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(mut self, o: Rect) -> Rect {
        self.include(o.min);
        self.include(o.max);
        self
    }

    pub fn expand(self, pad: f64) -> Rect {
        Rect::new(
            self.min - Point::new(pad, pad),
            self.max + Point::new(pad, pad),
        )
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Separation between two boxes; zero when they overlap.
    pub fn gap(&self, o: &Rect) -> f64 {
        let dx = (o.min.x - self.max.x).max(self.min.x - o.max.x).max(0.0);
        let dy = (o.min.y - self.max.y).max(self.min.y - o.max.y).max(0.0);
        dx.max(dy)
    }

    pub fn of_points<'a>(pts: impl IntoIterator<Item = &'a Point>) -> Rect {
        let mut r = Rect::EMPTY;
        for p in pts {
            r.include(*p);
        }
        r
    }
}

/// Wrap an angle into `[0, 2π)`.
pub fn wrap_tau(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_pi(theta: f64) -> f64 {
    let w = wrap_tau(theta);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Signed turn from direction `a` to direction `b`, in `(-π, π]`.
pub fn turn_between(a: Point, b: Point) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Primitive {
    Segment {
        p0: Point,
        p1: Point,
    },
    /// Angles in radians; positive sweep is counter-clockwise.
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl Primitive {
    pub fn start(&self) -> Point {
        match *self {
            Primitive::Segment { p0, .. } => p0,
            Primitive::Arc { center, radius, start_angle, .. } => {
                center + Point::from_angle(start_angle) * radius
            }
        }
    }

    pub fn end(&self) -> Point {
        match *self {
            Primitive::Segment { p1, .. } => p1,
            Primitive::Arc { center, radius, start_angle, sweep } => {
                center + Point::from_angle(start_angle + sweep) * radius
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Primitive::Segment { p0, p1 } => p0.dist(p1),
            Primitive::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn is_arc(&self) -> bool {
        matches!(self, Primitive::Arc { .. })
    }

    /// Point at arc-length `s` from the start.
    pub fn point_at(&self, s: f64) -> Point {
        match *self {
            Primitive::Segment { p0, p1 } => {
                let len = p0.dist(p1);
                if len == 0.0 {
                    p0
                } else {
                    p0.lerp(p1, s / len)
                }
            }
            Primitive::Arc { center, radius, start_angle, sweep } => {
                let theta = start_angle + sweep.signum() * s / radius;
                center + Point::from_angle(theta) * radius
            }
        }
    }

    /// Unit tangent in the direction of travel at arc-length `s`.
    pub fn tangent_at(&self, s: f64) -> Point {
        match *self {
            Primitive::Segment { p0, p1 } => {
                let d = p1 - p0;
                let n = d.norm();
                if n == 0.0 {
                    Point::new(1.0, 0.0)
                } else {
                    d * (1.0 / n)
                }
            }
            Primitive::Arc { radius, start_angle, sweep, .. } => {
                let theta = start_angle + sweep.signum() * s / radius;
                Point::from_angle(theta).perp() * sweep.signum()
            }
        }
    }

    pub fn start_tangent(&self) -> Point {
        self.tangent_at(0.0)
    }

    pub fn end_tangent(&self) -> Point {
        self.tangent_at(self.length())
    }

    /// The piece between arc-lengths `s0 < s1`.
    pub fn sub(&self, s0: f64, s1: f64) -> Primitive {
        match *self {
            Primitive::Segment { .. } => Primitive::Segment {
                p0: self.point_at(s0),
                p1: self.point_at(s1),
            },
            Primitive::Arc { center, radius, start_angle, sweep } => {
                let sign = sweep.signum();
                Primitive::Arc {
                    center,
                    radius,
                    start_angle: start_angle + sign * s0 / radius,
                    sweep: sign * (s1 - s0) / radius,
                }
            }
        }
    }

    pub fn bbox(&self) -> Rect {
        let mut r = Rect::EMPTY;
        r.include(self.start());
        r.include(self.end());
        if let Primitive::Arc { center, radius, start_angle, sweep } = *self {
            for k in 0..4 {
                let theta = k as f64 * PI / 2.0;
                if arc_param(start_angle, sweep, radius, theta, 0.0).is_some() {
                    r.include(center + Point::from_angle(theta) * radius);
                }
            }
        }
        r
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        match *self {
            Primitive::Segment { p0, p1 } => point_segment_distance(p, p0, p1),
            Primitive::Arc { center, radius, start_angle, sweep } => {
                let v = p - center;
                let theta = v.angle();
                if arc_param(start_angle, sweep, radius, theta, 0.0).is_some() {
                    (v.norm() - radius).abs()
                } else {
                    p.dist(self.start()).min(p.dist(self.end()))
                }
            }
        }
    }

    /// Sample points at arc-length spacing no larger than `pitch`, both ends included.
    pub fn sample(&self, pitch: f64) -> Vec<Point> {
        let len = self.length();
        let n = ((len / pitch).ceil() as usize).max(1);
        (0..=n).map(|k| self.point_at(len * k as f64 / n as f64)).collect()
    }

    pub fn translate(&self, d: Point) -> Primitive {
        match *self {
            Primitive::Segment { p0, p1 } => Primitive::Segment { p0: p0 + d, p1: p1 + d },
            Primitive::Arc { center, radius, start_angle, sweep } => Primitive::Arc {
                center: center + d,
                radius,
                start_angle,
                sweep,
            },
        }
    }

    /// Centroid of the curve itself (uniform density along arc length).
    pub fn centroid(&self) -> Point {
        match *self {
            Primitive::Segment { p0, p1 } => p0.lerp(p1, 0.5),
            Primitive::Arc { center, radius, start_angle, sweep } => {
                let t1 = start_angle + sweep;
                center
                    + Point::new(t1.sin() - start_angle.sin(), start_angle.cos() - t1.cos())
                        * (radius / sweep)
            }
        }
    }
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Arc-length parameter of polar angle `theta` on an arc, if it lies within
/// the sweep (extended by `slack` arc-length at both ends).
fn arc_param(start_angle: f64, sweep: f64, radius: f64, theta: f64, slack: f64) -> Option<f64> {
    let delta = if sweep >= 0.0 {
        wrap_tau(theta - start_angle)
    } else {
        wrap_tau(start_angle - theta)
    };
    let span = sweep.abs();
    let slack_ang = slack / radius;
    if delta <= span + slack_ang {
        Some((delta * radius).min(span * radius))
    } else if delta >= TAU - slack_ang {
        Some(0.0)
    } else {
        None
    }
}

/// A point shared by two primitives with the arc-length parameter on each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub point: Point,
    pub s_a: f64,
    pub s_b: f64,
    /// Part of a collinear (or co-circular) overlap rather than a crossing.
    pub overlap: bool,
}

/// All contacts between two primitives, within absolute tolerance `tol`.
pub fn intersect(a: &Primitive, b: &Primitive, tol: f64) -> Vec<Contact> {
    match (*a, *b) {
        (Primitive::Segment { p0, p1 }, Primitive::Segment { p0: q0, p1: q1 }) => {
            segment_segment(p0, p1, q0, q1, tol)
        }
        (Primitive::Segment { p0, p1 }, arc @ Primitive::Arc { .. }) => segment_arc(p0, p1, &arc, tol),
        (arc @ Primitive::Arc { .. }, Primitive::Segment { p0, p1 }) => segment_arc(p0, p1, &arc, tol)
            .into_iter()
            .map(|c| Contact { s_a: c.s_b, s_b: c.s_a, ..c })
            .collect(),
        (Primitive::Arc { .. }, Primitive::Arc { .. }) => arc_arc(a, b, tol),
    }
}

fn dedupe(mut cs: Vec<Contact>, tol: f64) -> Vec<Contact> {
    let mut out: Vec<Contact> = Vec::with_capacity(cs.len());
    cs.sort_by(|x, y| x.s_a.total_cmp(&y.s_a));
    for c in cs {
        if !out.iter().any(|o| o.point.dist(c.point) <= tol) {
            out.push(c);
        }
    }
    out
}

fn segment_segment(p0: Point, p1: Point, q0: Point, q1: Point, tol: f64) -> Vec<Contact> {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let l1 = d1.norm();
    let l2 = d2.norm();
    if l1 <= tol || l2 <= tol {
        // A degenerate segment touches the other if it lies on it.
        let (pt, other0, other1, a_is_point) = if l1 <= tol { (p0, q0, q1, true) } else { (q0, p0, p1, false) };
        if point_segment_distance(pt, other0, other1) <= tol {
            let od = other1 - other0;
            let ol = od.norm();
            let s_other = if ol == 0.0 { 0.0 } else { ((pt - other0).dot(od) / ol).clamp(0.0, ol) };
            let (s_a, s_b) = if a_is_point { (0.0, s_other) } else { (s_other, 0.0) };
            return vec![Contact { point: pt, s_a, s_b, overlap: false }];
        }
        return Vec::new();
    }
    let u1 = d1 * (1.0 / l1);
    let u2 = d2 * (1.0 / l2);
    let denom = u1.cross(u2);
    if denom.abs() <= 1e-12 {
        // Parallel: only collinear overlaps produce contacts.
        if (q0 - p0).cross(u1).abs() > tol {
            return Vec::new();
        }
        let t0 = (q0 - p0).dot(u1);
        let t1 = (q1 - p0).dot(u1);
        let lo = t0.min(t1).max(0.0);
        let hi = t0.max(t1).min(l1);
        if lo > hi + tol {
            return Vec::new();
        }
        let hi = hi.max(lo);
        let mut out = Vec::new();
        for s_a in [lo, hi] {
            let pt = p0 + u1 * s_a;
            let s_b = ((pt - q0).dot(u2)).clamp(0.0, l2);
            out.push(Contact { point: pt, s_a, s_b, overlap: true });
        }
        return dedupe(out, tol);
    }
    let w = q0 - p0;
    let s_a = w.cross(u2) / denom;
    let s_b = w.cross(u1) / denom;
    if s_a < -tol || s_a > l1 + tol || s_b < -tol || s_b > l2 + tol {
        return Vec::new();
    }
    let s_a = s_a.clamp(0.0, l1);
    let s_b = s_b.clamp(0.0, l2);
    vec![Contact { point: p0 + u1 * s_a, s_a, s_b, overlap: false }]
}

fn segment_arc(p0: Point, p1: Point, arc: &Primitive, tol: f64) -> Vec<Contact> {
    let Primitive::Arc { center, radius, start_angle, sweep } = *arc else {
        unreachable!()
    };
    let d = p1 - p0;
    let len = d.norm();
    if len <= tol {
        return if arc.distance_to(p0) <= tol {
            let theta = (p0 - center).angle();
            let s_b = arc_param(start_angle, sweep, radius, theta, tol).unwrap_or(0.0);
            vec![Contact { point: p0, s_a: 0.0, s_b, overlap: false }]
        } else {
            Vec::new()
        };
    }
    let u = d * (1.0 / len);
    let f = p0 - center;
    let b = f.dot(u);
    let c = f.dot(f) - radius * radius;
    let disc = b * b - c;
    // Distance from the center to the line, compared against the radius.
    let line_dist = f.cross(u).abs();
    let ts: Vec<f64> = if line_dist > radius + tol {
        return Vec::new();
    } else if disc <= 0.0 || (line_dist - radius).abs() <= tol {
        vec![-b]
    } else {
        let r = disc.sqrt();
        vec![-b - r, -b + r]
    };
    let mut out = Vec::new();
    for t in ts {
        if t < -tol || t > len + tol {
            continue;
        }
        let t = t.clamp(0.0, len);
        let pt = p0 + u * t;
        let theta = (pt - center).angle();
        if let Some(s_b) = arc_param(start_angle, sweep, radius, theta, tol) {
            out.push(Contact { point: pt, s_a: t, s_b, overlap: false });
        }
    }
    dedupe(out, tol)
}

fn arc_arc(a: &Primitive, b: &Primitive, tol: f64) -> Vec<Contact> {
    let Primitive::Arc { center: c1, radius: r1, start_angle: a1, sweep: w1 } = *a else {
        unreachable!()
    };
    let Primitive::Arc { center: c2, radius: r2, start_angle: a2, sweep: w2 } = *b else {
        unreachable!()
    };
    let d = c1.dist(c2);
    if d <= tol && (r1 - r2).abs() <= tol {
        // Same circle: contacts at the ends of the shared angular range.
        let mut out = Vec::new();
        for (arc_x, arc_y, x_is_a) in [(a, b, true), (b, a, false)] {
            for s in [0.0, arc_x.length()] {
                let pt = arc_x.point_at(s);
                if let Primitive::Arc { center, radius, start_angle, sweep } = *arc_y {
                    if let Some(s_other) = arc_param(start_angle, sweep, radius, (pt - center).angle(), tol) {
                        let (s_a, s_b) = if x_is_a { (s, s_other) } else { (s_other, s) };
                        out.push(Contact { point: pt, s_a, s_b, overlap: true });
                    }
                }
            }
        }
        return dedupe(out, tol);
    }
    if d > r1 + r2 + tol || d < (r1 - r2).abs() - tol || d <= tol {
        return Vec::new();
    }
    let u = (c2 - c1) * (1.0 / d);
    let along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h2 = r1 * r1 - along * along;
    let tangent = (d - (r1 + r2)).abs() <= tol || (d - (r1 - r2).abs()).abs() <= tol || h2 <= 0.0;
    let base = c1 + u * along;
    let pts = if tangent {
        vec![base]
    } else {
        let h = h2.sqrt();
        vec![base + u.perp() * h, base - u.perp() * h]
    };
    let mut out = Vec::new();
    for pt in pts {
        let s_a = arc_param(a1, w1, r1, (pt - c1).angle(), tol);
        let s_b = arc_param(a2, w2, r2, (pt - c2).angle(), tol);
        if let (Some(s_a), Some(s_b)) = (s_a, s_b) {
            out.push(Contact { point: pt, s_a, s_b, overlap: false });
        }
    }
    dedupe(out, tol)
}

/// Area enclosed by a closed polygon under the even-odd rule.
///
/// Self-intersecting outlines are handled exactly by decomposing the plane
/// into vertical slabs at every vertex and edge crossing.
pub fn even_odd_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let edges: Vec<(Point, Point)> = (0..n).map(|i| (poly[i], poly[(i + 1) % n])).collect();
    let mut xs: Vec<f64> = poly.iter().map(|p| p.x).collect();
    for i in 0..n {
        for j in i + 1..n {
            let (a0, a1) = edges[i];
            let (b0, b1) = edges[j];
            let d1 = a1 - a0;
            let d2 = b1 - b0;
            let denom = d1.cross(d2);
            if denom == 0.0 {
                continue;
            }
            let w = b0 - a0;
            let t = w.cross(d2) / denom;
            let u = w.cross(d1) / denom;
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
                xs.push(a0.x + d1.x * t);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut area = 0.0;
    let mut ys: Vec<(f64, f64, f64)> = Vec::new();
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 - x0 <= 0.0 {
            continue;
        }
        let xm = 0.5 * (x0 + x1);
        ys.clear();
        for &(a, b) in &edges {
            let (lo, hi) = if a.x < b.x { (a, b) } else { (b, a) };
            if lo.x < xm && xm < hi.x {
                let y_at = |x: f64| lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
                ys.push((y_at(xm), y_at(x0), y_at(x1)));
            }
        }
        ys.sort_by(|p, q| p.0.total_cmp(&q.0));
        for pair in ys.chunks_exact(2) {
            let left = pair[1].1 - pair[0].1;
            let right = pair[1].2 - pair[0].2;
            area += 0.5 * (left + right) * (x1 - x0);
        }
    }
    area
}

/// Signed shoelace area (positive for counter-clockwise).
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Convex hull (counter-clockwise, no repeated points) by monotone chain.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(p: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn distance_to_polygon_boundary(p: Point, poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> Primitive {
        Primitive::Segment {
            p0: Point::new(a.0, a.1),
            p1: Point::new(b.0, b.1),
        }
    }

    #[test]
    fn crossing_segments() {
        let cs = intersect(&seg((0.0, 0.0), (2.0, 2.0)), &seg((0.0, 2.0), (2.0, 0.0)), 1e-9);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].point.dist(Point::new(1.0, 1.0)) < 1e-12);
        assert!((cs[0].s_a - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn touching_and_collinear_segments() {
        let t = intersect(&seg((0.0, 0.0), (2.0, 0.0)), &seg((1.0, 0.0), (1.0, 1.0)), 1e-9);
        assert_eq!(t.len(), 1);
        let c = intersect(&seg((0.0, 0.0), (2.0, 0.0)), &seg((1.0, 0.0), (3.0, 0.0)), 1e-9);
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| x.overlap));
        assert!(intersect(&seg((0.0, 0.0), (1.0, 0.0)), &seg((0.0, 1.0), (1.0, 1.0)), 1e-9).is_empty());
    }

    #[test]
    fn segment_through_circle() {
        let circle = Primitive::Arc {
            center: Point::ORIGIN,
            radius: 1.0,
            start_angle: 0.0,
            sweep: TAU,
        };
        let cs = intersect(&seg((-2.0, 0.0), (2.0, 0.0)), &circle, 1e-9);
        assert_eq!(cs.len(), 2);
        let tangent = intersect(&seg((-2.0, 1.0), (2.0, 1.0)), &circle, 1e-9);
        assert_eq!(tangent.len(), 1);
        let half = Primitive::Arc {
            center: Point::ORIGIN,
            radius: 1.0,
            start_angle: 0.0,
            sweep: PI / 2.0,
        };
        let cs = intersect(&seg((-2.0, 0.5), (2.0, 0.5)), &half, 1e-9);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].point.x > 0.0);
    }

    #[test]
    fn tangent_circles_touch_once() {
        let a = Primitive::Arc { center: Point::new(0.0, 1.0), radius: 1.0, start_angle: -PI / 2.0, sweep: TAU };
        let b = Primitive::Arc { center: Point::new(0.0, -1.0), radius: 1.0, start_angle: PI / 2.0, sweep: -TAU };
        let cs = intersect(&a, &b, 1e-9);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].point.norm() < 1e-9);
    }

    #[test]
    fn arc_geometry() {
        let arc = Primitive::Arc { center: Point::new(0.0, 1.0), radius: 1.0, start_angle: -PI / 2.0, sweep: PI / 2.0 };
        assert!(arc.start().dist(Point::ORIGIN) < 1e-15);
        assert!(arc.end().dist(Point::new(1.0, 1.0)) < 1e-15);
        assert!(arc.start_tangent().dist(Point::new(1.0, 0.0)) < 1e-15);
        assert!(arc.end_tangent().dist(Point::new(0.0, 1.0)) < 1e-15);
        let b = arc.bbox();
        assert!((b.width() - 1.0).abs() < 1e-12 && (b.height() - 1.0).abs() < 1e-12);
        assert!((arc.distance_to(Point::new(0.0, 1.0)) - 1.0).abs() < 1e-15);
        let sub = arc.sub(0.0, arc.length() / 2.0);
        assert!((sub.length() - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn even_odd_area_cases() {
        let sq = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        assert!((even_odd_area(&sq) - 1.0).abs() < 1e-12);
        // Bow-tie: two triangles of area 1/4 each.
        let bow = [Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!((even_odd_area(&bow) - 0.5).abs() < 1e-12);
        assert!(signed_area(&bow).abs() < 1e-12);
    }

    #[test]
    fn hull_and_containment() {
        let pts = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 0.5), Point::new(2.0, 2.0), Point::new(0.0, 2.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!((signed_area(&hull) - 4.0).abs() < 1e-12);
        assert!(point_in_polygon(Point::new(1.0, 1.0), &pts));
        assert!(point_in_polygon(Point::new(1.0, 0.2), &pts));
        assert!(!point_in_polygon(Point::new(1.8, 0.5), &pts));
    }

    #[test]
    fn rect_gap() {
        let a = Rect::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
        let b = Rect::new(Point::new(3.0, 0.0), Point::new(4.0, 1.0));
        assert_eq!(a.gap(&b), 2.0);
        assert_eq!(a.gap(&a), 0.0);
    }
}
