//! Predicates on the flattened outline and the region it encloses.

use std::f64::consts::{PI, TAU};

use crate::geometry::{
    convex_hull, distance_to_polygon_boundary, even_odd_area, point_in_polygon, point_segment_distance, signed_area, turn_between, Point,
    Primitive, Rect,
};
use crate::render::BasePath;

use super::outline::{outlines, polygonize, Outline, COINCIDENT, STRAIGHT_TURN};

/// Chord sagitta used when flattening arcs, in unit lengths.
pub const POLY_TOL: f64 = 0.002;
/// Interior angles below this (degrees) are acute.
pub const ACUTE_LIMIT: f64 = 85.0;
/// A waist at most this fraction of the widest inscribed disc makes a neck.
pub const NECK_RATIO: f64 = 0.25;
/// Each side of a waist must hold at least this fraction of the area.
pub const NECK_MIN_PART: f64 = 0.2;
pub const THIN_AREA_RATIO: f64 = 0.25;
pub const THIN_RADIUS: f64 = 0.08;
const NECK_SAMPLES: usize = 128;

fn single_closed(bp: &BasePath) -> Option<Outline> {
    if bp.components.len() != 1 {
        return None;
    }
    let o = Outline::of(&bp.components[0]);
    o.closed.then_some(o)
}

pub fn closed_shape(bp: &BasePath) -> bool {
    !bp.components.is_empty() && bp.components.iter().all(|c| c.is_closed())
}

pub fn have_curve(bp: &BasePath) -> bool {
    bp.components
        .iter()
        .any(|c| c.nonzero_primitives().iter().any(Primitive::is_arc))
}

/// Turns at the vertices of a closed polygon, skipping repeated points.
fn vertex_turns(pts: &[Point]) -> Vec<f64> {
    let mut ring: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts {
        if ring.last().is_none_or(|q: &Point| q.dist(p) > 0.0) {
            ring.push(p);
        }
    }
    while ring.len() > 1 && ring[0].dist(ring[ring.len() - 1]) == 0.0 {
        ring.pop();
    }
    let n = ring.len();
    (0..n)
        .map(|i| {
            let prev = ring[(i + n - 1) % n];
            let next = ring[(i + 1) % n];
            turn_between(ring[i] - prev, next - ring[i])
        })
        .collect()
}

/// Single closed component turning one way, once around.
pub fn is_convex(bp: &BasePath) -> bool {
    let Some(o) = single_closed(bp) else {
        return false;
    };
    let poly = polygonize(&o, POLY_TOL);
    if poly.points.len() < 3 || even_odd_area(&poly.points) <= 0.0 {
        return false;
    }
    let turns = vertex_turns(&poly.points);
    let total: f64 = turns.iter().sum();
    let pos = turns.iter().any(|&t| t >= STRAIGHT_TURN);
    let neg = turns.iter().any(|&t| t <= -STRAIGHT_TURN);
    pos != neg && (total.abs() - TAU).abs() < 1e-6
}

/// Interior angle at some joint below `ACUTE_LIMIT` degrees.
/// On a simple closed outline only convex corners count (a reflex corner
/// has an interior angle above 180 degrees); elsewhere the angle between
/// the two edges is used.
pub fn have_acute_angle(bp: &BasePath) -> bool {
    let limit = PI - ACUTE_LIMIT.to_radians();
    outlines(bp).iter().any(|o| {
        let turns = o.joint_turns();
        let pts = polygonize(o, POLY_TOL).points;
        if o.closed && pts.len() >= 3 && is_simple(&pts) {
            let orient = signed_area(&pts).signum();
            turns.iter().any(|t| t * orient > limit)
        } else {
            turns.iter().any(|t| t.abs() > limit)
        }
    })
}

/// Four consecutive straight edges that close on themselves.
pub fn exist_quadrangle(bp: &BasePath) -> bool {
    outlines(bp).iter().any(|o| {
        let n = o.edges.len();
        if n < 4 {
            return false;
        }
        let windows = if o.closed { n } else { n - 3 };
        (0..windows).any(|i| {
            let quad: Vec<&Primitive> = (0..4).map(|k| &o.edges[(i + k) % n]).collect();
            if quad.iter().any(|e| e.is_arc()) {
                return false;
            }
            let closes = quad[0].start().dist(quad[3].end()) <= COINCIDENT * o.unit;
            let corners: Vec<Point> = quad.iter().map(|e| e.start()).collect();
            closes && even_odd_area(&corners) > COINCIDENT * o.unit * o.unit
        })
    })
}

/// A closed component made of one arc and two straight sides that meet at
/// the arc's center.
pub fn exist_sector(bp: &BasePath) -> bool {
    outlines(bp).iter().any(|o| {
        if !o.closed || o.edges.len() != 3 {
            return false;
        }
        let arcs: Vec<usize> = (0..3).filter(|&i| o.edges[i].is_arc()).collect();
        let [k] = arcs[..] else {
            return false;
        };
        let Primitive::Arc { center, .. } = o.edges[k] else {
            return false;
        };
        o.edges[(k + 1) % 3].end().dist(center) <= COINCIDENT * o.unit
    })
}

/// Whether the polygon crosses or touches itself away from its own joints.
fn is_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    let bbox = Rect::of_points(pts);
    let eps = COINCIDENT * bbox.width().max(bbox.height());
    for i in 0..n {
        let (a0, a1) = (pts[i], pts[(i + 1) % n]);
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (b0, b1) = (pts[j], pts[(j + 1) % n]);
            if segments_touch(a0, a1, b0, b1, eps) {
                return false;
            }
        }
    }
    true
}

/// Crossing, or an end point within `eps` of the other segment.
fn segments_touch(a0: Point, a1: Point, b0: Point, b1: Point, eps: f64) -> bool {
    properly_crosses(a0, a1, b0, b1)
        || point_segment_distance(b0, a0, a1) <= eps
        || point_segment_distance(b1, a0, a1) <= eps
        || point_segment_distance(a0, b0, b1) <= eps
        || point_segment_distance(a1, b0, b1) <= eps
}

fn properly_crosses(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let d1 = (a1 - a0).cross(b0 - a0);
    let d2 = (a1 - a0).cross(b1 - a0);
    let d3 = (b1 - b0).cross(a0 - b0);
    let d4 = (b1 - b0).cross(a1 - b0);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn diameter(pts: &[Point]) -> f64 {
    let hull = convex_hull(pts);
    let mut d: f64 = 0.0;
    for (i, a) in hull.iter().enumerate() {
        for b in &hull[i..] {
            d = d.max(a.dist(*b));
        }
    }
    d
}

/// Radius of the largest disc inside the polygon (even-odd interior).
pub fn max_inscribed_radius(pts: &[Point]) -> f64 {
    const GRID: usize = 24;
    let bbox = Rect::of_points(pts);
    let (w, h) = (bbox.width(), bbox.height());
    let cell = w.max(h) / GRID as f64;
    if cell == 0.0 {
        return 0.0;
    }
    let value = |p: Point| {
        if point_in_polygon(p, pts) {
            distance_to_polygon_boundary(p, pts)
        } else {
            -1.0
        }
    };
    let mut cands: Vec<(f64, Point)> = Vec::new();
    let nx = (w / cell).ceil().max(1.0) as usize;
    let ny = (h / cell).ceil().max(1.0) as usize;
    for i in 0..nx {
        for j in 0..ny {
            let p = Point::new(bbox.min.x + (i as f64 + 0.5) * cell, bbox.min.y + (j as f64 + 0.5) * cell);
            let v = value(p);
            if v > 0.0 {
                cands.push((v, p));
            }
        }
    }
    if cands.is_empty() {
        // Very thin regions can fall between grid centres; fall back to
        // midpoints of short chords between boundary vertices.
        let n = pts.len();
        for i in 0..n {
            for j in i + 1..n {
                let p = pts[i].lerp(pts[j], 0.5);
                let v = value(p);
                if v > 0.0 {
                    cands.push((v, p));
                }
            }
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    let floor = 1e-4 * w.max(h);
    let mut best: f64 = 0.0;
    for &(v0, p0) in cands.iter().take(4) {
        let (mut v, mut p) = (v0, p0);
        let mut step = cell;
        while step > floor {
            let mut moved = false;
            for k in 0..8 {
                let q = p + Point::from_angle(k as f64 * PI / 4.0) * step;
                let vq = value(q);
                if vq > v {
                    v = vq;
                    p = q;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best = best.max(equidistant_refine(p, v, pts, &value));
    }
    best
}

/// The largest disc touches three edges. Starting from a point near the
/// optimum, solve for the centres equidistant from triples of nearby edge
/// lines and keep any that improve the true clearance.
fn equidistant_refine(p: Point, v: f64, pts: &[Point], value: &impl Fn(Point) -> f64) -> f64 {
    let n = pts.len();
    let mut near: Vec<(f64, usize)> = (0..n).map(|i| (point_segment_distance(p, pts[i], pts[(i + 1) % n]), i)).collect();
    near.sort_by(|a, b| a.0.total_cmp(&b.0));
    near.truncate(6);
    // Each edge line as unit normal `u` and offset `c`, signed so p is on the positive side.
    let lines: Vec<(Point, f64)> = near
        .iter()
        .filter_map(|&(_, i)| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let len = a.dist(b);
            if len == 0.0 {
                return None;
            }
            let u = (b - a).perp() * (1.0 / len);
            let c = u.dot(a);
            Some(if u.dot(p) >= c { (u, c) } else { (u * -1.0, -c) })
        })
        .collect();
    let mut best = v;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            for k in j + 1..lines.len() {
                // u.q - r = c for each of the three lines.
                let rows = [lines[i], lines[j], lines[k]];
                let m = rows.map(|(u, _)| [u.x, u.y, -1.0]);
                let rhs = rows.map(|(_, c)| c);
                let Some([x, y, r]) = solve3(m, rhs) else { continue };
                if r <= best {
                    continue;
                }
                let q = Point::new(x, y);
                best = best.max(value(q));
            }
        }
    }
    best
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |a: [[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-12 {
        return None;
    }
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let mut a = m;
        for r in 0..3 {
            a[r][c] = rhs[r];
        }
        *o = det(a) / d;
    }
    Some(out)
}

/// Closed points along the polygon boundary: every vertex plus `extra`
/// evenly spaced points, in boundary order.
fn densify(pts: &[Point], extra: usize) -> Vec<Point> {
    let n = pts.len();
    let lens: Vec<f64> = (0..n).map(|i| pts[i].dist(pts[(i + 1) % n])).collect();
    let total: f64 = lens.iter().sum();
    let step = total / extra as f64;
    let mut out = Vec::new();
    let mut acc = 0.0;
    let mut next = 0.0;
    for i in 0..n {
        out.push(pts[i]);
        let end = acc + lens[i];
        while next < end {
            if next > acc {
                out.push(pts[i].lerp(pts[(i + 1) % n], (next - acc) / lens[i]));
            }
            next += step;
        }
        acc = end;
    }
    out
}

fn chord_inside(a: Point, b: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    for i in 0..n {
        if properly_crosses(a, b, poly[i], poly[(i + 1) % n]) {
            return false;
        }
    }
    (1..16).all(|k| point_in_polygon(a.lerp(b, k as f64 / 16.0), poly))
}

/// Length of the shortest interior chord cutting the region into two parts
/// each holding at least `NECK_MIN_PART` of the area.
pub fn waist(pts: &[Point]) -> Option<f64> {
    let ring = densify(pts, NECK_SAMPLES);
    let m = ring.len();
    let mut prefix = vec![0.0; m + 1];
    for k in 0..m {
        prefix[k + 1] = prefix[k] + ring[k].cross(ring[(k + 1) % m]);
    }
    let total = 0.5 * prefix[m];
    let area = total.abs();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..m {
        for j in i + 2..m {
            let part = 0.5 * (prefix[j] - prefix[i] + ring[j].cross(ring[i])) * total.signum();
            if part >= NECK_MIN_PART * area && area - part >= NECK_MIN_PART * area {
                pairs.push((ring[i].dist(ring[j]), i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
        .into_iter()
        .find(|&(_, i, j)| chord_inside(ring[i], ring[j], pts))
        .map(|(d, _, _)| d)
}

/// A simple closed region pinched to a narrow waist.
pub fn is_necked(bp: &BasePath) -> bool {
    let Some(o) = single_closed(bp) else {
        return false;
    };
    let pts = polygonize(&o, POLY_TOL).points;
    if pts.len() < 3 || !is_simple(&pts) {
        return false;
    }
    let r = max_inscribed_radius(&pts);
    match waist(&pts) {
        Some(w) => r > 0.0 && w <= NECK_RATIO * 2.0 * r,
        None => false,
    }
}

/// Closed, and either much smaller than its hull or nowhere wide.
pub fn is_thin(bp: &BasePath) -> bool {
    if !closed_shape(bp) {
        return false;
    }
    let polys: Vec<Vec<Point>> = outlines(bp).iter().map(|o| polygonize(o, POLY_TOL).points).collect();
    let all: Vec<Point> = polys.iter().flatten().copied().collect();
    let hull_area = signed_area(&convex_hull(&all)).abs();
    let area: f64 = polys.iter().map(|p| even_odd_area(p)).sum();
    if hull_area <= 0.0 || area <= THIN_AREA_RATIO * hull_area {
        return true;
    }
    let r = polys.iter().map(|p| max_inscribed_radius(p)).fold(0.0, f64::max);
    r <= THIN_RADIUS * diameter(&all)
}
