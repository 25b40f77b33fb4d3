//! Reference implementations and shape generators shared by the
//! integration tests. Nothing here calls the predicates under test.
#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use bongard_core::dsl::{ActionKind, ActionProgram, BaseAction, MovingType, ValueGrid};
use bongard_core::geometry::{Point, Primitive};
use bongard_core::library::Library;
use bongard_core::render::{execute_program, BasePath, Component, Pose};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SYMMETRY_TOL: f64 = 0.02;
pub const PINCH_BALL: f64 = 0.02;
pub const MIN_LOOP: f64 = 0.1;

fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

fn dot(a: Point, b: Point) -> f64 {
    a.x * b.x + a.y * b.y
}

fn len(a: Point) -> f64 {
    a.x.hypot(a.y)
}

/// Signed angle from direction `a` to direction `b`.
fn turn(a: Point, b: Point) -> f64 {
    cross(a, b).atan2(dot(a, b))
}

fn shoelace(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| cross(pts[i], pts[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Andrew's monotone chain.
fn hull(points: &[Point]) -> Vec<Point> {
    let mut p: Vec<Point> = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    p.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 1] - lower[lower.len() - 2], q - lower[lower.len() - 2]) <= 0.0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 1] - upper[upper.len() - 2], q - upper[upper.len() - 2]) <= 0.0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn closed(c: &Component) -> bool {
    let first = c.primitives.first().map(|p| p.start());
    let last = c.primitives.last().map(|p| p.end());
    match (first, last) {
        (Some(a), Some(b)) => len(a - b) <= 1e-6 * c.pose.unit_length,
        _ => false,
    }
}

/// Points at spacing at most `pitch` along a component, closing point
/// excluded for closed components.
fn ring(c: &Component, pitch: f64) -> Vec<Point> {
    let mut out = Vec::new();
    for p in &c.primitives {
        let l = p.length();
        if l == 0.0 {
            continue;
        }
        let n = (l / pitch).ceil().max(1.0) as usize;
        out.extend((0..n).map(|k| p.point_at(l * k as f64 / n as f64)));
    }
    if !closed(c) {
        if let Some(p) = c.primitives.last() {
            out.push(p.end());
        }
    }
    out
}

// ---------------------------------------------------------------- convexity

/// Convex iff the outline encloses exactly its convex hull.
pub fn convex_by_hull(bp: &BasePath) -> bool {
    if bp.components.len() != 1 || !closed(&bp.components[0]) {
        return false;
    }
    let c = &bp.components[0];
    let pts = ring(c, c.pose.unit_length * 0.002);
    if pts.len() < 3 {
        return false;
    }
    let area = shoelace(&pts).abs();
    let h = shoelace(&hull(&pts)).abs();
    area > 0.0 && (h - area).abs() <= 1e-6 * h
}

/// Arc from `a` to `b` turning by `sweep` radians (positive is
/// counter-clockwise).
pub fn arc_between(a: Point, b: Point, sweep: f64) -> Primitive {
    let chord = b - a;
    let c = len(chord);
    let r = c / (2.0 * (sweep.abs() / 2.0).sin());
    let normal = Point::new(-chord.y / c, chord.x / c);
    let mid = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
    let offset = r * (sweep.abs() / 2.0).cos() * sweep.signum();
    let center = Point::new(mid.x + normal.x * offset, mid.y + normal.y * offset);
    let start_angle = (a.y - center.y).atan2(a.x - center.x);
    Primitive::Arc { center, radius: r, start_angle, sweep }
}

fn tangent_out(p: &Primitive) -> Point {
    match *p {
        Primitive::Segment { p0, p1 } => p1 - p0,
        Primitive::Arc { start_angle, sweep, .. } => {
            let t = start_angle + sweep;
            Point::new(-t.sin() * sweep.signum(), t.cos() * sweep.signum())
        }
    }
}

fn tangent_in(p: &Primitive) -> Point {
    match *p {
        Primitive::Segment { p0, p1 } => p1 - p0,
        Primitive::Arc { start_angle, sweep, .. } => {
            Point::new(-start_angle.sin() * sweep.signum(), start_angle.cos() * sweep.signum())
        }
    }
}

fn polygon_angles<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut a: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    a.sort_by(f64::total_cmp);
    a
}

/// A random closed outline of segments and arcs: convex polygons,
/// star-shaped polygons, polygons in random vertex order and polygons with
/// some edges bent into arcs. Every joint turns by at least 2 degrees and
/// at most 178, so no vertex sits on the collinearity tolerance.
pub fn random_closed_path<R: Rng + ?Sized>(rng: &mut R) -> BasePath {
    loop {
        let style = rng.random_range(0..4);
        let verts: Vec<Point> = match style {
            0 => {
                let b = rng.random_range(0.4..1.0);
                let k = rng.random_range(3..=9);
                polygon_angles(rng, k).iter().map(|t| Point::new(t.cos(), b * t.sin())).collect()
            }
            1 | 3 => {
                let k = rng.random_range(4..=10);
                polygon_angles(rng, k)
                    .iter()
                    .map(|t| {
                        let r = rng.random_range(0.3..1.0);
                        Point::new(r * t.cos(), r * t.sin())
                    })
                    .collect()
            }
            _ => (0..rng.random_range(4..=7)).map(|_| Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
        };
        let unit = rng.random_range(40.0..200.0);
        let rot = rng.random_range(0.0..2.0 * PI);
        let shift = Point::new(rng.random_range(0.0..500.0), rng.random_range(0.0..500.0));
        let place = |p: Point| {
            let q = p.rotate(rot);
            Point::new(q.x * unit + shift.x, q.y * unit + shift.y)
        };
        let pts: Vec<Point> = verts.into_iter().map(place).collect();
        let n = pts.len();
        let prims: Vec<Primitive> = (0..n)
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % n]);
                if style == 3 && rng.random_bool(0.4) {
                    let w = rng.random_range(10f64..150.0).to_radians();
                    arc_between(a, b, if rng.random_bool(0.5) { w } else { -w })
                } else {
                    Primitive::Segment { p0: a, p1: b }
                }
            })
            .collect();
        if prims.iter().any(|p| p.length() < 1e-3 * unit) {
            continue;
        }
        let ok = (0..n).all(|i| {
            let t = turn(tangent_out(&prims[i]), tangent_in(&prims[(i + 1) % n])).abs().to_degrees();
            (2.0..=178.0).contains(&t)
        });
        if ok {
            return BasePath::from_primitives(prims, unit);
        }
    }
}

// ----------------------------------------------------------- line counting

struct Run {
    p0: Point,
    p1: Point,
    unit: f64,
}

fn straight_runs(bp: &BasePath) -> Vec<Run> {
    let mut out = Vec::new();
    for c in &bp.components {
        let unit = c.pose.unit_length;
        let mut runs: Vec<Run> = Vec::new();
        for p in &c.primitives {
            let Primitive::Segment { p0, p1 } = *p else {
                panic!("line oracle expects segments only");
            };
            if len(p1 - p0) == 0.0 {
                continue;
            }
            if let Some(last) = runs.last_mut() {
                if turn(last.p1 - last.p0, p1 - p0).abs() < 1f64.to_radians() {
                    last.p1 = p1;
                    continue;
                }
            }
            runs.push(Run { p0, p1, unit });
        }
        if closed(c) && runs.len() > 1 {
            let (first, last) = (&runs[0], &runs[runs.len() - 1]);
            if turn(last.p1 - last.p0, first.p1 - first.p0).abs() < 1f64.to_radians() {
                runs[0].p0 = last.p0;
                runs.pop();
            }
        }
        out.extend(runs);
    }
    out
}

pub fn continuous_lines_oracle(bp: &BasePath) -> usize {
    straight_runs(bp).len()
}

/// Every run cut at each distinct interior point where another run crosses
/// or touches it; collinear overlaps do not cut.
pub fn split_lines_oracle(bp: &BasePath) -> usize {
    let runs = straight_runs(bp);
    let mut total = 0;
    for (i, r) in runs.iter().enumerate() {
        let d1 = r.p1 - r.p0;
        let l1 = len(d1);
        let eps = 1e-7 * r.unit;
        let mut cuts: Vec<Point> = Vec::new();
        for (j, s) in runs.iter().enumerate() {
            if i == j {
                continue;
            }
            let d2 = s.p1 - s.p0;
            let den = cross(d1, d2);
            if den.abs() <= 1e-12 * l1 * len(d2) {
                continue;
            }
            let w = s.p0 - r.p0;
            let t = cross(w, d2) / den;
            let u = cross(w, d1) / den;
            let tol_u = 1e-9 * r.unit / len(d2);
            if u < -tol_u || u > 1.0 + tol_u {
                continue;
            }
            let along = t * l1;
            if along <= eps || along >= l1 - eps {
                continue;
            }
            let p = Point::new(r.p0.x + d1.x * t, r.p0.y + d1.y * t);
            if !cuts.iter().any(|q| len(*q - p) <= eps) {
                cuts.push(p);
            }
        }
        total += cuts.len() + 1;
    }
    total
}

/// Random line-only paths: one or two shapes with overlapping placements,
/// values from the default grid or drawn continuously.
pub fn random_line_path<R: Rng + ?Sized>(rng: &mut R) -> BasePath {
    let grid = ValueGrid::default();
    let on_grid = rng.random_bool(0.5);
    let shapes = if rng.random_bool(0.3) { 2 } else { 1 };
    let mut actions = Vec::new();
    let mut poses = Vec::new();
    for _ in 0..shapes {
        let n = rng.random_range(2..=9);
        let shape: Vec<BaseAction> = (0..n)
            .map(|_| {
                let (l, a) = if on_grid {
                    (*grid.lengths.choose(rng).unwrap(), *grid.angles.choose(rng).unwrap())
                } else {
                    (rng.random_range(0.1..1.0), rng.random_range(0.0..1.0))
                };
                BaseAction::new(ActionKind::Line, MovingType::Normal, l, a)
            })
            .collect();
        actions.push(shape);
        poses.push(Pose {
            origin: Point::new(rng.random_range(150.0..350.0), rng.random_range(150.0..350.0)),
            heading: rng.random_range(0.0..360.0),
            unit_length: rng.random_range(40.0..150.0),
        });
    }
    execute_program(&ActionProgram::new(actions).unwrap(), &poses).unwrap()
}

// ----------------------------------------------------------------- symmetry

/// Dense polyline samples with a bucket grid for "is anything within r".
pub struct Sampled {
    pub points: Vec<Point>,
    pub centroid: Point,
    pub diameter: f64,
    segs: Vec<(Point, Point)>,
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

fn seg_dist(q: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = dot(d, d);
    let t = if l2 == 0.0 { 0.0 } else { (dot(q - a, d) / l2).clamp(0.0, 1.0) };
    len(q - Point::new(a.x + d.x * t, a.y + d.y * t))
}

impl Sampled {
    pub fn of(bp: &BasePath, n: usize, radius_frac: f64) -> Sampled {
        let total: f64 = bp.components.iter().flat_map(|c| &c.primitives).map(Primitive::length).sum();
        let pitch = total / n as f64;
        let mut points = Vec::new();
        let mut segs = Vec::new();
        let (mut cx, mut cy, mut w) = (0.0, 0.0, 0.0);
        for c in &bp.components {
            for p in &c.primitives {
                let l = p.length();
                if l == 0.0 {
                    continue;
                }
                let k = (l / pitch).ceil().max(1.0) as usize;
                let h = l / k as f64;
                let mut prev = p.start();
                for i in 0..k {
                    let m = p.point_at((i as f64 + 0.5) * h);
                    cx += m.x * h;
                    cy += m.y * h;
                    w += h;
                    let next = p.point_at((i + 1) as f64 * h);
                    segs.push((prev, next));
                    points.push(prev);
                    prev = next;
                }
                points.push(prev);
            }
        }
        let centroid = Point::new(cx / w, cy / w);
        let h = hull(&points);
        let mut diameter: f64 = 0.0;
        for (i, a) in h.iter().enumerate() {
            for b in &h[i + 1..] {
                diameter = diameter.max(len(*a - *b));
            }
        }
        let cell = radius_frac * diameter + pitch;
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, (a, b)) in segs.iter().enumerate() {
            let m = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
            buckets.entry(((m.x / cell).floor() as i64, (m.y / cell).floor() as i64)).or_default().push(i);
        }
        Sampled { points, centroid, diameter, segs, cell, buckets }
    }

    /// Whether the curve passes within `r` of `q`; `r` must not exceed the
    /// radius the grid was built for.
    pub fn near(&self, q: Point, r: f64) -> bool {
        let (ix, iy) = ((q.x / self.cell).floor() as i64, (q.y / self.cell).floor() as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = self.buckets.get(&(ix + dx, iy + dy)) {
                    if v.iter().any(|&i| seg_dist(q, self.segs[i].0, self.segs[i].1) <= r) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn maps_onto_itself(&self, map: impl Fn(Point) -> Point) -> bool {
        let tol = SYMMETRY_TOL * self.diameter;
        self.points.iter().all(|&p| self.near(map(p), tol))
    }
}

/// Mirror symmetry by brute force over 2880 axes through the centroid,
/// four times the resolution of the predicate's grid and without
/// refinement.
pub fn symmetric_by_search(bp: &BasePath) -> bool {
    let s = Sampled::of(bp, 2000, SYMMETRY_TOL);
    let c = s.centroid;
    (0..2880).any(|k| {
        let phi = k as f64 * PI / 2880.0;
        let u = Point::new(phi.cos(), phi.sin());
        s.maps_onto_itself(|p| {
            let v = p - c;
            let d = 2.0 * dot(v, u);
            Point::new(c.x + u.x * d - v.x, c.y + u.y * d - v.y)
        })
    })
}

/// Point symmetry about any center on a 21 x 21 grid around the centroid
/// (spacing 0.0025 diameters).
pub fn self_transposed_by_search(bp: &BasePath) -> bool {
    let s = Sampled::of(bp, 2000, SYMMETRY_TOL);
    let step = 0.0025 * s.diameter;
    (-10..=10).any(|i| {
        (-10..=10).any(|j| {
            let c = Point::new(s.centroid.x + i as f64 * step, s.centroid.y + j as f64 * step);
            s.maps_onto_itself(|p| Point::new(2.0 * c.x - p.x, 2.0 * c.y - p.y))
        })
    })
}

fn stroke(kind: ActionKind, length: f64, turn_deg: f64) -> BaseAction {
    BaseAction::new(kind, MovingType::Normal, length, (turn_deg / 360.0 + 0.5).clamp(0.0, 1.0))
}

#[derive(Clone, Copy)]
enum Move {
    Turn(f64),
    Straight(f64),
    Bend(f64, f64),
}

fn moves_to_actions(moves: &[Move]) -> Vec<BaseAction> {
    let mut out = Vec::new();
    let mut pending: Option<f64> = None;
    for m in moves {
        match *m {
            Move::Turn(t) => {
                if let Some(p) = pending.take() {
                    out.push(stroke(ActionKind::Line, 0.0, p));
                }
                pending = Some(t);
            }
            Move::Straight(l) => out.push(stroke(ActionKind::Line, l, pending.take().unwrap_or(0.0))),
            Move::Bend(l, w) => {
                if let Some(p) = pending.take() {
                    out.push(stroke(ActionKind::Line, 0.0, p));
                }
                out.push(stroke(ActionKind::Arc, l, w));
            }
        }
    }
    out
}

fn random_move<R: Rng + ?Sized>(rng: &mut R) -> Move {
    if rng.random_bool(0.25) {
        let w = rng.random_range(20.0..170.0);
        Move::Bend(rng.random_range(0.2..1.0), if rng.random_bool(0.5) { w } else { -w })
    } else {
        Move::Straight(rng.random_range(0.2..1.0))
    }
}

fn random_turn<R: Rng + ?Sized>(rng: &mut R) -> Move {
    Move::Turn(rng.random_range(-170.0..170.0))
}

/// Mirror-symmetric by construction: the moves read the same backwards.
pub fn palindrome_program<R: Rng + ?Sized>(rng: &mut R) -> Vec<BaseAction> {
    let half = rng.random_range(1..=3);
    let mut moves = vec![random_move(rng)];
    for _ in 1..half {
        moves.push(random_turn(rng));
        moves.push(random_move(rng));
    }
    let mut full = moves.clone();
    if rng.random_bool(0.5) {
        // Odd palindrome: a middle move instead of a middle turn.
        full.push(random_turn(rng));
        full.push(random_move(rng));
        full.push(full[full.len() - 2]);
    } else {
        full.push(random_turn(rng));
    }
    full.extend(moves.iter().rev());
    moves_to_actions(&full)
}

/// Point-symmetric by construction: a motif turning 180 degrees in total,
/// drawn twice.
pub fn twice_turned_program<R: Rng + ?Sized>(rng: &mut R) -> Vec<BaseAction> {
    let n = rng.random_range(1..=3);
    let mut motif = Vec::new();
    let mut heading = 0.0;
    for _ in 0..n {
        let t = rng.random_range(-150.0..150.0);
        heading += t;
        motif.push(Move::Turn(t));
        let m = random_move(rng);
        if let Move::Bend(_, w) = m {
            heading += w;
        }
        motif.push(m);
    }
    // Fold the first turn so the motif turns by exactly 180 degrees.
    let Move::Turn(t0) = motif[0] else { unreachable!() };
    let fixed = (t0 + 180.0 - heading).rem_euclid(360.0);
    let fixed = if fixed > 180.0 { fixed - 360.0 } else { fixed };
    motif[0] = Move::Turn(fixed);
    let mut full = motif.clone();
    full.extend(motif);
    moves_to_actions(&full)
}

/// Nudge one numeric argument by a random amount.
pub fn perturb<R: Rng + ?Sized>(actions: &mut [BaseAction], rng: &mut R) {
    let i = rng.random_range(0..actions.len());
    let a = &mut actions[i];
    let d = rng.random_range(0.005..0.08) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    if rng.random_bool(0.5) && a.length > 0.1 {
        a.length = (a.length + d).clamp(0.05, 1.0);
    } else {
        let next = (a.angle + d / 4.0).clamp(0.0, 1.0);
        if !(a.kind == ActionKind::Arc && (next - 0.5).abs() < 0.01) {
            a.angle = next;
        }
    }
}

pub fn random_pose<R: Rng + ?Sized>(rng: &mut R) -> Pose {
    Pose {
        origin: Point::new(rng.random_range(100.0..400.0), rng.random_range(100.0..400.0)),
        heading: rng.random_range(0.0..360.0),
        unit_length: rng.random_range(30.0..120.0),
    }
}

pub fn execute_single(actions: Vec<BaseAction>, pose: Pose) -> Option<BasePath> {
    let p = ActionProgram::single(actions).ok()?;
    execute_program(&p, &[pose]).ok()
}

// -------------------------------------------------------------- pinch points

/// Whether removing a small ball around some point where the curve meets
/// itself leaves two unlinked pieces, each at least a tenth of the length.
pub fn two_parts_by_components(bp: &BasePath) -> bool {
    if bp.components.len() != 1 || !closed(&bp.components[0]) {
        return false;
    }
    let s = Sampled::of(bp, 2000, 0.0);
    let diameter = s.diameter;
    let ball = PINCH_BALL * diameter;
    let c = &bp.components[0];
    let pts = ring(c, ball / 20.0);
    let n = pts.len();
    let pitch = pts.iter().enumerate().map(|(i, p)| len(pts[(i + 1) % n] - *p)).fold(0.0, f64::max);
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);

    // Segment pairs that cross or nearly touch, found through a bucket grid.
    let cell = 2.0 * pitch;
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        buckets.entry(((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)).or_default().push(i);
    }
    let gap = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        d.min(n - d)
    };
    let mut touching: Vec<(usize, usize, Point)> = Vec::new();
    for (&(bx, by), list) in &buckets {
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(other) = buckets.get(&(bx + dx, by + dy)) else { continue };
                for &i in list {
                    for &j in other {
                        if j <= i || gap(i, j) < 3 {
                            continue;
                        }
                        let (a0, a1) = seg(i);
                        let (b0, b1) = seg(j);
                        let d = seg_dist(a0, b0, b1).min(seg_dist(a1, b0, b1)).min(seg_dist(b0, a0, a1)).min(seg_dist(b1, a0, a1));
                        let crossing = {
                            let (da, db) = (a1 - a0, b1 - b0);
                            let den = cross(da, db);
                            den != 0.0 && {
                                let t = cross(b0 - a0, db) / den;
                                let u = cross(b0 - a0, da) / den;
                                (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)
                            }
                        };
                        if crossing || d <= 0.05 * pitch {
                            touching.push((i, j, a0));
                        }
                    }
                }
            }
        }
    }
    touching.sort_by_key(|t| (t.0, t.1));

    let mut tried: Vec<Point> = Vec::new();
    for &(_, _, at) in &touching {
        if tried.iter().any(|q| len(*q - at) <= ball) {
            continue;
        }
        tried.push(at);
        let outside: Vec<bool> = pts.iter().map(|p| len(*p - at) >= ball).collect();
        // Pieces are maximal runs of segments with both ends outside.
        let mut piece = vec![usize::MAX; n];
        let mut count = 0;
        let start = match (0..n).find(|&i| !(outside[i] && outside[(i + 1) % n])) {
            Some(s) => s,
            None => continue,
        };
        let mut open = false;
        for k in 1..=n {
            let i = (start + k) % n;
            if outside[i] && outside[(i + 1) % n] {
                if !open {
                    count += 1;
                    open = true;
                }
                piece[i] = count - 1;
            } else {
                open = false;
            }
        }
        if count < 2 {
            continue;
        }
        let mut parent: Vec<usize> = (0..count).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(i, j, _) in &touching {
            let (a, b) = (piece[i], piece[j]);
            if a != usize::MAX && b != usize::MAX {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut lengths: HashMap<usize, f64> = HashMap::new();
        for i in 0..n {
            if piece[i] != usize::MAX {
                let r = find(&mut parent, piece[i]);
                *lengths.entry(r).or_default() += len(pts[(i + 1) % n] - pts[i]);
            }
        }
        let total: f64 = (0..n).map(|i| len(pts[(i + 1) % n] - pts[i])).sum();
        // A loop runs from contact to contact, so it regains the ball radius
        // cut from each of its ends.
        let big = lengths.values().filter(|&&l| l + 2.0 * ball >= MIN_LOOP * total).count();
        if lengths.len() == 2 && big == 2 {
            return true;
        }
    }
    false
}

/// Two random polygons joined at a shared vertex. They may overlap, in
/// which case the crossings link the loops.
pub fn joined_polygons<R: Rng + ?Sized>(rng: &mut R) -> BasePath {
    let unit = rng.random_range(40.0..150.0);
    let base = Point::new(250.0, 250.0);
    let loop_at = |rng: &mut R, dir: f64| -> Vec<Point> {
        let k = rng.random_range(3..=6);
        let reach = rng.random_range(0.5..1.5);
        let spread = rng.random_range(0.6..2.6);
        let mut pts = vec![Point::new(0.0, 0.0)];
        for i in 0..k - 1 {
            let t = dir - spread / 2.0 + spread * i as f64 / (k - 2).max(1) as f64;
            let r = reach * rng.random_range(0.5..1.0);
            pts.push(Point::new(r * t.cos(), r * t.sin()));
        }
        pts
    };
    let d1 = rng.random_range(0.0..2.0 * PI);
    let d2 = d1 + PI + rng.random_range(-1.6..1.6);
    let mut prims = Vec::new();
    for dir in [d1, d2] {
        let pts: Vec<Point> = loop_at(rng, dir).into_iter().map(|p| Point::new(base.x + p.x * unit, base.y + p.y * unit)).collect();
        let n = pts.len();
        for i in 0..n {
            prims.push(Primitive::Segment { p0: pts[i], p1: pts[(i + 1) % n] });
        }
    }
    BasePath::from_primitives(prims, unit)
}

/// Figure-eight of two tangent circles with random radii.
pub fn random_figure_eight<R: Rng + ?Sized>(rng: &mut R) -> BasePath {
    let unit = rng.random_range(40.0..150.0);
    let (r1, r2) = (rng.random_range(0.2..1.0) * unit, rng.random_range(0.2..1.0) * unit);
    let t = rng.random_range(0.0..2.0 * PI);
    let u = Point::new(t.cos(), t.sin());
    let p = Point::new(250.0, 250.0);
    let c1 = Point::new(p.x - u.x * r1, p.y - u.y * r1);
    let c2 = Point::new(p.x + u.x * r2, p.y + u.y * r2);
    BasePath::from_primitives(
        vec![
            Primitive::Arc { center: c1, radius: r1, start_angle: t, sweep: 2.0 * PI },
            Primitive::Arc { center: c2, radius: r2, start_angle: t + PI, sweep: -2.0 * PI },
        ],
        unit,
    )
}

/// Library entries, symmetric constructions, nudged copies of them and
/// random programs, each at a random pose.
pub fn shape_set(seed: u64, n: usize, symmetric: fn(&mut ChaCha8Rng) -> Vec<BaseAction>) -> Vec<BasePath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lib = Library::builtin();
    let grid = ValueGrid::default();
    let mut out = Vec::new();
    while out.len() < n {
        let pose = random_pose(&mut rng);
        let bp = match out.len() % 4 {
            0 => {
                let e = &lib.entries()[rng.random_range(0..lib.len())];
                execute_program(&e.program(&vec![MovingType::Normal; e.strokes.len()]).unwrap(), &[pose]).ok()
            }
            1 => execute_single(symmetric(&mut rng), pose),
            2 => {
                let mut a = symmetric(&mut rng);
                perturb(&mut a, &mut rng);
                execute_single(a, pose)
            }
            _ => {
                let k = rng.random_range(2..=9);
                execute_single((0..k).map(|_| grid.sample_action(&mut rng)).collect(), pose)
            }
        };
        out.extend(bp);
    }
    out
}
