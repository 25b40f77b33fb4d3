//! Closed curves that split into two loops at a single pinch point.

use crate::geometry::{even_odd_area, intersect, Point, Primitive};
use crate::render::BasePath;

use super::outline::Outline;
use super::symmetry::CurveSample;

/// Radius of the neighbourhood removed around a pinch point, as a fraction
/// of the curve diameter.
pub const PINCH_BALL: f64 = 0.02;
/// Each loop must carry at least this fraction of the total length.
pub const MIN_LOOP: f64 = 0.1;
/// Largest relative area difference of balanced loops.
pub const BALANCE: f64 = 0.25;

/// A point where the curve passes twice, splitting it into the loop
/// `[t0, t1]` and its complement (arc-length parameters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pinch {
    pub point: Point,
    pub t0: f64,
    pub t1: f64,
}

struct Traced {
    edges: Vec<Primitive>,
    offsets: Vec<f64>,
    total: f64,
    unit: f64,
}

impl Traced {
    fn new(o: &Outline) -> Traced {
        let mut offsets = Vec::with_capacity(o.edges.len());
        let mut acc = 0.0;
        for e in &o.edges {
            offsets.push(acc);
            acc += e.length();
        }
        Traced { edges: o.edges.clone(), offsets, total: acc, unit: o.unit }
    }

    fn point_at(&self, t: f64) -> Point {
        let i = self.offsets.partition_point(|&o| o <= t).saturating_sub(1);
        let e = &self.edges[i];
        e.point_at((t - self.offsets[i]).clamp(0.0, e.length()))
    }

    /// Flattened points along `[t0, t1]`.
    fn trace(&self, t0: f64, t1: f64, out: &mut Vec<Point>) {
        let pitch = 0.01 * self.unit;
        for (e, &off) in self.edges.iter().zip(&self.offsets) {
            let (s0, s1) = ((t0 - off).max(0.0), (t1 - off).min(e.length()));
            if s1 <= s0 {
                continue;
            }
            let piece = e.sub(s0, s1);
            if piece.is_arc() {
                out.extend(piece.sample(pitch));
            } else {
                out.push(piece.start());
                out.push(piece.end());
            }
        }
    }

    /// Every point two edges share, with both parameters (`a <= b`).
    /// Joints between neighbouring edges are included; they never link
    /// the two sides of a pinch.
    fn contacts(&self) -> Vec<(Point, f64, f64)> {
        let n = self.edges.len();
        let tol = 1e-9 * self.unit;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for c in intersect(&self.edges[i], &self.edges[j], tol) {
                    let (ta, tb) = (self.offsets[i] + c.s_a, self.offsets[j] + c.s_b);
                    out.push((c.point, ta.min(tb), ta.max(tb)));
                }
            }
        }
        out
    }

    /// Parameter of the point closest to `x` near `t`.
    fn closest(&self, x: Point, t: f64, radius: f64) -> f64 {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let f = |t: f64| self.point_at(t.rem_euclid(self.total)).dist(x);
        let (mut a, mut b) = (t - radius, t + radius);
        for _ in 0..40 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if f(x1) <= f(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        (0.5 * (a + b)).rem_euclid(self.total)
    }
}

fn in_loop(t: f64, p: &Pinch) -> bool {
    t > p.t0 && t < p.t1
}

/// Pinch points of a single closed component.
pub fn pinch_points(bp: &BasePath) -> Vec<Pinch> {
    if bp.components.len() != 1 {
        return Vec::new();
    }
    let o = Outline::of(&bp.components[0]);
    if !o.closed || o.edges.len() < 2 {
        return Vec::new();
    }
    let tr = Traced::new(&o);
    let diameter = CurveSample::of(bp).diameter;
    let ball = PINCH_BALL * diameter;
    let contacts = tr.contacts();
    let step = ball / 4.0;
    let samples = (tr.total / step).ceil() as usize;
    let params: Vec<f64> = (0..samples).map(|k| k as f64 * tr.total / samples as f64).collect();
    let pts: Vec<Point> = params.iter().map(|&t| tr.point_at(t)).collect();
    let mut seen: Vec<Point> = Vec::new();
    let mut found: Vec<Pinch> = Vec::new();
    for &(point, _, _) in &contacts {
        if seen.iter().any(|q| q.dist(point) <= ball) {
            continue;
        }
        seen.push(point);
        // Passes of the curve through the removed ball.
        let inside: Vec<bool> = pts.iter().map(|q| q.dist(point) < ball).collect();
        let entries: Vec<usize> = (0..samples)
            .filter(|&k| inside[k] && !inside[(k + samples - 1) % samples])
            .collect();
        if entries.len() != 2 {
            continue;
        }
        let mut ts: Vec<f64> = entries
            .iter()
            .map(|&k| {
                let mut best = k;
                let mut m = k;
                while inside[m] {
                    if pts[m].dist(point) < pts[best].dist(point) {
                        best = m;
                    }
                    m = (m + 1) % samples;
                    if m == k {
                        break;
                    }
                }
                tr.closest(point, params[best], step)
            })
            .collect();
        ts.sort_by(f64::total_cmp);
        let p = Pinch { point, t0: ts[0], t1: ts[1] };
        let inner = p.t1 - p.t0;
        if inner < MIN_LOOP * tr.total || tr.total - inner < MIN_LOOP * tr.total {
            continue;
        }
        let linked = contacts
            .iter()
            .any(|&(q, a, b)| q.dist(point) > ball && in_loop(a, &p) != in_loop(b, &p));
        if !linked {
            found.push(p);
        }
    }
    found
}

pub fn have_two_parts(bp: &BasePath) -> bool {
    !pinch_points(bp).is_empty()
}

/// Enclosed areas of the two loops at a pinch.
pub fn loop_areas(bp: &BasePath, p: &Pinch) -> (f64, f64) {
    let tr = Traced::new(&Outline::of(&bp.components[0]));
    let mut inner = Vec::new();
    tr.trace(p.t0, p.t1, &mut inner);
    let mut outer = Vec::new();
    tr.trace(p.t1, tr.total, &mut outer);
    tr.trace(0.0, p.t0, &mut outer);
    (even_odd_area(&inner), even_odd_area(&outer))
}

/// Two parts whose enclosed areas are similar.
pub fn balanced_two(bp: &BasePath) -> bool {
    pinch_points(bp).iter().any(|p| {
        let (a, b) = loop_areas(bp, p);
        let hi = a.max(b);
        hi > 0.0 && (a - b).abs() <= BALANCE * hi
    })
}
