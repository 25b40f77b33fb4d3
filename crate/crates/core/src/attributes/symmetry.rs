//! Mirror and point symmetry of the drawn curve.

use std::f64::consts::PI;

use crate::geometry::{Point, Primitive};
use crate::render::BasePath;

/// Allowed residual, as a fraction of the curve diameter.
pub const SYMMETRY_TOL: f64 = 0.02;
/// Mirror axes tried through the centroid, evenly spaced over 180 degrees.
pub const AXIS_COUNT: usize = 720;
const SAMPLES: usize = 256;

/// Points sampled evenly along a curve together with its exact primitives.
#[derive(Debug, Clone)]
pub struct CurveSample {
    pub points: Vec<Point>,
    pub primitives: Vec<Primitive>,
    pub centroid: Point,
    pub diameter: f64,
}

impl CurveSample {
    pub fn of(bp: &BasePath) -> CurveSample {
        let primitives: Vec<Primitive> = bp
            .components
            .iter()
            .flat_map(|c| c.nonzero_primitives())
            .collect();
        let total: f64 = primitives.iter().map(Primitive::length).sum();
        let mut points = Vec::new();
        let mut weighted = Point::ORIGIN;
        for p in &primitives {
            let len = p.length();
            weighted = weighted + p.centroid() * len;
            let n = ((SAMPLES as f64 * len / total).ceil() as usize).max(1);
            points.push(p.start());
            points.extend((0..n).map(|k| p.point_at((k as f64 + 0.5) * len / n as f64)));
            points.push(p.end());
        }
        let centroid = if total > 0.0 {
            weighted * (1.0 / total)
        } else {
            bp.components.first().map_or(Point::ORIGIN, |c| c.start())
        };
        let mut diameter: f64 = 0.0;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                diameter = diameter.max(a.dist(*b));
            }
        }
        CurveSample { points, primitives, centroid, diameter }
    }

    fn distance(&self, q: Point) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.distance_to(q))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest distance from a mapped sample to the curve. Stops early and
    /// returns a value above `limit` once one is found.
    pub fn residual(&self, map: impl Fn(Point) -> Point, limit: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for &p in &self.points {
            worst = worst.max(self.distance(map(p)));
            if worst > limit {
                return worst;
            }
        }
        worst
    }

    pub fn mirror_residual(&self, axis_angle: f64, limit: f64) -> f64 {
        let c = self.centroid;
        let u = Point::from_angle(axis_angle);
        self.residual(|p| c + reflect(p - c, u), limit)
    }

    pub fn point_residual(&self, center: Point, limit: f64) -> f64 {
        self.residual(|p| center * 2.0 - p, limit)
    }
}

impl CurveSample {
    /// Direction from the centroid to the farthest sample. Search grids are
    /// laid out relative to it so that rotating the curve rotates the grid.
    fn frame_angle(&self) -> f64 {
        let mut far = (0.0, Point::new(1.0, 0.0));
        for &p in &self.points {
            let d = p.dist(self.centroid);
            if d > far.0 {
                far = (d, p - self.centroid);
            }
        }
        far.1.y.atan2(far.1.x)
    }
}

fn reflect(v: Point, u: Point) -> Point {
    u * (2.0 * v.dot(u)) - v
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = f1.min(f2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
        best = best.min(f1).min(f2);
    }
    best
}

/// Some mirror axis through the centroid maps the curve onto itself within
/// `SYMMETRY_TOL` of its diameter. The best few grid axes are refined so the
/// answer does not depend on how the shape is rotated against the grid.
pub fn is_symmetric(bp: &BasePath) -> bool {
    let s = CurveSample::of(bp);
    if s.diameter == 0.0 {
        return true;
    }
    let tol = SYMMETRY_TOL * s.diameter;
    let step = PI / AXIS_COUNT as f64;
    let phi0 = s.frame_angle();
    let mut scored: Vec<(f64, f64)> = Vec::with_capacity(AXIS_COUNT);
    for k in 0..AXIS_COUNT {
        let phi = phi0 + k as f64 * step;
        let r = s.mirror_residual(phi, 3.0 * tol);
        if r <= tol {
            return true;
        }
        if r <= 3.0 * tol {
            scored.push((r, phi));
        }
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored.iter().take(3).any(|&(_, phi)| {
        golden_min(|x| s.mirror_residual(x, f64::INFINITY), phi - step, phi + step, 24) <= tol
    })
}

/// Half-width of the square searched for a center, as a fraction of the
/// diameter. An exact center coincides with the centroid; near-symmetric
/// curves can have a better center close by.
const CENTER_RANGE: f64 = 0.03;

/// Point reflection through some center near the centroid maps the curve
/// onto itself.
pub fn is_self_transposed(bp: &BasePath) -> bool {
    let s = CurveSample::of(bp);
    if s.diameter == 0.0 {
        return true;
    }
    let tol = SYMMETRY_TOL * s.diameter;
    let at = |c: Point| s.point_residual(c, f64::INFINITY);
    let mut best = (at(s.centroid), s.centroid);
    if best.0 <= tol {
        return true;
    }
    // Moving the center by d changes the residual by at most 2d.
    if best.0 > tol + 2.0 * CENTER_RANGE * s.diameter * 2f64.sqrt() {
        return false;
    }
    let step = CENTER_RANGE * s.diameter / 5.0;
    let u = Point::from_angle(s.frame_angle());
    let v = u.perp();
    for i in -5..=5 {
        for j in -5..=5 {
            let c = s.centroid + u * (i as f64 * step) + v * (j as f64 * step);
            let r = s.point_residual(c, best.0);
            if r < best.0 {
                best = (r, c);
            }
        }
    }
    // Pattern search from the best grid point.
    let mut h = step;
    while h > 1e-4 * s.diameter && best.0 > tol {
        let mut moved = false;
        for d in [u * h, u * -h, v * h, v * -h] {
            let c = best.1 + d;
            let r = s.point_residual(c, best.0);
            if r < best.0 {
                best = (r, c);
                moved = true;
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    best.0 <= tol
}
