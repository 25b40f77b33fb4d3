//! Shape distance with position, size and heading factored out.
//!
//! Each curve is translated so its length-weighted centroid sits at the
//! origin and scaled to unit diameter; rotations are then tried on a fixed
//! grid. Mirror images are not aligned since poses never reflect.

use crate::attributes::symmetry::CurveSample;
use crate::geometry::{Point, Primitive};
use crate::render::{BasePath, Component};

/// Rotation grid used for alignment, in degrees.
pub const ROTATION_STEP: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct Normalized {
    points: Vec<Point>,
    primitives: Vec<Primitive>,
}

fn map_primitive(p: &Primitive, c: Point, s: f64) -> Primitive {
    match *p {
        Primitive::Segment { p0, p1 } => Primitive::Segment { p0: (p0 - c) * s, p1: (p1 - c) * s },
        Primitive::Arc { center, radius, start_angle, sweep } => Primitive::Arc {
            center: (center - c) * s,
            radius: radius * s,
            start_angle,
            sweep,
        },
    }
}

impl Normalized {
    pub fn of(bp: &BasePath) -> Normalized {
        let cs = CurveSample::of(bp);
        let s = if cs.diameter > 0.0 { 1.0 / cs.diameter } else { 1.0 };
        let c = cs.centroid;
        Normalized {
            points: cs.points.iter().map(|&p| (p - c) * s).collect(),
            primitives: cs.primitives.iter().map(|p| map_primitive(p, c, s)).collect(),
        }
    }

    pub fn of_component(c: &Component) -> Normalized {
        Normalized::of(&BasePath::new(vec![c.clone()]))
    }

    fn distance(&self, q: Point) -> f64 {
        self.primitives.iter().map(|p| p.distance_to(q)).fold(f64::INFINITY, f64::min)
    }

    /// Largest distance from `other`'s samples, rotated by `theta`, to this
    /// curve. Returns early once `limit` is exceeded.
    fn directed(&self, other: &Normalized, theta: f64, limit: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for &p in &other.points {
            worst = worst.max(self.distance(p.rotate(theta)));
            if worst > limit {
                break;
            }
        }
        worst
    }

    /// Symmetric Hausdorff distance with `other` rotated by `theta`.
    pub fn hausdorff_at(&self, other: &Normalized, theta: f64, limit: f64) -> f64 {
        let d = self.directed(other, theta, limit);
        if d > limit {
            return d;
        }
        d.max(other.directed(self, -theta, limit))
    }
}

/// Smallest Hausdorff distance over the rotation grid, in units of diameter,
/// with the best grid rotation refined between its neighbours. Values above
/// `limit` are only known to exceed it.
pub fn aligned_distance(a: &Normalized, b: &Normalized, limit: f64) -> f64 {
    let steps = (360.0 / ROTATION_STEP).round() as usize;
    let step = ROTATION_STEP.to_radians();
    // Grid rotations may miss an exact match by half a step, which moves a
    // point at unit distance by about step/2.
    let slack = limit + step;
    let mut best = f64::INFINITY;
    let mut best_theta = 0.0;
    for k in 0..steps {
        let theta = k as f64 * step;
        let d = a.hausdorff_at(b, theta, best.min(slack));
        if d < best {
            best = d;
            best_theta = theta;
        }
    }
    if best > slack {
        return best;
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| a.hausdorff_at(b, t, f64::INFINITY);
    let (mut lo, mut hi) = (best_theta - step, best_theta + step);
    for _ in 0..30 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) <= f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    best.min(f(0.5 * (lo + hi)))
}

/// Aligned distance of two whole paths, compared shape by shape; the result
/// is the largest per-shape distance. Paths with different shape counts are
/// infinitely far apart.
pub fn path_distance(a: &BasePath, b: &BasePath, limit: f64) -> f64 {
    if a.components.len() != b.components.len() {
        return f64::INFINITY;
    }
    a.components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| aligned_distance(&Normalized::of_component(x), &Normalized::of_component(y), limit))
        .fold(0.0, f64::max)
}
