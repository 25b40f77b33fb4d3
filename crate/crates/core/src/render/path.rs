use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::dsl::{ActionKind, ActionProgram, Stroke};
use crate::geometry::{Point, Primitive, Rect};

use super::RenderError;

/// Starting state of the turtle for one shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub origin: Point,
    /// Degrees, counter-clockwise from +x.
    pub heading: f64,
    /// Canvas units drawn for `length = 1.0`.
    pub unit_length: f64,
}

impl Pose {
    /// Origin at zero, heading 0, unit length 1.
    pub const CANONICAL: Pose = Pose {
        origin: Point::ORIGIN,
        heading: 0.0,
        unit_length: 1.0,
    };
}

/// Executed geometry of one shape: one primitive per action, each starting
/// where the previous one ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub primitives: Vec<Primitive>,
    pub pose: Pose,
}

impl Component {
    pub fn unit(&self) -> f64 {
        self.pose.unit_length
    }

    pub fn start(&self) -> Point {
        self.primitives.first().map_or(self.pose.origin, Primitive::start)
    }

    pub fn end(&self) -> Point {
        self.primitives.last().map_or(self.pose.origin, Primitive::end)
    }

    /// End point returns to the start within `1e-6` unit lengths.
    pub fn is_closed(&self) -> bool {
        !self.primitives.is_empty() && self.start().dist(self.end()) <= 1e-6 * self.unit()
    }

    pub fn length(&self) -> f64 {
        self.primitives.iter().map(Primitive::length).sum()
    }

    pub fn bbox(&self) -> Rect {
        self.primitives
            .iter()
            .fold(Rect::EMPTY, |r, p| r.union(p.bbox()))
    }

    /// Primitives with non-negligible length.
    pub fn nonzero_primitives(&self) -> Vec<Primitive> {
        let eps = 1e-12 * self.unit();
        self.primitives
            .iter()
            .copied()
            .filter(|p| p.length() > eps)
            .collect()
    }

    /// Point at arc-length `s` along the whole component.
    pub fn point_at(&self, mut s: f64) -> Point {
        for p in &self.primitives {
            let len = p.length();
            if s <= len {
                return p.point_at(s);
            }
            s -= len;
        }
        self.end()
    }

    /// `n` points evenly spaced by arc length. Closed components do not
    /// repeat the start point; open ones include both ends.
    pub fn resample(&self, n: usize) -> Vec<Point> {
        let total = self.length();
        if total == 0.0 || n == 0 {
            return vec![self.start(); n.max(1)];
        }
        let closed = self.is_closed();
        let denom = if closed { n } else { (n - 1).max(1) };
        let step = total / denom as f64;
        let mut out = Vec::with_capacity(n);
        let mut idx = 0;
        let mut acc = 0.0;
        for k in 0..n {
            let target = step * k as f64;
            while idx + 1 < self.primitives.len() && target > acc + self.primitives[idx].length() {
                acc += self.primitives[idx].length();
                idx += 1;
            }
            let p = &self.primitives[idx];
            out.push(p.point_at((target - acc).clamp(0.0, p.length())));
        }
        out
    }

    /// Centroid of the curve with uniform density along arc length.
    pub fn centroid(&self) -> Point {
        let mut acc = Point::ORIGIN;
        let mut total = 0.0;
        for p in &self.primitives {
            let len = p.length();
            if len > 0.0 {
                acc = acc + p.centroid() * len;
                total += len;
            }
        }
        if total == 0.0 {
            self.start()
        } else {
            acc * (1.0 / total)
        }
    }
}

/// Executed geometry of a whole program, moving-type agnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasePath {
    pub components: Vec<Component>,
}

impl BasePath {
    pub fn new(components: Vec<Component>) -> Self {
        BasePath { components }
    }

    /// A single component built directly from primitives.
    pub fn from_primitives(primitives: Vec<Primitive>, unit_length: f64) -> Self {
        let origin = primitives.first().map_or(Point::ORIGIN, Primitive::start);
        BasePath {
            components: vec![Component {
                primitives,
                pose: Pose {
                    origin,
                    heading: 0.0,
                    unit_length,
                },
            }],
        }
    }

    pub fn primitives(&self) -> impl Iterator<Item = &Primitive> {
        self.components.iter().flat_map(|c| c.primitives.iter())
    }

    pub fn bbox(&self) -> Rect {
        self.components
            .iter()
            .fold(Rect::EMPTY, |r, c| r.union(c.bbox()))
    }

    pub fn has_arc(&self) -> bool {
        self.primitives().any(Primitive::is_arc)
    }
}

/// Turn or sweep encoded by a normalized angle argument, in radians.
pub fn signed_angle(angle: f64) -> f64 {
    (angle - 0.5) * TAU
}

/// Run one shape's strokes from a pose.
///
/// `line` turns by the signed angle and then advances; `arc` follows a circle
/// whose arc length is `length * unit` and whose signed sweep is given by the
/// angle argument.
pub fn execute_strokes(
    strokes: impl IntoIterator<Item = Stroke>,
    pose: Pose,
) -> Result<Component, RenderError> {
    let unit = pose.unit_length;
    let mut pos = pose.origin;
    let mut heading = pose.heading.to_radians();
    let mut primitives = Vec::new();
    for (i, s) in strokes.into_iter().enumerate() {
        let dist = s.length * unit;
        let theta = signed_angle(s.angle);
        match s.kind {
            ActionKind::Line => {
                heading += theta;
                let end = pos + Point::from_angle(heading) * dist;
                primitives.push(Primitive::Segment { p0: pos, p1: end });
                pos = end;
            }
            ActionKind::Arc => {
                if s.is_degenerate_arc() {
                    return Err(RenderError::DegenerateArc { shape: 0, action: i });
                }
                let radius = dist / theta.abs();
                let left = Point::from_angle(heading).perp();
                let center = pos + left * (radius * theta.signum());
                let start_angle = (pos - center).angle();
                let arc = Primitive::Arc {
                    center,
                    radius,
                    start_angle,
                    sweep: theta,
                };
                pos = arc.end();
                heading += theta;
                primitives.push(arc);
            }
        }
    }
    Ok(Component { primitives, pose })
}

/// Execute every shape of a program, each from its own pose.
pub fn execute_program(p: &ActionProgram, poses: &[Pose]) -> Result<BasePath, RenderError> {
    if poses.len() != p.shapes.len() {
        return Err(RenderError::PoseCountMismatch {
            shapes: p.shapes.len(),
            poses: poses.len(),
        });
    }
    let components = p
        .shapes
        .iter()
        .zip(poses)
        .enumerate()
        .map(|(si, (shape, pose))| {
            execute_strokes(shape.iter().map(|a| a.stroke()), *pose).map_err(|e| match e {
                RenderError::DegenerateArc { action, .. } => RenderError::DegenerateArc { shape: si, action },
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BasePath { components })
}

/// Execute with every shape at the canonical pose.
pub fn execute_canonical(p: &ActionProgram) -> Result<BasePath, RenderError> {
    execute_program(p, &vec![Pose::CANONICAL; p.shapes.len()])
}
