//! Expand base primitives into the drawn strokes of each moving type.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::dsl::{ActionProgram, MovingType};
use crate::geometry::{Point, Primitive, Rect};

use super::path::BasePath;
use super::RenderConfig;

/// Drawn polylines of one action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyledSpan {
    pub action: usize,
    pub style: MovingType,
    pub polylines: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DecoratedPolyline {
    pub components: Vec<Vec<StyledSpan>>,
}

impl DecoratedPolyline {
    pub fn polylines(&self) -> impl Iterator<Item = &Vec<Point>> {
        self.components.iter().flatten().flat_map(|s| s.polylines.iter())
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.polylines().flatten()
    }

    pub fn bbox(&self) -> Rect {
        Rect::of_points(self.points())
    }

    pub fn component_bbox(&self, i: usize) -> Rect {
        Rect::of_points(self.components[i].iter().flat_map(|s| s.polylines.iter()).flatten())
    }
}

/// Glyph count along a primitive of length `len` at spacing `pitch`.
pub fn glyph_count(len: f64, pitch: f64) -> usize {
    if len <= 0.0 {
        0
    } else {
        (len / pitch - 1e-9).ceil().max(1.0) as usize
    }
}

/// Glyph centers: evenly spaced, offset half a spacing from either end.
pub fn glyph_centers(p: &Primitive, pitch: f64) -> Vec<f64> {
    let len = p.length();
    let n = glyph_count(len, pitch);
    let spacing = len / n as f64;
    (0..n).map(|k| (k as f64 + 0.5) * spacing).collect()
}

fn normal_at(p: &Primitive, s: f64) -> Point {
    p.tangent_at(s).perp()
}

/// Chord spacing for drawing arcs: sagitta below `max_sagitta`.
fn arc_points(p: &Primitive, max_sagitta: f64) -> Vec<Point> {
    let Primitive::Arc { radius, sweep, .. } = *p else {
        return vec![p.start(), p.end()];
    };
    let step = if max_sagitta >= radius {
        PI / 2.0
    } else {
        2.0 * (1.0 - max_sagitta / radius).acos()
    };
    let n = ((sweep.abs() / step).ceil() as usize).clamp(2, 4096);
    let len = p.length();
    (0..=n).map(|k| p.point_at(len * k as f64 / n as f64)).collect()
}

fn decorate_primitive(p: &Primitive, style: MovingType, unit: f64, cfg: &RenderConfig) -> Vec<Vec<Point>> {
    let len = p.length();
    let pitch = cfg.glyph_pitch * unit;
    match style {
        MovingType::Normal => {
            let sagitta = (0.1f64).min(1e-3 * unit);
            vec![arc_points(p, sagitta)]
        }
        MovingType::Zigzag => {
            let amp = cfg.zigzag_amplitude * unit;
            let n = glyph_count(len, pitch).max(1);
            let pts = (0..=2 * n)
                .map(|j| {
                    let s = len * j as f64 / (2 * n) as f64;
                    let offset = if j % 2 == 0 {
                        0.0
                    } else if (j / 2) % 2 == 0 {
                        amp
                    } else {
                        -amp
                    };
                    p.point_at(s) + normal_at(p, s) * offset
                })
                .collect();
            vec![pts]
        }
        MovingType::Circle | MovingType::Square | MovingType::Triangle => {
            let centers = glyph_centers(p, pitch);
            let spacing = if centers.is_empty() { 0.0 } else { len / centers.len() as f64 };
            let h = 0.4 * spacing;
            centers
                .into_iter()
                .map(|s| {
                    let c = p.point_at(s);
                    let t = p.tangent_at(s);
                    let n = t.perp();
                    match style {
                        MovingType::Circle => (0..=16)
                            .map(|k| c + Point::from_angle(k as f64 * PI / 8.0) * h)
                            .collect(),
                        MovingType::Square => {
                            let corner = |a: f64, b: f64| c + t * (a * h) + n * (b * h);
                            vec![corner(-1.0, -1.0), corner(1.0, -1.0), corner(1.0, 1.0), corner(-1.0, 1.0), corner(-1.0, -1.0)]
                        }
                        _ => {
                            let b0 = p.point_at((s - h).max(0.0));
                            let b1 = p.point_at((s + h).min(len));
                            let apex = c + n * (h * 3f64.sqrt());
                            vec![b0, apex, b1, b0]
                        }
                    }
                })
                .collect()
        }
    }
}

/// Largest distance any drawn point can lie from its base primitive, in unit lengths.
pub fn decoration_reach(cfg: &RenderConfig) -> f64 {
    let glyph = 0.4 * cfg.glyph_pitch;
    cfg.zigzag_amplitude.max(glyph * SQRT_2).max(glyph * 3f64.sqrt())
}

/// Apply each action's moving type to the primitive it produced.
pub fn decorate_path(bp: &BasePath, actions: &ActionProgram, cfg: &RenderConfig) -> DecoratedPolyline {
    debug_assert_eq!(bp.components.len(), actions.shapes.len());
    let components = bp
        .components
        .iter()
        .zip(&actions.shapes)
        .map(|(comp, shape)| {
            comp.primitives
                .iter()
                .zip(shape)
                .enumerate()
                .map(|(i, (prim, action))| StyledSpan {
                    action: i,
                    style: action.moving_type,
                    polylines: decorate_primitive(prim, action.moving_type, comp.unit(), cfg),
                })
                .collect()
        })
        .collect();
    DecoratedPolyline { components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_action, ActionProgram};
    use crate::geometry::point_segment_distance;
    use crate::render::path::{execute_program, Pose};

    fn one(action: &str, unit: f64) -> (BasePath, ActionProgram) {
        let p = ActionProgram::single(vec![parse_action(action).unwrap()]).unwrap();
        let pose = Pose { origin: Point::ORIGIN, heading: 0.0, unit_length: unit };
        (execute_program(&p, &[pose]).unwrap(), p)
    }

    #[test]
    fn normal_segment_is_identity() {
        let (bp, p) = one("line(normal,0.8,0.5)", 100.0);
        let d = decorate_path(&bp, &p, &RenderConfig::default());
        assert_eq!(d.components[0][0].polylines, vec![vec![Point::ORIGIN, Point::new(80.0, 0.0)]]);
    }

    #[test]
    fn zigzag_deviation_equals_amplitude() {
        let cfg = RenderConfig::default();
        let (bp, p) = one("line(zigzag,1.0,0.5)", 100.0);
        let d = decorate_path(&bp, &p, &cfg);
        let max_dev = d.points().map(|q| q.y.abs()).fold(0.0, f64::max);
        assert!((max_dev - cfg.zigzag_amplitude * 100.0).abs() < 1e-9);
    }

    #[test]
    fn circle_glyphs_count_and_centers() {
        let cfg = RenderConfig::default();
        let unit = 100.0;
        let (bp, p) = one("line(circle,0.7,0.5)", unit);
        let d = decorate_path(&bp, &p, &cfg);
        let glyphs = &d.components[0][0].polylines;
        let len = 0.7 * unit;
        let pitch = cfg.glyph_pitch * unit;
        assert_eq!(glyphs.len(), (len / pitch).ceil() as usize);
        for g in glyphs {
            let ring = &g[..g.len() - 1];
            let c = ring.iter().fold(Point::ORIGIN, |a, &b| a + b) * (1.0 / ring.len() as f64);
            assert!(point_segment_distance(c, Point::ORIGIN, Point::new(len, 0.0)) < 1e-6);
        }
    }

    #[test]
    fn glyphs_stay_near_arc() {
        let cfg = RenderConfig::default();
        for style in ["circle", "square", "triangle", "zigzag"] {
            let (bp, p) = one(&format!("arc({style},0.9,0.8)"), 50.0);
            let d = decorate_path(&bp, &p, &cfg);
            let arc = bp.components[0].primitives[0];
            let reach = decoration_reach(&cfg) * 50.0;
            for q in d.points() {
                assert!(arc.distance_to(*q) <= reach + 1e-9, "{style}");
            }
        }
    }
}
