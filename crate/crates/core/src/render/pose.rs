//! Random placement: heading, size and position are nuisances.

use rand::Rng;

use crate::dsl::ActionProgram;
use crate::geometry::{Point, Rect};

use super::decorate::decorate_path;
use super::path::{execute_canonical, Pose};
use super::{RenderConfig, RenderError};

const TRIES_PER_ROUND: usize = 100;
const SHRINK_ROUNDS: usize = 3;
const SHRINK: f64 = 0.8;

fn rotated_bbox(b: &Rect, heading_deg: f64) -> Rect {
    let theta = heading_deg.to_radians();
    Rect::of_points(b.corners().iter().map(|c| c.rotate(theta)).collect::<Vec<_>>().iter())
}

/// Sample a pose placing a shape inside `region`.
///
/// `unit_bbox` is the drawn extent at the canonical pose. The heading is
/// uniform on `[0, 360)`, the rotated extent covers a uniform fraction of the
/// region's smaller side, and the origin is uniform over positions keeping
/// the whole shape at least `margin` pixels from the region border.
pub fn sample_pose<R: Rng + ?Sized>(
    unit_bbox: &Rect,
    region: &Rect,
    cfg: &RenderConfig,
    rng: &mut R,
) -> Result<Pose, RenderError> {
    let min_dim = region.width().min(region.height());
    // Half the stroke plus a pixel for chord flattening.
    let pad = cfg.margin + 0.5 * cfg.stroke_width + 1.0;
    let mut scale = 1.0;
    for _ in 0..=SHRINK_ROUNDS {
        for _ in 0..TRIES_PER_ROUND {
            let heading = rng.random_range(0.0..360.0);
            let fraction = rng.random_range(cfg.min_fraction..=cfg.max_fraction) * scale;
            let r = rotated_bbox(unit_bbox, heading);
            let extent = r.width().max(r.height());
            if !(extent > 0.0) || !extent.is_finite() {
                return Err(RenderError::CannotFit);
            }
            let unit = fraction * min_dim / extent;
            let lo_x = region.min.x + pad - r.min.x * unit;
            let hi_x = region.max.x - pad - r.max.x * unit;
            let lo_y = region.min.y + pad - r.min.y * unit;
            let hi_y = region.max.y - pad - r.max.y * unit;
            if lo_x <= hi_x && lo_y <= hi_y {
                let x = if hi_x > lo_x { rng.random_range(lo_x..hi_x) } else { lo_x };
                let y = if hi_y > lo_y { rng.random_range(lo_y..hi_y) } else { lo_y };
                return Ok(Pose {
                    origin: Point::new(x, y),
                    heading,
                    unit_length: unit,
                });
            }
        }
        scale *= SHRINK;
    }
    Err(RenderError::CannotFit)
}

/// Placement regions for `n` shapes: the whole canvas, or two halves split
/// along a random axis.
pub fn regions<R: Rng + ?Sized>(n: usize, cfg: &RenderConfig, rng: &mut R) -> Vec<Rect> {
    let (w, h) = (cfg.canvas_width as f64, cfg.canvas_height as f64);
    let full = Rect::new(Point::ORIGIN, Point::new(w, h));
    if n <= 1 {
        return vec![full];
    }
    let mut halves = if rng.random_bool(0.5) {
        vec![
            Rect::new(Point::ORIGIN, Point::new(w / 2.0, h)),
            Rect::new(Point::new(w / 2.0, 0.0), Point::new(w, h)),
        ]
    } else {
        vec![
            Rect::new(Point::ORIGIN, Point::new(w, h / 2.0)),
            Rect::new(Point::new(0.0, h / 2.0), Point::new(w, h)),
        ]
    };
    if rng.random_bool(0.5) {
        halves.swap(0, 1);
    }
    halves
}

/// Drawn extent of each shape at the canonical pose, decoration included.
pub fn unit_bboxes(p: &ActionProgram, cfg: &RenderConfig) -> Result<Vec<Rect>, RenderError> {
    let bp = execute_canonical(p)?;
    let d = decorate_path(&bp, p, cfg);
    Ok((0..bp.components.len()).map(|i| d.component_bbox(i)).collect())
}

/// One pose per shape of the program.
pub fn layout_poses<R: Rng + ?Sized>(
    p: &ActionProgram,
    cfg: &RenderConfig,
    rng: &mut R,
) -> Result<Vec<Pose>, RenderError> {
    let boxes = unit_bboxes(p, cfg)?;
    let regions = regions(boxes.len(), cfg, rng);
    boxes
        .iter()
        .zip(&regions)
        .map(|(b, r)| sample_pose(b, r, cfg, rng))
        .collect()
}
