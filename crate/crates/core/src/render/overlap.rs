use crate::geometry::{Point, Primitive};

use super::path::BasePath;

struct Piece {
    prim: Primitive,
    comp: usize,
    idx: usize,
    count: usize,
    closed: bool,
    unit: f64,
}

/// Joints shared by two primitives of the same component.
fn shared_joints(a: &Piece, b: &Piece) -> Vec<Point> {
    if a.comp != b.comp {
        return Vec::new();
    }
    let mut joints = Vec::new();
    let n = a.count;
    let next = |i: usize| if i + 1 < n { Some(i + 1) } else if a.closed && n > 1 { Some(0) } else { None };
    if next(a.idx) == Some(b.idx) {
        joints.push(a.prim.end());
    }
    if next(b.idx) == Some(a.idx) {
        joints.push(b.prim.end());
    }
    joints
}

/// Fraction of the drawn path lying on top of other strokes.
///
/// The path is sampled every `unit/50` of arc length; a sample counts when it
/// lies within `unit/20` of another primitive. Near a joint two adjacent
/// strokes are always close, so for adjacent pairs samples within three
/// tolerances of the shared joint are ignored; only very sharp folds count.
pub fn overlap_score(bp: &BasePath) -> f64 {
    let mut pieces = Vec::new();
    for (ci, comp) in bp.components.iter().enumerate() {
        let prims = comp.nonzero_primitives();
        let closed = comp.is_closed();
        let count = prims.len();
        for (idx, prim) in prims.into_iter().enumerate() {
            pieces.push(Piece {
                prim,
                comp: ci,
                idx,
                count,
                closed,
                unit: comp.unit(),
            });
        }
    }
    let mut total = 0usize;
    let mut hits = 0usize;
    for a in &pieces {
        let pitch = a.unit / 50.0;
        let tol = a.unit / 20.0;
        let len = a.prim.length();
        let n = (len / pitch).ceil().max(1.0) as usize;
        let joints: Vec<Vec<Point>> = pieces.iter().map(|b| shared_joints(a, b)).collect();
        for k in 0..n {
            let q = a.prim.point_at((k as f64 + 0.5) * len / n as f64);
            total += 1;
            let hit = pieces.iter().zip(&joints).any(|(b, js)| {
                if std::ptr::eq(a, b) || b.prim.distance_to(q) >= tol {
                    return false;
                }
                js.iter().all(|j| q.dist(*j) > 3.0 * tol)
            });
            if hit {
                hits += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}
