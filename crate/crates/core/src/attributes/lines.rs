use serde::{Deserialize, Serialize};

use crate::geometry::{intersect, Point};
use crate::render::BasePath;

use super::outline::{outlines, COINCIDENT};

/// How crossings affect straight-line counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineSemantics {
    /// A straight run stays one line however many strokes cross it.
    Continuous,
    /// Every interior crossing cuts a run into separate lines.
    Split,
}

/// Count straight lines: maximal collinear runs, optionally cut at every
/// point where another primitive touches or crosses the run's interior.
pub fn count_straight_lines(bp: &BasePath, semantics: LineSemantics) -> usize {
    let outlines = outlines(bp);
    let runs: Vec<_> = outlines
        .iter()
        .flat_map(|o| o.straight_edges().map(move |e| (e, o.unit)))
        .collect();
    if semantics == LineSemantics::Continuous {
        return runs.len();
    }
    let all: Vec<_> = outlines.iter().flat_map(|o| o.edges.iter()).collect();
    runs.iter()
        .map(|&(run, unit)| {
            let eps = 1e-7 * unit;
            let len = run.length();
            let mut cuts: Vec<Point> = Vec::new();
            for other in &all {
                if std::ptr::eq(*other, run) {
                    continue;
                }
                for c in intersect(run, other, COINCIDENT * unit * 1e-3) {
                    if c.overlap || c.s_a <= eps || c.s_a >= len - eps {
                        continue;
                    }
                    if !cuts.iter().any(|p| p.dist(c.point) <= eps) {
                        cuts.push(c.point);
                    }
                }
            }
            cuts.len() + 1
        })
        .sum()
}
