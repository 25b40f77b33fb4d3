//! Independent soundness check of a generated problem.
//!
//! Every image is re-executed from its program and poses, and the concept
//! is decided from that geometry. Library names recorded at generation time
//! are ignored.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::attributes::evaluate_attribute;
use crate::dsl::program_edit_distance;
use crate::library::Library;
use crate::render::{execute_canonical, execute_program, BasePath, Component};

use super::align::{aligned_distance, path_distance, Normalized};
use super::{image_file, poses_for, Concept, GeneratorConfig, ImageRecord, Problem, Side, MATCH_TOL, SIDE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemViolation {
    pub side: Option<Side>,
    pub index: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub problem: String,
    pub images_checked: usize,
    pub violations: Vec<ProblemViolation>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether a component matches some library entry of `category`.
fn in_category(c: &Component, category: &str, lib: &Library) -> bool {
    let Some(names) = lib.category_index.get(category) else { return false };
    let shape = Normalized::of_component(c);
    names.iter().filter_map(|n| lib.get(n)).any(|e| {
        e.canonical_path()
            .map(|bp| aligned_distance(&Normalized::of(&bp), &shape, MATCH_TOL) <= MATCH_TOL)
            .unwrap_or(false)
    })
}

/// Whether executed geometry satisfies the concept. For free-form concepts
/// this only compares shapes; [`verify_problem`] also compares programs.
pub fn concept_holds(concept: &Concept, bp: &BasePath, lib: &Library) -> bool {
    match concept {
        Concept::Abstract { attributes } => attributes.iter().all(|&a| evaluate_attribute(a, bp)),
        Concept::Basic { categories } => match (categories.as_slice(), bp.components.as_slice()) {
            ([c], [s]) => in_category(s, c, lib),
            ([a, b], [s, t]) => {
                (in_category(s, a, lib) && in_category(t, b, lib)) || (in_category(s, b, lib) && in_category(t, a, lib))
            }
            _ => false,
        },
        Concept::FreeForm { program } => execute_canonical(program).is_ok_and(|p| path_distance(&p, bp, MATCH_TOL) <= MATCH_TOL),
    }
}

fn check_image(
    p: &Problem,
    side: Side,
    rec: &ImageRecord,
    positive_path: Option<&BasePath>,
    lib: &Library,
    cfg: &GeneratorConfig,
) -> Vec<String> {
    let mut why = Vec::new();
    match poses_for(&rec.program, rec.pose_seed, &cfg.render) {
        Ok(poses) if poses == rec.poses => {}
        Ok(_) => why.push("pose seed does not reproduce the recorded poses".to_string()),
        Err(e) => why.push(format!("pose seed does not lay out: {e}")),
    }
    let bp = match execute_program(&rec.program, &rec.poses) {
        Ok(bp) => bp,
        Err(e) => {
            why.push(format!("program does not execute: {e}"));
            return why;
        }
    };
    match (&p.concept, side) {
        (Concept::FreeForm { program }, Side::Positive) => {
            if rec.program != *program {
                why.push("positive program differs from the concept".into());
            }
        }
        (Concept::FreeForm { program }, Side::Negative) => {
            let d = program_edit_distance(program, &rec.program);
            if d != 1 {
                why.push(format!("edit distance {d} from the concept"));
            }
            if let Some(pos) = positive_path {
                let dist = path_distance(pos, &bp, cfg.distinct_threshold);
                if dist <= cfg.distinct_threshold {
                    why.push(format!("aligned distance {dist:.4} not above {}", cfg.distinct_threshold));
                }
            }
        }
        (c, s) => {
            let holds = concept_holds(c, &bp, lib);
            if holds != (s == Side::Positive) {
                why.push(if holds { "negative satisfies the concept".into() } else { "positive violates the concept".into() });
            }
        }
    }
    why
}

pub fn verify_problem(p: &Problem, lib: &Library, cfg: &GeneratorConfig) -> VerificationReport {
    let mut violations = Vec::new();
    let problem_level = |reason: String| ProblemViolation { side: None, index: None, reason };
    for (side, list) in [(Side::Positive, &p.positives), (Side::Negative, &p.negatives)] {
        if list.len() != SIDE {
            violations.push(problem_level(format!("{side:?} side has {} images", list.len())));
        }
    }
    let positive_path = match &p.concept {
        Concept::FreeForm { program } => execute_canonical(program).ok(),
        _ => None,
    };
    let mut seeds = BTreeSet::new();
    let mut checked = 0;
    for (side, i, rec) in p.images() {
        checked += 1;
        let mut why = check_image(p, side, rec, positive_path.as_ref(), lib, cfg);
        if rec.file != image_file(side, i) {
            why.push(format!("file name `{}`", rec.file));
        }
        if !seeds.insert(rec.pose_seed) {
            why.push("pose seed reused within the problem".into());
        }
        if !why.is_empty() {
            violations.push(ProblemViolation { side: Some(side), index: Some(i), reason: why.join("; ") });
        }
    }
    VerificationReport { problem: p.id.clone(), images_checked: checked, violations }
}
