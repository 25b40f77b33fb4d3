//! Problem assembly: a concept, seven positives and seven negatives.
//!
//! Index 6 on each side is the test image. Every image records its program
//! and the seed its poses were drawn from, so it can be re-rendered and
//! re-checked without the generator.

pub mod align;
mod attribute;
mod basic;
mod freeform;
mod verify;

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::attributes::AttributeId;
use crate::dsl::{ActionProgram, DslError, ValueGrid};
use crate::library::LibraryError;
use crate::render::{layout_poses, render_program, Pose, RenderConfig, RenderError};

pub use attribute::{abstract_feasible, gen_abstract_problem};
pub use basic::{basic_feasible, gen_basic_problem};
pub use freeform::{draw_freeform_concept, gen_freeform_problem, FreeFormSpec};
pub use verify::{concept_holds, verify_problem, ProblemViolation, VerificationReport};

/// Images per side, the last one being the test image.
pub const SIDE: usize = 7;
/// Aligned distance below which two shapes count as the same.
pub const MATCH_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("no acceptable problem within {0} rounds")]
    GenerationBudgetExceeded(u32),
    #[error("library cannot support the concept: {0}")]
    InsufficientLibraryCoverage(String),
    #[error(transparent)]
    Library(#[from] LibraryError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

impl ProblemError {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemError::GenerationBudgetExceeded(_) => "GenerationBudgetExceeded",
            ProblemError::InsufficientLibraryCoverage(_) => "InsufficientLibraryCoverage",
            ProblemError::Library(e) => e.name(),
            ProblemError::Render(e) => e.name(),
            ProblemError::Dsl(e) => e.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    FreeForm,
    Basic,
    Abstract,
}

impl ProblemKind {
    pub fn prefix(self) -> &'static str {
        match self {
            ProblemKind::FreeForm => "ff",
            ProblemKind::Basic => "ba",
            ProblemKind::Abstract => "ab",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Concept {
    /// One fixed program; moving types are part of the concept.
    FreeForm { program: ActionProgram },
    /// One category, or a composition of two shapes from two categories.
    Basic { categories: Vec<String> },
    /// A conjunction of one or two attributes.
    Abstract { attributes: Vec<AttributeId> },
}

impl Concept {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Concept::FreeForm { .. } => ProblemKind::FreeForm,
            Concept::Basic { .. } => ProblemKind::Basic,
            Concept::Abstract { .. } => ProblemKind::Abstract,
        }
    }

    /// Stable identifier used to compare concepts across splits.
    pub fn name(&self) -> String {
        match self {
            Concept::FreeForm { program } => program
                .shapes
                .iter()
                .map(|s| s.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(" | "),
            Concept::Basic { categories } => {
                let set: BTreeSet<&String> = categories.iter().collect();
                set.into_iter().cloned().collect::<Vec<_>>().join("+")
            }
            Concept::Abstract { attributes } => {
                let set: BTreeSet<String> = attributes.iter().map(|a| a.name()).collect();
                set.into_iter().collect::<Vec<_>>().join("+")
            }
        }
    }

    /// Longest shape of a free-form concept.
    pub fn program_length(&self) -> Option<usize> {
        match self {
            Concept::FreeForm { program } => program.shape_lengths().into_iter().max(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Positive,
    Negative,
}

pub fn image_file(side: Side, index: usize) -> String {
    let p = match side {
        Side::Positive => "pos",
        Side::Negative => "neg",
    };
    if index == SIDE - 1 {
        format!("{p}_test.png")
    } else {
        format!("{p}_{index}.png")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    /// File name inside the problem directory.
    pub file: String,
    pub program: ActionProgram,
    pub pose_seed: u64,
    pub poses: Vec<Pose>,
    /// Library entries the shapes were drawn from; informational only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sources: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub id: String,
    pub concept: Concept,
    pub seed: u64,
    pub positives: Vec<ImageRecord>,
    pub negatives: Vec<ImageRecord>,
}

impl Problem {
    pub fn kind(&self) -> ProblemKind {
        self.concept.kind()
    }

    pub fn images(&self) -> impl Iterator<Item = (Side, usize, &ImageRecord)> {
        let pos = self.positives.iter().enumerate().map(|(i, r)| (Side::Positive, i, r));
        let neg = self.negatives.iter().enumerate().map(|(i, r)| (Side::Negative, i, r));
        pos.chain(neg)
    }
}

/// Settings shared by all problem types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub render: RenderConfig,
    pub grid: ValueGrid,
    /// Smallest aligned distance between a free-form negative and the
    /// positive shape, in units of the shape diameter.
    pub distinct_threshold: f64,
    /// Resample rounds before giving up on a problem.
    pub max_rounds: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { render: RenderConfig::default(), grid: ValueGrid::default(), distinct_threshold: 0.05, max_rounds: 20 }
    }
}

pub fn poses_for(program: &ActionProgram, pose_seed: u64, cfg: &RenderConfig) -> Result<Vec<Pose>, RenderError> {
    layout_poses(program, cfg, &mut ChaCha8Rng::seed_from_u64(pose_seed))
}

/// Draws pose seeds that are unique within one problem, so no two images
/// share a placement.
pub(crate) struct SeedPool(BTreeSet<u64>);

impl SeedPool {
    pub fn new() -> Self {
        SeedPool(BTreeSet::new())
    }

    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> u64 {
        loop {
            let s = rng.random::<u64>();
            if self.0.insert(s) {
                return s;
            }
        }
    }
}

pub(crate) fn make_image(
    side: Side,
    index: usize,
    program: ActionProgram,
    pose_seed: u64,
    sources: Vec<String>,
    cfg: &RenderConfig,
) -> Result<ImageRecord, RenderError> {
    let poses = poses_for(&program, pose_seed, cfg)?;
    Ok(ImageRecord { file: image_file(side, index), program, pose_seed, poses, sources })
}

/// PNG bytes of every image, keyed by file name.
pub fn render_problem(p: &Problem, cfg: &RenderConfig) -> Result<Vec<(String, Vec<u8>)>, RenderError> {
    p.images()
        .map(|(_, _, r)| Ok((r.file.clone(), render_program(&r.program, &r.poses, cfg)?.encode_png()?)))
        .collect()
}
