//! Turtle execution, stroke decoration and rasterization.

pub mod config;
pub mod decorate;
pub mod overlap;
pub mod path;
pub mod pose;
pub mod raster;

pub use config::RenderConfig;
pub use decorate::{decorate_path, DecoratedPolyline};
pub use overlap::overlap_score;
pub use path::{execute_canonical, execute_program, BasePath, Component, Pose};
pub use pose::{layout_poses, sample_pose};
pub use raster::{rasterize, Image};

use crate::dsl::ActionProgram;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("arc with zero sweep or zero length at shape {shape}, action {action}")]
    DegenerateArc { shape: usize, action: usize },
    #[error("{shapes} shapes but {poses} poses")]
    PoseCountMismatch { shapes: usize, poses: usize },
    #[error("shape does not fit the canvas")]
    CannotFit,
    #[error("invalid render config: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("png: {0}")]
    Png(String),
}

impl RenderError {
    pub fn name(&self) -> &'static str {
        match self {
            RenderError::DegenerateArc { .. } => "DegenerateArc",
            RenderError::PoseCountMismatch { .. } => "PoseCountMismatch",
            RenderError::CannotFit => "CannotFit",
            RenderError::Config(_) => "Config",
            RenderError::Io(_) => "Io",
            RenderError::Png(_) => "Png",
        }
    }
}

/// Execute, decorate and rasterize a program at the given poses.
pub fn render_program(p: &ActionProgram, poses: &[Pose], cfg: &RenderConfig) -> Result<Image, RenderError> {
    let bp = execute_program(p, poses)?;
    Ok(rasterize(&decorate_path(&bp, p, cfg), cfg))
}
