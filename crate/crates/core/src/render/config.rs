use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RenderError;

/// Renderer constants. Loaded from TOML; every key is optional.
///
/// ```toml
/// canvas_width = 512        # pixels
/// canvas_height = 512       # pixels
/// stroke_width = 3.0        # pixels
/// supersample = 4           # per-axis subsamples per pixel (1..=4)
/// zigzag_amplitude = 0.05   # transverse zigzag offset, in unit lengths
/// glyph_pitch = 0.12        # glyph / zigzag tooth spacing, in unit lengths
/// margin = 8.0              # minimum free border around each shape, pixels
/// min_fraction = 0.4        # smallest shape extent / placement region size
/// max_fraction = 0.8        # largest shape extent / placement region size
/// overlap_threshold = 0.15  # overlap score above which a shape is resampled
/// max_resamples = 20        # resampling budget for rejected shapes
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    pub canvas_width: u32,
    pub canvas_height: u32,
    pub stroke_width: f64,
    pub supersample: u32,
    pub zigzag_amplitude: f64,
    pub glyph_pitch: f64,
    pub margin: f64,
    pub min_fraction: f64,
    pub max_fraction: f64,
    pub overlap_threshold: f64,
    pub max_resamples: u32,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            canvas_width: 512,
            canvas_height: 512,
            stroke_width: 3.0,
            supersample: 4,
            zigzag_amplitude: 0.05,
            glyph_pitch: 0.12,
            margin: 8.0,
            min_fraction: 0.4,
            max_fraction: 0.8,
            overlap_threshold: 0.15,
            max_resamples: 20,
        }
    }
}

impl RenderConfig {
    pub fn from_toml(text: &str) -> Result<Self, RenderError> {
        let cfg: RenderConfig = toml::from_str(text).map_err(|e| RenderError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RenderError> {
        let text = std::fs::read_to_string(path).map_err(|e| RenderError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        let bad = |msg: &str| Err(RenderError::Config(msg.to_string()));
        if self.canvas_width == 0 || self.canvas_height == 0 {
            return bad("canvas must be non-empty");
        }
        if !(1..=4).contains(&self.supersample) {
            return bad("supersample must be in 1..=4");
        }
        if !(self.stroke_width > 0.0) || !(self.glyph_pitch > 0.0) || self.zigzag_amplitude < 0.0 {
            return bad("stroke width and glyph pitch must be positive");
        }
        if !(0.0 < self.min_fraction && self.min_fraction <= self.max_fraction && self.max_fraction <= 1.0) {
            return bad("fractions must satisfy 0 < min <= max <= 1");
        }
        if self.margin < 0.0 {
            return bad("margin must be non-negative");
        }
        Ok(())
    }
}
