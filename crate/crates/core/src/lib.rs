//! Procedural Bongard-style visual concept problems built from action programs.

pub mod attributes;
pub mod dataset;
pub mod dsl;
pub mod geometry;
pub mod harness;
pub mod library;
pub mod problem;
pub mod render;
pub mod seed;
