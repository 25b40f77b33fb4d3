//! Dataset layout on disk: `manifest.json` at the root and one directory
//! per problem holding its images and `problem.json`.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::problem::{render_problem, Problem};

use super::{DatasetError, Manifest, ProblemRecord, SCHEMA_VERSION};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const PROBLEM_FILE: &str = "problem.json";

fn io(path: &Path) -> impl Fn(std::io::Error) -> DatasetError + '_ {
    move |e| DatasetError::Io { path: path.to_path_buf(), message: e.to_string() }
}

fn write_record(r: &ProblemRecord, root: &Path, m: &Manifest) -> Result<(), DatasetError> {
    let Some(p) = &r.problem else { return Ok(()) };
    let dir = root.join(r.dir());
    fs::create_dir_all(&dir).map_err(io(&dir))?;
    for (file, bytes) in render_problem(p, &m.spec.generator.render)? {
        let path = dir.join(file);
        fs::write(&path, bytes).map_err(io(&path))?;
    }
    let path = dir.join(PROBLEM_FILE);
    let text = serde_json::to_string_pretty(p).expect("problems serialize");
    fs::write(&path, text).map_err(io(&path))
}

/// Renders every generated problem and writes the manifest.
pub fn write_dataset(m: &Manifest, dir: &Path) -> Result<(), DatasetError> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    m.problems.par_iter().try_for_each(|r| write_record(r, dir, m))?;
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(m).expect("manifests serialize");
    fs::write(&path, text).map_err(io(&path))
}

fn read(path: &Path) -> Result<String, DatasetError> {
    if !path.is_file() {
        return Err(DatasetError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(io(path))
}

fn parse_error(path: &Path) -> impl Fn(serde_json::Error) -> DatasetError + '_ {
    move |e| DatasetError::Parse { path: path.to_path_buf(), message: e.to_string() }
}

/// Reads a manifest, checks every listed file exists and attaches the
/// stored problems.
pub fn load_manifest(dir: &Path) -> Result<Manifest, DatasetError> {
    let path = dir.join(MANIFEST_FILE);
    let text = read(&path)?;
    let raw: serde_json::Value = serde_json::from_str(&text).map_err(parse_error(&path))?;
    let found = raw.get("schema_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(DatasetError::SchemaVersionMismatch { found, expected: SCHEMA_VERSION });
    }
    let mut m: Manifest = serde_json::from_value(raw).map_err(parse_error(&path))?;
    m.problems.par_iter_mut().try_for_each(|r| {
        for f in &r.files {
            let p: PathBuf = dir.join(f);
            if !p.is_file() {
                return Err(DatasetError::MissingFile(p));
            }
        }
        if !r.files.is_empty() {
            let path = dir.join(r.dir()).join(PROBLEM_FILE);
            let p: Problem = serde_json::from_str(&read(&path)?).map_err(parse_error(&path))?;
            r.problem = Some(p);
        }
        Ok(())
    })?;
    Ok(m)
}
