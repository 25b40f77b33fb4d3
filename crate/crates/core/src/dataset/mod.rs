//! Whole-benchmark construction: counts, split planning, manifests.
//!
//! Counts at a given scale come from the full-size counts by largest
//! remainder, so small builds keep the same proportions. Every problem draws
//! its randomness from a seed derived from the benchmark seed and its id.

mod audit;
mod plan;
mod store;

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attributes::AttributeId;
use crate::dsl::ValueGrid;
use crate::library::Library;
use crate::problem::{
    draw_freeform_concept, gen_abstract_problem, gen_basic_problem, gen_freeform_problem, image_file, verify_problem,
    Concept, GeneratorConfig, Problem, ProblemError, ProblemKind, Side, VerificationReport, SIDE,
};
use crate::render::RenderError;
use crate::seed::derive_seed;

pub use audit::{audit_splits, AuditFinding, AuditReport};
pub use plan::{plan_benchmark, Planned, Target};
pub use store::{load_manifest, write_dataset, MANIFEST_FILE, PROBLEM_FILE};

pub const SCHEMA_VERSION: u32 = 1;
pub const GENERATOR_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Problems per type at full size: free-form, basic, abstract.
pub const FULL_KINDS: [usize; 3] = [3600, 4000, 4400];
/// Train, val, test at full size.
pub const FULL_SPLITS: [usize; 3] = [9300, 900, 1800];
/// Test sub-splits at full size, in [`SubSplit::ALL`] order.
pub const FULL_SUB_SPLITS: [usize; 4] = [600, 480, 400, 320];
/// Problems per concept at full size.
pub const FULL_PER_CONCEPT: usize = 20;
/// Attribute pairs reserved for the combination test split.
pub const CM_COMBOS: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("library cannot support the benchmark: {0}")]
    InsufficientLibraryCoverage(String),
    #[error("infeasible benchmark spec: {0}")]
    SpecInfeasible(String),
    #[error("problem {id}: {source}")]
    Generation { id: String, source: ProblemError },
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("manifest schema version {found}, expected {expected}")]
    SchemaVersionMismatch { found: u32, expected: u32 },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl DatasetError {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetError::InsufficientLibraryCoverage(_) => "InsufficientLibraryCoverage",
            DatasetError::SpecInfeasible(_) => "SpecInfeasible",
            DatasetError::Generation { source, .. } => source.name(),
            DatasetError::Render(e) => e.name(),
            DatasetError::Io { .. } => "IoError",
            DatasetError::MissingFile(_) => "MissingFile",
            DatasetError::SchemaVersionMismatch { .. } => "SchemaVersionMismatch",
            DatasetError::Parse { .. } => "ParseError",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

/// Test-set constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubSplit {
    /// Free-form programs one stroke longer than any seen in training.
    Ff,
    /// Basic concepts absent from training.
    Ba,
    /// Unseen pairs of attributes that each appear alone in training.
    Cm,
    /// Concepts built on the held-out attribute.
    Nv,
}

impl SubSplit {
    pub const ALL: [SubSplit; 4] = [SubSplit::Ff, SubSplit::Ba, SubSplit::Cm, SubSplit::Nv];

    pub fn as_str(self) -> &'static str {
        match self {
            SubSplit::Ff => "ff",
            SubSplit::Ba => "ba",
            SubSplit::Cm => "cm",
            SubSplit::Nv => "nv",
        }
    }
}

/// A split, optionally narrowed to one test sub-split: `train`, `val`,
/// `test`, or `test_ff`, `test_ba`, `test_cm`, `test_nv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSelector {
    pub split: Split,
    pub sub_split: Option<SubSplit>,
}

impl SplitSelector {
    pub fn matches(&self, r: &ProblemRecord) -> bool {
        r.split == self.split && self.sub_split.is_none_or(|s| r.sub_split == Some(s))
    }
}

impl fmt::Display for SplitSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sub_split {
            Some(s) => write!(f, "{}_{}", self.split.as_str(), s.as_str()),
            None => f.write_str(self.split.as_str()),
        }
    }
}

impl FromStr for SplitSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        for split in Split::ALL {
            if s == split.as_str() {
                return Ok(SplitSelector { split, sub_split: None });
            }
        }
        for sub in SubSplit::ALL {
            if s == format!("test_{}", sub.as_str()) {
                return Ok(SplitSelector { split: Split::Test, sub_split: Some(sub) });
            }
        }
        Err(format!("unknown split `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkSpec {
    /// Fraction of the full benchmark size.
    pub scale: f64,
    pub seed: u64,
    pub held_out_attribute: AttributeId,
    /// Longest free-form shape in train and val; test shapes are one longer.
    pub train_max_strokes: usize,
    /// Library file; the built-in library when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub library: Option<PathBuf>,
    pub generator: GeneratorConfig,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        BenchmarkSpec {
            scale: 1.0,
            seed: 0,
            held_out_attribute: AttributeId::StraightLines(8),
            train_max_strokes: 8,
            library: None,
            generator: GeneratorConfig::default(),
        }
    }
}

impl BenchmarkSpec {
    pub fn from_toml(text: &str) -> Result<Self, DatasetError> {
        let spec: BenchmarkSpec = toml::from_str(text).map_err(|e| DatasetError::Parse { path: PathBuf::new(), message: e.to_string() })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        let text = std::fs::read_to_string(path).map_err(|e| DatasetError::Io { path: path.into(), message: e.to_string() })?;
        Self::from_toml(&text).map_err(|e| match e {
            DatasetError::Parse { message, .. } => DatasetError::Parse { path: path.into(), message },
            e => e,
        })
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let g = &self.generator.grid;
        ValueGrid::new(g.lengths.clone(), g.angles.clone(), 0.0)
            .map_err(|e| DatasetError::SpecInfeasible(e.to_string()))?;
        self.generator.render.validate()?;
        Counts::at_scale(self.scale).map(|_| ())
    }
}

/// Reads a value grid from TOML (`lengths = [...]`, `angles = [...]`).
pub fn load_grid(path: &Path) -> Result<ValueGrid, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::Io { path: path.into(), message: e.to_string() })?;
    let g: ValueGrid = toml::from_str(&text).map_err(|e| DatasetError::Parse { path: path.into(), message: e.to_string() })?;
    ValueGrid::new(g.lengths, g.angles, 0.0).map_err(|e| DatasetError::SpecInfeasible(e.to_string()))
}

/// Splits `total` in proportion to `weights`; leftover units go to the
/// largest fractional parts, earlier entries first on ties.
pub fn largest_remainder(total: usize, weights: &[usize]) -> Vec<usize> {
    let sum: usize = weights.iter().sum();
    if sum == 0 {
        return vec![0; weights.len()];
    }
    let mut out: Vec<usize> = weights.iter().map(|&w| total * w / sum).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(total * weights[i] % sum), i));
    let short = total - out.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        out[i] += 1;
    }
    out
}

/// Problem counts of a benchmark. Type arrays are in free-form, basic,
/// abstract order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub kinds: [usize; 3],
    /// Train, val, test.
    pub splits: [usize; 3],
    /// In [`SubSplit::ALL`] order.
    pub sub_splits: [usize; 4],
    pub train: [usize; 3],
    pub val: [usize; 3],
    pub per_concept: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.kinds.iter().sum()
    }

    pub fn sub_split(&self, s: SubSplit) -> usize {
        self.sub_splits[s as usize]
    }

    pub fn at_scale(scale: f64) -> Result<Counts, DatasetError> {
        let infeasible = |why: String| Err(DatasetError::SpecInfeasible(why));
        if !(scale.is_finite() && scale > 0.0) {
            return infeasible(format!("scale {scale} is not positive"));
        }
        let total = (FULL_KINDS.iter().sum::<usize>() as f64 * scale).round() as usize;
        let kinds: [usize; 3] = largest_remainder(total, &FULL_KINDS).try_into().expect("3");
        let splits: [usize; 3] = largest_remainder(total, &FULL_SPLITS).try_into().expect("3");
        let sub_splits: [usize; 4] = largest_remainder(splits[2], &FULL_SUB_SPLITS).try_into().expect("4");
        let test = [sub_splits[0], sub_splits[1], sub_splits[2] + sub_splits[3]];
        let mut rest = [0; 3];
        for k in 0..3 {
            rest[k] = kinds[k]
                .checked_sub(test[k])
                .ok_or_else(|| DatasetError::SpecInfeasible(format!("type {k} has fewer problems than its test share")))?;
        }
        let val: [usize; 3] = largest_remainder(splits[1], &rest).try_into().expect("3");
        let mut train = [0; 3];
        for k in 0..3 {
            train[k] = rest[k]
                .checked_sub(val[k])
                .ok_or_else(|| DatasetError::SpecInfeasible(format!("type {k} has fewer problems than its val share")))?;
        }
        if let Some(i) = sub_splits.iter().position(|&n| n == 0) {
            return infeasible(format!("scale {scale} leaves the {} test split empty", SubSplit::ALL[i].as_str()));
        }
        if let Some(k) = train.iter().position(|&n| n == 0) {
            return infeasible(format!("scale {scale} leaves no {} training problems", kind_at(k).prefix()));
        }
        let per_concept = ((FULL_PER_CONCEPT as f64 * scale).round() as usize).max(1);
        Ok(Counts { kinds, splits, sub_splits, train, val, per_concept })
    }
}

fn kind_at(k: usize) -> ProblemKind {
    [ProblemKind::FreeForm, ProblemKind::Basic, ProblemKind::Abstract][k]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub id: String,
    pub split: Split,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_split: Option<SubSplit>,
    pub concept: Concept,
    /// Seed the problem was generated from.
    pub seed: u64,
    /// Paths relative to the dataset root; empty for dry runs.
    #[serde(default)]
    pub files: Vec<String>,
    /// Full problem; stored beside the images rather than in the manifest.
    #[serde(skip)]
    pub problem: Option<Problem>,
}

impl ProblemRecord {
    pub fn dir(&self) -> String {
        format!("{}/{}", self.split.as_str(), self.id)
    }

    pub fn image_path(&self, side: Side, index: usize) -> String {
        format!("{}/{}", self.dir(), image_file(side, index))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub generator_version: String,
    pub library_hash: String,
    pub spec: BenchmarkSpec,
    pub counts: Counts,
    /// Concepts only; no programs were searched and nothing was rendered.
    pub dry_run: bool,
    pub problems: Vec<ProblemRecord>,
}

impl Manifest {
    pub fn select(&self, sel: SplitSelector) -> impl Iterator<Item = &ProblemRecord> {
        self.problems.iter().filter(move |r| sel.matches(r))
    }

    pub fn get(&self, id: &str) -> Option<&ProblemRecord> {
        self.problems.iter().find(|r| r.id == id)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Plan concepts only: no negatives searched, no images.
    pub dry_run: bool,
}

/// Generation attempts per problem, each from a fresh derived seed.
const ATTEMPTS: usize = 4;

fn attempt_seed(base: u64, id: &str, attempt: usize) -> u64 {
    if attempt == 0 {
        derive_seed(base, id)
    } else {
        derive_seed(base, &format!("{id}#{attempt}"))
    }
}

fn generate(p: &Planned, seed: u64, lib: &Library, cfg: &GeneratorConfig) -> Result<Problem, ProblemError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match &p.target {
        Target::FreeForm(spec) => gen_freeform_problem(&p.id, spec, cfg, seed, &mut rng),
        Target::Basic(cats) => gen_basic_problem(&p.id, cats, lib, cfg, seed, &mut rng),
        Target::Abstract(attrs) => gen_abstract_problem(&p.id, attrs, lib, cfg, seed, &mut rng),
    }
}

/// Generates one planned problem, trying attempt seeds from `first` on.
fn realize(
    p: &Planned,
    spec: &BenchmarkSpec,
    lib: &Library,
    dry_run: bool,
    first: usize,
) -> Result<ProblemRecord, DatasetError> {
    let cfg = &spec.generator;
    let fail = |source: ProblemError| DatasetError::Generation { id: p.id.clone(), source };
    let mut record = ProblemRecord {
        id: p.id.clone(),
        split: p.split,
        sub_split: p.sub_split,
        concept: Concept::Basic { categories: Vec::new() },
        seed: attempt_seed(spec.seed, &p.id, first),
        files: Vec::new(),
        problem: None,
    };
    if dry_run {
        record.concept = match &p.target {
            Target::FreeForm(ff) => {
                let mut rng = ChaCha8Rng::seed_from_u64(record.seed);
                Concept::FreeForm { program: draw_freeform_concept(ff, cfg, &mut rng).map_err(fail)? }
            }
            Target::Basic(c) => Concept::Basic { categories: c.clone() },
            Target::Abstract(a) => Concept::Abstract { attributes: a.clone() },
        };
        return Ok(record);
    }
    let mut last = None;
    for attempt in first..first + ATTEMPTS {
        let seed = attempt_seed(spec.seed, &p.id, attempt);
        match generate(p, seed, lib, cfg) {
            Ok(problem) => {
                record.seed = seed;
                record.concept = problem.concept.clone();
                record.files = (0..SIDE)
                    .flat_map(|i| [(Side::Positive, i), (Side::Negative, i)])
                    .map(|(s, i)| record.image_path(s, i))
                    .chain([format!("{}/{PROBLEM_FILE}", record.dir())])
                    .collect();
                record.files.sort();
                record.problem = Some(problem);
                return Ok(record);
            }
            Err(e @ ProblemError::GenerationBudgetExceeded(_)) => last = Some(e),
            Err(e) => return Err(fail(e)),
        }
    }
    Err(fail(last.expect("at least one attempt")))
}

/// Plans and generates every problem of the benchmark.
pub fn build_benchmark(spec: &BenchmarkSpec, lib: &Library, opts: BuildOptions) -> Result<Manifest, DatasetError> {
    let counts = Counts::at_scale(spec.scale)?;
    let mut plan = plan_benchmark(spec, &counts, lib)?;
    plan.sort_by(|a, b| a.id.cmp(&b.id));
    let mut problems = plan
        .par_iter()
        .map(|p| realize(p, spec, lib, opts.dry_run, 0))
        .collect::<Result<Vec<_>, _>>()?;
    // Short random programs occasionally repeat; every free-form concept
    // must be unique across the benchmark.
    let mut seen = BTreeSet::new();
    for (p, r) in plan.iter().zip(problems.iter_mut()) {
        let mut first = 0;
        while r.concept.kind() == ProblemKind::FreeForm && !seen.insert(r.concept.name()) {
            first += ATTEMPTS;
            *r = realize(p, spec, lib, opts.dry_run, first)?;
        }
    }
    Ok(Manifest {
        schema_version: SCHEMA_VERSION,
        generator_version: GENERATOR_VERSION.to_string(),
        library_hash: lib.version_hash().to_string(),
        spec: spec.clone(),
        counts,
        dry_run: opts.dry_run,
        problems,
    })
}

/// Re-verifies every generated problem of a manifest.
pub fn verify_dataset(m: &Manifest, lib: &Library) -> Vec<VerificationReport> {
    m.problems
        .par_iter()
        .filter_map(|r| r.problem.as_ref())
        .map(|p| verify_problem(p, lib, &m.spec.generator))
        .collect()
}
