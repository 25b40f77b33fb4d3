//! Two-way six-shot episodes, file exchange with external solvers, scoring.
//!
//! An export is a directory a solver can read without seeing the dataset:
//! `episodes.json` plus one folder per problem holding the twelve support
//! images and the two queries as `query_0.png` and `query_1.png`. Solvers
//! answer with `predictions.json`. The answer key is kept apart from the
//! export, or recomputed from the manifest and the export seed. Accuracy is
//! counted per query, two queries per problem.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Manifest, ProblemRecord, SplitSelector};
use crate::problem::{image_file, Side, SIDE};
use crate::render::Image;
use crate::seed::derive_seed;

pub const EPISODES_SCHEMA: u32 = 1;
pub const EPISODES_FILE: &str = "episodes.json";
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;
/// Side of the square the pixel baseline downsamples to.
pub const PROTOTYPE_SIDE: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("no problems in split `{0}`")]
    UnknownSplit(String),
    #[error("no prediction for {} problem(s): {}", .0.len(), .0.join(", "))]
    MissingPrediction(Vec<String>),
    #[error("predictions for unknown problem(s): {}", .0.join(", "))]
    UnknownId(Vec<String>),
    #[error("problem {id}: expected 2 labels, got {got}")]
    WrongQueryCount { id: String, got: usize },
    #[error("cannot read image {path}: {message}")]
    ImageReadError { path: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl HarnessError {
    pub fn name(&self) -> &'static str {
        match self {
            HarnessError::UnknownSplit(_) => "UnknownSplit",
            HarnessError::MissingPrediction(_) => "MissingPrediction",
            HarnessError::UnknownId(_) => "UnknownId",
            HarnessError::WrongQueryCount { .. } => "WrongQueryCount",
            HarnessError::ImageReadError { .. } => "ImageReadError",
            HarnessError::Io { .. } => "IoError",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Positive,
    Negative,
}

impl From<Side> for Label {
    fn from(s: Side) -> Label {
        match s {
            Side::Positive => Label::Positive,
            Side::Negative => Label::Negative,
        }
    }
}

/// One problem as a solver sees it. Paths are relative to the export
/// directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Episode {
    pub problem: String,
    pub positives: Vec<String>,
    pub negatives: Vec<String>,
    /// The two test images, one of each class, in random order.
    pub queries: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpisodeFile {
    pub schema_version: u32,
    pub split: String,
    pub episodes: Vec<Episode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerKey {
    pub schema_version: u32,
    pub split: String,
    pub answers: BTreeMap<String, [Label; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub predictions: BTreeMap<String, Vec<Label>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemScore {
    pub problem: String,
    pub correct: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub split: String,
    pub queries: usize,
    pub correct: usize,
    pub accuracy: f64,
    /// Wilson score interval at 95%.
    pub ci_low: f64,
    pub ci_high: f64,
    pub per_problem: Vec<ProblemScore>,
}

/// Episodes for every problem in `sel`, with their answer key.
pub fn export_episodes(m: &Manifest, sel: SplitSelector, seed: u64) -> Result<(EpisodeFile, AnswerKey), HarnessError> {
    let records: Vec<_> = m.select(sel).collect();
    if records.is_empty() {
        return Err(HarnessError::UnknownSplit(sel.to_string()));
    }
    let made: Vec<(Episode, [Label; 2])> = records
        .par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &r.id));
            let context = |s: Side| (0..SIDE - 1).map(|i| format!("{}/{}", r.id, image_file(s, i))).collect();
            let mut order = [Side::Positive, Side::Negative];
            if rng.random_bool(0.5) {
                order.swap(0, 1);
            }
            let episode = Episode {
                problem: r.id.clone(),
                positives: context(Side::Positive),
                negatives: context(Side::Negative),
                queries: [0, 1].map(|q| format!("{}/query_{q}.png", r.id)),
            };
            (episode, order.map(Label::from))
        })
        .collect();
    let split = sel.to_string();
    let answers = made.iter().map(|(e, k)| (e.problem.clone(), *k)).collect();
    let episodes = made.into_iter().map(|(e, _)| e).collect();
    Ok((
        EpisodeFile { schema_version: EPISODES_SCHEMA, split: split.clone(), episodes },
        AnswerKey { schema_version: EPISODES_SCHEMA, split, answers },
    ))
}

fn copy(from: &Path, to: &Path) -> Result<(), HarnessError> {
    fs::copy(from, to)
        .map(|_| ())
        .map_err(|e| HarnessError::Io { path: from.display().to_string(), message: e.to_string() })
}

fn write_episode(r: &ProblemRecord, answer: &[Label; 2], root: &Path, out: &Path) -> Result<(), HarnessError> {
    let dir = out.join(&r.id);
    fs::create_dir_all(&dir).map_err(|e| HarnessError::Io { path: dir.display().to_string(), message: e.to_string() })?;
    for side in [Side::Positive, Side::Negative] {
        for i in 0..SIDE - 1 {
            copy(&root.join(r.image_path(side, i)), &dir.join(image_file(side, i)))?;
        }
    }
    for (q, label) in answer.iter().enumerate() {
        let side = if *label == Label::Positive { Side::Positive } else { Side::Negative };
        copy(&root.join(r.image_path(side, SIDE - 1)), &dir.join(format!("query_{q}.png")))?;
    }
    Ok(())
}

/// Writes the solver-facing export of `file` to `out`, copying images from
/// the dataset at `root`.
pub fn write_episodes(m: &Manifest, root: &Path, file: &EpisodeFile, key: &AnswerKey, out: &Path) -> Result<(), HarnessError> {
    file.episodes.par_iter().try_for_each(|e| {
        let r = m.get(&e.problem).ok_or_else(|| HarnessError::UnknownId(vec![e.problem.clone()]))?;
        let answer = key.answers.get(&e.problem).ok_or_else(|| HarnessError::MissingPrediction(vec![e.problem.clone()]))?;
        write_episode(r, answer, root, out)
    })?;
    let path = out.join(EPISODES_FILE);
    let text = serde_json::to_string_pretty(file).expect("episodes serialize");
    fs::write(&path, text).map_err(|e| HarnessError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Wilson score interval for `k` successes out of `n` at normal quantile `z`.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub fn score_predictions(key: &AnswerKey, preds: &PredictionSet) -> Result<Score, HarnessError> {
    let missing: Vec<String> = key.answers.keys().filter(|id| !preds.predictions.contains_key(*id)).cloned().collect();
    if !missing.is_empty() {
        return Err(HarnessError::MissingPrediction(missing));
    }
    let unknown: Vec<String> = preds.predictions.keys().filter(|id| !key.answers.contains_key(*id)).cloned().collect();
    if !unknown.is_empty() {
        return Err(HarnessError::UnknownId(unknown));
    }
    let mut per_problem = Vec::with_capacity(key.answers.len());
    for (id, truth) in &key.answers {
        let got = &preds.predictions[id];
        if got.len() != 2 {
            return Err(HarnessError::WrongQueryCount { id: id.clone(), got: got.len() });
        }
        let correct = truth.iter().zip(got).filter(|(a, b)| a == b).count();
        per_problem.push(ProblemScore { problem: id.clone(), correct });
    }
    let queries = 2 * per_problem.len();
    let correct = per_problem.iter().map(|p| p.correct).sum();
    let (ci_low, ci_high) = wilson_interval(correct, queries, Z95);
    Ok(Score {
        split: key.split.clone(),
        queries,
        correct,
        accuracy: correct as f64 / queries as f64,
        ci_low,
        ci_high,
        per_problem,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    /// Fair coin per query.
    Random,
    /// Nearer class mean in downsampled pixel space.
    PixelPrototype,
}

impl std::str::FromStr for Baseline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(Baseline::Random),
            "pixel_prototype" => Ok(Baseline::PixelPrototype),
            _ => Err(format!("unknown baseline `{s}`")),
        }
    }
}

/// Grey levels in [0, 1], area-averaged onto a 64x64 grid.
pub fn downsample(img: &Image) -> Vec<f64> {
    let n = PROTOTYPE_SIDE;
    let (w, h) = (img.width as usize, img.height as usize);
    let mut sum = vec![0.0; n * n];
    let mut cnt = vec![0usize; n * n];
    for y in 0..h {
        let cy = y * n / h;
        for x in 0..w {
            let c = cy * n + x * n / w;
            sum[c] += img.pixels[y * w + x] as f64 / 255.0;
            cnt[c] += 1;
        }
    }
    sum.iter().zip(&cnt).map(|(s, &c)| if c == 0 { 1.0 } else { s / c as f64 }).collect()
}

fn load(root: &Path, rel: &str) -> Result<Vec<f64>, HarnessError> {
    Image::read_png(&root.join(rel))
        .map(|img| downsample(&img))
        .map_err(|e| HarnessError::ImageReadError { path: rel.to_string(), message: e.to_string() })
}

fn mean(vs: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; vs[0].len()];
    for v in vs {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x / vs.len() as f64;
        }
    }
    out
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Labels for the two queries of an episode. `root` is the export directory.
pub fn baseline_predict<R: Rng + ?Sized>(
    kind: Baseline,
    episode: &Episode,
    root: &Path,
    rng: &mut R,
) -> Result<Vec<Label>, HarnessError> {
    match kind {
        Baseline::Random => {
            Ok((0..2).map(|_| if rng.random_bool(0.5) { Label::Positive } else { Label::Negative }).collect())
        }
        Baseline::PixelPrototype => {
            let class = |files: &[String]| files.iter().map(|f| load(root, f)).collect::<Result<Vec<_>, _>>().map(|v| mean(&v));
            let (pos, neg) = (class(&episode.positives)?, class(&episode.negatives)?);
            episode
                .queries
                .iter()
                .map(|q| {
                    let v = load(root, q)?;
                    Ok(if dist2(&v, &pos) <= dist2(&v, &neg) { Label::Positive } else { Label::Negative })
                })
                .collect()
        }
    }
}

/// Runs a baseline over every episode; each problem gets its own stream
/// derived from `seed`.
pub fn run_baseline(kind: Baseline, episodes: &EpisodeFile, root: &Path, seed: u64) -> Result<PredictionSet, HarnessError> {
    let predictions = episodes
        .episodes
        .par_iter()
        .map(|e| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &e.problem));
            Ok((e.problem.clone(), baseline_predict(kind, e, root, &mut rng)?))
        })
        .collect::<Result<BTreeMap<_, _>, HarnessError>>()?;
    Ok(PredictionSet { predictions })
}
