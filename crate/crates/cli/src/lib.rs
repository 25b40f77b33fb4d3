//! `bongard-forge`: generate, verify and score benchmarks from the shell.
//!
//! Every subcommand only marshals arguments into calls on `bongard_core`.
//! Exit codes: 0 on success, 1 on a domain error or failed check, 2 on a
//! usage error.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use bongard_core::dataset::{
    audit_splits, build_benchmark, load_grid, load_manifest, verify_dataset, write_dataset, BenchmarkSpec, BuildOptions,
    Manifest, SplitSelector,
};
use bongard_core::dsl::ActionProgram;
use bongard_core::harness::{export_episodes, run_baseline, score_predictions, write_episodes, Baseline, PredictionSet, Score};
use bongard_core::library::{load_library, Library};
use bongard_core::problem::poses_for;
use bongard_core::render::{render_program, RenderConfig};

pub const CONFIG_ENV: &str = "BONGARD_FORGE_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "bongard-forge", version, about = "Procedural Bongard-style benchmark generator")]
pub struct Cli {
    /// More progress output on stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a benchmark and write it to disk.
    Generate(GenerateArgs),
    /// Re-verify every problem of a dataset and audit its splits.
    Verify(VerifyArgs),
    /// Render one program file to a PNG.
    Render(RenderArgs),
    /// Export solver-facing episodes for a split.
    Episodes(EpisodesArgs),
    /// Score a predictions file.
    Score(ScoreArgs),
    /// Run a built-in baseline end to end and score it.
    Baseline(BaselineArgs),
    /// Print a problem's concept and programs.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub scale: Option<f64>,
    /// Benchmark spec (TOML); defaults to $BONGARD_FORGE_CONFIG when set.
    #[arg(long, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Shape library JSON.
    #[arg(long)]
    pub library: Option<PathBuf>,
    /// Free-form value grid (TOML with `lengths` and `angles`).
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Plan concepts and write only the manifest.
    #[arg(long)]
    pub dry_run: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub dataset: PathBuf,
    #[arg(long)]
    pub library: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Program JSON.
    pub program: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Pose seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Render settings (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EpisodesArgs {
    pub dataset: PathBuf,
    #[arg(long)]
    pub split: SplitSelector,
    #[arg(long)]
    pub seed: u64,
    /// Export directory; receives `episodes.json` and the images.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the answer key here. Keep it outside the export.
    #[arg(long)]
    pub key: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    pub dataset: PathBuf,
    #[arg(long)]
    pub split: SplitSelector,
    /// Seed the episodes were exported with.
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub predictions: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    pub dataset: PathBuf,
    /// `random` or `pixel_prototype`.
    #[arg(long)]
    pub kind: Baseline,
    #[arg(long)]
    pub split: SplitSelector,
    #[arg(long)]
    pub seed: u64,
    /// Where to export episodes (default: `episodes/<split>-<seed>` inside
    /// the dataset).
    #[arg(long)]
    pub episodes: Option<PathBuf>,
    /// Scores JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    pub dataset: PathBuf,
    pub problem: String,
}

/// A domain failure, tagged with the originating error's name.
#[derive(Debug)]
pub struct Failure {
    pub name: &'static str,
    pub message: String,
}

impl Failure {
    fn new(name: &'static str, message: impl Display) -> Self {
        Failure { name, message: message.to_string() }
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::new(e.name(), e)
            }
        }
    )*};
}

from_core!(
    bongard_core::dataset::DatasetError,
    bongard_core::harness::HarnessError,
    bongard_core::library::LibraryError,
    bongard_core::render::RenderError,
    bongard_core::dsl::DslError
);

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::new("IoError", format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn write_json<T: serde::Serialize>(path: &Path, v: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    fs::write(path, text).map_err(io_err(path))
}

fn library(path: Option<&Path>) -> Result<std::borrow::Cow<'static, Library>, Failure> {
    Ok(match path {
        Some(p) => std::borrow::Cow::Owned(load_library(p)?),
        None => std::borrow::Cow::Borrowed(Library::builtin()),
    })
}

fn must_exist(path: &Path) -> Result<(), Failure> {
    if path.exists() {
        Ok(())
    } else {
        Err(Failure::new("MissingFile", format!("{} does not exist", path.display())))
    }
}

fn print_score(out: &mut dyn Write, s: &Score) {
    let _ = writeln!(
        out,
        "{}: accuracy {:.4} ({}/{} queries), 95% CI [{:.4}, {:.4}]",
        s.split, s.accuracy, s.correct, s.queries, s.ci_low, s.ci_high
    );
}

fn generate(a: &GenerateArgs, verbose: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    for p in [&a.config, &a.library, &a.grid].into_iter().flatten() {
        must_exist(p)?;
    }
    let mut spec = match &a.config {
        Some(p) => BenchmarkSpec::load(p)?,
        None => BenchmarkSpec::default(),
    };
    spec.seed = a.seed;
    if let Some(s) = a.scale {
        spec.scale = s;
    }
    if let Some(p) = &a.library {
        spec.library = Some(p.clone());
    }
    if let Some(p) = &a.grid {
        spec.generator.grid = load_grid(p)?;
    }
    spec.validate()?;
    let lib = library(spec.library.as_deref())?;
    if verbose {
        let _ = writeln!(err, "building at scale {} with seed {}", spec.scale, spec.seed);
    }
    let m = build_benchmark(&spec, &lib, BuildOptions { dry_run: a.dry_run })?;
    write_dataset(&m, &a.out)?;
    let _ = writeln!(out, "wrote {} problems to {}", m.problems.len(), a.out.display());
    Ok(())
}

fn load(dir: &Path) -> Result<Manifest, Failure> {
    must_exist(dir)?;
    Ok(load_manifest(dir)?)
}

/// Returns whether the dataset passed.
fn verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, Failure> {
    let m = load(&a.dataset)?;
    let lib = library(a.library.as_deref().or(m.spec.library.as_deref()))?;
    if lib.version_hash() != m.library_hash {
        let _ = writeln!(err, "warning: library hash differs from the one the dataset was built with");
    }
    let reports = verify_dataset(&m, &lib);
    let images: usize = reports.iter().map(|r| r.images_checked).sum();
    let mut violations = 0;
    for r in &reports {
        for v in &r.violations {
            violations += 1;
            let _ = writeln!(out, "{}: {:?} {:?}: {}", r.problem, v.side, v.index, v.reason);
        }
    }
    let audit = audit_splits(&m);
    for f in &audit.findings {
        let _ = writeln!(out, "audit {}: {} {}", f.check, f.problem.as_deref().unwrap_or("-"), f.detail);
    }
    let _ = writeln!(
        out,
        "{} problems, {images} images checked, {violations} violations, {} audit findings",
        reports.len(),
        audit.findings.len()
    );
    Ok(violations == 0 && audit.is_clean())
}

fn render(a: &RenderArgs, out: &mut dyn Write) -> Result<(), Failure> {
    must_exist(&a.program)?;
    let cfg = match &a.config {
        Some(p) => RenderConfig::load(p)?,
        None => RenderConfig::default(),
    };
    let program = ActionProgram::from_json(&read(&a.program)?)?;
    let poses = poses_for(&program, a.seed, &cfg)?;
    let png = render_program(&program, &poses, &cfg)?.encode_png()?;
    fs::write(&a.out, png).map_err(io_err(&a.out))?;
    let _ = writeln!(out, "wrote {}", a.out.display());
    Ok(())
}

fn episodes(a: &EpisodesArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let m = load(&a.dataset)?;
    let (file, key) = export_episodes(&m, a.split, a.seed)?;
    write_episodes(&m, &a.dataset, &file, &key, &a.out)?;
    if let Some(k) = &a.key {
        write_json(k, &key)?;
    }
    let _ = writeln!(out, "wrote {} episodes to {}", file.episodes.len(), a.out.display());
    Ok(())
}

fn score(a: &ScoreArgs, out: &mut dyn Write) -> Result<(), Failure> {
    must_exist(&a.predictions)?;
    let m = load(&a.dataset)?;
    let (_, key) = export_episodes(&m, a.split, a.seed)?;
    let preds: PredictionSet = serde_json::from_str(&read(&a.predictions)?)
        .map_err(|e| Failure::new("ParseError", format!("{}: {e}", a.predictions.display())))?;
    let s = score_predictions(&key, &preds)?;
    print_score(out, &s);
    if let Some(p) = &a.out {
        write_json(p, &s)?;
    }
    Ok(())
}

fn baseline(a: &BaselineArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let m = load(&a.dataset)?;
    let (file, key) = export_episodes(&m, a.split, a.seed)?;
    let dir = a.episodes.clone().unwrap_or_else(|| a.dataset.join("episodes").join(format!("{}-{}", a.split, a.seed)));
    write_episodes(&m, &a.dataset, &file, &key, &dir)?;
    let preds = run_baseline(a.kind, &file, &dir, a.seed)?;
    let s = score_predictions(&key, &preds)?;
    print_score(out, &s);
    if let Some(p) = &a.out {
        write_json(p, &s)?;
    }
    Ok(())
}

fn inspect(a: &InspectArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let m = load(&a.dataset)?;
    let r = m.get(&a.problem).ok_or_else(|| Failure::new("UnknownId", format!("no problem `{}`", a.problem)))?;
    let _ = writeln!(out, "{} ({}{})", r.id, r.split.as_str(), r.sub_split.map(|s| format!("/{}", s.as_str())).unwrap_or_default());
    let _ = writeln!(out, "concept: {:?} {}", r.concept.kind(), r.concept.name());
    let _ = writeln!(out, "seed: {}", r.seed);
    if let Some(p) = &r.problem {
        for (_, _, img) in p.images() {
            let _ = writeln!(out, "{}  pose_seed={}  {}", img.file, img.pose_seed, img.program.to_json());
        }
    }
    Ok(())
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.exit_code() == 0 {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return 2;
        }
    };
    if let Some(n) = cli.jobs {
        // The global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let verbose = cli.verbose > 0;
    let result = match &cli.command {
        Command::Generate(a) => generate(a, verbose, out, err).map(|_| true),
        Command::Verify(a) => verify(a, out, err),
        Command::Render(a) => render(a, out).map(|_| true),
        Command::Episodes(a) => episodes(a, out).map(|_| true),
        Command::Score(a) => score(a, out).map(|_| true),
        Command::Baseline(a) => baseline(a, out).map(|_| true),
        Command::Inspect(a) => inspect(a, out).map(|_| true),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(f) => {
            let _ = writeln!(err, "error [{}]: {}", f.name, f.message);
            1
        }
    }
}
