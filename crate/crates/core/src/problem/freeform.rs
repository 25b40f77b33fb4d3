//! Free-form problems: the concept is one random action program.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dsl::{perturb_program, ActionProgram, DslError};
use crate::render::{execute_canonical, overlap_score, BasePath};

use super::align::path_distance;
use super::{make_image, Concept, GeneratorConfig, Problem, ProblemError, SeedPool, Side, SIDE};

/// Shape of the random concept program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeFormSpec {
    /// 1 or 2.
    pub shapes: usize,
    pub min_strokes: usize,
    pub max_strokes: usize,
}

/// Perturbation draws per negative slot before the round is abandoned.
const PERTURB_TRIES: usize = 40;

fn random_program<R: Rng + ?Sized>(spec: &FreeFormSpec, cfg: &GeneratorConfig, rng: &mut R) -> ActionProgram {
    let shapes = (0..spec.shapes)
        .map(|_| {
            let n = rng.random_range(spec.min_strokes..=spec.max_strokes);
            (0..n).map(|_| cfg.grid.sample_action(rng)).collect()
        })
        .collect();
    ActionProgram::new(shapes).expect("non-empty shapes")
}

/// Executes, and no shape folds back over itself beyond the threshold.
fn acceptable(p: &ActionProgram, cfg: &GeneratorConfig) -> Option<BasePath> {
    let bp = execute_canonical(p).ok()?;
    let ok = bp
        .components
        .iter()
        .all(|c| overlap_score(&BasePath::new(vec![c.clone()])) <= cfg.render.overlap_threshold);
    ok.then_some(bp)
}

/// Programs one edit away from `concept` that look different from it.
fn negatives<R: Rng + ?Sized>(
    concept: &ActionProgram,
    base: &BasePath,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<Option<Vec<ActionProgram>>, ProblemError> {
    let mut out: Vec<ActionProgram> = Vec::with_capacity(SIDE);
    for _ in 0..PERTURB_TRIES * SIDE {
        if out.len() == SIDE {
            break;
        }
        let (q, _) = perturb_program(concept, &cfg.grid, rng)?;
        if out.contains(&q) {
            continue;
        }
        let Some(bq) = acceptable(&q, cfg) else { continue };
        if path_distance(base, &bq, cfg.distinct_threshold) > cfg.distinct_threshold {
            out.push(q);
        }
    }
    Ok((out.len() == SIDE).then_some(out))
}

fn check_spec(spec: &FreeFormSpec) -> Result<(), ProblemError> {
    if !(1..=2).contains(&spec.shapes) || spec.min_strokes < 1 || spec.min_strokes > spec.max_strokes {
        return Err(DslError::InvalidProgram(format!("free-form spec {spec:?}")).into());
    }
    Ok(())
}

/// The concept program a generator seeded the same way would try first,
/// without searching for its negatives. Used for dry-run planning.
pub fn draw_freeform_concept<R: Rng + ?Sized>(
    spec: &FreeFormSpec,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<ActionProgram, ProblemError> {
    check_spec(spec)?;
    for _ in 0..cfg.max_rounds {
        let program = random_program(spec, cfg, rng);
        if acceptable(&program, cfg).is_some() {
            return Ok(program);
        }
    }
    Err(ProblemError::GenerationBudgetExceeded(cfg.max_rounds))
}

pub fn gen_freeform_problem<R: Rng + ?Sized>(
    id: &str,
    spec: &FreeFormSpec,
    cfg: &GeneratorConfig,
    seed: u64,
    rng: &mut R,
) -> Result<Problem, ProblemError> {
    check_spec(spec)?;
    for _ in 0..cfg.max_rounds {
        let program = random_program(spec, cfg, rng);
        let Some(base) = acceptable(&program, cfg) else { continue };
        let Some(negs) = negatives(&program, &base, cfg, rng)? else { continue };
        let mut seeds = SeedPool::new();
        let positives = (0..SIDE)
            .map(|i| make_image(Side::Positive, i, program.clone(), seeds.draw(rng), Vec::new(), &cfg.render))
            .collect::<Result<Vec<_>, _>>()?;
        let negatives = negs
            .into_iter()
            .enumerate()
            .map(|(i, q)| make_image(Side::Negative, i, q, seeds.draw(rng), Vec::new(), &cfg.render))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Problem { id: id.to_string(), concept: Concept::FreeForm { program }, seed, positives, negatives });
    }
    Err(ProblemError::GenerationBudgetExceeded(cfg.max_rounds))
}
