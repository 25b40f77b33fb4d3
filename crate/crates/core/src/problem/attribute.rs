//! Abstract shape problems: positives share one or two attributes.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::attributes::{evaluate_attribute, AttributeId};
use crate::library::{instantiate_shape, Library, ShapeEntry, ShapeFilter, Styles};
use crate::render::{execute_program, BasePath};

use super::{make_image, Concept, GeneratorConfig, ImageRecord, Problem, ProblemError, SeedPool, Side, SIDE};

/// Negatives of a two-attribute concept that satisfy exactly one attribute,
/// per attribute.
pub const PARTIAL_NEGATIVES: usize = 2;
const POSE_TRIES: usize = 8;

struct Pools<'a> {
    positive: Vec<&'a ShapeEntry>,
    negative: Vec<&'a ShapeEntry>,
    /// Entries satisfying exactly attribute 0, then exactly attribute 1.
    partial: Vec<Vec<&'a ShapeEntry>>,
}

fn pools<'a>(lib: &'a Library, attrs: &[AttributeId]) -> Result<Pools<'a>, ProblemError> {
    let short = |why: String| Err(ProblemError::InsufficientLibraryCoverage(why));
    let distinct: BTreeSet<&AttributeId> = attrs.iter().collect();
    if attrs.is_empty() || attrs.len() > 2 || distinct.len() != attrs.len() {
        return short(format!("abstract concept needs one or two distinct attributes, got {attrs:?}"));
    }
    let positive = lib.filter(&ShapeFilter::attributes(attrs.iter().copied(), []));
    let negative: Vec<&ShapeEntry> = lib
        .entries()
        .iter()
        .filter(|e| attrs.iter().any(|&a| !lib.vector(&e.name).expect("indexed").get(a)))
        .collect();
    // Seven distinct positives are available, so draws without replacement
    // never repeat an entry on the positive side.
    if positive.len() < SIDE || negative.len() < SIDE {
        return short(format!("{} satisfying and {} violating entries for {attrs:?}", positive.len(), negative.len()));
    }
    let mut partial = Vec::new();
    if let [a, b] = *attrs {
        for (x, y) in [(a, b), (b, a)] {
            let pool = lib.filter(&ShapeFilter::attributes([x], [y]));
            if pool.len() < PARTIAL_NEGATIVES {
                return short(format!("{} entries are {x} but not {y}", pool.len()));
            }
            partial.push(pool);
        }
    }
    Ok(Pools { positive, negative, partial })
}

/// Checks the library can support an abstract concept.
pub fn abstract_feasible(lib: &Library, attrs: &[AttributeId]) -> Result<(), ProblemError> {
    pools(lib, attrs).map(|_| ())
}

/// Takes entries from a pool without replacement, reshuffling once it runs
/// dry.
struct Deck<'a> {
    pool: Vec<&'a ShapeEntry>,
    left: Vec<&'a ShapeEntry>,
}

impl<'a> Deck<'a> {
    fn new(pool: Vec<&'a ShapeEntry>) -> Self {
        Deck { pool, left: Vec::new() }
    }

    fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &'a ShapeEntry {
        if self.left.is_empty() {
            self.left = self.pool.clone();
            self.left.shuffle(rng);
        }
        self.left.pop().expect("pools are non-empty")
    }
}

/// Instantiates entries from `deck` until one keeps the expected attribute
/// pattern at its sampled pose.
fn placed<R: Rng + ?Sized>(
    side: Side,
    index: usize,
    deck: &mut Deck,
    accept: &dyn Fn(&BasePath) -> bool,
    seeds: &mut SeedPool,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<ImageRecord, ProblemError> {
    for _ in 0..cfg.max_rounds {
        let e = deck.next(rng);
        for _ in 0..POSE_TRIES {
            let program = instantiate_shape(e, &Styles::Random, rng)?;
            let rec = make_image(side, index, program, seeds.draw(rng), vec![e.name.clone()], &cfg.render)?;
            let bp = execute_program(&rec.program, &rec.poses)?;
            if accept(&bp) {
                return Ok(rec);
            }
        }
    }
    Err(ProblemError::GenerationBudgetExceeded(cfg.max_rounds))
}

pub fn gen_abstract_problem<R: Rng + ?Sized>(
    id: &str,
    attrs: &[AttributeId],
    lib: &Library,
    cfg: &GeneratorConfig,
    seed: u64,
    rng: &mut R,
) -> Result<Problem, ProblemError> {
    let pools = pools(lib, attrs)?;
    let holds = |bp: &BasePath| attrs.iter().all(|&a| evaluate_attribute(a, bp));
    let violated = |bp: &BasePath| !holds(bp);
    let exactly = |k: usize| move |bp: &BasePath| evaluate_attribute(attrs[k], bp) && !evaluate_attribute(attrs[1 - k], bp);
    let (first, second) = (exactly(0), exactly(1));
    let negative_checks: [&dyn Fn(&BasePath) -> bool; 3] = [&violated, &first, &second];
    let mut seeds = SeedPool::new();
    let mut pos_deck = Deck::new(pools.positive);
    let positives = (0..SIDE)
        .map(|i| placed(Side::Positive, i, &mut pos_deck, &holds, &mut seeds, cfg, rng))
        .collect::<Result<Vec<_>, _>>()?;

    // Slot plan: which pool each negative comes from.
    let mut plan: Vec<usize> = Vec::with_capacity(SIDE);
    for k in 0..pools.partial.len() {
        plan.extend(std::iter::repeat_n(k + 1, PARTIAL_NEGATIVES));
    }
    plan.resize(SIDE, 0);
    plan.shuffle(rng);
    let mut decks: Vec<Deck> = std::iter::once(pools.negative).chain(pools.partial).map(Deck::new).collect();
    let negatives = plan
        .iter()
        .enumerate()
        .map(|(i, &k)| placed(Side::Negative, i, &mut decks[k], negative_checks[k], &mut seeds, cfg, rng))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Problem { id: id.to_string(), concept: Concept::Abstract { attributes: attrs.to_vec() }, seed, positives, negatives })
}
