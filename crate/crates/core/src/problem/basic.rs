//! Basic shape problems: one category, or a composition of two shapes
//! drawn from two categories.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::dsl::{ActionProgram, MovingType};
use crate::library::{instantiate_shape, sample_shape, Library, ShapeEntry, ShapeFilter, Styles};

use super::{make_image, Concept, GeneratorConfig, ImageRecord, Problem, ProblemError, SeedPool, Side, SIDE};

/// Distinct distractor categories a concept needs.
pub const MIN_DISTRACTORS: usize = 6;
/// Hard negatives in a two-category problem.
const HARD_NEGATIVES: usize = 4;

fn any_of(cats: &[&String]) -> BTreeSet<String> {
    cats.iter().map(|c| c.to_string()).collect()
}

/// Checks the library can support a basic concept.
pub fn basic_feasible(lib: &Library, categories: &[String]) -> Result<(), ProblemError> {
    let short = |why: String| Err(ProblemError::InsufficientLibraryCoverage(why));
    if categories.is_empty() || categories.len() > 2 || (categories.len() == 2 && categories[0] == categories[1]) {
        return short(format!("basic concept {categories:?} needs one or two distinct categories"));
    }
    for c in categories {
        if lib.category_index.get(c).is_none_or(|s| s.is_empty()) {
            return short(format!("category `{c}` has no entries"));
        }
    }
    let all: BTreeSet<String> = categories.iter().cloned().collect();
    let distractors: BTreeSet<&String> = lib
        .filter(&ShapeFilter { no_category: all.clone(), ..Default::default() })
        .into_iter()
        .flat_map(|e| e.categories.iter())
        .collect();
    if distractors.len() < MIN_DISTRACTORS {
        return short(format!("{} distractor categories for {categories:?}", distractors.len()));
    }
    if let [a, b] = categories {
        for (x, y) in [(a, b), (b, a)] {
            let f = ShapeFilter { any_category: any_of(&[x]), no_category: any_of(&[y]), ..Default::default() };
            if lib.filter(&f).is_empty() {
                return short(format!("every `{x}` entry is also `{y}`"));
            }
        }
    }
    Ok(())
}

fn draw<'a, R: Rng + ?Sized>(lib: &'a Library, f: &ShapeFilter, rng: &mut R) -> Result<&'a ShapeEntry, ProblemError> {
    Ok(sample_shape(lib, f, rng)?)
}

/// A program with one shape per entry, in random order.
fn compose<R: Rng + ?Sized>(mut entries: Vec<&ShapeEntry>, rng: &mut R) -> Result<(ActionProgram, Vec<String>), ProblemError> {
    entries.shuffle(rng);
    let mut shapes = Vec::with_capacity(entries.len());
    for e in &entries {
        let p = instantiate_shape(e, &Styles::Random, rng)?;
        shapes.extend(p.shapes);
    }
    let names = entries.iter().map(|e| e.name.clone()).collect();
    Ok((ActionProgram::new(shapes)?, names))
}

fn moving_types(images: &[(ActionProgram, Vec<String>)]) -> BTreeSet<MovingType> {
    images.iter().flat_map(|(p, _)| p.actions().map(|a| a.moving_type)).collect()
}

/// Redraws styles until a side shows at least two moving types.
fn diversify<R: Rng + ?Sized>(
    lib: &Library,
    images: &mut [(ActionProgram, Vec<String>)],
    rng: &mut R,
) -> Result<(), ProblemError> {
    while moving_types(images).len() < 2 {
        let k = rng.random_range(0..images.len());
        let entries: Vec<&ShapeEntry> = images[k].1.iter().filter_map(|n| lib.get(n)).collect();
        images[k] = compose(entries, rng)?;
    }
    Ok(())
}

pub fn gen_basic_problem<R: Rng + ?Sized>(
    id: &str,
    categories: &[String],
    lib: &Library,
    cfg: &GeneratorConfig,
    seed: u64,
    rng: &mut R,
) -> Result<Problem, ProblemError> {
    basic_feasible(lib, categories)?;
    let all: BTreeSet<String> = categories.iter().cloned().collect();
    let only = |c: &String| ShapeFilter { any_category: any_of(&[c]), ..Default::default() };
    let neither = ShapeFilter { no_category: all.clone(), ..Default::default() };

    let mut pos = Vec::with_capacity(SIDE);
    for _ in 0..SIDE {
        let entries = categories.iter().map(|c| draw(lib, &only(c), rng)).collect::<Result<Vec<_>, _>>()?;
        pos.push(compose(entries, rng)?);
    }

    let mut neg = Vec::with_capacity(SIDE);
    match categories {
        [_] => {
            for _ in 0..SIDE {
                neg.push(compose(vec![draw(lib, &neither, rng)?], rng)?);
            }
        }
        [a, b] => {
            let mut hard = vec![true; HARD_NEGATIVES];
            hard.resize(SIDE, false);
            hard.shuffle(rng);
            for h in hard {
                let first = if h {
                    let (x, y) = *[(a, b), (b, a)].choose(rng).expect("two options");
                    let f = ShapeFilter { any_category: any_of(&[x]), no_category: any_of(&[y]), ..Default::default() };
                    draw(lib, &f, rng)?
                } else {
                    draw(lib, &neither, rng)?
                };
                neg.push(compose(vec![first, draw(lib, &neither, rng)?], rng)?);
            }
        }
        _ => unreachable!("checked by basic_feasible"),
    }

    diversify(lib, &mut pos, rng)?;
    diversify(lib, &mut neg, rng)?;
    let mut seeds = SeedPool::new();
    let mut build = |side: Side, items: Vec<(ActionProgram, Vec<String>)>| -> Result<Vec<ImageRecord>, ProblemError> {
        items
            .into_iter()
            .enumerate()
            .map(|(i, (p, names))| Ok(make_image(side, i, p, seeds.draw(rng), names, &cfg.render)?))
            .collect()
    };
    let positives = build(Side::Positive, pos)?;
    let negatives = build(Side::Negative, neg)?;
    Ok(Problem { id: id.to_string(), concept: Concept::Basic { categories: categories.to_vec() }, seed, positives, negatives })
}
