//! Concept assignment for every problem slot of a benchmark.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attributes::AttributeId;
use crate::library::Library;
use crate::problem::{abstract_feasible, basic_feasible, FreeFormSpec};
use crate::seed::derive_seed;

use super::{largest_remainder, BenchmarkSpec, Counts, DatasetError, Split, SubSplit, CM_COMBOS};

/// What a problem slot asks the generator for.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    FreeForm(FreeFormSpec),
    Basic(Vec<String>),
    Abstract(Vec<AttributeId>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Planned {
    pub id: String,
    pub split: Split,
    pub sub_split: Option<SubSplit>,
    pub target: Target,
}

/// Splits `pool` into disjoint groups of the requested sizes. A pool that is
/// too small is divided in proportion instead, and groups reuse concepts.
fn partition<T: Clone>(pool: &[T], needs: &[usize]) -> Result<Vec<Vec<T>>, String> {
    let sizes = if needs.iter().sum::<usize>() <= pool.len() {
        needs.to_vec()
    } else {
        let mut sizes = largest_remainder(pool.len(), needs);
        for i in 0..sizes.len() {
            if needs[i] > 0 && sizes[i] == 0 {
                let donor = (0..sizes.len()).max_by_key(|&j| (sizes[j], std::cmp::Reverse(j))).expect("non-empty");
                if sizes[donor] < 2 {
                    return Err(format!("{} concepts cannot fill {} disjoint groups", pool.len(), needs.len()));
                }
                sizes[donor] -= 1;
                sizes[i] = 1;
            }
        }
        sizes
    };
    let mut out = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for n in sizes {
        out.push(pool[at..at + n].to_vec());
        at += n;
    }
    Ok(out)
}

/// Concept of each of `n` problems: `per` problems per concept, cycling when
/// the list runs out.
fn assign<T: Clone>(concepts: &[T], n: usize, per: usize) -> Vec<T> {
    (0..n).map(|i| concepts[(i / per) % concepts.len()].clone()).collect()
}

fn concepts_needed(n: usize, per: usize) -> usize {
    n.div_ceil(per)
}

struct Slots {
    out: Vec<Planned>,
}

impl Slots {
    fn push(&mut self, split: Split, group: &str, sub_split: Option<SubSplit>, targets: Vec<Target>) {
        for (i, target) in targets.into_iter().enumerate() {
            let id = format!("{}_{group}_{i:05}", split.as_str());
            self.out.push(Planned { id, split, sub_split, target });
        }
    }
}

fn freeform_targets<R: Rng + ?Sized>(n: usize, min: usize, max: usize, rng: &mut R) -> Vec<Target> {
    (0..n)
        .map(|_| Target::FreeForm(FreeFormSpec { shapes: rng.random_range(1..=2), min_strokes: min, max_strokes: max }))
        .collect()
}

fn basic_concepts(lib: &Library) -> Vec<Vec<String>> {
    let cats: Vec<String> = lib.categories().cloned().collect();
    let mut out: Vec<Vec<String>> = cats.iter().map(|c| vec![c.clone()]).collect();
    for (i, a) in cats.iter().enumerate() {
        for b in &cats[i + 1..] {
            out.push(vec![a.clone(), b.clone()]);
        }
    }
    out.retain(|c| basic_feasible(lib, c).is_ok());
    out
}

fn abstract_concepts(lib: &Library) -> Vec<Vec<AttributeId>> {
    let attrs = AttributeId::all();
    let mut out: Vec<Vec<AttributeId>> = attrs.iter().map(|&a| vec![a]).collect();
    for (i, &a) in attrs.iter().enumerate() {
        for &b in &attrs[i + 1..] {
            out.push(vec![a, b]);
        }
    }
    out.retain(|c| abstract_feasible(lib, c).is_ok());
    out
}

pub fn plan_benchmark(spec: &BenchmarkSpec, counts: &Counts, lib: &Library) -> Result<Vec<Planned>, DatasetError> {
    let short = |why: String| DatasetError::InsufficientLibraryCoverage(why);
    let per = counts.per_concept;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "plan"));
    let mut slots = Slots { out: Vec::with_capacity(counts.total()) };
    let [ff_train, ba_train, ab_train] = counts.train;
    let [ff_val, ba_val, ab_val] = counts.val;

    // Free-form: test programs are one stroke longer than anything trained on.
    let top = spec.train_max_strokes;
    if top < 2 {
        return Err(DatasetError::SpecInfeasible(format!("train_max_strokes {top} is below 2")));
    }
    slots.push(Split::Train, "ff", None, freeform_targets(ff_train, 2, top, &mut rng));
    slots.push(Split::Val, "ff", None, freeform_targets(ff_val, 2, top, &mut rng));
    let n = counts.sub_split(SubSplit::Ff);
    slots.push(Split::Test, "ff", Some(SubSplit::Ff), freeform_targets(n, top + 1, top + 1, &mut rng));

    // Basic: test, val and train concepts are pairwise disjoint.
    let mut basic = basic_concepts(lib);
    basic.shuffle(&mut rng);
    let ba_test = counts.sub_split(SubSplit::Ba);
    let groups = partition(&basic, &[ba_test, ba_val, ba_train].map(|n| concepts_needed(n, per))).map_err(short)?;
    for ((split, sub, n), concepts) in [(Split::Test, Some(SubSplit::Ba), ba_test), (Split::Val, None, ba_val), (Split::Train, None, ba_train)]
        .into_iter()
        .zip(groups)
    {
        if n > 0 {
            slots.push(split, "ba", sub, assign(&concepts, n, per).into_iter().map(Target::Basic).collect());
        }
    }

    // Abstract.
    let held = spec.held_out_attribute;
    let mut all = abstract_concepts(lib);
    all.shuffle(&mut rng);
    let (mut novel, rest): (Vec<_>, Vec<_>) = all.into_iter().partition(|c| c.contains(&held));
    novel.sort_by_key(|c| c.len());
    if novel.is_empty() {
        return Err(short(format!("no feasible concept uses the held-out attribute {held}")));
    }
    let singles: BTreeSet<AttributeId> = rest.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    let combos: Vec<Vec<AttributeId>> =
        rest.iter().filter(|c| c.len() == 2 && c.iter().all(|a| singles.contains(a))).take(CM_COMBOS).cloned().collect();
    if combos.len() < CM_COMBOS {
        return Err(short(format!("{} attribute pairs available for the combination split", combos.len())));
    }
    let cm = counts.sub_split(SubSplit::Cm);
    let used = &combos[..concepts_needed(cm, per).min(CM_COMBOS)];
    let members: BTreeSet<AttributeId> = used.iter().flatten().copied().collect();
    let (mut seen, unseen): (Vec<_>, Vec<_>) =
        rest.into_iter().filter(|c| !combos.contains(c)).partition(|c| c.len() == 1 && members.contains(&c[0]));
    if members.len() * per > ab_train {
        return Err(DatasetError::SpecInfeasible(format!(
            "{ab_train} abstract training problems cannot cover {} combination members",
            members.len()
        )));
    }
    seen.extend(unseen);
    let groups = partition(&seen, &[ab_train, ab_val].map(|n| concepts_needed(n, per))).map_err(short)?;
    if groups[0].len() < members.len() {
        return Err(short(format!("{} training concepts for {} combination members", groups[0].len(), members.len())));
    }
    let [train_c, val_c]: [Vec<Vec<AttributeId>>; 2] = groups.try_into().expect("two groups");
    slots.push(Split::Train, "ab", None, assign(&train_c, ab_train, per).into_iter().map(Target::Abstract).collect());
    if ab_val > 0 {
        slots.push(Split::Val, "ab", None, assign(&val_c, ab_val, per).into_iter().map(Target::Abstract).collect());
    }
    slots.push(Split::Test, "cm", Some(SubSplit::Cm), assign(used, cm, per).into_iter().map(Target::Abstract).collect());
    let nv = counts.sub_split(SubSplit::Nv);
    slots.push(Split::Test, "nv", Some(SubSplit::Nv), assign(&novel, nv, per).into_iter().map(Target::Abstract).collect());
    Ok(slots.out)
}
