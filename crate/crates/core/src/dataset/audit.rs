//! Machine check of the split rules over a manifest.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::attributes::AttributeId;
use crate::problem::{Concept, ProblemKind};

use super::{Manifest, ProblemRecord, Split, SubSplit, CM_COMBOS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditFinding {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub problems_checked: usize,
    pub findings: Vec<AuditFinding>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    fn add(&mut self, check: &str, problem: Option<&str>, detail: String) {
        self.findings.push(AuditFinding { check: check.into(), problem: problem.map(String::from), detail });
    }
}

fn attributes(c: &Concept) -> &[AttributeId] {
    match c {
        Concept::Abstract { attributes } => attributes,
        _ => &[],
    }
}

fn kind_index(k: ProblemKind) -> usize {
    match k {
        ProblemKind::FreeForm => 0,
        ProblemKind::Basic => 1,
        ProblemKind::Abstract => 2,
    }
}

fn expected_kind(s: SubSplit) -> ProblemKind {
    match s {
        SubSplit::Ff => ProblemKind::FreeForm,
        SubSplit::Ba => ProblemKind::Basic,
        SubSplit::Cm | SubSplit::Nv => ProblemKind::Abstract,
    }
}

fn names<'a>(m: &'a Manifest, split: Split, kind: ProblemKind) -> BTreeSet<String> {
    let on = |r: &&'a ProblemRecord| r.split == split && r.concept.kind() == kind;
    m.problems.iter().filter(on).map(|r| r.concept.name()).collect()
}

pub fn audit_splits(m: &Manifest) -> AuditReport {
    let mut rep = AuditReport { problems_checked: m.problems.len(), ..Default::default() };
    let held = m.spec.held_out_attribute;
    let top = m.spec.train_max_strokes;

    let mut ids = BTreeSet::new();
    for r in &m.problems {
        if !ids.insert(&r.id) {
            rep.add("unique_ids", Some(&r.id), "id appears more than once".into());
        }
    }

    // Counts per cell.
    let mut train = [0; 3];
    let mut val = [0; 3];
    let mut test: BTreeMap<SubSplit, usize> = BTreeMap::new();
    for r in &m.problems {
        let k = kind_index(r.concept.kind());
        match (r.split, r.sub_split) {
            (Split::Train, None) => train[k] += 1,
            (Split::Val, None) => val[k] += 1,
            (Split::Test, Some(s)) => {
                *test.entry(s).or_default() += 1;
                if r.concept.kind() != expected_kind(s) {
                    rep.add("sub_split", Some(&r.id), format!("{:?} concept in the {} test split", r.concept.kind(), s.as_str()));
                }
            }
            (s, sub) => rep.add("sub_split", Some(&r.id), format!("split {} with sub-split {sub:?}", s.as_str())),
        }
    }
    let c = &m.counts;
    for (label, got, want) in [("train", train, c.train), ("val", val, c.val)] {
        if got != want {
            rep.add("counts", None, format!("{label} has {got:?} problems per type, expected {want:?}"));
        }
    }
    for s in SubSplit::ALL {
        let got = test.get(&s).copied().unwrap_or(0);
        if got != c.sub_split(s) {
            rep.add("counts", None, format!("test {} has {got} problems, expected {}", s.as_str(), c.sub_split(s)));
        }
    }

    // Held-out attribute.
    for r in &m.problems {
        let uses = attributes(&r.concept).contains(&held);
        let novel = r.sub_split == Some(SubSplit::Nv);
        if uses && !novel {
            rep.add("held_out", Some(&r.id), format!("{} concept `{}` uses {held}", r.split.as_str(), r.concept.name()));
        } else if novel && !uses {
            rep.add("held_out", Some(&r.id), format!("novel concept `{}` does not use {held}", r.concept.name()));
        }
    }

    // Combinations.
    let trained = names(m, Split::Train, ProblemKind::Abstract);
    let validated = names(m, Split::Val, ProblemKind::Abstract);
    let mut combos = BTreeSet::new();
    for r in m.problems.iter().filter(|r| r.sub_split == Some(SubSplit::Cm)) {
        let attrs = attributes(&r.concept);
        let name = r.concept.name();
        if attrs.len() != 2 {
            rep.add("combination", Some(&r.id), format!("`{name}` is not a pair"));
            continue;
        }
        combos.insert(name.clone());
        if trained.contains(&name) || validated.contains(&name) {
            rep.add("combination", Some(&r.id), format!("`{name}` also appears in train or val"));
        }
        for a in attrs {
            if !trained.contains(&a.name()) {
                rep.add("combination", Some(&r.id), format!("member {a} never appears alone in train"));
            }
        }
    }
    let want = c.sub_split(SubSplit::Cm).div_ceil(c.per_concept).min(CM_COMBOS);
    if combos.len() != want {
        rep.add("combination", None, format!("{} distinct combinations, expected {want}", combos.len()));
    }

    // Free-form lengths.
    for r in m.problems.iter().filter(|r| r.concept.kind() == ProblemKind::FreeForm) {
        let Concept::FreeForm { program } = &r.concept else { continue };
        let lengths = program.shape_lengths();
        if r.split == Split::Test {
            if lengths.iter().any(|&n| n != top + 1) {
                rep.add("extrapolation", Some(&r.id), format!("test shape lengths {lengths:?}, expected {}", top + 1));
            }
        } else if lengths.iter().any(|&n| n > top) {
            rep.add("extrapolation", Some(&r.id), format!("{} shape lengths {lengths:?} exceed {top}", r.split.as_str()));
        }
    }

    // Concept disjointness between splits.
    for kind in [ProblemKind::FreeForm, ProblemKind::Basic, ProblemKind::Abstract] {
        let seen = names(m, Split::Train, kind);
        for r in m.problems.iter().filter(|r| r.split != Split::Train && r.concept.kind() == kind) {
            if seen.contains(&r.concept.name()) {
                rep.add("disjoint", Some(&r.id), format!("{} concept `{}` also in train", r.split.as_str(), r.concept.name()));
            }
        }
    }
    rep
}
