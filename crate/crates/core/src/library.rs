//! Named shapes with category labels and a computed attribute index.
//!
//! Library file format: a JSON list of
//! `{"name": ..., "categories": [...], "strokes": ["line(_,0.500,0.500)", ...]}`.
//! Strokes carry no moving type; one is attached at instantiation. Attribute
//! labels are never stored in the file: they are computed by rendering each
//! entry at the canonical pose.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::attributes::{attribute_vector, AttributeId, AttributeVector};
use crate::dsl::{ActionProgram, MovingType, Stroke};
use crate::render::{execute_canonical, BasePath, RenderError};

const DEFAULT_LIBRARY: &str = include_str!("../data/library.json");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LibraryError {
    #[error("cannot parse library: {0}")]
    ParseError(String),
    #[error("duplicate shape name `{0}`")]
    DuplicateName(String),
    #[error("shape `{name}`: invalid stroke `{stroke}`: {reason}")]
    InvalidStroke { name: String, stroke: String, reason: String },
    #[error("no library entry matches the filter")]
    EmptyFilter,
    #[error("{styles} styles for {strokes} strokes")]
    ArityMismatch { strokes: usize, styles: usize },
    #[error("io: {0}")]
    Io(String),
}

impl LibraryError {
    pub fn name(&self) -> &'static str {
        match self {
            LibraryError::ParseError(_) => "ParseError",
            LibraryError::DuplicateName(_) => "DuplicateName",
            LibraryError::InvalidStroke { .. } => "InvalidStroke",
            LibraryError::EmptyFilter => "EmptyFilter",
            LibraryError::ArityMismatch { .. } => "ArityMismatch",
            LibraryError::Io(_) => "Io",
        }
    }
}

/// One entry as written in a library file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeRecord {
    pub name: String,
    pub categories: Vec<String>,
    pub strokes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeEntry {
    pub name: String,
    pub categories: BTreeSet<String>,
    pub strokes: Vec<Stroke>,
}

impl ShapeEntry {
    pub fn program(&self, styles: &[MovingType]) -> Result<ActionProgram, LibraryError> {
        if styles.len() != self.strokes.len() {
            return Err(LibraryError::ArityMismatch { strokes: self.strokes.len(), styles: styles.len() });
        }
        let actions = self.strokes.iter().zip(styles).map(|(s, &m)| s.with_style(m)).collect();
        ActionProgram::single(actions).map_err(|e| self.invalid(&e.to_string()))
    }

    /// Geometry at the canonical pose.
    pub fn canonical_path(&self) -> Result<BasePath, LibraryError> {
        let p = self.program(&vec![MovingType::Normal; self.strokes.len()])?;
        execute_canonical(&p).map_err(|e| match e {
            RenderError::DegenerateArc { action, .. } => LibraryError::InvalidStroke {
                name: self.name.clone(),
                stroke: self.strokes[action].to_string(),
                reason: "degenerate arc".into(),
            },
            other => self.invalid(&other.to_string()),
        })
    }

    pub fn record(&self) -> ShapeRecord {
        ShapeRecord {
            name: self.name.clone(),
            categories: self.categories.iter().cloned().collect(),
            strokes: self.strokes.iter().map(Stroke::to_string).collect(),
        }
    }

    fn invalid(&self, reason: &str) -> LibraryError {
        LibraryError::InvalidStroke { name: self.name.clone(), stroke: String::new(), reason: reason.into() }
    }
}

/// Moving types for the strokes of an entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Styles {
    /// Independent uniform draw per stroke.
    Random,
    Fixed(Vec<MovingType>),
}

pub fn instantiate_shape<R: Rng + ?Sized>(e: &ShapeEntry, styles: &Styles, rng: &mut R) -> Result<ActionProgram, LibraryError> {
    match styles {
        Styles::Fixed(s) => e.program(s),
        Styles::Random => {
            let s: Vec<MovingType> = (0..e.strokes.len()).map(|_| *MovingType::ALL.choose(rng).expect("non-empty")).collect();
            e.program(&s)
        }
    }
}

/// Which entries qualify. Empty sets place no constraint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShapeFilter {
    /// The entry carries at least one of these categories.
    pub any_category: BTreeSet<String>,
    /// The entry carries none of these categories.
    pub no_category: BTreeSet<String>,
    pub require: BTreeSet<AttributeId>,
    pub forbid: BTreeSet<AttributeId>,
}

impl ShapeFilter {
    pub fn category(c: &str) -> Self {
        ShapeFilter { any_category: [c.to_string()].into(), ..Default::default() }
    }

    pub fn attributes(require: impl IntoIterator<Item = AttributeId>, forbid: impl IntoIterator<Item = AttributeId>) -> Self {
        ShapeFilter { require: require.into_iter().collect(), forbid: forbid.into_iter().collect(), ..Default::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Library {
    entries: Vec<ShapeEntry>,
    vectors: Vec<AttributeVector>,
    by_name: HashMap<String, usize>,
    pub attribute_index: BTreeMap<AttributeId, BTreeSet<String>>,
    pub category_index: BTreeMap<String, BTreeSet<String>>,
    hash: String,
}

impl Library {
    pub fn from_json(text: &str) -> Result<Library, LibraryError> {
        if text.trim().is_empty() {
            return Library::from_records(Vec::new());
        }
        let records: Vec<ShapeRecord> = serde_json::from_str(text).map_err(|e| LibraryError::ParseError(e.to_string()))?;
        Library::from_records(records)
    }

    pub fn from_records(records: Vec<ShapeRecord>) -> Result<Library, LibraryError> {
        let mut by_name = HashMap::new();
        let mut entries = Vec::with_capacity(records.len());
        for r in records {
            if by_name.insert(r.name.clone(), entries.len()).is_some() {
                return Err(LibraryError::DuplicateName(r.name));
            }
            if r.strokes.is_empty() {
                return Err(LibraryError::InvalidStroke { name: r.name, stroke: String::new(), reason: "no strokes".into() });
            }
            let strokes = r
                .strokes
                .iter()
                .map(|s| {
                    s.parse::<Stroke>().map_err(|e| LibraryError::InvalidStroke {
                        name: r.name.clone(),
                        stroke: s.clone(),
                        reason: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(ShapeEntry { name: r.name, categories: r.categories.into_iter().collect(), strokes });
        }
        let paths = entries.iter().map(ShapeEntry::canonical_path).collect::<Result<Vec<_>, _>>()?;
        let vectors: Vec<AttributeVector> = paths.par_iter().map(attribute_vector).collect();

        let mut attribute_index: BTreeMap<AttributeId, BTreeSet<String>> =
            AttributeId::all().into_iter().map(|id| (id, BTreeSet::new())).collect();
        let mut category_index: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (e, v) in entries.iter().zip(&vectors) {
            for id in v.true_ids() {
                attribute_index.entry(id).or_default().insert(e.name.clone());
            }
            for c in &e.categories {
                category_index.entry(c.clone()).or_default().insert(e.name.clone());
            }
        }
        let canonical = serde_json::to_string(&entries.iter().map(ShapeEntry::record).collect::<Vec<_>>()).expect("records serialize");
        let hash = Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        Ok(Library { entries, vectors, by_name, attribute_index, category_index, hash })
    }

    /// The starter library bundled with the crate, loaded once.
    pub fn builtin() -> &'static Library {
        static LIB: OnceLock<Library> = OnceLock::new();
        LIB.get_or_init(|| Library::from_json(DEFAULT_LIBRARY).expect("bundled library is valid"))
    }

    pub fn entries(&self) -> &[ShapeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ShapeEntry> {
        self.by_name.get(name).map(|&i| &self.entries[i])
    }

    pub fn vector(&self, name: &str) -> Option<&AttributeVector> {
        self.by_name.get(name).map(|&i| &self.vectors[i])
    }

    /// SHA-256 of the normalized entry list.
    pub fn version_hash(&self) -> &str {
        &self.hash
    }

    pub fn categories(&self) -> impl Iterator<Item = &String> {
        self.category_index.keys()
    }

    pub fn matches(&self, i: usize, f: &ShapeFilter) -> bool {
        let e = &self.entries[i];
        let v = &self.vectors[i];
        (f.any_category.is_empty() || e.categories.iter().any(|c| f.any_category.contains(c)))
            && !e.categories.iter().any(|c| f.no_category.contains(c))
            && f.require.iter().all(|&id| v.get(id))
            && !f.forbid.iter().any(|&id| v.get(id))
    }

    /// Qualifying entries in library order.
    pub fn filter(&self, f: &ShapeFilter) -> Vec<&ShapeEntry> {
        (0..self.entries.len()).filter(|&i| self.matches(i, f)).map(|i| &self.entries[i]).collect()
    }
}

pub fn load_library(path: &Path) -> Result<Library, LibraryError> {
    let text = std::fs::read_to_string(path).map_err(|e| LibraryError::Io(format!("{}: {e}", path.display())))?;
    Library::from_json(&text)
}

/// Uniform draw over the entries that pass `f`.
pub fn sample_shape<'a, R: Rng + ?Sized>(lib: &'a Library, f: &ShapeFilter, rng: &mut R) -> Result<&'a ShapeEntry, LibraryError> {
    lib.filter(f).choose(rng).copied().ok_or(LibraryError::EmptyFilter)
}
