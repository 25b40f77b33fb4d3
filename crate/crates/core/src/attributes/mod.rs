//! Abstract shape attributes evaluated on executed geometry.
//!
//! Every predicate works on the [`BasePath`], so moving types never change an
//! attribute, and every tolerance is relative to the unit length or the
//! curve diameter, so pose never changes one either.

pub mod lines;
pub mod outline;
pub mod parts;
pub mod region;
pub mod symmetry;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::render::BasePath;

pub use lines::{count_straight_lines, LineSemantics};
pub use outline::{canonical_polygonization, Outline, Polyline};

/// Bumped whenever an attribute definition or the enumeration changes.
pub const ATTRIBUTE_SET_VERSION: u32 = 1;

const NUMBER_WORDS: [&str; 10] = ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"];

/// Line counts with a named attribute.
pub const LINE_COUNTS: std::ops::RangeInclusive<u8> = 2..=9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AttributeError {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
}

impl AttributeError {
    pub fn name(&self) -> &'static str {
        match self {
            AttributeError::UnknownAttribute(_) => "UnknownAttribute",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum AttributeId {
    Convex,
    Symmetric,
    SelfTransposed,
    Necked,
    HaveTwoParts,
    HaveAcuteAngle,
    HaveCurve,
    ClosedShape,
    BalancedTwo,
    ThinShape,
    ExistQuadrangle,
    ExistSector,
    /// Exactly `n` straight lines, crossings ignored.
    StraightLines(u8),
    /// Exactly `n` straight lines after cutting at crossings.
    SplitStraightLines(u8),
}

const SIMPLE: [(AttributeId, &str); 12] = [
    (AttributeId::Convex, "convex"),
    (AttributeId::Symmetric, "symmetric"),
    (AttributeId::SelfTransposed, "self_transposed"),
    (AttributeId::Necked, "necked"),
    (AttributeId::HaveTwoParts, "have_two_parts"),
    (AttributeId::HaveAcuteAngle, "have_acute_angle"),
    (AttributeId::HaveCurve, "have_curve"),
    (AttributeId::ClosedShape, "closed_shape"),
    (AttributeId::BalancedTwo, "balanced_two"),
    (AttributeId::ThinShape, "thin_shape"),
    (AttributeId::ExistQuadrangle, "exist_quadrangle"),
    (AttributeId::ExistSector, "exist_sector"),
];

impl AttributeId {
    /// The whole enumeration, in a fixed order.
    pub fn all() -> Vec<AttributeId> {
        let mut out: Vec<AttributeId> = SIMPLE.iter().map(|(id, _)| *id).collect();
        out.extend(LINE_COUNTS.map(AttributeId::StraightLines));
        out.extend(LINE_COUNTS.map(AttributeId::SplitStraightLines));
        out
    }

    pub fn name(&self) -> String {
        match *self {
            AttributeId::StraightLines(n) => format!("have_{}_straight_lines", NUMBER_WORDS[n as usize]),
            AttributeId::SplitStraightLines(n) => format!("have_{}_split_straight_lines", NUMBER_WORDS[n as usize]),
            id => SIMPLE.iter().find(|(x, _)| *x == id).map(|(_, s)| s.to_string()).expect("listed"),
        }
    }
}

impl fmt::Display for AttributeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for AttributeId {
    type Err = AttributeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AttributeId::all()
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| AttributeError::UnknownAttribute(s.to_string()))
    }
}

impl From<AttributeId> for String {
    fn from(id: AttributeId) -> String {
        id.name()
    }
}

impl TryFrom<String> for AttributeId {
    type Error = AttributeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

pub fn evaluate_attribute(id: AttributeId, bp: &BasePath) -> bool {
    match id {
        AttributeId::Convex => region::is_convex(bp),
        AttributeId::Symmetric => symmetry::is_symmetric(bp),
        AttributeId::SelfTransposed => symmetry::is_self_transposed(bp),
        AttributeId::Necked => region::is_necked(bp),
        AttributeId::HaveTwoParts => parts::have_two_parts(bp),
        AttributeId::HaveAcuteAngle => region::have_acute_angle(bp),
        AttributeId::HaveCurve => region::have_curve(bp),
        AttributeId::ClosedShape => region::closed_shape(bp),
        AttributeId::BalancedTwo => parts::balanced_two(bp),
        AttributeId::ThinShape => region::is_thin(bp),
        AttributeId::ExistQuadrangle => region::exist_quadrangle(bp),
        AttributeId::ExistSector => region::exist_sector(bp),
        AttributeId::StraightLines(n) => count_straight_lines(bp, LineSemantics::Continuous) == n as usize,
        AttributeId::SplitStraightLines(n) => count_straight_lines(bp, LineSemantics::Split) == n as usize,
    }
}

/// Evaluate an attribute given by name.
pub fn evaluate_named(name: &str, bp: &BasePath) -> Result<bool, AttributeError> {
    Ok(evaluate_attribute(name.parse()?, bp))
}

/// Every attribute of one shape plus its raw line counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeVector {
    pub values: BTreeMap<AttributeId, bool>,
    pub continuous_lines: usize,
    pub split_lines: usize,
}

impl AttributeVector {
    pub fn get(&self, id: AttributeId) -> bool {
        self.values.get(&id).copied().unwrap_or(false)
    }

    pub fn true_ids(&self) -> impl Iterator<Item = AttributeId> + '_ {
        self.values.iter().filter(|(_, &v)| v).map(|(id, _)| *id)
    }
}

pub fn attribute_vector(bp: &BasePath) -> AttributeVector {
    let continuous_lines = count_straight_lines(bp, LineSemantics::Continuous);
    let split_lines = count_straight_lines(bp, LineSemantics::Split);
    let mut values = BTreeMap::new();
    let pinches = parts::pinch_points(bp);
    for id in AttributeId::all() {
        let v = match id {
            AttributeId::StraightLines(n) => continuous_lines == n as usize,
            AttributeId::SplitStraightLines(n) => split_lines == n as usize,
            AttributeId::HaveTwoParts => !pinches.is_empty(),
            AttributeId::BalancedTwo => pinches.iter().any(|p| {
                let (a, b) = parts::loop_areas(bp, p);
                let hi = a.max(b);
                hi > 0.0 && (a - b).abs() <= parts::BALANCE * hi
            }),
            other => evaluate_attribute(other, bp),
        };
        values.insert(id, v);
    }
    AttributeVector { values, continuous_lines, split_lines }
}
