//! The LOGO-style action language.
//!
//! A base action is written `kind(moving_type,length,angle)`, e.g.
//! `line(zigzag,0.500,0.750)`. Both numeric arguments are normalized to
//! `[0, 1]`. A program is one or two shapes, each a non-empty sequence of
//! actions. Library strokes use the same grammar with `_` in the moving-type
//! slot.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used when comparing normalized values for equality.
pub const VALUE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("unknown action kind `{0}`")]
    UnknownKind(String),
    #[error("unknown moving type `{0}`")]
    UnknownMovingType(String),
    #[error("{field} value {value} outside [0, 1]")]
    ValueOutOfRange { field: &'static str, value: f64 },
    #[error("malformed action `{0}`")]
    MalformedSyntax(String),
    #[error("no field of the program has an alternative value")]
    ExhaustedAlternatives,
    #[error("invalid value grid: {0}")]
    InvalidGrid(String),
    #[error("invalid program: {0}")]
    InvalidProgram(String),
}

impl DslError {
    pub fn name(&self) -> &'static str {
        match self {
            DslError::UnknownKind(_) => "UnknownKind",
            DslError::UnknownMovingType(_) => "UnknownMovingType",
            DslError::ValueOutOfRange { .. } => "ValueOutOfRange",
            DslError::MalformedSyntax(_) => "MalformedSyntax",
            DslError::ExhaustedAlternatives => "ExhaustedAlternatives",
            DslError::InvalidGrid(_) => "InvalidGrid",
            DslError::InvalidProgram(_) => "InvalidProgram",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MovingType {
    Normal,
    Zigzag,
    Triangle,
    Circle,
    Square,
}

impl MovingType {
    pub const ALL: [MovingType; 5] = [
        MovingType::Normal,
        MovingType::Zigzag,
        MovingType::Triangle,
        MovingType::Circle,
        MovingType::Square,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MovingType::Normal => "normal",
            MovingType::Zigzag => "zigzag",
            MovingType::Triangle => "triangle",
            MovingType::Circle => "circle",
            MovingType::Square => "square",
        }
    }
}

impl fmt::Display for MovingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MovingType {
    type Err = DslError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MovingType::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| DslError::UnknownMovingType(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    Line,
    Arc,
}

impl ActionKind {
    pub const ALL: [ActionKind; 2] = [ActionKind::Line, ActionKind::Arc];

    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::Line => "line",
            ActionKind::Arc => "arc",
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ActionKind {
    type Err = DslError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "line" => Ok(ActionKind::Line),
            "arc" => Ok(ActionKind::Arc),
            other => Err(DslError::UnknownKind(other.to_string())),
        }
    }
}

/// An action without a moving type, as stored in the shape library.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stroke {
    pub kind: ActionKind,
    pub length: f64,
    pub angle: f64,
}

impl Stroke {
    pub fn with_style(self, moving_type: MovingType) -> BaseAction {
        BaseAction {
            kind: self.kind,
            moving_type,
            length: self.length,
            angle: self.angle,
        }
    }

    /// An arc with zero sweep or zero length has no well-defined circle.
    pub fn is_degenerate_arc(&self) -> bool {
        self.kind == ActionKind::Arc && (self.angle == 0.5 || self.length == 0.0)
    }
}

impl fmt::Display for Stroke {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(_,{},{})",
            self.kind,
            format_value(self.length),
            format_value(self.angle)
        )
    }
}

impl FromStr for Stroke {
    type Err = DslError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let call = parse_call(s)?;
        if call.moving_type != "_" {
            return Err(DslError::MalformedSyntax(format!(
                "{s}: library strokes use `_` as moving type"
            )));
        }
        Ok(Stroke {
            kind: call.kind,
            length: call.length,
            angle: call.angle,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseAction {
    pub kind: ActionKind,
    pub moving_type: MovingType,
    pub length: f64,
    pub angle: f64,
}

impl BaseAction {
    pub fn new(kind: ActionKind, moving_type: MovingType, length: f64, angle: f64) -> Self {
        BaseAction {
            kind,
            moving_type,
            length,
            angle,
        }
    }

    pub fn stroke(&self) -> Stroke {
        Stroke {
            kind: self.kind,
            length: self.length,
            angle: self.angle,
        }
    }

    pub fn field(&self, field: ActionField) -> FieldValue {
        match field {
            ActionField::Kind => FieldValue::Kind(self.kind),
            ActionField::MovingType => FieldValue::MovingType(self.moving_type),
            ActionField::Length => FieldValue::Number(self.length),
            ActionField::Angle => FieldValue::Number(self.angle),
        }
    }

    fn with_field(mut self, value: FieldValue) -> Self {
        match value {
            FieldValue::Kind(k) => self.kind = k,
            FieldValue::MovingType(m) => self.moving_type = m,
            FieldValue::Number(_) => unreachable!("numbers are set through set_number"),
        }
        self
    }
}

impl fmt::Display for BaseAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({},{},{})",
            self.kind,
            self.moving_type,
            format_value(self.length),
            format_value(self.angle)
        )
    }
}

impl FromStr for BaseAction {
    type Err = DslError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_action(s)
    }
}

/// Parse `kind(moving_type,length,angle)`; whitespace around tokens is allowed.
pub fn parse_action(text: &str) -> Result<BaseAction, DslError> {
    let call = parse_call(text)?;
    let moving_type = call.moving_type.parse()?;
    Ok(BaseAction {
        kind: call.kind,
        moving_type,
        length: call.length,
        angle: call.angle,
    })
}

/// Canonical text form. Values print with three decimals; a value that
/// three decimals would not reproduce exactly prints in its shortest exact
/// decimal form instead, so parsing always returns the same action.
pub fn serialize_action(a: &BaseAction) -> String {
    a.to_string()
}

pub fn format_value(v: f64) -> String {
    let fixed = format!("{v:.3}");
    if fixed.parse::<f64>() == Ok(v) {
        fixed
    } else {
        format!("{v}")
    }
}

struct Call<'a> {
    kind: ActionKind,
    moving_type: &'a str,
    length: f64,
    angle: f64,
}

fn parse_call(text: &str) -> Result<Call<'_>, DslError> {
    let malformed = || DslError::MalformedSyntax(text.to_string());
    let trimmed = text.trim();
    let open = trimmed.find('(').ok_or_else(malformed)?;
    let body = trimmed[open + 1..].strip_suffix(')').ok_or_else(malformed)?;
    let name = trimmed[..open].trim();
    if name.is_empty() || !name.bytes().all(|b| b.is_ascii_lowercase() || b == b'_') {
        return Err(malformed());
    }
    let args: Vec<&str> = body.split(',').map(str::trim).collect();
    if args.len() != 3 {
        return Err(malformed());
    }
    let kind: ActionKind = name.parse()?;
    let moving_type = args[0];
    if moving_type.is_empty() {
        return Err(malformed());
    }
    if moving_type != "_" {
        moving_type.parse::<MovingType>()?;
    }
    let length = parse_number(args[1], "length").ok_or_else(malformed)??;
    let angle = parse_number(args[2], "angle").ok_or_else(malformed)??;
    Ok(Call {
        kind,
        moving_type,
        length,
        angle,
    })
}

/// `None` when the token is not a plain decimal literal.
fn parse_number(token: &str, field: &'static str) -> Option<Result<f64, DslError>> {
    let digits = token.strip_prefix('-').unwrap_or(token);
    let (int, frac) = match digits.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (digits, None),
    };
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    let well_formed = all_digits(int)
        && frac.is_none_or(|f| !f.is_empty() && all_digits(f))
        && !(int.is_empty() && frac.is_none());
    if !well_formed {
        return None;
    }
    let value: f64 = token.parse().ok()?;
    if !(0.0..=1.0).contains(&value) {
        return Some(Err(DslError::ValueOutOfRange { field, value }));
    }
    Some(Ok(value))
}

/// One or two shapes, each a non-empty action sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProgramFile", into = "ProgramFile")]
pub struct ActionProgram {
    pub shapes: Vec<Vec<BaseAction>>,
}

/// On-disk form: `{"shapes": [["line(normal,0.500,0.500)", ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramFile {
    pub shapes: Vec<Vec<String>>,
}

impl From<ActionProgram> for ProgramFile {
    fn from(p: ActionProgram) -> Self {
        ProgramFile {
            shapes: p
                .shapes
                .iter()
                .map(|s| s.iter().map(serialize_action).collect())
                .collect(),
        }
    }
}

impl TryFrom<ProgramFile> for ActionProgram {
    type Error = DslError;

    fn try_from(f: ProgramFile) -> Result<Self, Self::Error> {
        let shapes = f
            .shapes
            .iter()
            .map(|s| s.iter().map(|a| parse_action(a)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        ActionProgram::new(shapes)
    }
}

impl ActionProgram {
    pub fn new(shapes: Vec<Vec<BaseAction>>) -> Result<Self, DslError> {
        if shapes.is_empty() || shapes.len() > 2 {
            return Err(DslError::InvalidProgram(format!(
                "{} shapes (expected 1 or 2)",
                shapes.len()
            )));
        }
        if let Some(i) = shapes.iter().position(Vec::is_empty) {
            return Err(DslError::InvalidProgram(format!("shape {i} is empty")));
        }
        Ok(ActionProgram { shapes })
    }

    pub fn single(actions: Vec<BaseAction>) -> Result<Self, DslError> {
        Self::new(vec![actions])
    }

    pub fn actions(&self) -> impl Iterator<Item = &BaseAction> {
        self.shapes.iter().flatten()
    }

    pub fn shape_lengths(&self) -> Vec<usize> {
        self.shapes.iter().map(Vec::len).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("program serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, DslError> {
        serde_json::from_str(text).map_err(|e| DslError::MalformedSyntax(e.to_string()))
    }
}

/// Discrete, well-separated values for free-form lengths and angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueGrid {
    pub lengths: Vec<f64>,
    pub angles: Vec<f64>,
}

impl Default for ValueGrid {
    fn default() -> Self {
        ValueGrid {
            lengths: vec![0.25, 0.5, 0.75, 1.0],
            angles: vec![0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875],
        }
    }
}

impl ValueGrid {
    pub fn new(lengths: Vec<f64>, angles: Vec<f64>, min_separation: f64) -> Result<Self, DslError> {
        for (name, values) in [("lengths", &lengths), ("angles", &angles)] {
            if values.is_empty() {
                return Err(DslError::InvalidGrid(format!("{name} is empty")));
            }
            if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(DslError::InvalidGrid(format!("{name} value {v} outside [0, 1]")));
            }
            for w in values.windows(2) {
                if w[1] <= w[0] {
                    return Err(DslError::InvalidGrid(format!("{name} not strictly increasing")));
                }
                if w[1] - w[0] < min_separation - VALUE_EPS {
                    return Err(DslError::InvalidGrid(format!(
                        "{name} gap {} below separation {min_separation}",
                        w[1] - w[0]
                    )));
                }
            }
        }
        Ok(ValueGrid { lengths, angles })
    }

    pub fn min_gap(&self) -> f64 {
        self.lengths
            .windows(2)
            .chain(self.angles.windows(2))
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn has_length(&self, v: f64) -> bool {
        self.lengths.iter().any(|g| (g - v).abs() <= VALUE_EPS)
    }

    pub fn has_angle(&self, v: f64) -> bool {
        self.angles.iter().any(|g| (g - v).abs() <= VALUE_EPS)
    }

    /// Angles usable for an action of the given kind (arcs need non-zero sweep).
    pub fn angles_for(&self, kind: ActionKind) -> impl Iterator<Item = f64> + '_ {
        self.angles
            .iter()
            .copied()
            .filter(move |&a| kind == ActionKind::Line || a != 0.5)
    }

    /// Sample one action with every argument drawn independently.
    pub fn sample_action<R: Rng + ?Sized>(&self, rng: &mut R) -> BaseAction {
        let kind = *ActionKind::ALL.choose(rng).expect("non-empty");
        let moving_type = *MovingType::ALL.choose(rng).expect("non-empty");
        let length = *self.lengths.choose(rng).expect("validated grid");
        let angles: Vec<f64> = self.angles_for(kind).collect();
        let angle = *angles.choose(rng).unwrap_or(&0.0);
        BaseAction {
            kind,
            moving_type,
            length,
            angle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionField {
    Kind,
    MovingType,
    Length,
    Angle,
}

impl ActionField {
    pub const ALL: [ActionField; 4] = [
        ActionField::Kind,
        ActionField::MovingType,
        ActionField::Length,
        ActionField::Angle,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldValue {
    Kind(ActionKind),
    MovingType(MovingType),
    Number(f64),
}

impl FieldValue {
    fn same(&self, other: &FieldValue) -> bool {
        match (self, other) {
            (FieldValue::Number(a), FieldValue::Number(b)) => (a - b).abs() <= VALUE_EPS,
            _ => self == other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// Only structural checks.
    Any,
    /// Additionally enforce a per-shape stroke-count range.
    FreeForm { min_strokes: usize, max_strokes: usize },
}

impl ValidationMode {
    pub const FREE_FORM: ValidationMode = ValidationMode::FreeForm {
        min_strokes: 2,
        max_strokes: 9,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ShapeCount(usize),
    EmptyShape { shape: usize },
    StrokeCount { shape: usize, count: usize },
    ValueRange { shape: usize, action: usize, field: ActionField, value: f64 },
    OffGrid { shape: usize, action: usize, field: ActionField, value: f64 },
    DegenerateArc { shape: usize, action: usize },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_program(
    p: &ActionProgram,
    grid: Option<&ValueGrid>,
    mode: ValidationMode,
) -> ValidationReport {
    let mut violations = Vec::new();
    if p.shapes.is_empty() || p.shapes.len() > 2 {
        violations.push(Violation::ShapeCount(p.shapes.len()));
    }
    for (si, shape) in p.shapes.iter().enumerate() {
        if shape.is_empty() {
            violations.push(Violation::EmptyShape { shape: si });
        }
        if let ValidationMode::FreeForm { min_strokes, max_strokes } = mode {
            if !(min_strokes..=max_strokes).contains(&shape.len()) {
                violations.push(Violation::StrokeCount {
                    shape: si,
                    count: shape.len(),
                });
            }
        }
        for (ai, a) in shape.iter().enumerate() {
            for (field, value) in [(ActionField::Length, a.length), (ActionField::Angle, a.angle)] {
                if !(0.0..=1.0).contains(&value) {
                    violations.push(Violation::ValueRange {
                        shape: si,
                        action: ai,
                        field,
                        value,
                    });
                }
            }
            if let Some(g) = grid {
                if !g.has_length(a.length) {
                    violations.push(Violation::OffGrid {
                        shape: si,
                        action: ai,
                        field: ActionField::Length,
                        value: a.length,
                    });
                }
                if !g.has_angle(a.angle) {
                    violations.push(Violation::OffGrid {
                        shape: si,
                        action: ai,
                        field: ActionField::Angle,
                        value: a.angle,
                    });
                }
            }
            if a.stroke().is_degenerate_arc() {
                violations.push(Violation::DegenerateArc { shape: si, action: ai });
            }
        }
    }
    ValidationReport { violations }
}

/// Location of one field inside a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EditSite {
    pub shape: usize,
    pub action: usize,
    pub field: ActionField,
}

/// Alternative values for one field that keep the action executable.
fn alternatives(a: &BaseAction, field: ActionField, grid: &ValueGrid) -> Vec<FieldValue> {
    let current = a.field(field);
    let candidates: Vec<FieldValue> = match field {
        ActionField::Kind => {
            let flipped = match a.kind {
                ActionKind::Line => ActionKind::Arc,
                ActionKind::Arc => ActionKind::Line,
            };
            let probe = Stroke { kind: flipped, ..a.stroke() };
            if probe.is_degenerate_arc() {
                Vec::new()
            } else {
                vec![FieldValue::Kind(flipped)]
            }
        }
        ActionField::MovingType => MovingType::ALL.iter().map(|&m| FieldValue::MovingType(m)).collect(),
        ActionField::Length => grid
            .lengths
            .iter()
            .filter(|&&l| a.kind == ActionKind::Line || l > 0.0)
            .map(|&l| FieldValue::Number(l))
            .collect(),
        ActionField::Angle => grid.angles_for(a.kind).map(FieldValue::Number).collect(),
    };
    candidates.into_iter().filter(|c| !c.same(&current)).collect()
}

/// Every (action, field) site that has at least one alternative value.
pub fn eligible_sites(p: &ActionProgram, grid: &ValueGrid) -> Vec<EditSite> {
    let mut sites = Vec::new();
    for (si, shape) in p.shapes.iter().enumerate() {
        for (ai, a) in shape.iter().enumerate() {
            for field in ActionField::ALL {
                if !alternatives(a, field, grid).is_empty() {
                    sites.push(EditSite {
                        shape: si,
                        action: ai,
                        field,
                    });
                }
            }
        }
    }
    sites
}

/// Change exactly one field of one action.
///
/// The site is drawn uniformly over all eligible (action, field) pairs, then
/// the new value uniformly over that field's alternatives.
pub fn perturb_program<R: Rng + ?Sized>(
    p: &ActionProgram,
    grid: &ValueGrid,
    rng: &mut R,
) -> Result<(ActionProgram, EditSite), DslError> {
    let sites = eligible_sites(p, grid);
    let site = *sites.choose(rng).ok_or(DslError::ExhaustedAlternatives)?;
    let original = p.shapes[site.shape][site.action];
    let options = alternatives(&original, site.field, grid);
    let value = *options.choose(rng).ok_or(DslError::ExhaustedAlternatives)?;
    let edited = match value {
        FieldValue::Number(v) => {
            let mut a = original;
            match site.field {
                ActionField::Length => a.length = v,
                ActionField::Angle => a.angle = v,
                _ => unreachable!("numeric value for a discrete field"),
            }
            a
        }
        other => original.with_field(other),
    };
    let mut out = p.clone();
    out.shapes[site.shape][site.action] = edited;
    Ok((out, site))
}

/// Returned by [`program_edit_distance`] for structurally incomparable programs.
pub const INCOMPARABLE: usize = usize::MAX;

/// Number of (action, field) positions at which two programs differ.
pub fn program_edit_distance(p: &ActionProgram, q: &ActionProgram) -> usize {
    if p.shape_lengths() != q.shape_lengths() {
        return INCOMPARABLE;
    }
    p.actions()
        .zip(q.actions())
        .map(|(a, b)| {
            ActionField::ALL
                .iter()
                .filter(|&&f| !a.field(f).same(&b.field(f)))
                .count()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn act(s: &str) -> BaseAction {
        parse_action(s).unwrap()
    }

    #[test]
    fn parses_documented_examples() {
        assert_eq!(
            act("line(normal,0.500,0.500)"),
            BaseAction::new(ActionKind::Line, MovingType::Normal, 0.5, 0.5)
        );
        assert_eq!(
            act("arc(zigzag,0.250,0.750)"),
            BaseAction::new(ActionKind::Arc, MovingType::Zigzag, 0.25, 0.75)
        );
        assert_eq!(act(" line ( square , 1 , .5 ) ").angle, 0.5);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_action("line(wavy,0.5,0.5)"), Err(DslError::UnknownMovingType(_))));
        assert!(matches!(parse_action("curve(normal,0.5,0.5)"), Err(DslError::UnknownKind(_))));
        assert!(matches!(
            parse_action("line(normal,1.5,0.5)"),
            Err(DslError::ValueOutOfRange { field: "length", .. })
        ));
        assert!(matches!(
            parse_action("arc(normal,0.5,-0.1)"),
            Err(DslError::ValueOutOfRange { field: "angle", .. })
        ));
        for bad in ["line(normal,0.5)", "line normal,0.5,0.5", "line(normal,0.5,0.5", "line(normal,1e-3,0.5)", "line(normal,.,0.5)", "(normal,0.5,0.5)", "line(,0.5,0.5)"] {
            assert!(matches!(parse_action(bad), Err(DslError::MalformedSyntax(_))), "{bad}");
        }
        assert!(matches!(parse_action("line(_,0.5,0.5)"), Err(DslError::UnknownMovingType(_))));
    }

    #[test]
    fn serializes_with_three_decimals() {
        let a = BaseAction::new(ActionKind::Line, MovingType::Normal, 0.5, 0.5);
        assert_eq!(serialize_action(&a), "line(normal,0.500,0.500)");
        let b = BaseAction::new(ActionKind::Arc, MovingType::Circle, 1.0, 0.0);
        assert_eq!(serialize_action(&b), "arc(circle,1.000,0.000)");
    }

    #[test]
    fn non_decimal_values_keep_full_precision() {
        let v = 0.5 + 1.0 / 6.0;
        let a = BaseAction::new(ActionKind::Line, MovingType::Normal, 0.25, v);
        let text = serialize_action(&a);
        assert_eq!(parse_action(&text).unwrap(), a);
    }

    #[test]
    fn strokes_use_placeholder() {
        let s: Stroke = "arc(_,0.250,0.750)".parse().unwrap();
        assert_eq!(s.to_string(), "arc(_,0.250,0.750)");
        assert!("arc(normal,0.250,0.750)".parse::<Stroke>().is_err());
        assert_eq!(s.with_style(MovingType::Square).moving_type, MovingType::Square);
    }

    #[test]
    fn program_json_shape() {
        let p = ActionProgram::single(vec![act("line(normal,0.500,0.500)"), act("arc(zigzag,0.250,0.750)")]).unwrap();
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"shapes": [["line(normal,0.500,0.500)", "arc(zigzag,0.250,0.750)"]]})
        );
        let back: ActionProgram = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
        assert!(ActionProgram::from_json(r#"{"shapes": []}"#).is_err());
        assert!(ActionProgram::from_json(r#"{"shapes": [[]]}"#).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(ValueGrid::new(vec![0.25, 0.5], vec![0.0, 0.5], 0.2).is_ok());
        assert!(ValueGrid::new(vec![0.5, 0.25], vec![0.0], 0.1).is_err());
        assert!(ValueGrid::new(vec![0.25, 0.3], vec![0.0], 0.1).is_err());
        assert!(ValueGrid::new(vec![], vec![0.0], 0.1).is_err());
        assert_eq!(ValueGrid::default().min_gap(), 0.125);
    }

    #[test]
    fn validation_examples() {
        let six: Vec<BaseAction> = (0..6).map(|_| act("line(normal,0.500,0.250)")).collect();
        let p = ActionProgram::single(six).unwrap();
        assert!(validate_program(&p, Some(&ValueGrid::default()), ValidationMode::FREE_FORM).is_empty());

        let ten: Vec<BaseAction> = (0..10).map(|_| act("line(normal,0.500,0.250)")).collect();
        let p = ActionProgram::single(ten).unwrap();
        let r = validate_program(&p, None, ValidationMode::FREE_FORM);
        assert_eq!(r.violations, vec![Violation::StrokeCount { shape: 0, count: 10 }]);
        assert!(validate_program(&p, None, ValidationMode::Any).is_empty());

        let off = ActionProgram::single(vec![act("line(normal,0.330,0.250)"), act("line(normal,0.5,0.25)")]).unwrap();
        let grid = ValueGrid::new(vec![0.25, 0.5, 0.75, 1.0], ValueGrid::default().angles, 0.1).unwrap();
        let r = validate_program(&off, Some(&grid), ValidationMode::FREE_FORM);
        assert!(matches!(
            r.violations.as_slice(),
            [Violation::OffGrid { field: ActionField::Length, .. }]
        ));

        let degenerate = ActionProgram::single(vec![act("arc(normal,0.5,0.5)"), act("line(normal,0.5,0.25)")]).unwrap();
        let r = validate_program(&degenerate, None, ValidationMode::FREE_FORM);
        assert_eq!(r.violations, vec![Violation::DegenerateArc { shape: 0, action: 0 }]);
    }

    #[test]
    fn perturbation_changes_one_field() {
        let grid = ValueGrid::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = ActionProgram::new(vec![
            vec![act("line(normal,0.500,0.500)"), act("arc(zigzag,0.250,0.750)")],
            vec![act("line(circle,1.000,0.000)"), act("line(square,0.750,0.125)")],
        ])
        .unwrap();
        for _ in 0..500 {
            let (q, site) = perturb_program(&p, &grid, &mut rng).unwrap();
            assert_eq!(program_edit_distance(&p, &q), 1);
            let before = p.shapes[site.shape][site.action];
            let after = q.shapes[site.shape][site.action];
            assert!(!before.field(site.field).same(&after.field(site.field)));
            assert!(validate_program(&q, Some(&grid), ValidationMode::FREE_FORM).is_empty());
        }
    }

    #[test]
    fn kind_flip_never_creates_degenerate_arc() {
        let grid = ValueGrid::default();
        let p = ActionProgram::single(vec![act("line(normal,0.500,0.500)"), act("line(normal,0.5,0.5)")]).unwrap();
        assert!(eligible_sites(&p, &grid).iter().all(|s| s.field != ActionField::Kind));
    }

    #[test]
    fn exhausted_grid() {
        let grid = ValueGrid::new(vec![0.5], vec![0.5], 0.0).unwrap();
        let p = ActionProgram::single(vec![act("line(normal,0.500,0.500)")]).unwrap();
        // Only the moving type can still change.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (_, site) = perturb_program(&p, &grid, &mut rng).unwrap();
        assert_eq!(site.field, ActionField::MovingType);
        let sites = eligible_sites(&p, &grid);
        assert_eq!(sites.len(), 1);
    }

    #[test]
    fn edit_distance_cases() {
        let p = ActionProgram::single(vec![act("line(normal,0.500,0.500)"), act("arc(zigzag,0.250,0.750)")]).unwrap();
        assert_eq!(program_edit_distance(&p, &p), 0);
        let q = ActionProgram::single(vec![act("arc(square,0.750,0.500)"), act("arc(zigzag,0.250,0.750)")]).unwrap();
        assert_eq!(program_edit_distance(&p, &q), 3);
        let r = ActionProgram::single(vec![act("line(normal,0.500,0.500)")]).unwrap();
        assert_eq!(program_edit_distance(&p, &r), INCOMPARABLE);
    }
}
