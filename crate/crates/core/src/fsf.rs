//! Factual semantic features: single timestamped, located observations of one
//! environment object, carried as qualifier/value tuples.
//!
//! The wire format is a parenthesized tuple, one per line in `.fsf` files:
//!
//! ```text
//! (fire#14, fieriness, 1, inDangerNeighbours, 3, burningNeighbours, 2, localisation, 20|25, time, 7)
//! ```
//!
//! `localisation` and `time` are promoted to first-class fields on [`Fsf`]
//! (every proximity computation needs them) but are serialized back inside the
//! tuple, last, in that order. A JSONL alternative with keys `objectId`,
//! `class`, `qualifiers`, `location`, `time` is provided for tooling.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ontology::{Ontology, OntologyError, SemanticClass};

/// World-grid position, integer units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coordinate {
    pub x: i64,
    pub y: i64,
}

impl Coordinate {
    pub fn new(x: i64, y: i64) -> Coordinate {
        Coordinate { x, y }
    }

    /// Euclidean distance to another coordinate.
    pub fn distance(&self, other: &Coordinate) -> f64 {
        let dx = (self.x - other.x) as f64;
        let dy = (self.y - other.y) as f64;
        (dx * dx + dy * dy).sqrt()
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.x, self.y)
    }
}

/// A qualifier value: integer, real, coordinate or bare symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Integer(i64),
    Real(f64),
    Coordinate(Coordinate),
    Symbol(String),
}

impl Value {
    /// Numeric view used by guards and indicator formulas.
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Integer(i) => Some(*i as f64),
            Value::Real(r) => Some(*r),
            Value::Coordinate(_) | Value::Symbol(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r}"),
            Value::Coordinate(c) => write!(f, "{c}"),
            Value::Symbol(s) => write!(f, "{s}"),
        }
    }
}

/// One named qualifier with its observed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualifierValue {
    pub name: String,
    pub value: Value,
}

impl QualifierValue {
    pub fn new(name: impl Into<String>, value: Value) -> QualifierValue {
        QualifierValue {
            name: name.into(),
            value,
        }
    }
}

/// The leaf class an observation resolved to, plus its semantic kind/family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRef {
    pub leaf: String,
    pub semantic: SemanticClass,
}

/// One factual semantic feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fsf {
    pub object_id: String,
    pub class: ClassRef,
    /// Source-order qualifiers, at most one per name; `localisation` and
    /// `time` never appear here.
    pub qualifiers: Vec<QualifierValue>,
    pub location: Coordinate,
    /// Cycle index; one cycle is one simulated second.
    pub time: u64,
}

impl Fsf {
    /// Build an FSF, resolving the class from the object id.
    pub fn new(
        object_id: impl Into<String>,
        qualifiers: Vec<QualifierValue>,
        location: Coordinate,
        time: u64,
        ontology: &Ontology,
    ) -> Result<Fsf, FsfError> {
        let object_id = object_id.into();
        if object_id.is_empty() {
            return Err(FsfError::MalformedTuple("empty object id".into()));
        }
        let (info, semantic) = ontology.classify(&object_id)?;
        let leaf = info.name.clone();
        let mut canonical = Vec::with_capacity(qualifiers.len());
        for q in qualifiers {
            let name = ontology.canonical_qualifier(&q.name).to_string();
            if name.is_empty() {
                return Err(FsfError::MalformedTuple("empty qualifier name".into()));
            }
            if !ontology.allows_qualifier(&leaf, &name) {
                return Err(FsfError::UnknownQualifier {
                    qualifier: name,
                    class: leaf,
                });
            }
            if canonical.iter().any(|c: &QualifierValue| c.name == name) {
                return Err(FsfError::MalformedTuple(format!(
                    "duplicate qualifier `{name}`"
                )));
            }
            canonical.push(QualifierValue { name, value: q.value });
        }
        Ok(Fsf {
            object_id,
            class: ClassRef { leaf, semantic },
            qualifiers: canonical,
            location,
            time,
        })
    }

    /// Look up a qualifier by name.
    pub fn qualifier(&self, name: &str) -> Option<&Value> {
        self.qualifiers
            .iter()
            .find(|q| q.name == name)
            .map(|q| &q.value)
    }

    /// Numeric qualifier value, if present and numeric.
    pub fn qualifier_number(&self, name: &str) -> Option<f64> {
        self.qualifier(name).and_then(Value::as_number)
    }
}

#[derive(Debug, Error)]
pub enum FsfError {
    #[error("malformed tuple: {0}")]
    MalformedTuple(String),
    #[error("{0}")]
    UnknownClassPrefix(String),
    #[error("qualifier `{qualifier}` not in the vocabulary of class `{class}`")]
    UnknownQualifier { qualifier: String, class: String },
    #[error("bad coordinate `{0}`, expected x|y integers")]
    BadCoordinate(String),
}

impl From<OntologyError> for FsfError {
    fn from(err: OntologyError) -> FsfError {
        match err {
            OntologyError::UnknownClassPrefix(id) => FsfError::UnknownClassPrefix(format!(
                "no class prefix rule matches object id `{id}`"
            )),
            OntologyError::Config(msg) => FsfError::MalformedTuple(msg),
        }
    }
}

/// Parse one FSF tuple.
pub fn parse_fsf(text: &str, ontology: &Ontology) -> Result<Fsf, FsfError> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| FsfError::MalformedTuple(format!("not a parenthesized tuple: `{text}`")))?;
    if inner.contains('(') || inner.contains(')') {
        return Err(FsfError::MalformedTuple("nested parentheses".into()));
    }

    let tokens: Vec<&str> = inner.split(',').map(str::trim).collect();
    if tokens.is_empty() || tokens[0].is_empty() {
        return Err(FsfError::MalformedTuple("missing object id".into()));
    }
    if tokens.len() % 2 == 0 {
        return Err(FsfError::MalformedTuple(format!(
            "odd token count expected (object id plus name/value pairs), got {}",
            tokens.len()
        )));
    }

    let object_id = tokens[0].to_string();
    let mut qualifiers = Vec::new();
    let mut location = None;
    let mut time = None;

    for pair in tokens[1..].chunks(2) {
        let (name, raw) = (pair[0], pair[1]);
        if name.is_empty() || raw.is_empty() {
            return Err(FsfError::MalformedTuple(format!(
                "empty token in pair `{name}, {raw}`"
            )));
        }
        match name {
            "localisation" => {
                if location.is_some() {
                    return Err(FsfError::MalformedTuple("duplicate localisation".into()));
                }
                location = Some(parse_coordinate(raw)?);
            }
            "time" => {
                if time.is_some() {
                    return Err(FsfError::MalformedTuple("duplicate time".into()));
                }
                let t: u64 = raw.parse().map_err(|_| {
                    FsfError::MalformedTuple(format!("time `{raw}` is not a non-negative integer"))
                })?;
                time = Some(t);
            }
            _ => qualifiers.push(QualifierValue::new(name, parse_value(raw)?)),
        }
    }

    let location =
        location.ok_or_else(|| FsfError::MalformedTuple("missing localisation".into()))?;
    let time = time.ok_or_else(|| FsfError::MalformedTuple("missing time".into()))?;
    Fsf::new(object_id, qualifiers, location, time, ontology)
}

/// Emit the canonical tuple: object id, qualifiers in source order, then
/// `localisation` and `time`. `parse_fsf(serialize_fsf(f)) == f`.
pub fn serialize_fsf(fsf: &Fsf) -> String {
    let mut out = String::from("(");
    out.push_str(&fsf.object_id);
    for q in &fsf.qualifiers {
        out.push_str(", ");
        out.push_str(&q.name);
        out.push_str(", ");
        out.push_str(&q.value.to_string());
    }
    out.push_str(", localisation, ");
    out.push_str(&fsf.location.to_string());
    out.push_str(", time, ");
    out.push_str(&fsf.time.to_string());
    out.push(')');
    out
}

fn parse_coordinate(raw: &str) -> Result<Coordinate, FsfError> {
    let (x, y) = raw
        .split_once('|')
        .ok_or_else(|| FsfError::BadCoordinate(raw.to_string()))?;
    let x = x
        .trim()
        .parse()
        .map_err(|_| FsfError::BadCoordinate(raw.to_string()))?;
    let y = y
        .trim()
        .parse()
        .map_err(|_| FsfError::BadCoordinate(raw.to_string()))?;
    Ok(Coordinate { x, y })
}

fn parse_value(raw: &str) -> Result<Value, FsfError> {
    if raw.contains('|') {
        return Ok(Value::Coordinate(parse_coordinate(raw)?));
    }
    if let Ok(i) = raw.parse::<i64>() {
        return Ok(Value::Integer(i));
    }
    if let Ok(r) = raw.parse::<f64>() {
        if r.is_finite() {
            return Ok(Value::Real(r));
        }
    }
    Ok(Value::Symbol(raw.to_string()))
}

// --- JSONL form -------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct JsonFsf {
    #[serde(rename = "objectId")]
    object_id: String,
    class: String,
    qualifiers: Vec<(String, serde_json::Value)>,
    location: Coordinate,
    time: u64,
}

/// One-line JSON rendering of an FSF.
pub fn fsf_to_json(fsf: &Fsf) -> String {
    let qualifiers = fsf
        .qualifiers
        .iter()
        .map(|q| (q.name.clone(), value_to_json(&q.value)))
        .collect();
    let json = JsonFsf {
        object_id: fsf.object_id.clone(),
        class: fsf.class.leaf.clone(),
        qualifiers,
        location: fsf.location,
        time: fsf.time,
    };
    serde_json::to_string(&json).expect("FSF serializes to JSON")
}

/// Parse the JSONL FSF form. The class key must agree with the prefix rule.
pub fn fsf_from_json(line: &str, ontology: &Ontology) -> Result<Fsf, FsfError> {
    let json: JsonFsf = serde_json::from_str(line)
        .map_err(|e| FsfError::MalformedTuple(format!("bad JSON FSF: {e}")))?;
    let qualifiers = json
        .qualifiers
        .into_iter()
        .map(|(name, value)| Ok(QualifierValue::new(name, value_from_json(&value)?)))
        .collect::<Result<Vec<_>, FsfError>>()?;
    let fsf = Fsf::new(json.object_id, qualifiers, json.location, json.time, ontology)?;
    if fsf.class.leaf != json.class {
        return Err(FsfError::MalformedTuple(format!(
            "class `{}` does not match `{}` resolved from `{}`",
            json.class, fsf.class.leaf, fsf.object_id
        )));
    }
    Ok(fsf)
}

fn value_to_json(value: &Value) -> serde_json::Value {
    match value {
        Value::Integer(i) => serde_json::Value::from(*i),
        Value::Real(r) => serde_json::Value::from(*r),
        Value::Coordinate(c) => serde_json::json!({ "x": c.x, "y": c.y }),
        Value::Symbol(s) => serde_json::Value::from(s.clone()),
    }
}

fn value_from_json(value: &serde_json::Value) -> Result<Value, FsfError> {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Value::Integer(i))
            } else if let Some(r) = n.as_f64() {
                Ok(Value::Real(r))
            } else {
                Err(FsfError::MalformedTuple(format!("bad number {n}")))
            }
        }
        serde_json::Value::String(s) => Ok(Value::Symbol(s.clone())),
        serde_json::Value::Object(_) => {
            let c: Coordinate = serde_json::from_value(value.clone())
                .map_err(|_| FsfError::BadCoordinate(value.to_string()))?;
            Ok(Value::Coordinate(c))
        }
        other => Err(FsfError::MalformedTuple(format!(
            "unsupported qualifier value {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{SemanticFamily, SemanticKind};

    const PAPER_EXAMPLE: &str = "(fire#14, fieriness, 1, inDangerNeighbours, 3, burningNeighbours, 2, localisation, 20|25, time, 7)";

    #[test]
    fn parses_the_example_tuple() {
        let ontology = Ontology::default_rcr();
        let fsf = parse_fsf(PAPER_EXAMPLE, &ontology).unwrap();
        assert_eq!(fsf.object_id, "fire#14");
        assert_eq!(fsf.class.leaf, "Fire");
        assert_eq!(fsf.class.semantic.kind(), SemanticKind::Phenomenon);
        assert_eq!(fsf.class.semantic.family(), SemanticFamily::Virtual);
        assert_eq!(
            fsf.qualifiers,
            vec![
                QualifierValue::new("fieriness", Value::Integer(1)),
                QualifierValue::new("inDangerNeighbours", Value::Integer(3)),
                QualifierValue::new("burningNeighbours", Value::Integer(2)),
            ]
        );
        assert_eq!(fsf.location, Coordinate::new(20, 25));
        assert_eq!(fsf.time, 7);
    }

    #[test]
    fn serializes_back_to_the_exact_example_text() {
        let ontology = Ontology::default_rcr();
        let fsf = parse_fsf(PAPER_EXAMPLE, &ontology).unwrap();
        assert_eq!(serialize_fsf(&fsf), PAPER_EXAMPLE);
    }

    #[test]
    fn brigade_tuple_round_trips_exactly() {
        let ontology = Ontology::default_rcr();
        let text = "(brigade#3, extinguishing, 1, localisation, 0|0, time, 0)";
        let fsf = parse_fsf(text, &ontology).unwrap();
        assert_eq!(fsf.class.leaf, "FireBrigade");
        assert_eq!(fsf.class.semantic.kind(), SemanticKind::Actor);
        assert_eq!(fsf.time, 0);
        assert_eq!(fsf.location, Coordinate::new(0, 0));
        assert_eq!(serialize_fsf(&fsf), text);
    }

    #[test]
    fn minimal_tuple_has_no_qualifiers() {
        let ontology = Ontology::default_rcr();
        let fsf = Fsf::new(
            "building#1",
            vec![],
            Coordinate::new(5, -3),
            12,
            &ontology,
        )
        .unwrap();
        assert_eq!(
            serialize_fsf(&fsf),
            "(building#1, localisation, 5|-3, time, 12)"
        );
        assert_eq!(parse_fsf(&serialize_fsf(&fsf), &ontology).unwrap(), fsf);
    }

    #[test]
    fn empty_input_is_malformed() {
        let ontology = Ontology::default_rcr();
        assert!(matches!(
            parse_fsf("", &ontology),
            Err(FsfError::MalformedTuple(_))
        ));
    }

    #[test]
    fn even_token_count_is_malformed() {
        let ontology = Ontology::default_rcr();
        let err = parse_fsf("(fire#1, fieriness, localisation, 0|0, time)", &ontology);
        assert!(matches!(err, Err(FsfError::MalformedTuple(_))));
    }

    #[test]
    fn unbalanced_parens_are_malformed() {
        let ontology = Ontology::default_rcr();
        assert!(matches!(
            parse_fsf("(fire#1, localisation, 0|0, time, 1", &ontology),
            Err(FsfError::MalformedTuple(_))
        ));
    }

    #[test]
    fn unknown_prefix_is_reported() {
        let ontology = Ontology::default_rcr();
        assert!(matches!(
            parse_fsf("(ghost#1, localisation, 0|0, time, 1)", &ontology),
            Err(FsfError::UnknownClassPrefix(_))
        ));
    }

    #[test]
    fn unknown_qualifier_is_reported() {
        let ontology = Ontology::default_rcr();
        assert!(matches!(
            parse_fsf("(fire#1, wetness, 3, localisation, 0|0, time, 1)", &ontology),
            Err(FsfError::UnknownQualifier { .. })
        ));
    }

    #[test]
    fn bad_coordinate_is_reported() {
        let ontology = Ontology::default_rcr();
        assert!(matches!(
            parse_fsf("(fire#1, localisation, 20x25, time, 1)", &ontology),
            Err(FsfError::BadCoordinate(_))
        ));
    }

    #[test]
    fn alias_spelling_is_canonicalized() {
        let ontology = Ontology::default_rcr();
        let fsf = parse_fsf(
            "(fire#2, fieryness, 2, localisation, 1|1, time, 3)",
            &ontology,
        )
        .unwrap();
        assert_eq!(fsf.qualifier_number("fieriness"), Some(2.0));
        assert_eq!(
            serialize_fsf(&fsf),
            "(fire#2, fieriness, 2, localisation, 1|1, time, 3)"
        );
    }

    #[test]
    fn json_round_trip() {
        let ontology = Ontology::default_rcr();
        let fsf = parse_fsf(PAPER_EXAMPLE, &ontology).unwrap();
        let line = fsf_to_json(&fsf);
        let back = fsf_from_json(&line, &ontology).unwrap();
        assert_eq!(back, fsf);
    }

    #[test]
    fn json_class_mismatch_is_rejected() {
        let ontology = Ontology::default_rcr();
        let line = r#"{"objectId":"fire#1","class":"Building","qualifiers":[],"location":{"x":0,"y":0},"time":0}"#;
        assert!(fsf_from_json(line, &ontology).is_err());
    }
}
