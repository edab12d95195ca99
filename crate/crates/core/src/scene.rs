//! Scene files: a polytope, a subspace and an optional offset, as JSON.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "polytope": [[0, 0], [2, 0], [0, 2]],
//!   "subspace": [[1, 1]],
//!   "offset_exp": [1, "2"],
//!   "options": { "samples": 200, "tolerance": 1e-9 }
//! }
//! ```
//!
//! Rationals are written as JSON integers or as strings `"p/q"` / `"p"`.
//! `offset_exp` holds `E = e^a` componentwise, so `"2"` stands for
//! `a_i = log 2`; it defaults to all ones.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::lattice::{IntVector, Rational, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scene: {0}")]
    SemanticError(String),
}

fn semantic(msg: impl Into<String>) -> SceneError {
    SceneError::SemanticError(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneOptions {
    pub samples: usize,
    pub tolerance: f64,
}

impl Default for SceneOptions {
    fn default() -> Self {
        Self {
            samples: 200,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneDocument {
    pub dimension: usize,
    pub polytope: Vec<RationalVector>,
    pub subspace: Vec<IntVector>,
    pub offset_exp: RationalVector,
    pub options: SceneOptions,
}

impl SceneDocument {
    pub fn k(&self) -> usize {
        self.subspace.len()
    }
}

/// Parses `"p/q"`, `"p"` or a JSON integer.
pub fn parse_rational(v: &Value) -> Result<Rational, String> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else {
                Err(format!("{n} is not an integer; write fractions as \"p/q\""))
            }
        }
        Value::String(s) => {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s, "1"),
            };
            let num: BigInt = num.parse().map_err(|_| format!("bad rational \"{s}\""))?;
            let den: BigInt = den.parse().map_err(|_| format!("bad rational \"{s}\""))?;
            if den.is_zero() {
                return Err(format!("zero denominator in \"{s}\""));
            }
            Ok(Rational::new(num, den))
        }
        other => Err(format!("expected a rational, found {other}")),
    }
}

pub fn parse_integer(v: &Value) -> Result<BigInt, String> {
    let r = parse_rational(v)?;
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(format!("expected an integer, found {r}"))
    }
}

fn rows<T>(
    v: &Value,
    field: &str,
    width: usize,
    parse: fn(&Value) -> Result<T, String>,
) -> Result<Vec<Vec<T>>, SceneError> {
    let list = v
        .as_array()
        .ok_or_else(|| semantic(format!("\"{field}\" must be a list of rows")))?;
    list.iter()
        .enumerate()
        .map(|(r, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| semantic(format!("\"{field}\" row {} is not a list", r + 1)))?;
            if row.len() != width {
                return Err(semantic(format!(
                    "\"{field}\" row {} has {} entries, expected {width}",
                    r + 1,
                    row.len()
                )));
            }
            row.iter()
                .map(|x| parse(x).map_err(|e| semantic(format!("\"{field}\" row {}: {e}", r + 1))))
                .collect()
        })
        .collect()
}

pub fn parse_scene(text: &str) -> Result<SceneDocument, SceneError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| SceneError::SyntaxError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| semantic("top level must be an object"))?;
    for key in obj.keys() {
        if !["dimension", "polytope", "subspace", "offset_exp", "options"].contains(&key.as_str()) {
            return Err(semantic(format!("unknown field \"{key}\"")));
        }
    }
    let dimension =
        obj.get("dimension")
            .and_then(Value::as_u64)
            .ok_or_else(|| semantic("\"dimension\" must be a positive integer"))? as usize;
    if dimension == 0 {
        return Err(semantic("\"dimension\" must be a positive integer"));
    }
    let polytope = rows(
        obj.get("polytope")
            .ok_or_else(|| semantic("missing \"polytope\""))?,
        "polytope",
        dimension,
        parse_rational,
    )?;
    if polytope.is_empty() {
        return Err(semantic("\"polytope\" has no vertices"));
    }
    let subspace = match obj.get("subspace") {
        Some(v) => rows(v, "subspace", dimension, parse_integer)?,
        None => Vec::new(),
    };
    let offset_exp = match obj.get("offset_exp") {
        Some(v) => {
            let list = v
                .as_array()
                .ok_or_else(|| semantic("\"offset_exp\" must be a list"))?;
            if list.len() != dimension {
                return Err(semantic(format!(
                    "\"offset_exp\" has {} entries, expected {dimension}",
                    list.len()
                )));
            }
            let e = list
                .iter()
                .map(|x| parse_rational(x).map_err(|m| semantic(format!("\"offset_exp\": {m}"))))
                .collect::<Result<RationalVector, _>>()?;
            if let Some(i) = e.iter().position(|x| !x.is_positive()) {
                return Err(semantic(format!(
                    "\"offset_exp\" entry {} must be positive, found {}",
                    i + 1,
                    e[i]
                )));
            }
            e
        }
        None => vec![Rational::from_integer(1.into()); dimension],
    };
    let mut options = SceneOptions::default();
    if let Some(o) = obj.get("options") {
        let o = o
            .as_object()
            .ok_or_else(|| semantic("\"options\" must be an object"))?;
        for (key, val) in o {
            match key.as_str() {
                "samples" => {
                    options.samples = val
                        .as_u64()
                        .filter(|&s| s > 0)
                        .ok_or_else(|| semantic("\"samples\" must be a positive integer"))?
                        as usize
                }
                "tolerance" => {
                    options.tolerance = val
                        .as_f64()
                        .filter(|&t| t > 0.0)
                        .ok_or_else(|| semantic("\"tolerance\" must be a positive number"))?
                }
                other => return Err(semantic(format!("unknown option \"{other}\""))),
            }
        }
    }
    Ok(SceneDocument {
        dimension,
        polytope,
        subspace,
        offset_exp,
        options,
    })
}
