//! Text formats: the JSON algebra file and the plain matrix format.
//!
//! Algebra file:
//!
//! ```json
//! { "field": "Q", "dim": 3, "gamma": [[1, 2, 1, "1"], [2, 1, 3, "-1/2"]] }
//! ```
//!
//! `field` is `"Q"` or `{"prime": p}`. Each `gamma` entry is `[i, j, k, c]`
//! with 1-based indices, meaning `γ[i][j][k] = c`; omitted triples are zero
//! and a triple may appear only once. Scalars are always strings.
//!
//! Matrix text: one row per line, scalars separated by whitespace or commas;
//! blank lines and lines starting with `#` are skipped. A JSON array of rows
//! of scalar strings is accepted too.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::Algebra;
use crate::fields::{parse_value, FieldError, FieldSpec, FieldValue};
use crate::linalg::{LinalgError, Matrix, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("{context}: {source}")]
    Scalar { context: String, source: FieldError },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(untagged)]
pub enum FieldDoc {
    Name(String),
    Prime { prime: u64 },
}

impl FieldDoc {
    pub fn from_spec(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldDoc::Name("Q".into()),
            FieldSpec::PrimeField(p) => FieldDoc::Prime { prime: p.get() },
        }
    }

    pub fn to_spec(&self) -> Result<FieldSpec, FormatError> {
        match self {
            FieldDoc::Name(s) if s == "Q" => Ok(FieldSpec::Rationals),
            FieldDoc::Name(s) => Err(schema("field", format!("expected \"Q\" or {{\"prime\": p}}, got {s:?}"))),
            FieldDoc::Prime { prime } => FieldSpec::prime(*prime).map_err(|e| schema("field.prime", e.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    pub dim: usize,
    pub gamma: Vec<(usize, usize, usize, String)>,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &Algebra) -> Self {
        let n = a.dim();
        let mut gamma = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let g = a.gamma(i, j, k);
                    if !g.is_zero() {
                        gamma.push((i + 1, j + 1, k + 1, g.to_string()));
                    }
                }
            }
        }
        AlgebraDoc {
            field: FieldDoc::from_spec(a.field()),
            dim: n,
            gamma,
        }
    }

    /// Builds the algebra. With `field_override`, constants written over ℚ
    /// are reduced into that field; a prime-field file only accepts its own field.
    pub fn to_algebra(&self, field_override: Option<FieldSpec>) -> Result<Algebra, FormatError> {
        let file_field = self.field.to_spec()?;
        let target = match (file_field, field_override) {
            (f, None) => f,
            (FieldSpec::Rationals, Some(t)) => t,
            (f, Some(t)) if f == t => t,
            (f, Some(t)) => {
                return Err(schema(
                    "field",
                    format!("file is over {f}; it cannot be reinterpreted over {t}"),
                ))
            }
        };
        let n = self.dim;
        if n == 0 {
            return Err(schema("dim", "must be at least 1"));
        }
        let mut seen = BTreeMap::new();
        let mut gamma = vec![target.zero(); n * n * n];
        for (pos, (i, j, k, text)) in self.gamma.iter().enumerate() {
            let context = format!("gamma[{pos}]");
            for (name, idx) in [("i", i), ("j", j), ("k", k)] {
                if !(1..=n).contains(idx) {
                    return Err(schema(
                        format!("{context}.{name}"),
                        format!("index {idx} outside 1..={n}"),
                    ));
                }
            }
            if let Some(prev) = seen.insert((*i, *j, *k), pos) {
                return Err(schema(
                    context,
                    format!("duplicate triple ({i},{j},{k}), first given at gamma[{prev}]"),
                ));
            }
            let scalar_err = |source| FormatError::Scalar {
                context: context.clone(),
                source,
            };
            let value = parse_value(text, file_field).map_err(scalar_err)?;
            let value = match &value {
                FieldValue::Rational(q) if target != file_field => {
                    FieldValue::from_rational(q, target).map_err(scalar_err)?
                }
                _ => value,
            };
            gamma[((i - 1) * n + (j - 1)) * n + (k - 1)] = value;
        }
        Algebra::new(target, n, gamma).map_err(|e| schema("gamma", e.to_string()))
    }
}

pub fn parse_algebra(text: &str, field_override: Option<FieldSpec>) -> Result<Algebra, FormatError> {
    let doc: AlgebraDoc = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    doc.to_algebra(field_override)
}

pub fn algebra_to_json(a: &Algebra) -> String {
    serde_json::to_string_pretty(&AlgebraDoc::from_algebra(a)).expect("serializable")
}

/// Parses the matrix text format (or a JSON array of string rows).
pub fn parse_matrix(text: &str, field: FieldSpec) -> Result<Matrix, FormatError> {
    let trimmed = text.trim_start();
    let rows: Vec<(usize, Vec<String>)> = if trimmed.starts_with('[') {
        let value: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
        let rows: Vec<Vec<String>> = serde_json::from_value(value)
            .map_err(|e| FormatError::Json(format!("expected an array of arrays of strings: {e}")))?;
        rows.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect()
    } else {
        text.lines()
            .enumerate()
            .filter(|(_, l)| {
                let l = l.trim();
                !l.is_empty() && !l.starts_with('#')
            })
            .map(|(i, l)| {
                (
                    i + 1,
                    l.split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect(),
                )
            })
            .collect()
    };
    let width = rows.first().map(|(_, r)| r.len()).unwrap_or(0);
    let mut parsed = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        if row.len() != width {
            return Err(FormatError::Line {
                line,
                message: format!("expected {width} entries, found {}", row.len()),
            });
        }
        let values = row
            .iter()
            .map(|s| parse_value(s, field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FormatError::Line {
                line,
                message: e.to_string(),
            })?;
        parsed.push(values);
    }
    Ok(Matrix::from_rows(field, parsed)?)
}

/// Comma-separated scalars, e.g. `-1,1,-1`.
pub fn parse_vector(text: &str, field: FieldSpec) -> Result<Vector, FormatError> {
    let values = text
        .split(',')
        .enumerate()
        .map(|(pos, s)| {
            parse_value(s.trim(), field).map_err(|source| FormatError::Scalar {
                context: format!("entry {}", pos + 1),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Vector::new(field, values)?)
}

/// Matrix rows as lists of scalar strings.
pub fn matrix_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

pub fn vector_to_strings(v: &Vector) -> Vec<String> {
    v.entries().iter().map(ToString::to_string).collect()
}
