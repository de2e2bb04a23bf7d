//! JSON instance files.
//!
//! ```json
//! {"label": "optional", "field": {"minpoly": [1, 0, 1], "root": {"re": "0", "im": "1"}},
//!  "g": 1, "tau": [[["0", "1"]]]}
//! ```
//!
//! Each `tau` entry is the coordinate vector of a field element in the power
//! basis of the root, with rationals written as `"p"` or `"p/q"`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jsonnum::parse_rational;
use crate::numberfield::{FieldError, NumberField, RootHint};
use crate::torus::{PeriodMatrix, PrecisionPolicy, TorusError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootBlock {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    #[serde(with = "crate::jsonnum::int_vec")]
    pub minpoly: Vec<BigInt>,
    pub root: RootBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub field: FieldBlock,
    pub g: usize,
    pub tau: Vec<Vec<Vec<String>>>,
}

/// Where in the document a problem was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Position {
    /// 1-based line and column in the source text.
    Text { line: usize, column: usize },
    /// JSON path such as `tau[0][1][2]`.
    Path(String),
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Text { line, column } => write!(f, "line {line}, column {column}"),
            Position::Path(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: Position,
    pub message: String,
}

impl ParseError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { position: Position::Path(path.into()), message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("field construction failed: {0}")]
    Field(#[from] FieldError),
    #[error("period matrix rejected: {0}")]
    Torus(#[from] TorusError),
}

/// Precision settings for field construction and certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub bits: u64,
    pub max_bits: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { bits: 256, max_bits: crate::numberfield::DEFAULT_MAX_PRECISION }
    }
}

impl Precision {
    pub fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy { start_bits: 64.min(self.bits), max_bits: self.max_bits.max(self.bits) }
    }
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError {
            position: Position::Text { line: e.line(), column: e.column() },
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Checks shapes and parses every coefficient, without building the field.
    pub fn check_shape(&self) -> Result<(), ParseError> {
        let degree = self.field.minpoly.iter().rposition(|c| c != &BigInt::from(0)).unwrap_or(0);
        if degree == 0 {
            return Err(ParseError::at("field.minpoly", "minimal polynomial must have degree at least 1"));
        }
        if self.g == 0 {
            return Err(ParseError::at("g", "g must be positive"));
        }
        if self.tau.len() != self.g {
            return Err(ParseError::at("tau", format!("expected {} rows, found {}", self.g, self.tau.len())));
        }
        for (i, row) in self.tau.iter().enumerate() {
            if row.len() != self.g {
                return Err(ParseError::at(format!("tau[{i}]"), format!("expected {} entries, found {}", self.g, row.len())));
            }
            for (j, entry) in row.iter().enumerate() {
                if entry.len() != degree {
                    return Err(ParseError::at(
                        format!("tau[{i}][{j}]"),
                        format!("expected {degree} coefficients (field degree), found {}", entry.len()),
                    ));
                }
                for (k, c) in entry.iter().enumerate() {
                    if parse_rational(c).is_none() {
                        return Err(ParseError::at(format!("tau[{i}][{j}][{k}]"), format!("{c:?} is not a rational \"p/q\"")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the field and the validated period matrix.
    pub fn build(&self, precision: Precision) -> Result<(NumberField, PeriodMatrix), InstanceError> {
        self.check_shape()?;
        let hint = RootHint::new(self.field.root.re.clone(), self.field.root.im.clone());
        let field = NumberField::with_max_precision(&self.field.minpoly, &hint, precision.bits, precision.max_bits)?;
        let rows = self
            .tau
            .iter()
            .map(|row| {
                row.iter()
                    .map(|entry| field.element(entry.iter().map(|c| parse_rational(c).expect("checked")).collect()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = PeriodMatrix::new(&field, rows, precision.policy())?;
        Ok((field, p))
    }

    /// Serializes a period matrix together with its field description.
    pub fn from_period_matrix(label: Option<String>, p: &PeriodMatrix) -> Self {
        let field = p.field();
        let g = p.g();
        let tau = (0..g)
            .map(|i| (0..g).map(|j| p.entry(i, j).coordinates().iter().map(|c| c.to_string()).collect()).collect())
            .collect();
        InstanceFile {
            label,
            field: FieldBlock {
                minpoly: field.minpoly().to_vec(),
                root: RootBlock { re: field.hint().re.clone(), im: field.hint().im.clone() },
            },
            g,
            tau,
        }
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str, precision: Precision) -> Result<(NumberField, PeriodMatrix), InstanceError> {
    InstanceFile::from_json(text)?.build(precision)
}
