//! On-disk formats: the JSON instance file read by the CLI and the JSON
//! output document it writes. Field names are frozen in `FORMAT.md`.
//!
//! Matrices are row-major arrays on disk and column-major in memory; the
//! conversions live here and nowhere else.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kld::{Basis, BlockId, GaussianPair};
use crate::matcalc::{RealMatrix, RealVector};
use crate::oracle::report::CheckReport;

pub const OUTPUT_FORMAT: &str = "kldiv-output/1";
pub const TOOL_NAME: &str = "kldiv";

/// Structured parse failure. Validity of the numbers themselves (symmetry,
/// positive definiteness) is checked later by [`InstanceFile::to_pair`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// A problem instance as written by hand.
///
/// ```json
/// { "name": "demo", "n": 2,
///   "m": [1, 0], "w": [0, 0],
///   "S": [[1, 0], [0, 1]], "V": [[2, 0.5], [0.5, 1]] }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub m: Vec<f64>,
    pub w: Vec<f64>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<f64>>,
}

impl InstanceFile {
    /// Parse and check shapes.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| ParseError::Syntax(e.to_string()))?;
        file.validate_shapes()?;
        Ok(file)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self, ParseError> {
        let text = std::str::from_utf8(bytes)
            .map_err(|e| ParseError::Syntax(format!("invalid UTF-8: {e}")))?;
        Self::from_json(text)
    }

    fn validate_shapes(&self) -> Result<(), ParseError> {
        let n = self.n;
        if n == 0 {
            return Err(field_err("n", "dimension must be at least 1"));
        }
        for (field, v) in [("m", &self.m), ("w", &self.w)] {
            if v.len() != n {
                return Err(field_err(
                    field,
                    format!("expected {n} entries, found {}", v.len()),
                ));
            }
        }
        for (field, rows) in [("S", &self.s), ("V", &self.v)] {
            if rows.len() != n {
                return Err(field_err(
                    field,
                    format!("expected {n} rows, found {}", rows.len()),
                ));
            }
            for (i, r) in rows.iter().enumerate() {
                if r.len() != n {
                    return Err(field_err(
                        format!("{field}[{i}]"),
                        format!("expected {n} columns, found {}", r.len()),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Build the validated instance (symmetry, positive definiteness).
    pub fn to_pair(&self) -> crate::Result<GaussianPair> {
        let n = self.n;
        let mat = |rows: &[Vec<f64>]| RealMatrix::from_fn(n, n, |i, j| rows[i][j]);
        GaussianPair::new(
            RealVector::from_column_slice(&self.m),
            RealVector::from_column_slice(&self.w),
            mat(&self.s),
            mat(&self.v),
        )
    }

    pub fn from_pair(pair: &GaussianPair, name: Option<String>) -> Self {
        let rows = |a: &RealMatrix| {
            a.row_iter()
                .map(|r| r.iter().copied().collect())
                .collect::<Vec<Vec<f64>>>()
        };
        Self {
            name,
            n: pair.dim(),
            m: pair.m().iter().copied().collect(),
            w: pair.w().iter().copied().collect(),
            s: rows(pair.s()),
            v: rows(pair.v()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("serializable");
        out.push('\n');
        out
    }
}

/// A vector with explicit length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorData {
    pub len: usize,
    pub data: Vec<f64>,
}

impl VectorData {
    pub fn from_vector(v: &RealVector) -> Self {
        Self {
            len: v.len(),
            data: v.iter().copied().collect(),
        }
    }

    pub fn to_vector(&self) -> Result<RealVector, ParseError> {
        if self.data.len() != self.len {
            return Err(field_err(
                "data",
                format!("len is {} but {} values given", self.len, self.data.len()),
            ));
        }
        Ok(RealVector::from_column_slice(&self.data))
    }
}

/// A matrix with explicit shape, entries in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixData {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixData {
    pub fn from_matrix(m: &RealMatrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data: m.transpose().as_slice().to_vec(),
        }
    }

    pub fn to_matrix(&self) -> Result<RealMatrix, ParseError> {
        let expected = self.rows.checked_mul(self.cols);
        if expected != Some(self.data.len()) {
            return Err(field_err(
                "data",
                format!(
                    "shape {}x{} does not match {} values",
                    self.rows,
                    self.cols,
                    self.data.len()
                ),
            ));
        }
        Ok(RealMatrix::from_row_slice(self.rows, self.cols, &self.data))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobianBlockData {
    pub block: String,
    pub len: usize,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HessianBlockData {
    pub row: String,
    pub col: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl HessianBlockData {
    pub fn new(row: BlockId, col: BlockId, m: &RealMatrix) -> Self {
        let MatrixData { rows, cols, data } = MatrixData::from_matrix(m);
        Self {
            row: row.symbol().into(),
            col: col.symbol().into(),
            rows,
            cols,
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<RealMatrix, ParseError> {
        MatrixData {
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        }
        .to_matrix()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Payload {
    Scalar {
        value: f64,
        /// 17 significant digits
        text: String,
    },
    Jacobian {
        blocks: Vec<JacobianBlockData>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        assembled: Option<VectorData>,
    },
    Hessian {
        blocks: Vec<HessianBlockData>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        assembled: Option<MatrixData>,
        /// `max |H − Hᵀ|` of the assembled matrix, or of the requested block
        /// against its transpose partner
        symmetry_residual: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_eigenvalue: Option<f64>,
    },
    Reports {
        all_passed: bool,
        passed: usize,
        failed: usize,
        reports: Vec<CheckReport>,
    },
}

impl Payload {
    pub fn scalar(value: f64) -> Self {
        Payload::Scalar {
            value,
            text: format!("{value:.16e}"),
        }
    }

    pub fn reports(reports: Vec<CheckReport>) -> Self {
        let passed = reports.iter().filter(|r| r.passed).count();
        Payload::Reports {
            all_passed: passed == reports.len(),
            passed,
            failed: reports.len() - passed,
            reports,
        }
    }
}

/// Echo of the options that produced a document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_grad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_hess: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grad_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hess_step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDocument {
    pub format: String,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub instance: Option<String>,
    pub basis: Option<Basis>,
    pub config: ConfigEcho,
    pub payload: Payload,
}

impl OutputDocument {
    pub fn new(
        command: &str,
        instance: Option<String>,
        basis: Option<Basis>,
        config: ConfigEcho,
        payload: Payload,
    ) -> Self {
        Self {
            format: OUTPUT_FORMAT.into(),
            tool: TOOL_NAME.into(),
            version: crate::VERSION.into(),
            command: command.into(),
            instance,
            basis,
            config,
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("serializable");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Syntax(e.to_string()))
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self, ParseError> {
        serde_json::from_slice(bytes).map_err(|e| ParseError::Syntax(e.to_string()))
    }
}

/// Parse a Hessian block selector such as `mm`, `mV` or `SV`.
pub fn parse_block_pair(spec: &str) -> Result<(BlockId, BlockId), String> {
    let mut chars = spec.chars();
    match (chars.next(), chars.next(), chars.next()) {
        (Some(r), Some(c), None) => {
            let row = r.to_string().parse::<BlockId>()?;
            let col = c.to_string().parse::<BlockId>()?;
            Ok((row, col))
        }
        _ => Err(format!(
            "block selector `{spec}` must be two of m, w, S, V (e.g. mV) or `all`"
        )),
    }
}
