//! The divergence formula evaluated literally for general invertible square
//! `S`, `V` (no symmetry requirement), using `log |det|`.
//!
//! Off the symmetric manifold this is not a divergence of anything. It only
//! exists so that elementwise finite differences in `vec` coordinates are
//! well defined. It shares no code with [`crate::kld::kld_value`]: it uses LU
//! instead of Cholesky.

use nalgebra::LU;

use crate::error::{Error, Result};
use crate::matcalc::{RealMatrix, RealVector};

fn factor(a: &RealMatrix, which: &'static str) -> Result<(LU<f64, nalgebra::Dyn, nalgebra::Dyn>, f64)> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let lu = a.clone().lu();
    let diag = lu.u().diagonal();
    let largest = diag.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let smallest = diag.iter().fold(f64::INFINITY, |acc, x| acc.min(x.abs()));
    if !(smallest > f64::EPSILON * largest * a.nrows() as f64) || !smallest.is_finite() {
        return Err(Error::SingularMatrix { which });
    }
    let log_abs_det = diag.iter().map(|x| x.abs().ln()).sum();
    Ok((lu, log_abs_det))
}

/// `½ [log|det V| − log|det S| − N + tr(V⁻¹S) + (m−w)ᵀ V⁻¹ (m−w)]`.
pub fn kld_extended(
    m: &RealVector,
    w: &RealVector,
    s: &RealMatrix,
    v: &RealMatrix,
) -> Result<f64> {
    let n = m.len();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            field: "w",
            expected: n,
            actual: w.len(),
        });
    }
    for (field, mat) in [("S", s), ("V", v)] {
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch {
                field,
                expected: n,
                actual: mat.nrows().max(mat.ncols()),
            });
        }
    }
    let (_, log_det_s) = factor(s, "S")?;
    let (lu_v, log_det_v) = factor(v, "V")?;
    let trace = lu_v
        .solve(s)
        .ok_or(Error::SingularMatrix { which: "V" })?
        .trace();
    let a = m - w;
    let quad = a.dot(&lu_v.solve(&a).ok_or(Error::SingularMatrix { which: "V" })?);
    let value = 0.5 * (log_det_v - log_det_s - n as f64 + trace + quad);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::SingularMatrix { which: "V" })
    }
}
