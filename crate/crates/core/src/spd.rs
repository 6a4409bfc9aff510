//! Symmetric positive-definite factorization used for log-determinants,
//! solves and the explicit inverses the derivative formulas need.

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::matcalc::{norm_inf, symmetrize, RealMatrix, RealVector};

/// Pivots (squared Cholesky diagonal) at or below `PIVOT_FACTOR * ‖A‖∞` are
/// rejected as numerically singular.
pub const PIVOT_FACTOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SpdFactor {
    chol: Cholesky<f64, nalgebra::Dyn>,
}

impl SpdFactor {
    /// Factor a symmetric matrix. Only the lower triangle is read; callers
    /// check symmetry beforehand.
    pub fn new(a: &RealMatrix, which: &'static str) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        let threshold = PIVOT_FACTOR * norm_inf(a);
        let chol = Cholesky::new(a.clone()).ok_or(Error::NotPositiveDefinite {
            which,
            min_pivot: None,
            threshold,
        })?;
        let min_pivot = chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|d| d * d)
            .fold(f64::INFINITY, f64::min);
        if !(min_pivot > threshold) {
            return Err(Error::NotPositiveDefinite {
                which,
                min_pivot: Some(min_pivot),
                threshold,
            });
        }
        Ok(Self { chol })
    }

    pub fn dim(&self) -> usize {
        self.chol.l_dirty().nrows()
    }

    /// Lower-triangular factor `L` with `A = L Lᵀ`.
    pub fn l(&self) -> RealMatrix {
        self.chol.l()
    }

    pub fn log_det(&self) -> f64 {
        2.0 * self.chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    pub fn solve(&self, b: &RealVector) -> RealVector {
        self.chol.solve(b)
    }

    /// `L⁻¹ B` by forward substitution.
    pub fn solve_lower(&self, b: &RealMatrix) -> RealMatrix {
        let mut out = b.clone();
        let solved = self.chol.l_dirty().solve_lower_triangular_mut(&mut out);
        debug_assert!(solved);
        out
    }

    /// Explicit inverse, symmetrized so that `A⁻¹` is bitwise symmetric.
    pub fn inverse(&self) -> RealMatrix {
        symmetrize(&self.chol.inverse())
    }
}
