//! Kullback–Leibler divergence between two multivariate Gaussians
//!
//! ```text
//! KL[q || p] = ½ [ log|V| − log|S| − N + tr(V⁻¹S) + (m−w)ᵀ V⁻¹ (m−w) ]
//! ```
//!
//! with `q = N(m, S)` and `p = N(w, V)`, together with its closed-form
//! Jacobian and Hessian with respect to `(m, w, S, V)`.
//!
//! Derivatives are available in two coordinate systems ([`Basis`]):
//!
//! * `Vec`: covariance blocks indexed by `vec(S)`, `vec(V)` (column stacking,
//!   `N²` entries each).
//! * `Vech`: covariance blocks indexed by the unique lower-triangular entries
//!   `vech(S)`, `vech(V)` (`N(N+1)/2` entries each), obtained through the
//!   duplication matrix `D_N` with `D_N vech(A) = vec(A)`.
//!
//! Every closed form is checked against an independent numerical oracle in
//! [`oracle`]: central finite differences of the literal divergence formula,
//! a seeded Monte-Carlo estimate of the divergence, and a randomized suite of
//! the vec/Kronecker/trace identities the derivations rest on.
//!
//! Matrices are [`nalgebra::DMatrix<f64>`], whose column-major storage makes
//! `vec` a reinterpretation of the backing slice.
//!
//! ```
//! use kldiv::{GaussianPair, Basis, assemble_hessian, kld_value};
//! use nalgebra::{dmatrix, dvector};
//!
//! let pair = GaussianPair::new(
//!     dvector![1.0, 0.0],
//!     dvector![0.0, 0.0],
//!     dmatrix![1.0, 0.0; 0.0, 1.0],
//!     dmatrix![1.0, 0.0; 0.0, 1.0],
//! )
//! .unwrap();
//! assert!((kld_value(&pair) - 0.5).abs() < 1e-15);
//!
//! let h = assemble_hessian(&pair, Basis::Vech);
//! assert_eq!(h.assembled.nrows(), 3 * 2 + 2 * 2);
//! ```

// `!(x <= tol)` is used on purpose so that NaN fails every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod format;
pub mod kld;
pub mod matcalc;
pub mod oracle;
pub mod spd;

pub use error::{Error, Result};
pub use kld::{
    assemble_hessian, assemble_jacobian, hessian_block, jacobian_block, kld_value,
    mv_alternative_form, Basis, BlockId, GaussianPair, HessianResult, JacobianResult,
};
pub use matcalc::{DuplicationMatrix, RealMatrix, RealVector};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
