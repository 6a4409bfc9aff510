//! Closed-form KL divergence `KL[q || p]` for `q = N(m, S)`, `p = N(w, V)`,
//! and its Jacobian and Hessian blocks in the `vec` and `vech` bases.
//!
//! With `a = m − w`, `C = S + a aᵀ` and `u = V⁻¹ a`, the `vec`-basis blocks are
//!
//! | block     | value                                  |
//! |-----------|----------------------------------------|
//! | `∂m`      | `aᵀ V⁻¹`                               |
//! | `∂w`      | `−aᵀ V⁻¹`                              |
//! | `∂S`      | `½ vec(V⁻¹ − S⁻¹)ᵀ`                    |
//! | `∂V`      | `½ vec(V⁻¹ − V⁻¹ C V⁻¹)ᵀ`              |
//! | `(m,m)`   | `V⁻¹`, `(w,w)` likewise, `(m,w) = −V⁻¹`|
//! | `(m,V)`   | `−uᵀ ⊗ V⁻¹`, `(w,V) = +uᵀ ⊗ V⁻¹`       |
//! | `(V,m)`   | `−u ⊗ V⁻¹`, `(V,w) = +u ⊗ V⁻¹`         |
//! | `(S,S)`   | `½ S⁻¹ ⊗ S⁻¹`                          |
//! | `(S,V)`   | `−½ V⁻¹ ⊗ V⁻¹`, same for `(V,S)`       |
//! | `(V,V)`   | `−½ V⁻¹ ⊗ (V⁻¹ − 2 V⁻¹ C V⁻¹)`         |
//!
//! and the mean/covariance cross blocks vanish. The `vech` basis multiplies
//! covariance rows by `D_nᵀ` on the left and covariance columns by `D_n` on
//! the right.
//!
//! The covariance-related Hessian blocks are only meaningful on symmetric
//! perturbations: they are one representative among the matrices that give
//! the same quadratic form on symmetric directions. The `vech` basis removes
//! the ambiguity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcalc::{
    default_sym_tol, kron, max_abs, max_asymmetry, symmetrize, vec, vech_len, DuplicationMatrix,
    RealMatrix, RealVector,
};
use crate::spd::SpdFactor;

/// Coordinates used for the covariance blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Vec,
    Vech,
}

impl Basis {
    /// Number of coordinates of one covariance block.
    pub fn cov_len(self, n: usize) -> usize {
        match self {
            Basis::Vec => n * n,
            Basis::Vech => vech_len(n),
        }
    }

    /// Total number of packed coordinates `(m, w, S, V)`.
    pub fn packed_len(self, n: usize) -> usize {
        2 * n + 2 * self.cov_len(n)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Vec => "vec",
            Basis::Vech => "vech",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "vec" => Ok(Basis::Vec),
            "vech" => Ok(Basis::Vech),
            other => Err(format!("unknown basis `{other}` (expected vec or vech)")),
        }
    }
}

/// The four differentiation variables, in assembly order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockId {
    /// mean of `q`
    M,
    /// mean of `p`
    W,
    /// covariance of `q`
    S,
    /// covariance of `p`
    V,
}

impl BlockId {
    pub const ALL: [BlockId; 4] = [BlockId::M, BlockId::W, BlockId::S, BlockId::V];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_covariance(self) -> bool {
        matches!(self, BlockId::S | BlockId::V)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BlockId::M => "m",
            BlockId::W => "w",
            BlockId::S => "S",
            BlockId::V => "V",
        }
    }

    /// Coordinates this variable occupies in the given basis.
    pub fn len(self, n: usize, basis: Basis) -> usize {
        if self.is_covariance() {
            basis.cov_len(n)
        } else {
            n
        }
    }

    /// Offset of this variable inside the packed `(m, w, S, V)` vector.
    pub fn offset(self, n: usize, basis: Basis) -> usize {
        BlockId::ALL[..self.index()]
            .iter()
            .map(|b| b.len(n, basis))
            .sum()
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for BlockId {
    type Err = String;

    /// Accepts `m`, `w`, `S`/`s`, `V`/`v`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "m" | "M" => Ok(BlockId::M),
            "w" | "W" => Ok(BlockId::W),
            "S" | "s" => Ok(BlockId::S),
            "V" | "v" => Ok(BlockId::V),
            other => Err(format!("unknown block `{other}` (expected m, w, S or V)")),
        }
    }
}

/// A validated problem instance: `q = N(m, S)` and `p = N(w, V)`.
///
/// Construction checks dimensions, finiteness, symmetry (within
/// [`default_sym_tol`]) and positive definiteness. The covariances are stored
/// exactly symmetrized and their Cholesky factors are kept, so every
/// downstream computation is infallible.
#[derive(Debug, Clone)]
pub struct GaussianPair {
    m: RealVector,
    w: RealVector,
    s: RealMatrix,
    v: RealMatrix,
    s_factor: SpdFactor,
    v_factor: SpdFactor,
}

impl GaussianPair {
    pub fn new(m: RealVector, w: RealVector, s: RealMatrix, v: RealMatrix) -> Result<Self> {
        let n = m.len();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                field: "m",
                expected: 1,
                actual: 0,
            });
        }
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                field: "w",
                expected: n,
                actual: w.len(),
            });
        }
        for (field, mat) in [("S", &s), ("V", &v)] {
            if mat.nrows() != n {
                return Err(Error::DimensionMismatch {
                    field,
                    expected: n,
                    actual: mat.nrows(),
                });
            }
            if mat.ncols() != n {
                return Err(Error::DimensionMismatch {
                    field,
                    expected: n,
                    actual: mat.ncols(),
                });
            }
        }
        let fields: [(&'static str, &[f64]); 4] = [
            ("m", m.as_slice()),
            ("w", w.as_slice()),
            ("S", s.as_slice()),
            ("V", v.as_slice()),
        ];
        for (field, data) in fields {
            if data.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { field });
            }
        }
        for mat in [&s, &v] {
            let tolerance = default_sym_tol(mat);
            let asym = max_asymmetry(mat);
            if asym > tolerance {
                return Err(Error::NotSymmetric {
                    max_asymmetry: asym,
                    tolerance,
                });
            }
        }
        let s = symmetrize(&s);
        let v = symmetrize(&v);
        let s_factor = SpdFactor::new(&s, "S")?;
        let v_factor = SpdFactor::new(&v, "V")?;
        Ok(Self {
            m,
            w,
            s,
            v,
            s_factor,
            v_factor,
        })
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn m(&self) -> &RealVector {
        &self.m
    }

    pub fn w(&self) -> &RealVector {
        &self.w
    }

    pub fn s(&self) -> &RealMatrix {
        &self.s
    }

    pub fn v(&self) -> &RealMatrix {
        &self.v
    }

    pub fn s_factor(&self) -> &SpdFactor {
        &self.s_factor
    }

    pub fn v_factor(&self) -> &SpdFactor {
        &self.v_factor
    }

    /// `m = w` and `S = V` exactly, i.e. `q = p`.
    pub fn is_identical(&self) -> bool {
        self.m == self.w && self.s == self.v
    }
}

/// Quantities shared by all derivative blocks of one instance.
struct Derived {
    n: usize,
    v_inv: RealMatrix,
    s_inv: RealMatrix,
    /// `V⁻¹ (m − w)`
    u: RealVector,
    /// `V⁻¹ (S + a aᵀ) V⁻¹`, exactly symmetric
    g: RealMatrix,
}

impl Derived {
    fn new(pair: &GaussianPair) -> Self {
        let n = pair.dim();
        let v_inv = pair.v_factor.inverse();
        let s_inv = pair.s_factor.inverse();
        let a = &pair.m - &pair.w;
        let u = &v_inv * &a;
        // V⁻¹ a aᵀ V⁻¹ = u uᵀ
        let g = symmetrize(&(&v_inv * &pair.s * &v_inv + &u * u.transpose()));
        Self {
            n,
            v_inv,
            s_inv,
            u,
            g,
        }
    }

    fn u_row(&self) -> RealMatrix {
        RealMatrix::from_row_slice(1, self.n, self.u.as_slice())
    }

    fn u_col(&self) -> RealMatrix {
        RealMatrix::from_column_slice(self.n, 1, self.u.as_slice())
    }

    fn jacobian_vec(&self, var: BlockId) -> RealVector {
        match var {
            // (m − w)ᵀ V⁻¹ = uᵀ since V⁻¹ is symmetric
            BlockId::M => self.u.clone(),
            BlockId::W => -&self.u,
            BlockId::S => vec(&(&self.v_inv - &self.s_inv)) * 0.5,
            BlockId::V => vec(&(&self.v_inv - &self.g)) * 0.5,
        }
    }

    fn hessian_vec(&self, row: BlockId, col: BlockId) -> RealMatrix {
        use BlockId::*;
        let n = self.n;
        match (row, col) {
            (M, M) | (W, W) => self.v_inv.clone(),
            (M, W) | (W, M) => -&self.v_inv,
            (M, S) | (W, S) => RealMatrix::zeros(n, n * n),
            (S, M) | (S, W) => RealMatrix::zeros(n * n, n),
            (M, V) => -kron(&self.u_row(), &self.v_inv),
            (W, V) => kron(&self.u_row(), &self.v_inv),
            (V, M) => -kron(&self.u_col(), &self.v_inv),
            (V, W) => kron(&self.u_col(), &self.v_inv),
            (S, S) => kron(&self.s_inv, &self.s_inv) * 0.5,
            (S, V) | (V, S) => kron(&self.v_inv, &self.v_inv) * -0.5,
            (V, V) => {
                let inner = &self.v_inv - &self.g * 2.0;
                kron(&self.v_inv, &inner) * -0.5
            }
        }
    }
}

/// `½ [log|V| − log|S| − N + tr(V⁻¹S) + (m−w)ᵀ V⁻¹ (m−w)]`.
///
/// No explicit inverse is formed: `tr(V⁻¹S) = ‖L_V⁻¹ L_S‖²_F` and the
/// quadratic term is `‖L_V⁻¹ (m−w)‖²`. When `q = p` the result is exactly 0.
pub fn kld_value(pair: &GaussianPair) -> f64 {
    let n = pair.dim() as f64;
    let vf = &pair.v_factor;
    let whitened_s = vf.solve_lower(&pair.s_factor.l());
    let trace = whitened_s.norm_squared();
    let a = &pair.m - &pair.w;
    let whitened_a = vf.solve_lower(&RealMatrix::from_column_slice(a.len(), 1, a.as_slice()));
    let quad = whitened_a.norm_squared();
    let value = 0.5 * (vf.log_det() - pair.s_factor.log_det() - n + trace + quad);
    // rounding can leave a tiny negative residue near q = p
    value.max(0.0)
}

/// One Jacobian block, returned as the entries of the row vector.
pub fn jacobian_block(pair: &GaussianPair, var: BlockId, basis: Basis) -> RealVector {
    let derived = Derived::new(pair);
    jacobian_block_with(&derived, var, basis, None)
}

fn jacobian_block_with(
    derived: &Derived,
    var: BlockId,
    basis: Basis,
    dup: Option<&DuplicationMatrix>,
) -> RealVector {
    let block = derived.jacobian_vec(var);
    if basis == Basis::Vech && var.is_covariance() {
        let owned;
        let d = match dup {
            Some(d) => d,
            None => {
                owned = DuplicationMatrix::new(derived.n);
                &owned
            }
        };
        // row vector times D_n
        d.matrix().tr_mul(&block)
    } else {
        block
    }
}

/// Jacobian blocks and their concatenation in `(m, w, S, V)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianResult {
    pub basis: Basis,
    pub block_m: RealVector,
    pub block_w: RealVector,
    pub block_s: RealVector,
    pub block_v: RealVector,
    pub assembled: RealVector,
}

impl JacobianResult {
    pub fn block(&self, id: BlockId) -> &RealVector {
        match id {
            BlockId::M => &self.block_m,
            BlockId::W => &self.block_w,
            BlockId::S => &self.block_s,
            BlockId::V => &self.block_v,
        }
    }
}

pub fn assemble_jacobian(pair: &GaussianPair, basis: Basis) -> JacobianResult {
    let derived = Derived::new(pair);
    let dup = DuplicationMatrix::new(pair.dim());
    let [block_m, block_w, block_s, block_v] =
        BlockId::ALL.map(|id| jacobian_block_with(&derived, id, basis, Some(&dup)));
    let assembled = RealVector::from_iterator(
        basis.packed_len(pair.dim()),
        [&block_m, &block_w, &block_s, &block_v]
            .into_iter()
            .flat_map(|b| b.iter().copied()),
    );
    JacobianResult {
        basis,
        block_m,
        block_w,
        block_s,
        block_v,
        assembled,
    }
}

/// One Hessian block `∂²KL / ∂row ∂col`.
pub fn hessian_block(pair: &GaussianPair, row: BlockId, col: BlockId, basis: Basis) -> RealMatrix {
    let derived = Derived::new(pair);
    let dup = DuplicationMatrix::new(pair.dim());
    hessian_block_with(&derived, row, col, basis, &dup)
}

fn hessian_block_with(
    derived: &Derived,
    row: BlockId,
    col: BlockId,
    basis: Basis,
    dup: &DuplicationMatrix,
) -> RealMatrix {
    let mut block = derived.hessian_vec(row, col);
    if basis == Basis::Vech {
        if row.is_covariance() {
            block = dup.matrix().tr_mul(&block);
        }
        if col.is_covariance() {
            block *= dup.matrix();
        }
    }
    block
}

/// The 4x4 block grid of the Hessian and the assembled symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianResult {
    pub basis: Basis,
    pub n: usize,
    /// `blocks[row][col]`, indexed by [`BlockId::index`].
    pub blocks: [[RealMatrix; 4]; 4],
    pub assembled: RealMatrix,
}

impl HessianResult {
    pub fn block(&self, row: BlockId, col: BlockId) -> &RealMatrix {
        &self.blocks[row.index()][col.index()]
    }

    /// `max |H − Hᵀ|` of the assembled matrix.
    pub fn symmetry_residual(&self) -> f64 {
        max_asymmetry(&self.assembled)
    }

    /// Worst `max |block(r,c)ᵀ − block(c,r)|` over all 16 pairings.
    pub fn transpose_pairing_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in BlockId::ALL {
            for c in BlockId::ALL {
                let diff = self.block(r, c).transpose() - self.block(c, r);
                worst = worst.max(max_abs(&diff));
            }
        }
        worst
    }
}

pub fn assemble_hessian(pair: &GaussianPair, basis: Basis) -> HessianResult {
    let n = pair.dim();
    let derived = Derived::new(pair);
    let dup = DuplicationMatrix::new(n);
    let blocks = BlockId::ALL
        .map(|r| BlockId::ALL.map(|c| hessian_block_with(&derived, r, c, basis, &dup)));
    let side = basis.packed_len(n);
    let mut assembled = RealMatrix::zeros(side, side);
    for r in BlockId::ALL {
        for c in BlockId::ALL {
            let block = &blocks[r.index()][c.index()];
            assembled
                .view_mut(
                    (r.offset(n, basis), c.offset(n, basis)),
                    (block.nrows(), block.ncols()),
                )
                .copy_from(block);
        }
    }
    HessianResult {
        basis,
        n,
        blocks,
        assembled,
    }
}

/// The other Kronecker arrangement of the `(m, V)` block, `−V⁻¹ ⊗ [(m−w)ᵀ V⁻¹]`.
///
/// It differs entrywise from [`hessian_block`]`(M, V, Vec)` but yields the
/// same product with `vec(W)` for every symmetric `W`.
pub fn mv_alternative_form(pair: &GaussianPair) -> RealMatrix {
    let derived = Derived::new(pair);
    -kron(&derived.v_inv, &derived.u_row())
}
