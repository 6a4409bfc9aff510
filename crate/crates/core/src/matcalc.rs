//! vec / vech operators, the duplication matrix, Kronecker products and the
//! trace-to-vec rewrites used by the divergence derivatives.
//!
//! All matrices use column-major logical order, so `vec(M)` is the backing
//! slice of `M` read as a column.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type RealVector = DVector<f64>;

/// Relative factor of the default symmetry tolerance, see [`default_sym_tol`].
pub const SYM_TOL_FACTOR: f64 = 1e-10;

/// Column stacking.
pub fn vec(m: &RealMatrix) -> RealVector {
    RealVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec`].
pub fn unvec(v: &RealVector, rows: usize, cols: usize) -> Result<RealMatrix> {
    if v.len() != rows * cols {
        return Err(Error::LengthMismatch {
            expected: rows * cols,
            actual: v.len(),
        });
    }
    Ok(RealMatrix::from_column_slice(rows, cols, v.as_slice()))
}

/// Number of unique entries of a symmetric `n x n` matrix.
pub const fn vech_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `max |M - Mᵀ|` over all entries.
pub fn max_asymmetry(m: &RealMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Induced infinity norm (max absolute row sum).
pub fn norm_inf(m: &RealMatrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// `1e-10 * max(1, ‖M‖∞)`.
pub fn default_sym_tol(m: &RealMatrix) -> f64 {
    SYM_TOL_FACTOR * norm_inf(m).max(1.0)
}

/// `½ (M + Mᵀ)`; the result is exactly symmetric.
pub fn symmetrize(m: &RealMatrix) -> RealMatrix {
    let n = m.nrows();
    let mut out = m.clone();
    for j in 0..n {
        for i in (j + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            out[(i, j)] = avg;
            out[(j, i)] = avg;
        }
    }
    out
}

fn check_square(m: &RealMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Lower-triangle column stacking of a symmetric matrix:
/// `(a11, a21, …, an1, a22, …, ann)`.
pub fn vech(m: &RealMatrix, sym_tol: f64) -> Result<RealVector> {
    let n = check_square(m)?;
    let asym = max_asymmetry(m);
    if !(asym <= sym_tol) {
        return Err(Error::NotSymmetric {
            max_asymmetry: asym,
            tolerance: sym_tol,
        });
    }
    Ok(lower_vech(m, n))
}

/// [`vech`] with [`default_sym_tol`].
pub fn vech_default(m: &RealMatrix) -> Result<RealVector> {
    vech(m, default_sym_tol(m))
}

fn lower_vech(m: &RealMatrix, n: usize) -> RealVector {
    let mut out = Vec::with_capacity(vech_len(n));
    for j in 0..n {
        for i in j..n {
            out.push(m[(i, j)]);
        }
    }
    RealVector::from_vec(out)
}

/// Inverse of [`vech`]; the upper triangle is mirrored from the lower one.
pub fn unvech(v: &RealVector, n: usize) -> Result<RealMatrix> {
    if v.len() != vech_len(n) {
        return Err(Error::LengthMismatch {
            expected: vech_len(n),
            actual: v.len(),
        });
    }
    let mut out = RealMatrix::zeros(n, n);
    let mut k = 0;
    for j in 0..n {
        for i in j..n {
            out[(i, j)] = v[k];
            out[(j, i)] = v[k];
            k += 1;
        }
    }
    Ok(out)
}

/// The 0/1 matrix `D_n` of shape `n² x n(n+1)/2` with `D_n vech(A) = vec(A)`
/// for every symmetric `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplicationMatrix {
    n: usize,
    matrix: RealMatrix,
    /// vec position -> vech position
    index: Vec<usize>,
}

impl DuplicationMatrix {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "duplication matrix needs n >= 1");
        let index: Vec<usize> = (0..n * n)
            .map(|k| {
                let (i, j) = (k % n, k / n);
                vech_position(n, i.max(j), i.min(j))
            })
            .collect();
        let mut matrix = RealMatrix::zeros(n * n, vech_len(n));
        for (row, &col) in index.iter().enumerate() {
            matrix[(row, col)] = 1.0;
        }
        Self { n, matrix, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    /// `D_n x` through the index map. Bit-identical to the dense product
    /// because every row of `D_n` holds a single 1.
    pub fn apply(&self, vech_coords: &RealVector) -> Result<RealVector> {
        if vech_coords.len() != vech_len(self.n) {
            return Err(Error::LengthMismatch {
                expected: vech_len(self.n),
                actual: vech_coords.len(),
            });
        }
        Ok(RealVector::from_iterator(
            self.index.len(),
            self.index.iter().map(|&c| vech_coords[c]),
        ))
    }

    /// For each vec position, the vech position it duplicates.
    pub fn index_map(&self) -> &[usize] {
        &self.index
    }
}

/// Position of the lower-triangular entry `(i, j)`, `i >= j`, inside `vech`.
///
/// Column `j` starts after `Σ_{c<j} (n - c) = j n - j (j - 1) / 2` entries.
pub const fn vech_position(n: usize, i: usize, j: usize) -> usize {
    j * n - j * (j + 1) / 2 + i
}

/// Kronecker product: block `(i, j)` of the result is `A[i, j] * B`.
pub fn kron(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = RealMatrix::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let aij = a[(i, j)];
            for l in 0..bc {
                for k in 0..br {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `tr(AᵀB) = vec(A)ᵀ vec(B) = Σ A[i,j] B[i,j]`.
pub fn tr_prod(a: &RealMatrix, b: &RealMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            op: "tr_prod",
            detail: format!("{:?} vs {:?}", a.shape(), b.shape()),
        });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x * y).sum())
}

/// Hessian identified from the second differential `tr(A (dY)ᵀ C dX)`:
/// `½ (Aᵀ ⊗ C + A ⊗ Cᵀ)`. The result is exactly symmetric.
pub fn hessian_from_trace_form(a: &RealMatrix, c: &RealMatrix) -> Result<RealMatrix> {
    let n = check_square(a)?;
    if c.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            op: "hessian_from_trace_form",
            detail: format!("A is {n}x{n}, C is {:?}", c.shape()),
        });
    }
    let left = kron(&a.transpose(), c);
    let right = kron(a, &c.transpose());
    Ok((left + right) * 0.5)
}

/// Both sides of `tr(A B c dᵀ) = vec(Aᵀ)ᵀ (d ⊗ B) c`.
///
/// Shapes: `A` is `p x q`, `B` is `q x r`, `c` has length `r`, `d` length `p`.
pub fn trace_abcdt_lhs_rhs(
    a: &RealMatrix,
    b: &RealMatrix,
    c: &RealVector,
    d: &RealVector,
) -> Result<(f64, f64)> {
    let (p, q) = a.shape();
    if b.nrows() != q || c.len() != b.ncols() || d.len() != p {
        return Err(Error::ShapeMismatch {
            op: "trace_abcdt_lhs_rhs",
            detail: format!(
                "A {:?}, B {:?}, c {}, d {}",
                a.shape(),
                b.shape(),
                c.len(),
                d.len()
            ),
        });
    }
    let lhs = (a * b * c * d.transpose()).trace();
    let d_col = RealMatrix::from_column_slice(p, 1, d.as_slice());
    let rhs = vec(&a.transpose()).dot(&(kron(&d_col, b) * c));
    Ok((lhs, rhs))
}

/// The three forms `vec(ABd)`, `(dᵀ ⊗ A) vec B` and `(A ⊗ dᵀ) vec(Bᵀ)`.
///
/// Shapes: `A` is `p x q`, `B` is `q x r`, `d` has length `r`.
pub fn vec_abd_forms(
    a: &RealMatrix,
    b: &RealMatrix,
    d: &RealVector,
) -> Result<(RealVector, RealVector, RealVector)> {
    if a.ncols() != b.nrows() || b.ncols() != d.len() {
        return Err(Error::ShapeMismatch {
            op: "vec_abd_forms",
            detail: format!("A {:?}, B {:?}, d {}", a.shape(), b.shape(), d.len()),
        });
    }
    let direct = a * b * d;
    let d_row = RealMatrix::from_row_slice(1, d.len(), d.as_slice());
    let second = kron(&d_row, a) * vec(b);
    let third = kron(a, &d_row) * vec(&b.transpose());
    Ok((direct, second, third))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> RealMatrix {
        RealMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
    }

    fn rand_sym(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
        symmetrize(&rand_mat(rng, n, n))
    }

    #[test]
    fn vec_stacks_columns() {
        assert_eq!(vec(&dmatrix![1.0, 2.0; 3.0, 4.0]), dvector![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(vec(&RealMatrix::identity(2, 2)), dvector![1.0, 0.0, 0.0, 1.0]);
        // a_ij encoded as 10*i + j
        let a = RealMatrix::from_fn(3, 3, |i, j| (10 * (i + 1) + j + 1) as f64);
        let expected = dvector![11.0, 21.0, 31.0, 12.0, 22.0, 32.0, 13.0, 23.0, 33.0];
        assert_eq!(vec(&a), expected);
    }

    #[test]
    fn vech_takes_lower_triangle() {
        assert_eq!(vech_default(&dmatrix![2.0, 5.0; 5.0, 7.0]).unwrap(), dvector![2.0, 5.0, 7.0]);
        assert_eq!(vech_default(&RealMatrix::identity(2, 2)).unwrap(), dvector![1.0, 0.0, 1.0]);
        let a = RealMatrix::from_fn(3, 3, |i, j| (10 * (i.max(j) + 1) + i.min(j) + 1) as f64);
        assert_eq!(
            vech_default(&a).unwrap(),
            dvector![11.0, 21.0, 31.0, 22.0, 32.0, 33.0]
        );
    }

    #[test]
    fn vech_rejects_bad_input() {
        let rect = RealMatrix::zeros(2, 3);
        assert_eq!(
            vech_default(&rect),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
        match vech_default(&dmatrix![1.0, 2.0; 2.5, 1.0]) {
            Err(Error::NotSymmetric { max_asymmetry, .. }) => assert_eq!(max_asymmetry, 0.5),
            other => panic!("unexpected {other:?}"),
        }
        // within tolerance is accepted
        assert!(vech(&dmatrix![1.0, 2.0; 2.0 + 1e-12, 1.0], 1e-10).is_ok());
    }

    #[test]
    fn unvec_and_unvech() {
        assert_eq!(
            unvec(&dvector![1.0, 3.0, 2.0, 4.0], 2, 2).unwrap(),
            dmatrix![1.0, 2.0; 3.0, 4.0]
        );
        assert_eq!(unvech(&dvector![1.0, 0.0, 1.0], 2).unwrap(), RealMatrix::identity(2, 2));
        assert_eq!(
            unvec(&dvector![1.0, 2.0, 3.0], 2, 2),
            Err(Error::LengthMismatch { expected: 4, actual: 3 })
        );
        assert_eq!(
            unvech(&dvector![1.0, 2.0], 2),
            Err(Error::LengthMismatch { expected: 3, actual: 2 })
        );
    }

    #[test]
    fn vech_position_matches_enumeration() {
        for n in 1..9 {
            let mut k = 0;
            for j in 0..n {
                for i in j..n {
                    assert_eq!(vech_position(n, i, j), k);
                    k += 1;
                }
            }
        }
    }

    #[test]
    fn duplication_small_cases() {
        assert_eq!(DuplicationMatrix::new(1).matrix(), &dmatrix![1.0]);
        let d2 = DuplicationMatrix::new(2);
        assert_eq!(
            d2.matrix(),
            &dmatrix![1.0, 0.0, 0.0; 0.0, 1.0, 0.0; 0.0, 1.0, 0.0; 0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn duplication_structure() {
        for n in 1..=8 {
            let d = DuplicationMatrix::new(n);
            let m = d.matrix();
            assert_eq!(m.shape(), (n * n, vech_len(n)));
            for r in m.row_iter() {
                assert_eq!(r.iter().filter(|&&x| x == 1.0).count(), 1);
                assert!(r.iter().all(|&x| x == 0.0 || x == 1.0));
            }
            for j in 0..n {
                for i in j..n {
                    let col = m.column(vech_position(n, i, j));
                    let ones = col.iter().filter(|&&x| x == 1.0).count();
                    assert_eq!(ones, if i == j { 1 } else { 2 });
                }
            }
        }
    }

    #[test]
    fn duplication_reproduces_vec_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = DuplicationMatrix::new(3);
        assert_eq!(d.matrix().shape(), (9, 6));
        for _ in 0..100 {
            let a = rand_sym(&mut rng, 3);
            let h = vech_default(&a).unwrap();
            assert_eq!(d.matrix() * &h, vec(&a));
            assert_eq!(d.apply(&h).unwrap(), vec(&a));
        }
    }

    #[test]
    fn kron_cases() {
        assert_eq!(
            kron(&RealMatrix::identity(2, 2), &RealMatrix::identity(2, 2)),
            RealMatrix::identity(4, 4)
        );
        let k = kron(&dmatrix![1.0, 2.0; 3.0, 4.0], &dmatrix![0.0, 1.0; 1.0, 0.0]);
        let expected = dmatrix![
            0.0, 1.0, 0.0, 2.0;
            1.0, 0.0, 2.0, 0.0;
            0.0, 3.0, 0.0, 4.0;
            3.0, 0.0, 4.0, 0.0
        ];
        assert_eq!(k, expected);
        let rect = kron(&RealMatrix::zeros(2, 3), &RealMatrix::zeros(4, 1));
        assert_eq!(rect.shape(), (8, 3));
    }

    #[test]
    fn kron_agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = rand_mat(&mut rng, 2, 3);
            let b = rand_mat(&mut rng, 3, 2);
            assert_eq!(kron(&a, &b), a.kronecker(&b));
        }
    }

    #[test]
    fn kron_applied_to_vec() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = rand_mat(&mut rng, 3, 3);
            let b = rand_mat(&mut rng, 3, 3);
            let x = rand_mat(&mut rng, 3, 3);
            let lhs = kron(&a, &b) * vec(&x);
            let rhs = vec(&(&b * &x * a.transpose()));
            assert!((lhs - rhs).amax() <= 1e-12);
        }
    }

    #[test]
    fn tr_prod_cases() {
        let i2 = RealMatrix::identity(2, 2);
        assert_eq!(tr_prod(&i2, &i2).unwrap(), 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = rand_mat(&mut rng, 4, 4);
        let b = rand_mat(&mut rng, 4, 4);
        let mut frob = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                frob += a[(i, j)] * a[(i, j)];
            }
        }
        assert!((tr_prod(&a, &a).unwrap() - frob).abs() <= 1e-13);
        let explicit = (a.transpose() * &b).trace();
        assert!((tr_prod(&a, &b).unwrap() - explicit).abs() <= 1e-13);
        assert!(matches!(
            tr_prod(&a, &RealMatrix::zeros(4, 3)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn trace_form_hessian() {
        let i2 = RealMatrix::identity(2, 2);
        assert_eq!(hessian_from_trace_form(&i2, &i2).unwrap(), RealMatrix::identity(4, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=4 {
            let a = rand_mat(&mut rng, n, n);
            let c = rand_mat(&mut rng, n, n);
            let w = rand_mat(&mut rng, n, n);
            let h = hessian_from_trace_form(&a, &c).unwrap();
            assert_eq!(h, h.transpose());
            let quad = vec(&w).dot(&(&h * vec(&w)));
            let direct = (&a * w.transpose() * &c * &w).trace();
            assert!((quad - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }
        assert!(hessian_from_trace_form(&i2, &RealMatrix::identity(3, 3)).is_err());
        assert!(matches!(
            hessian_from_trace_form(&RealMatrix::zeros(2, 3), &i2),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn trace_abcdt_cases() {
        let i2 = RealMatrix::identity(2, 2);
        let e1 = dvector![1.0, 0.0];
        assert_eq!(trace_abcdt_lhs_rhs(&i2, &i2, &e1, &e1).unwrap(), (1.0, 1.0));

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let a = rand_mat(&mut rng, 3, 3);
            let b = rand_mat(&mut rng, 3, 3);
            let c = RealVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
            let d = RealVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
            let (lhs, rhs) = trace_abcdt_lhs_rhs(&a, &b, &c, &d).unwrap();
            // brute-force trace of the rank-one product
            let mut brute = 0.0;
            let abc = &a * &b * &c;
            for i in 0..3 {
                brute += abc[i] * d[i];
            }
            assert!((lhs - brute).abs() <= 1e-12 * brute.abs().max(1.0));
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));

            let s = symmetrize(&a);
            let (lhs_s, _) = trace_abcdt_lhs_rhs(&s, &b, &c, &d).unwrap();
            let d_col = RealMatrix::from_column_slice(3, 1, d.as_slice());
            let sym_form = vec(&s).dot(&(kron(&d_col, &b) * &c));
            assert!((lhs_s - sym_form).abs() <= 1e-12 * lhs_s.abs().max(1.0));
        }
        assert!(trace_abcdt_lhs_rhs(&i2, &RealMatrix::identity(3, 3), &e1, &e1).is_err());
    }

    #[test]
    fn vec_abd_cases() {
        let i2 = RealMatrix::identity(2, 2);
        let (x, y, z) = vec_abd_forms(&i2, &i2, &dvector![1.0, 0.0]).unwrap();
        for v in [&x, &y, &z] {
            assert_eq!(v, &dvector![1.0, 0.0]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let a = rand_mat(&mut rng, 3, 3);
            let b = rand_mat(&mut rng, 3, 3);
            let d = RealVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
            let (x, y, z) = vec_abd_forms(&a, &b, &d).unwrap();
            assert!((&x - &y).amax() <= 1e-12);
            assert!((&x - &z).amax() <= 1e-12);

            let bs = symmetrize(&b);
            let (_, y, z) = vec_abd_forms(&a, &bs, &d).unwrap();
            let d_row = RealMatrix::from_row_slice(1, 3, d.as_slice());
            assert!((&z - kron(&a, &d_row) * vec(&bs)).amax() <= 1e-12);
            assert!((&y - &z).amax() <= 1e-12);
        }
        assert!(vec_abd_forms(&i2, &i2, &dvector![1.0]).is_err());
    }

    #[test]
    fn symmetrize_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = rand_mat(&mut rng, 5, 5);
        let s = symmetrize(&m);
        assert_eq!(max_asymmetry(&s), 0.0);
        assert_eq!(s, s.transpose());
    }

    fn square_strategy() -> impl Strategy<Value = RealMatrix> {
        (1usize..=6).prop_flat_map(|n| {
            prop::collection::vec(-10.0f64..10.0, n * n)
                .prop_map(move |v| RealMatrix::from_column_slice(n, n, &v))
        })
    }

    proptest! {
        #[test]
        fn unvec_inverts_vec(m in square_strategy(), extra in 1usize..4) {
            let rect = RealMatrix::from_fn(m.nrows(), extra, |i, j| m[(i, j % m.ncols())]);
            prop_assert_eq!(unvec(&vec(&rect), rect.nrows(), extra).unwrap(), rect);
        }

        #[test]
        fn unvech_inverts_vech_and_duplication_holds(m in square_strategy()) {
            let s = symmetrize(&m);
            let h = vech(&s, 0.0).unwrap();
            prop_assert_eq!(unvech(&h, s.nrows()).unwrap(), s.clone());
            let d = DuplicationMatrix::new(s.nrows());
            prop_assert_eq!(d.matrix() * &h, vec(&s));
        }

        #[test]
        fn kron_transpose_and_scaling(a in square_strategy(), b in square_strategy(),
                                      alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
            prop_assert_eq!(kron(&a, &b).transpose(), kron(&a.transpose(), &b.transpose()));
            let scaled = kron(&(&a * alpha), &(&b * beta));
            let reference = kron(&a, &b) * (alpha * beta);
            let scale = max_abs(&reference).max(f64::MIN_POSITIVE);
            prop_assert!((scaled - reference).amax() <= 1e-15 * scale * 4.0);
        }

        #[test]
        fn vec_axb_matches_kron(a in square_strategy(), x_seed in 0u64..1000) {
            let n = a.nrows();
            let mut rng = ChaCha8Rng::seed_from_u64(x_seed);
            let x = RealMatrix::from_fn(n, n + 1, |_, _| rng.random_range(-10.0..10.0));
            let b = RealMatrix::from_fn(n + 1, 2, |_, _| rng.random_range(-10.0..10.0));
            let lhs = vec(&(&a * &x * &b));
            let rhs = kron(&b.transpose(), &a) * vec(&x);
            let scale = a.norm() * x.norm() * b.norm();
            prop_assert!((lhs - rhs).amax() <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn trace_form_hessian_symmetric(a in square_strategy(), c_seed in 0u64..1000) {
            let n = a.nrows();
            let mut rng = ChaCha8Rng::seed_from_u64(c_seed);
            let c = RealMatrix::from_fn(n, n, |_, _| rng.random_range(-10.0..10.0));
            let h = hessian_from_trace_form(&a, &c).unwrap();
            prop_assert_eq!(symmetrize(&h), h);
        }
    }
}
