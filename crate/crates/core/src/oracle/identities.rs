//! Randomized verification of the vec / Kronecker / trace identities behind
//! the derivative formulas.
//!
//! Each identity evaluates both sides on a random instance and returns a
//! scale-relative discrepancy. A suite run executes `trials` instances per
//! `(identity, n)` pair and keeps the worst one. Trials are seeded
//! independently from the master seed and may run in parallel; the worst-case
//! reduction is done sequentially in trial order.
//!
//! Three entries are negative controls: they must *fail* to agree, which shows
//! that the corresponding equalities only hold on symmetric directions.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kld::{hessian_block, mv_alternative_form, Basis, BlockId};
use crate::matcalc::{
    hessian_from_trace_form, kron, max_abs, trace_abcdt_lhs_rhs, tr_prod, vec, vec_abd_forms, vech,
    vech_len, DuplicationMatrix, RealMatrix, RealVector,
};
use crate::oracle::extended::kld_extended;
use crate::oracle::fd::{fd_hessian_fn, FdConfig};
use crate::oracle::random::{
    normal_matrix, normal_vector, random_pair, rng_for, stream_id, symmetric_matrix,
};
use crate::oracle::report::CheckReport;

/// Relative tolerance of the algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Relative tolerance for comparisons against finite-difference Hessians.
pub const FD_HESSIAN_TOL: f64 = 1e-4;
/// Minimum relative discrepancy a negative control must show.
pub const CONTROL_SEPARATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Expectation {
    /// Worst discrepancy over the trials must be `<= tolerance`.
    Agree { tolerance: f64 },
    /// Every trial must show a discrepancy `> separation`.
    Differ { separation: f64 },
}

pub type IdentityFn = fn(&mut ChaCha8Rng, usize) -> f64;

#[derive(Debug, Clone, Copy)]
pub struct Identity {
    pub name: &'static str,
    pub description: &'static str,
    pub expectation: Expectation,
    /// Smallest dimension at which the identity is meaningful.
    pub min_dim: usize,
    pub eval: IdentityFn,
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

fn vec_diff(a: &RealVector, b: &RealVector) -> f64 {
    (a - b).amax()
}

fn col(v: &RealVector) -> RealMatrix {
    RealMatrix::from_column_slice(v.len(), 1, v.as_slice())
}

fn row(v: &RealVector) -> RealMatrix {
    RealMatrix::from_row_slice(1, v.len(), v.as_slice())
}

fn vec_of_vector(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = normal_vector(rng, n);
    let as_row = vec(&row(&a));
    let as_col = vec(&col(&a));
    vec_diff(&as_row, &a).max(vec_diff(&as_col, &a))
}

fn vec_axb(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let (k, l) = (n + 1, n + 2);
    let a = normal_matrix(rng, n, k);
    let x = normal_matrix(rng, k, l);
    let b = normal_matrix(rng, l, n);
    let lhs = vec(&(&a * &x * &b));
    let rhs = kron(&b.transpose(), &a) * vec(&x);
    rel(vec_diff(&lhs, &rhs), a.norm() * x.norm() * b.norm())
}

fn vec_abd(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = normal_matrix(rng, n, n + 1);
    let b = normal_matrix(rng, n + 1, n);
    let d = normal_vector(rng, n);
    let (x, y, z) = vec_abd_forms(&a, &b, &d).expect("conformable");
    rel(vec_diff(&x, &y).max(vec_diff(&x, &z)), a.norm() * b.norm() * d.norm())
}

fn vec_of_sum(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = normal_matrix(rng, n, n + 1);
    let b = normal_matrix(rng, n, n + 1);
    let lhs = vec(&(&a + &b));
    let rhs = vec(&a) + vec(&b);
    let lhs_t = vec(&(&a + &b)).transpose();
    let rhs_t = vec(&a).transpose() + vec(&b).transpose();
    vec_diff(&lhs, &rhs).max((lhs_t - rhs_t).amax())
}

fn duplication(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = symmetric_matrix(rng, n);
    let d = DuplicationMatrix::new(n);
    let h = vech(&a, 0.0).expect("symmetric");
    vec_diff(&(d.matrix() * h), &vec(&a))
}

fn tr_dot(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = normal_vector(rng, n);
    let b = normal_vector(rng, n);
    let trace = (row(&a) * col(&b)).trace();
    let dot = vec(&col(&a)).dot(&vec(&col(&b)));
    rel((trace - dot).abs(), a.norm() * b.norm())
}

fn tr_matprod(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = normal_matrix(rng, n, n + 1);
    let b = normal_matrix(rng, n, n + 1);
    let explicit = (a.transpose() * &b).trace();
    let via_vec = tr_prod(&a, &b).expect("same shape");
    rel((explicit - via_vec).abs(), a.norm() * b.norm())
}

fn trace_abcdt(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = normal_matrix(rng, n, n + 1);
    let b = normal_matrix(rng, n + 1, n);
    let c = normal_vector(rng, n);
    let d = normal_vector(rng, n);
    let (lhs, rhs) = trace_abcdt_lhs_rhs(&a, &b, &c, &d).expect("conformable");
    let scale = a.norm() * b.norm() * c.norm() * d.norm();
    rel((lhs - rhs).abs(), scale)
}

fn trace_abcdt_symmetric(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = symmetric_matrix(rng, n);
    let b = normal_matrix(rng, n, n);
    let c = normal_vector(rng, n);
    let d = normal_vector(rng, n);
    let (lhs, _) = trace_abcdt_lhs_rhs(&a, &b, &c, &d).expect("conformable");
    let sym_form = vec(&a).dot(&(kron(&col(&d), &b) * &c));
    rel((lhs - sym_form).abs(), a.norm() * b.norm() * c.norm() * d.norm())
}

fn tr_abcd(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let [a, b, c, d] = [(); 4].map(|_| normal_matrix(rng, n, n));
    let lhs = (&a * &b * &c * &d).trace();
    let rhs = vec(&b.transpose()).dot(&(kron(&a.transpose(), &c) * vec(&d)));
    rel((lhs - rhs).abs(), a.norm() * b.norm() * c.norm() * d.norm())
}

fn trace_form_hessian_eval(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = normal_matrix(rng, n, n);
    let c = normal_matrix(rng, n, n);
    let x = normal_matrix(rng, n, n);
    let y = normal_matrix(rng, n, n);
    let h = hessian_from_trace_form(&a, &c).expect("square");
    let asym = max_abs(&(&h - h.transpose()));
    let quad = vec(&x).dot(&(&h * vec(&x)));
    let quad_direct = (&a * x.transpose() * &c * &x).trace();
    // the symmetrized bilinear form
    let bilinear = vec(&y).dot(&(&h * vec(&x)));
    let bilinear_direct = 0.5
        * ((&a * y.transpose() * &c * &x).trace()
            + (a.transpose() * y.transpose() * c.transpose() * &x).trace());
    let scale = a.norm() * c.norm() * x.norm() * x.norm().max(y.norm());
    asym.max(rel((quad - quad_direct).abs(), scale))
        .max(rel((bilinear - bilinear_direct).abs(), scale))
}

fn kron_transpose(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let a = normal_matrix(rng, n, n + 1);
    let b = normal_matrix(rng, n + 2, n);
    max_abs(&(kron(&a, &b).transpose() - kron(&a.transpose(), &b.transpose())))
}

fn mv_discrepancy(rng: &mut ChaCha8Rng, n: usize, symmetric: bool) -> f64 {
    let pair = random_pair(rng, n);
    let primary = hessian_block(&pair, BlockId::M, BlockId::V, Basis::Vec);
    let alternative = mv_alternative_form(&pair);
    let w = if symmetric {
        symmetric_matrix(rng, n)
    } else {
        normal_matrix(rng, n, n)
    };
    let diff = (&primary - &alternative) * vec(&w);
    diff.norm() / (primary.norm() * w.norm()).max(f64::MIN_POSITIVE)
}

fn mv_symmetric(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    mv_discrepancy(rng, n, true)
}

fn mv_nonsymmetric(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    mv_discrepancy(rng, n, false)
}

/// FD Hessian of the extended divergence with respect to the `S` block only.
fn ss_fd_discrepancy(rng: &mut ChaCha8Rng, n: usize, basis: Basis) -> f64 {
    let pair = random_pair(rng, n);
    let (m, w, v) = (pair.m().clone(), pair.w().clone(), pair.v().clone());
    let closed = hessian_block(&pair, BlockId::S, BlockId::S, basis);
    let theta = match basis {
        Basis::Vec => vec(pair.s()),
        Basis::Vech => vech(pair.s(), 0.0).expect("symmetric"),
    };
    let objective = |x: &[f64]| {
        let coords = RealVector::from_column_slice(x);
        let s = match basis {
            Basis::Vec => crate::matcalc::unvec(&coords, n, n),
            Basis::Vech => crate::matcalc::unvech(&coords, n),
        }?;
        kld_extended(&m, &w, &s, &v)
    };
    match fd_hessian_fn(objective, theta.as_slice(), &FdConfig::hessian()) {
        Ok(fd) => rel(max_abs(&(fd - &closed)), max_abs(&closed)),
        Err(_) => f64::INFINITY,
    }
}

fn ss_vec_fd(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    ss_fd_discrepancy(rng, n, Basis::Vec)
}

fn ss_vech_fd(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    debug_assert_eq!(Basis::Vech.cov_len(n), vech_len(n));
    ss_fd_discrepancy(rng, n, Basis::Vech)
}

/// Bilinear form of the closed `(S,S)` block against the exact second
/// directional derivative of `−½ log|S|`: `½ tr(S⁻¹ E₁ S⁻¹ E₂)`.
fn ss_bilinear_discrepancy(rng: &mut ChaCha8Rng, n: usize, basis: Basis) -> f64 {
    let pair = random_pair(rng, n);
    let s_inv = pair.s().clone().try_inverse().expect("SPD is invertible");
    let (e1, e2) = match basis {
        Basis::Vech => (symmetric_matrix(rng, n), symmetric_matrix(rng, n)),
        Basis::Vec => (normal_matrix(rng, n, n), normal_matrix(rng, n, n)),
    };
    let exact = 0.5 * (&s_inv * &e1 * &s_inv * &e2).trace();
    let closed = hessian_block(&pair, BlockId::S, BlockId::S, basis);
    let coords = |e: &RealMatrix| match basis {
        Basis::Vec => vec(e),
        Basis::Vech => vech(e, 0.0).expect("symmetric"),
    };
    let form = coords(&e1).dot(&(&closed * coords(&e2)));
    let scale = 0.5 * s_inv.norm().powi(2) * e1.norm() * e2.norm();
    rel((form - exact).abs(), scale)
}

fn ss_vech_exact(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    ss_bilinear_discrepancy(rng, n, Basis::Vech)
}

fn ss_vec_exact_control(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    ss_bilinear_discrepancy(rng, n, Basis::Vec)
}

const AGREE: Expectation = Expectation::Agree {
    tolerance: IDENTITY_TOL,
};

/// The registry, in reporting order.
pub fn identities() -> Vec<Identity> {
    vec![
        Identity {
            name: "vec_of_vector",
            description: "vec(aᵀ) = vec(a) = a",
            expectation: AGREE,
            min_dim: 1,
            eval: vec_of_vector,
        },
        Identity {
            name: "vec_axb_kron",
            description: "vec(AXB) = (Bᵀ ⊗ A) vec X",
            expectation: AGREE,
            min_dim: 1,
            eval: vec_axb,
        },
        Identity {
            name: "vec_abd_forms",
            description: "vec(ABd) = (dᵀ ⊗ A) vec B = (A ⊗ dᵀ) vec Bᵀ",
            expectation: AGREE,
            min_dim: 1,
            eval: vec_abd,
        },
        Identity {
            name: "vec_of_sum",
            description: "vec(A + B) = vec A + vec B, and transposed",
            expectation: AGREE,
            min_dim: 1,
            eval: vec_of_sum,
        },
        Identity {
            name: "duplication_vech",
            description: "D_n vech(A) = vec(A) for symmetric A",
            expectation: AGREE,
            min_dim: 1,
            eval: duplication,
        },
        Identity {
            name: "trace_dot",
            description: "tr(aᵀb) = aᵀb = vec(a)ᵀ vec(b)",
            expectation: AGREE,
            min_dim: 1,
            eval: tr_dot,
        },
        Identity {
            name: "trace_matprod",
            description: "tr(AᵀB) = vec(A)ᵀ vec(B)",
            expectation: AGREE,
            min_dim: 1,
            eval: tr_matprod,
        },
        Identity {
            name: "trace_abcdt",
            description: "tr(A B c dᵀ) = vec(Aᵀ)ᵀ (d ⊗ B) c",
            expectation: AGREE,
            min_dim: 1,
            eval: trace_abcdt,
        },
        Identity {
            name: "trace_abcdt_symmetric",
            description: "tr(A B c dᵀ) = vec(A)ᵀ (d ⊗ B) c for symmetric A",
            expectation: AGREE,
            min_dim: 1,
            eval: trace_abcdt_symmetric,
        },
        Identity {
            name: "trace_abcd_kron",
            description: "tr(ABCD) = vec(Bᵀ)ᵀ (Aᵀ ⊗ C) vec D",
            expectation: AGREE,
            min_dim: 1,
            eval: tr_abcd,
        },
        Identity {
            name: "trace_form_hessian",
            description: "d²φ = tr(A dYᵀ C dX) ⇒ H = ½(Aᵀ ⊗ C + A ⊗ Cᵀ), symmetric",
            expectation: AGREE,
            min_dim: 1,
            eval: trace_form_hessian_eval,
        },
        Identity {
            name: "kron_transpose",
            description: "(A ⊗ B)ᵀ = Aᵀ ⊗ Bᵀ",
            expectation: AGREE,
            min_dim: 1,
            eval: kron_transpose,
        },
        Identity {
            name: "mv_forms_symmetric_direction",
            description: "−[aᵀV⁻¹] ⊗ V⁻¹ and −V⁻¹ ⊗ [aᵀV⁻¹] agree on vec(W), W symmetric",
            expectation: AGREE,
            min_dim: 1,
            eval: mv_symmetric,
        },
        Identity {
            name: "mv_forms_nonsymmetric_control",
            description: "the two (m,V) forms differ on vec(W) for non-symmetric W",
            expectation: Expectation::Differ {
                separation: CONTROL_SEPARATION,
            },
            min_dim: 2,
            eval: mv_nonsymmetric,
        },
        Identity {
            name: "ss_block_vech_exact",
            description: "vech(E₁)ᵀ ½ D_nᵀ (S⁻¹ ⊗ S⁻¹) D_n vech(E₂) = ½ tr(S⁻¹E₁S⁻¹E₂), E symmetric",
            expectation: AGREE,
            min_dim: 1,
            eval: ss_vech_exact,
        },
        Identity {
            name: "ss_block_vec_exact_control",
            description: "vec(X₁)ᵀ ½ (S⁻¹ ⊗ S⁻¹) vec(X₂) ≠ ½ tr(S⁻¹X₁S⁻¹X₂) for non-symmetric X",
            expectation: Expectation::Differ {
                separation: CONTROL_SEPARATION,
            },
            min_dim: 2,
            eval: ss_vec_exact_control,
        },
        Identity {
            name: "ss_block_vec_fd_control",
            description: "unconstrained vec FD Hessian differs from ½ S⁻¹ ⊗ S⁻¹ entrywise",
            expectation: Expectation::Differ {
                separation: FD_HESSIAN_TOL,
            },
            min_dim: 2,
            eval: ss_vec_fd,
        },
        Identity {
            name: "ss_block_vech_fd",
            description: "vech FD Hessian matches ½ D_nᵀ (S⁻¹ ⊗ S⁻¹) D_n",
            expectation: Expectation::Agree {
                tolerance: FD_HESSIAN_TOL,
            },
            min_dim: 1,
            eval: ss_vech_fd,
        },
    ]
}

/// Run one identity for `trials` random instances at dimension `n`.
pub fn run_identity(identity: &Identity, n: usize, trials: usize, seed: u64) -> CheckReport {
    let stream = stream_id(identity.name) ^ (n as u64).rotate_left(32);
    let errors: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, stream, t as u64);
            (identity.eval)(&mut rng, n)
        })
        .collect();
    let name = format!("{}[n={n}]", identity.name);
    match identity.expectation {
        Expectation::Agree { tolerance } => {
            let (worst_trial, worst) = errors
                .iter()
                .copied()
                .enumerate()
                .fold((0, 0.0f64), |(bt, bv), (t, e)| {
                    // NaN counts as worst
                    if !(e <= bv) {
                        (t, e)
                    } else {
                        (bt, bv)
                    }
                });
            CheckReport::new(
                name,
                worst,
                tolerance,
                format!(
                    "{}; {trials} trials, worst relative discrepancy at trial {worst_trial}",
                    identity.description
                ),
            )
        }
        Expectation::Differ { separation } => {
            let indistinct = errors.iter().filter(|&&e| !(e > separation)).count();
            let smallest = errors.iter().copied().fold(f64::INFINITY, f64::min);
            CheckReport::new(
                name,
                indistinct as f64,
                0.0,
                format!(
                    "negative control: {}; {indistinct} of {trials} trials failed to separate \
                     (need relative discrepancy > {separation:e}, smallest {smallest:e})",
                    identity.description
                ),
            )
        }
    }
}

/// Every identity at every dimension in `dims` (skipping dimensions below an
/// identity's `min_dim`), `trials` instances each.
pub fn identity_suite(seed: u64, dims: &[usize], trials: usize) -> Result<Vec<CheckReport>> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidConfig(
            "dims must be a non-empty list of positive integers".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let registry = identities();
    let mut reports = Vec::new();
    for identity in &registry {
        for &n in dims {
            if n >= identity.min_dim {
                reports.push(run_identity(identity, n, trials, seed));
            }
        }
    }
    Ok(reports)
}
