//! Closed form vs. oracle on a single instance.

use nalgebra::SymmetricEigen;

use crate::error::Result;
use crate::kld::{assemble_hessian, assemble_jacobian, Basis, BlockId, GaussianPair};
use crate::matcalc::{max_abs, norm_inf, DuplicationMatrix, RealMatrix};
use crate::oracle::fd::{fd_gradient, fd_hessian, FdConfig, PackedPoint};
use crate::oracle::report::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    /// Jacobian vs. FD gradient, relative to `max(1, ‖J‖∞)`.
    pub tol_grad: f64,
    /// vech Hessian vs. FD Hessian, relative to `max(1, max|H|)`.
    pub tol_hess: f64,
    /// `max|H − Hᵀ|` and transpose pairing, relative to `max(1, ‖H‖∞)`.
    pub tol_symmetry: f64,
    /// vech blocks vs. `D_n`-compressed vec blocks.
    pub tol_compression: f64,
    /// Jacobian norm at `q = p`, relative to `max(1, ‖V⁻¹‖∞)`.
    pub tol_stationary: f64,
    /// `−λ_min / ‖H‖₂` at `q = p`.
    pub tol_psd: f64,
    pub grad_fd: FdConfig,
    pub hess_fd: FdConfig,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            tol_grad: 1e-6,
            tol_hess: 1e-4,
            tol_symmetry: 1e-12,
            tol_compression: 1e-14,
            tol_stationary: 1e-12,
            tol_psd: 1e-10,
            grad_fd: FdConfig::gradient(),
            hess_fd: FdConfig::hessian(),
        }
    }
}

/// `max |J − FD| / max(1, ‖J‖∞)` for the vec-basis Jacobian against central
/// differences of the extended formula.
pub fn jacobian_fd_error(pair: &GaussianPair, fd: &FdConfig) -> Result<f64> {
    let jac = assemble_jacobian(pair, Basis::Vec).assembled;
    let approx = fd_gradient(&PackedPoint::from_pair(pair, Basis::Vec), fd)?;
    Ok((&jac - approx).amax() / jac.amax().max(1.0))
}

/// `max |H − FD| / max(1, max|H|)` for the vech-basis Hessian against second
/// differences in vech coordinates.
pub fn hessian_fd_error(pair: &GaussianPair, fd: &FdConfig) -> Result<f64> {
    let hess = assemble_hessian(pair, Basis::Vech).assembled;
    let approx = fd_hessian(&PackedPoint::from_pair(pair, Basis::Vech), fd)?;
    Ok(max_abs(&(&hess - approx)) / max_abs(&hess).max(1.0))
}

/// Smallest eigenvalue of the vech Hessian and its spectral norm.
pub fn vech_hessian_spectrum(pair: &GaussianPair) -> (f64, f64) {
    spectrum(&assemble_hessian(pair, Basis::Vech).assembled)
}

/// Smallest eigenvalue and spectral norm of a symmetric matrix.
pub fn spectrum(h: &RealMatrix) -> (f64, f64) {
    let eig = SymmetricEigen::new(h.clone()).eigenvalues;
    let min = eig.min();
    let norm = eig.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    (min, norm)
}

fn fd_report(name: String, result: Result<f64>, tol: f64, what: &str) -> CheckReport {
    match result {
        Ok(err) => CheckReport::new(name, err, tol, what),
        Err(e) => CheckReport::failed(name, tol, format!("{what}: {e}")),
    }
}

/// Run every applicable check on one instance. Report names are prefixed
/// with `label`.
///
/// Always: Jacobian vs. FD (vec), Hessian vs. FD (vech), global symmetry and
/// transpose pairing in both bases, vech/vec consistency. When `q = p`
/// additionally: stationarity of the Jacobian and positive semidefiniteness
/// of the vech Hessian.
pub fn check_pair(pair: &GaussianPair, cfg: &CheckConfig, label: &str) -> Vec<CheckReport> {
    let n = pair.dim();
    let mut reports = Vec::new();

    reports.push(fd_report(
        format!("{label}jacobian_vs_fd"),
        jacobian_fd_error(pair, &cfg.grad_fd),
        cfg.tol_grad,
        "vec-basis Jacobian vs central differences of the extended formula",
    ));
    reports.push(fd_report(
        format!("{label}hessian_vs_fd"),
        hessian_fd_error(pair, &cfg.hess_fd),
        cfg.tol_hess,
        "vech-basis Hessian vs second differences in vech coordinates",
    ));

    let hessians = [Basis::Vec, Basis::Vech].map(|b| assemble_hessian(pair, b));
    for h in &hessians {
        let scale = norm_inf(&h.assembled).max(1.0);
        reports.push(CheckReport::new(
            format!("{label}symmetry_{}", h.basis),
            h.symmetry_residual() / scale,
            cfg.tol_symmetry,
            format!("max|H - H^T| / max(1, ||H||_inf), {} basis", h.basis),
        ));
        reports.push(CheckReport::new(
            format!("{label}transpose_pairing_{}", h.basis),
            h.transpose_pairing_residual() / scale,
            cfg.tol_symmetry,
            format!("max over 16 blocks of |block(r,c)^T - block(c,r)|, {} basis", h.basis),
        ));
    }

    let jac_vec = assemble_jacobian(pair, Basis::Vec);
    let jac_vech = assemble_jacobian(pair, Basis::Vech);
    {
        let d = DuplicationMatrix::new(n);
        let dm = d.matrix();
        let mut worst = 0.0f64;
        for id in [BlockId::S, BlockId::V] {
            let expected = dm.tr_mul(jac_vec.block(id));
            let scale = expected.amax().max(1.0);
            worst = worst.max((jac_vech.block(id) - expected).amax() / scale);
        }
        let [hv, hh] = &hessians;
        for r in BlockId::ALL {
            for c in BlockId::ALL {
                let mut expected = hv.block(r, c).clone();
                if r.is_covariance() {
                    expected = dm.tr_mul(&expected);
                }
                if c.is_covariance() {
                    expected *= dm;
                }
                let scale = max_abs(&expected).max(1.0);
                worst = worst.max(max_abs(&(hh.block(r, c) - expected)) / scale);
            }
        }
        reports.push(CheckReport::new(
            format!("{label}vech_consistency"),
            worst,
            cfg.tol_compression,
            "vech blocks vs D_n-compressed vec blocks",
        ));
    }

    if pair.is_identical() {
        let scale = norm_inf(&pair.v_factor().inverse()).max(1.0);
        let norm = jac_vec.assembled.norm().max(jac_vech.assembled.norm());
        reports.push(CheckReport::new(
            format!("{label}stationarity"),
            norm / scale,
            cfg.tol_stationary,
            "q = p: Jacobian 2-norm (worst basis) / max(1, ||V^-1||_inf)",
        ));
        let (min, spectral) = spectrum(&hessians[1].assembled);
        reports.push(CheckReport::new(
            format!("{label}psd_at_minimum"),
            (-min).max(0.0) / spectral.max(f64::MIN_POSITIVE),
            cfg.tol_psd,
            format!("q = p: vech Hessian smallest eigenvalue {min:e}, ||H||_2 = {spectral:e}"),
        ));
    }

    reports
}
