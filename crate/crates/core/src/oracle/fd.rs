//! Central finite differences over packed coordinates `(m, w, S, V)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kld::{Basis, GaussianPair};
use crate::matcalc::{unvec, unvech, vec, vech, RealMatrix, RealVector};
use crate::oracle::extended::kld_extended;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdScheme {
    /// Second-order central differences.
    Central2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub step: f64,
    pub scheme: FdScheme,
    /// Scale the step of coordinate `i` by `max(1, |θᵢ|)`.
    pub relative_step: bool,
}

impl FdConfig {
    pub const GRADIENT_STEP: f64 = 1e-5;
    pub const HESSIAN_STEP: f64 = 1e-4;

    pub fn gradient() -> Self {
        Self {
            step: Self::GRADIENT_STEP,
            scheme: FdScheme::Central2,
            relative_step: true,
        }
    }

    pub fn hessian() -> Self {
        Self {
            step: Self::HESSIAN_STEP,
            scheme: FdScheme::Central2,
            relative_step: true,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "finite-difference step must be positive, got {}",
                self.step
            )));
        }
        Ok(())
    }

    fn step_at(&self, x: f64) -> f64 {
        if self.relative_step {
            self.step * x.abs().max(1.0)
        } else {
            self.step
        }
    }
}

/// A point in packed coordinates: `(m, w, coords(S), coords(V))` where
/// `coords` is `vec` or `vech`.
///
/// In the `vech` basis a unit perturbation of an off-diagonal coordinate
/// moves both mirrored entries, so unpacking always yields symmetric
/// matrices. In the `vec` basis perturbations may break symmetry; the
/// objective is then the extended formula.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedPoint {
    basis: Basis,
    n: usize,
    theta: RealVector,
}

/// Unpacked `(m, w, S, V)`.
pub type Unpacked = (RealVector, RealVector, RealMatrix, RealMatrix);

impl PackedPoint {
    pub fn new(basis: Basis, n: usize, theta: RealVector) -> Result<Self> {
        let expected = basis.packed_len(n);
        if n == 0 || theta.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: theta.len(),
            });
        }
        Ok(Self { basis, n, theta })
    }

    pub fn from_pair(pair: &GaussianPair, basis: Basis) -> Self {
        let n = pair.dim();
        let coords = |a: &RealMatrix| match basis {
            Basis::Vec => vec(a),
            // stored covariances are exactly symmetric
            Basis::Vech => vech(a, 0.0).expect("covariance is symmetric"),
        };
        let parts = [pair.m().clone(), pair.w().clone(), coords(pair.s()), coords(pair.v())];
        let theta = RealVector::from_iterator(
            basis.packed_len(n),
            parts.iter().flat_map(|p| p.iter().copied()),
        );
        Self { basis, n, theta }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> &RealVector {
        &self.theta
    }

    pub fn unpack(&self) -> Unpacked {
        unpack_coords(self.basis, self.n, self.theta.as_slice())
    }

    /// Back to a validated instance (symmetry is checked in the `vec` basis).
    pub fn to_pair(&self) -> Result<GaussianPair> {
        let (m, w, s, v) = self.unpack();
        GaussianPair::new(m, w, s, v)
    }

    /// The extended divergence at arbitrary coordinates in this point's basis.
    pub fn objective(&self, theta: &[f64]) -> Result<f64> {
        let (m, w, s, v) = unpack_coords(self.basis, self.n, theta);
        kld_extended(&m, &w, &s, &v)
    }
}

/// Split packed coordinates. `theta` must have length `basis.packed_len(n)`.
pub fn unpack_coords(basis: Basis, n: usize, theta: &[f64]) -> Unpacked {
    assert_eq!(theta.len(), basis.packed_len(n), "packed length");
    let c = basis.cov_len(n);
    let m = RealVector::from_column_slice(&theta[..n]);
    let w = RealVector::from_column_slice(&theta[n..2 * n]);
    let cov = |slice: &[f64]| {
        let v = RealVector::from_column_slice(slice);
        match basis {
            Basis::Vec => unvec(&v, n, n),
            Basis::Vech => unvech(&v, n),
        }
        .expect("length checked")
    };
    let s = cov(&theta[2 * n..2 * n + c]);
    let v = cov(&theta[2 * n + c..]);
    (m, w, s, v)
}

fn eval<F>(f: &F, x: &[f64], index: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    match f(x) {
        Ok(y) if y.is_finite() => Ok(y),
        Ok(y) => Err(Error::StencilFailure {
            index,
            reason: format!("non-finite value {y}"),
        }),
        Err(e) => Err(Error::StencilFailure {
            index,
            reason: e.to_string(),
        }),
    }
}

/// `(f(θ + hᵢeᵢ) − f(θ − hᵢeᵢ)) / 2hᵢ` for every coordinate.
pub fn fd_gradient_fn<F>(f: F, theta: &[f64], cfg: &FdConfig) -> Result<RealVector>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let mut x = theta.to_vec();
    let mut grad = RealVector::zeros(theta.len());
    for i in 0..theta.len() {
        let h = cfg.step_at(theta[i]);
        x[i] = theta[i] + h;
        let plus = eval(&f, &x, i)?;
        x[i] = theta[i] - h;
        let minus = eval(&f, &x, i)?;
        x[i] = theta[i];
        grad[i] = (plus - minus) / (2.0 * h);
    }
    Ok(grad)
}

/// Four-point second differences
/// `[f(++) − f(+−) − f(−+) + f(−−)] / 4hᵢhⱼ`, evaluated for `i ≤ j` and
/// mirrored, so the result is exactly symmetric.
///
/// Entries are computed in parallel; each one is independent, so the result
/// does not depend on scheduling.
pub fn fd_hessian_fn<F>(f: F, theta: &[f64], cfg: &FdConfig) -> Result<RealMatrix>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let d = theta.len();
    let steps: Vec<f64> = theta.iter().map(|&x| cfg.step_at(x)).collect();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (hi, hj) = (steps[i], steps[j]);
            let mut x = theta.to_vec();
            let mut at = |si: f64, sj: f64| {
                x.copy_from_slice(theta);
                x[i] += si * hi;
                x[j] += sj * hj;
                eval(&f, &x, i)
            };
            let pp = at(1.0, 1.0)?;
            let pm = at(1.0, -1.0)?;
            let mp = at(-1.0, 1.0)?;
            let mm = at(-1.0, -1.0)?;
            Ok((pp - pm - mp + mm) / (4.0 * hi * hj))
        })
        .collect::<Result<_>>()?;
    let mut h = RealMatrix::zeros(d, d);
    for (&(i, j), &value) in pairs.iter().zip(&values) {
        h[(i, j)] = value;
        h[(j, i)] = value;
    }
    Ok(h)
}

/// Central-difference gradient of the extended divergence at `point`.
pub fn fd_gradient(point: &PackedPoint, cfg: &FdConfig) -> Result<RealVector> {
    fd_gradient_fn(|x| point.objective(x), point.theta.as_slice(), cfg)
}

/// Second-difference Hessian of the extended divergence at `point`.
pub fn fd_hessian(point: &PackedPoint, cfg: &FdConfig) -> Result<RealMatrix> {
    fd_hessian_fn(|x| point.objective(x), point.theta.as_slice(), cfg)
}
