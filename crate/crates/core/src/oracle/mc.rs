//! Monte-Carlo estimate of `E_q[log q(x) − log p(x)]`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::kld::GaussianPair;
use crate::matcalc::RealVector;

pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    /// `|estimate − value| / stderr`.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.estimate - value).abs() / self.stderr
    }
}

/// Samples `x = m + L_S z` with `z` standard normal from a `ChaCha8Rng`
/// seeded with `seed`, and averages
///
/// ```text
/// log q(x) − log p(x) = ½ [log|V| − log|S| − zᵀz + ‖L_V⁻¹ (x − w)‖²]
/// ```
///
/// The normalizing `(2π)^{N/2}` factors cancel. Sequential and deterministic.
pub fn mc_kld(pair: &GaussianPair, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "Monte-Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let n = pair.dim();
    let ls = pair.s_factor().l();
    let lv = pair.v_factor().l();
    let log_det_gap = pair.v_factor().log_det() - pair.s_factor().log_det();
    let offset = pair.m() - pair.w();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = RealVector::zeros(n);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
        let mut y = &offset + &ls * &z;
        let solved = lv.solve_lower_triangular_mut(&mut y);
        debug_assert!(solved);
        let term = 0.5 * (log_det_gap - z.norm_squared() + y.norm_squared());
        sum += term;
        sum_sq += term * term;
    }
    let count = samples as f64;
    let mean = sum / count;
    let variance = ((sum_sq - count * mean * mean) / (count - 1.0)).max(0.0);
    Ok(McEstimate {
        estimate: mean,
        stderr: (variance / count).sqrt(),
        samples,
    })
}
