//! Seeded random instances.
//!
//! Every random object is drawn from a `ChaCha8Rng`. Per-trial generators are
//! seeded from `(master seed, stream, index)` through SplitMix64 so trials can
//! run in any order, or in parallel, and still reproduce bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::kld::GaussianPair;
use crate::matcalc::{symmetrize, RealMatrix, RealVector};

/// Eigenvalue range of generated SPD matrices; condition numbers stay ≤ 4.
pub const SPD_EIGEN_RANGE: (f64, f64) = (0.5, 2.0);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of stream `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index)
}

pub fn rng_for(master: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream, index))
}

/// Stable stream id for a label.
pub fn stream_id(label: &str) -> u64 {
    // FNV-1a
    label
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn normal_vector<R: Rng>(rng: &mut R, n: usize) -> RealVector {
    RealVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub fn normal_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix {
    // fill column-major in a fixed order
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    RealMatrix::from_column_slice(rows, cols, &data)
}

pub fn symmetric_matrix<R: Rng>(rng: &mut R, n: usize) -> RealMatrix {
    symmetrize(&normal_matrix(rng, n, n))
}

/// `Q Λ Qᵀ` with `Q` from the QR factorization of a standard-normal matrix
/// and `Λ` uniform in [`SPD_EIGEN_RANGE`]. Exactly symmetric.
pub fn spd_matrix<R: Rng>(rng: &mut R, n: usize) -> RealMatrix {
    let q = normal_matrix(rng, n, n).qr().q();
    let (lo, hi) = SPD_EIGEN_RANGE;
    let lambda = RealVector::from_fn(n, |_, _| rng.random_range(lo..hi));
    symmetrize(&(&q * RealMatrix::from_diagonal(&lambda) * q.transpose()))
}

/// Standard-normal means, SPD covariances from [`spd_matrix`].
pub fn random_pair<R: Rng>(rng: &mut R, n: usize) -> GaussianPair {
    let m = normal_vector(rng, n);
    let w = normal_vector(rng, n);
    let s = spd_matrix(rng, n);
    let v = spd_matrix(rng, n);
    GaussianPair::new(m, w, s, v).expect("generated instance is SPD")
}

/// A pair with `q = p`: `m = w`, `S = V`.
pub fn random_identical_pair<R: Rng>(rng: &mut R, n: usize) -> GaussianPair {
    let m = normal_vector(rng, n);
    let v = spd_matrix(rng, n);
    GaussianPair::new(m.clone(), m, v.clone(), v).expect("generated instance is SPD")
}
