//! The closed forms against the independent oracles, through the public API.

use kldiv::matcalc::{kron, unvech, vech_len, DuplicationMatrix};
use kldiv::oracle::checks::{check_pair, CheckConfig};
use kldiv::oracle::random::{random_identical_pair, random_pair, rng_for, stream_id};
use kldiv::oracle::{fd_gradient, fd_hessian, kld_extended, mc_kld, FdConfig, PackedPoint};
use kldiv::{assemble_hessian, assemble_jacobian, kld_value, Basis, BlockId, GaussianPair};
use nalgebra::{dmatrix, dvector};
use proptest::prelude::*;

#[test]
fn worked_two_dimensional_instance() {
    let pair = GaussianPair::new(
        dvector![1.0, -0.5],
        dvector![0.25, 0.5],
        dmatrix![1.5, 0.3; 0.3, 0.8],
        dmatrix![2.0, -0.4; -0.4, 1.2],
    )
    .unwrap();
    let value = kld_value(&pair);
    let ext = kld_extended(pair.m(), pair.w(), pair.s(), pair.v()).unwrap();
    assert!((value - ext).abs() < 1e-14);

    let jac = assemble_jacobian(&pair, Basis::Vec).assembled;
    let fd = fd_gradient(&PackedPoint::from_pair(&pair, Basis::Vec), &FdConfig::gradient()).unwrap();
    assert!((&jac - fd).amax() < 1e-8);

    let hess = assemble_hessian(&pair, Basis::Vech).assembled;
    let fd = fd_hessian(&PackedPoint::from_pair(&pair, Basis::Vech), &FdConfig::hessian()).unwrap();
    assert!((&hess - fd).amax() < 1e-5);
}

#[test]
fn vec_hessian_of_means_matches_fd_in_vec_basis() {
    // the mean blocks see no symmetry constraint, so vec-basis FD agrees there
    let pair = random_pair(&mut rng_for(1, stream_id("means"), 0), 3);
    let hess = assemble_hessian(&pair, Basis::Vec);
    let fd = fd_hessian(&PackedPoint::from_pair(&pair, Basis::Vec), &FdConfig::hessian()).unwrap();
    let closed = hess.block(BlockId::M, BlockId::M);
    assert!((fd.view((0, 0), (3, 3)) - closed).amax() < 1e-6);
}

#[test]
fn monte_carlo_scalar_case() {
    let pair = GaussianPair::new(dvector![0.0], dvector![0.0], dmatrix![1.0], dmatrix![2.0]).unwrap();
    let est = mc_kld(&pair, 200_000, 5).unwrap();
    assert!(est.z_score(kld_value(&pair)) < 4.0, "{est:?}");
    assert!((kld_value(&pair) - 0.096573590).abs() < 5e-10);
}

#[test]
fn all_checks_pass_across_dimensions() {
    let cfg = CheckConfig::default();
    let stream = stream_id("integration");
    for n in 1..=4 {
        for (i, pair) in [
            random_pair(&mut rng_for(2, stream, n as u64), n),
            random_identical_pair(&mut rng_for(3, stream, n as u64), n),
        ]
        .iter()
        .enumerate()
        {
            for r in check_pair(pair, &cfg, &format!("n{n}/{i}/")) {
                assert!(r.passed, "{r:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duplication_reproduces_symmetric_matrices(n in 1usize..7, coords in prop::collection::vec(-1e6f64..1e6, 28)) {
        let h = kldiv::RealVector::from_column_slice(&coords[..vech_len(n)]);
        let a = unvech(&h, n).unwrap();
        let d = DuplicationMatrix::new(n);
        prop_assert_eq!(d.matrix() * &h, kldiv::matcalc::vec(&a));
    }

    #[test]
    fn kron_matches_nalgebra(a in prop::collection::vec(-10f64..10.0, 6), b in prop::collection::vec(-10f64..10.0, 4)) {
        let a = kldiv::RealMatrix::from_column_slice(2, 3, &a);
        let b = kldiv::RealMatrix::from_column_slice(2, 2, &b);
        prop_assert_eq!(kron(&a, &b), a.kronecker(&b));
    }

    #[test]
    fn value_is_nonnegative_and_vanishes_only_at_q_eq_p(seed in any::<u64>(), n in 1usize..5) {
        let pair = random_pair(&mut rng_for(seed, 0, 0), n);
        prop_assert!(kld_value(&pair) > 0.0);
        let same = random_identical_pair(&mut rng_for(seed, 1, 0), n);
        prop_assert_eq!(kld_value(&same), 0.0);
    }
}
