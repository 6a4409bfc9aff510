#![no_main]

use kldiv::oracle::PackedPoint;
use kldiv::{Basis, RealVector};
use libfuzzer_sys::fuzz_target;

// First byte picks basis and dimension, the rest are f64 coordinates.
fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else {
        return;
    };
    let basis = if head & 1 == 0 { Basis::Vec } else { Basis::Vech };
    let n = 1 + (head >> 1) as usize % 4;
    let theta: Vec<f64> = rest
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let Ok(point) = PackedPoint::new(basis, n, RealVector::from_vec(theta)) else {
        return;
    };
    let _ = point.objective(point.theta().as_slice());
    if let Ok(pair) = point.to_pair() {
        let again = PackedPoint::from_pair(&pair, basis);
        assert_eq!(again.theta().len(), point.theta().len());
    }
});
