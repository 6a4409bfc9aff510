#![no_main]

use kldiv::format::{HessianBlockData, MatrixData, VectorData};
use libfuzzer_sys::fuzz_target;
use serde::de::DeserializeOwned;

fn parse<T: DeserializeOwned>(data: &[u8]) -> Option<T> {
    serde_json::from_slice(data).ok()
}

// Shape checks never panic, and a valid payload survives the round trip.
fuzz_target!(|data: &[u8]| {
    if let Some(m) = parse::<MatrixData>(data) {
        if let Ok(matrix) = m.to_matrix() {
            assert_eq!(MatrixData::from_matrix(&matrix), m);
        }
    }
    if let Some(v) = parse::<VectorData>(data) {
        if let Ok(vector) = v.to_vector() {
            assert_eq!(VectorData::from_vector(&vector), v);
        }
    }
    if let Some(b) = parse::<HessianBlockData>(data) {
        let _ = b.to_matrix();
    }
});
