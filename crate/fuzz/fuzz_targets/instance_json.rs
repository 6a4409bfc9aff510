#![no_main]

use kldiv::format::InstanceFile;
use kldiv::{assemble_hessian, assemble_jacobian, kld_value, Basis};
use libfuzzer_sys::fuzz_target;

// Parsing never panics; anything that validates can be differentiated.
fuzz_target!(|data: &[u8]| {
    let Ok(file) = InstanceFile::from_slice(data) else {
        return;
    };
    if file.n > 16 {
        return;
    }
    let Ok(pair) = file.to_pair() else {
        return;
    };
    let value = kld_value(&pair);
    assert!(value >= 0.0 || value.is_nan());
    for basis in [Basis::Vec, Basis::Vech] {
        let jac = assemble_jacobian(&pair, basis);
        assert_eq!(jac.assembled.len(), basis.packed_len(pair.dim()));
        let hess = assemble_hessian(&pair, basis);
        assert_eq!(hess.assembled.nrows(), basis.packed_len(pair.dim()));
    }
    let back = InstanceFile::from_pair(&pair, file.name.clone());
    assert!(InstanceFile::from_json(&back.to_json()).is_ok());
});
