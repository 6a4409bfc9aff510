#![no_main]

use kldiv::format::parse_block_pair;
use kldiv::{Basis, BlockId};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((row, col)) = parse_block_pair(text) {
        assert_eq!(format!("{}{}", row.symbol(), col.symbol()).len(), 2);
    }
    if let Ok(id) = text.parse::<BlockId>() {
        assert_eq!(id.symbol().parse::<BlockId>(), Ok(id));
    }
    if let Ok(basis) = text.parse::<Basis>() {
        assert_eq!(basis.to_string().parse::<Basis>(), Ok(basis));
    }
});
