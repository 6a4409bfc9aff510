#![no_main]

use kldiv::format::OutputDocument;
use libfuzzer_sys::fuzz_target;

// Anything that parses re-serializes to an equal document.
fuzz_target!(|data: &[u8]| {
    if let Ok(doc) = OutputDocument::from_slice(data) {
        let again = OutputDocument::from_json(&doc.to_json()).expect("own output parses");
        let doc_text = doc.to_json();
        assert_eq!(doc_text, again.to_json());
    }
});
