//! Strategy-catalog JSON: decoding arbitrary text must never panic, and
//! the writer must normalize accepted input to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{catalog_from_json, catalog_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(catalog) = catalog_from_json(text) {
        let normalized = catalog_to_json(&catalog).expect("accepted catalog must serialize");
        let reparsed = catalog_from_json(&normalized).expect("own output must parse");
        assert_eq!(reparsed, catalog);
        assert_eq!(
            catalog_to_json(&reparsed).expect("round-tripped catalog must serialize"),
            normalized
        );
    }
});
