//! Measurement-set JSON: decoding arbitrary text must never panic (axis
//! validation runs during deserialization), and the writer must normalize
//! accepted input to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{measurement_set_from_json, measurement_set_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = measurement_set_from_json(text) {
        let normalized = measurement_set_to_json(&set).expect("accepted set must serialize");
        let reparsed = measurement_set_from_json(&normalized).expect("own output must parse");
        assert_eq!(reparsed, set);
        assert_eq!(
            measurement_set_to_json(&reparsed).expect("round-tripped set must serialize"),
            normalized
        );
    }
});
