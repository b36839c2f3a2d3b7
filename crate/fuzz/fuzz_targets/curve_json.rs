//! Bound-curve JSON: decoding arbitrary text must never panic, and the
//! writer must normalize accepted input to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{curve_from_json, curve_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(curve) = curve_from_json(text) {
        let normalized = curve_to_json(&curve).expect("accepted curve must serialize");
        let reparsed = curve_from_json(&normalized).expect("own output must parse");
        assert_eq!(reparsed, curve);
        assert_eq!(
            curve_to_json(&reparsed).expect("round-tripped curve must serialize"),
            normalized
        );
    }
});
