//! Scenario JSON: decoding arbitrary text must never panic, and the
//! writer must normalize accepted input to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{scenario_from_json, scenario_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(scenario) = scenario_from_json(text) {
        let normalized = scenario_to_json(&scenario).expect("accepted scenario must serialize");
        let reparsed = scenario_from_json(&normalized).expect("own output must parse");
        assert_eq!(reparsed, scenario);
        assert_eq!(
            scenario_to_json(&reparsed).expect("round-tripped scenario must serialize"),
            normalized
        );
    }
});
