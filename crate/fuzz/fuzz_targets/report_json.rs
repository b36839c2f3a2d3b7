//! Simulation-report and verification-report JSON decoders: neither may
//! panic on arbitrary text, and accepted input must re-serialize to a
//! fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{report_from_json, report_to_json, to_json_pretty, verification_from_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(report) = report_from_json(text) {
        let normalized = report_to_json(&report).expect("accepted report must serialize");
        let reparsed = report_from_json(&normalized).expect("own output must parse");
        assert_eq!(
            report_to_json(&reparsed).expect("round-tripped report must serialize"),
            normalized
        );
    }
    if let Ok(reports) = verification_from_json(text) {
        let normalized = to_json_pretty(&reports).expect("accepted reports must serialize");
        let reparsed = verification_from_json(&normalized).expect("own output must parse");
        assert_eq!(
            to_json_pretty(&reparsed).expect("round-tripped reports must serialize"),
            normalized
        );
    }
});
