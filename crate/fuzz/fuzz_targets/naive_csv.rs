//! Naive-sweep tables: parsing must never panic, and one write/parse pass
//! must normalize the text to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{parse_naive_sweep_csv, write_naive_sweep_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sweep) = parse_naive_sweep_csv(text) {
        let normalized = write_naive_sweep_csv(&sweep);
        let reparsed = parse_naive_sweep_csv(&normalized).expect("own output must parse");
        assert_eq!(write_naive_sweep_csv(&reparsed), normalized);
    }
});
