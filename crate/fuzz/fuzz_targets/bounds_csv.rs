//! Perfect-bound tables: parsing must never panic, and one write/parse pass
//! must normalize the text to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{parse_bounds_csv, write_bounds_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_bounds_csv(text) {
        let normalized = write_bounds_csv(&rows);
        let reparsed = parse_bounds_csv(&normalized).expect("own output must parse");
        assert_eq!(write_bounds_csv(&reparsed), normalized);
    }
});
