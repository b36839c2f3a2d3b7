//! Deterministic-point tables: parsing must never panic, and one write/parse
//! pass must normalize the text to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{parse_points_csv, write_points_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = parse_points_csv(text) {
        let normalized = write_points_csv(&table);
        let reparsed = parse_points_csv(&normalized).expect("own output must parse");
        assert_eq!(write_points_csv(&reparsed), normalized);
    }
});
