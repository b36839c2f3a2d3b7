//! Criterion-comparison tables, both the grid rows and the per-point rows:
//! parsing must never panic, and one write/parse pass must normalize the
//! text to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{
    parse_comparison_csv, parse_comparison_points_csv, write_comparison_csv,
    write_comparison_points_csv,
};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_comparison_csv(text) {
        let normalized = write_comparison_csv(&rows);
        let reparsed = parse_comparison_csv(&normalized).expect("own output must parse");
        assert_eq!(write_comparison_csv(&reparsed), normalized);
    }
    if let Ok(rows) = parse_comparison_points_csv(text) {
        let normalized = write_comparison_points_csv(&rows);
        let reparsed = parse_comparison_points_csv(&normalized).expect("own output must parse");
        assert_eq!(write_comparison_points_csv(&reparsed), normalized);
    }
});
