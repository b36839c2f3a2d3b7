//! Sweep-curve tables: parsing must never panic, and one write/parse pass
//! must normalize the text to a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::{parse_curve_csv, write_curve_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = parse_curve_csv(text) {
        let normalized = write_curve_csv(table.n, table.criterion, &table.grid);
        let reparsed = parse_curve_csv(&normalized).expect("own output must parse");
        assert_eq!(
            write_curve_csv(reparsed.n, reparsed.criterion, &reparsed.grid),
            normalized
        );
    }
});
