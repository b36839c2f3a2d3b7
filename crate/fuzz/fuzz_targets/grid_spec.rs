//! Grid-spec strings must never panic, and accepted specs must expand to a
//! grid that honors their bounds.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::io::GridSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = GridSpec::parse(text) {
        let points = spec.points();
        assert!(!points.is_empty());
        assert!(points[0] == spec.start);
        assert!(points.iter().all(|p| *p <= spec.stop + 1e-12));
        assert!(points.windows(2).all(|w| w[0] < w[1]));
    }
});
