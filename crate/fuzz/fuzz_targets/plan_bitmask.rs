//! Response-plan bitmask decoder: arbitrary (n, mask) pairs must either be
//! rejected or decode to a plan that re-encodes to the identical mask.

#![no_main]

use libfuzzer_sys::fuzz_target;
use steerbound::bounds::ResponsePlan;

fuzz_target!(|data: &[u8]| {
    if data.len() < 5 {
        return;
    }
    let n = data[0] as usize;
    let mask = u32::from_le_bytes([data[1], data[2], data[3], data[4]]);
    if let Ok(plan) = ResponsePlan::from_bitmask(n, mask) {
        assert_eq!(plan.n(), n);
        assert_eq!(plan.bitmask(), mask);
        assert!(plan.reported() >= 1);
        let again = ResponsePlan::from_bitmask(n, plan.bitmask()).expect("own mask must decode");
        assert_eq!(again, plan);
    }
});
