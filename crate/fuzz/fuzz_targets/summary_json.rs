#![no_main]

use bestofn::montecarlo::SimulationSummary;
use bestofn::stats::{tv_distance, EmpiricalLaw};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(summary) = serde_json::from_slice::<SimulationSummary>(data) {
        let json = serde_json::to_string(&summary).unwrap();
        let back: SimulationSummary = serde_json::from_str(&json).unwrap();
        assert_eq!(back.p1_counts, summary.p1_counts);
        if let Ok(emp) = EmpiricalLaw::from_summary(&summary) {
            let law = emp.law();
            let d = tv_distance(&law, &law);
            assert!(d == 0.0 || d.is_nan());
        }
    }
});
