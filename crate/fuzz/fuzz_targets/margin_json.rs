#![no_main]

use bestofn::MarginDistribution;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(dist) = serde_json::from_slice::<MarginDistribution>(data) {
        let json = serde_json::to_string(&dist).unwrap();
        let back: MarginDistribution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, dist);
        let _ = dist.expected_values();
        let _ = dist.opponent_wins_pmf();
    }
});
