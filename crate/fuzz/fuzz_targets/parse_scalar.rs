#![no_main]

use std::str::FromStr;

use bestofn::Scalar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 256 {
        return;
    }
    if let Ok(x) = Scalar::from_str(s) {
        let again = Scalar::from_str(&x.to_string()).expect("display output parses");
        assert_eq!(again, x);
        let json = serde_json::to_string(&x).unwrap();
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
});
