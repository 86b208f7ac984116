#![no_main]

use libfuzzer_sys::fuzz_target;
use pdyn::coeff::parse_coeff;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 256 {
        return;
    }
    if let Ok(c) = parse_coeff(s) {
        let again = parse_coeff(&c.to_string()).expect("printed coefficient must parse");
        assert!(again.sub(&c).map(|d| d.is_zero()).unwrap_or(false), "round trip changed {s}");
    }
});
