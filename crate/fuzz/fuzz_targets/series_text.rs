#![no_main]

use libfuzzer_sys::fuzz_target;
use pdyn::puiseux::parse_series;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 256 {
        return;
    }
    if let Ok(x) = parse_series(s) {
        let again = parse_series(&x.to_string()).expect("printed series must parse");
        assert_eq!(again, x, "round trip changed {s}");
    }
});
