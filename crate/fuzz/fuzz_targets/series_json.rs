#![no_main]

use libfuzzer_sys::fuzz_target;
use pdyn::puiseux::{series_from_json, series_to_json};

fuzz_target!(|data: &[u8]| {
    if data.len() > 1024 {
        return;
    }
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(x) = series_from_json(&v) {
        let again = series_from_json(&series_to_json(&x)).expect("emitted series JSON must parse");
        assert_eq!(again, x);
    }
});
