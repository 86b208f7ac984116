#![no_main]

use libfuzzer_sys::fuzz_target;
use pdyn::dynamics::{check_admissible, MarkedGrid};

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(g) = MarkedGrid::from_json(&v) {
        let again = MarkedGrid::from_json(&g.to_json()).expect("emitted grid JSON must parse");
        assert_eq!(again, g);
        let _ = check_admissible(&g);
    }
});
