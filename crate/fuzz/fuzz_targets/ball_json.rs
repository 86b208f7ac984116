#![no_main]

use libfuzzer_sys::fuzz_target;
use pdyn::balls::UltrametricBall;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1024 {
        return;
    }
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(b) = UltrametricBall::from_json(&v) {
        let again = UltrametricBall::from_json(&b.to_json()).expect("emitted ball JSON must parse");
        assert_eq!(again.log_radius(), b.log_radius());
        assert_eq!(again.kind(), b.kind());
    }
});
