#![no_main]

use libfuzzer_sys::fuzz_target;
use rikit::norms::{norm, NormDescriptor};
use rikit::StepFunction;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = NormDescriptor::from_json(text) {
        let again = NormDescriptor::from_json_value(&d.to_json_value()).expect("round trip");
        assert_eq!(again.label(), d.label());
        let v = norm(&StepFunction::one(), &d).expect("validated descriptor");
        assert!(v.approx.is_finite() && v.approx > 0.0);
    }
});
