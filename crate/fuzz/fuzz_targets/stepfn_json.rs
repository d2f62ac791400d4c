#![no_main]

use libfuzzer_sys::fuzz_target;
use rikit::StepFunction;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = StepFunction::from_json(text) {
        let back = StepFunction::from_json(&x.to_json()).expect("round trip");
        assert_eq!(back, x);
        let star = x.decreasing_rearrangement();
        assert!(star.is_nonincreasing());
        assert!(star.same_distribution(&x.abs()));
    }
});
