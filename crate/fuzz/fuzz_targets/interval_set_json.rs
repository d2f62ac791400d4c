#![no_main]

use libfuzzer_sys::fuzz_target;
use rikit::IntervalSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(a) = serde_json::from_str::<IntervalSet>(text) {
        let back: IntervalSet = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.union(&a.complement()), IntervalSet::full());
        assert!(a.intersection(&a.complement()).is_empty());
    }
});
