#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(s) = klingen_core::parse::parse_suite(data) {
        assert!(!s.is_empty());
    }
});
