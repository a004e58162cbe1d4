#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(ns) = klingen_core::parse::parse_n_list(data) {
        assert!(!ns.is_empty());
        assert!(ns.len() <= klingen_core::parse::LIST_LIMIT);
    }
});
