#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(qs) = klingen_core::parse::parse_q_list(data) {
        assert!(!qs.is_empty());
        assert!(qs.iter().all(|&q| klingen_core::ffield::prime_power(q).is_some()));
    }
});
