#![no_main]
use klingen_core::dims::DimReport;
use klingen_core::parse::{decode_report, encode_report};
use klingen_core::verify::VerifyReport;
use libfuzzer_sys::fuzz_target;

// whatever decodes must encode back to something that decodes to the same value
fuzz_target!(|data: &str| {
    if let Ok(r) = decode_report::<DimReport>("dim", data) {
        let again = encode_report("dim", &r).unwrap();
        assert_eq!(decode_report::<DimReport>("dim", &again).unwrap(), r);
    }
    if let Ok(r) = decode_report::<VerifyReport>("verify", data) {
        let again = encode_report("verify", &r).unwrap();
        assert_eq!(decode_report::<VerifyReport>("verify", &again).unwrap(), r);
    }
});
