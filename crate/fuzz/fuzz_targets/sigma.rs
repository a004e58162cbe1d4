#![no_main]
use klingen_core::dims::{dim_klingen, DimRequest, Mode};
use klingen_core::parse::SigmaArg;
use libfuzzer_sys::fuzz_target;

// parsed families must resolve or refuse cleanly, and a resolved family
// must give a dimension or a typed error at small levels
fuzz_target!(|input: (&str, u8, u8)| {
    let (text, q, n) = input;
    let Ok(arg) = text.parse::<SigmaArg>() else { return };
    let q = [2u64, 3, 4, 5][(q % 4) as usize];
    if let Ok(sigma) = arg.resolve(q) {
        let _ = dim_klingen(&DimRequest::new(q, (n % 64) as i64, sigma), Mode::Both);
    }
});
