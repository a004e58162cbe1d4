//! Replays the fuzz corpus through the parsers with the fuzz targets'
//! invariants, so the seeds run on stable too.

use std::fs;
use std::path::PathBuf;

use klingen_core::dims::DimReport;
use klingen_core::parse::{decode_report, encode_report, parse_n_list, parse_q_list, parse_suite, SigmaArg};
use klingen_core::verify::VerifyReport;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

#[test]
fn list_seeds() {
    let mut accepted = 0;
    for s in seeds("q_list") {
        if let Ok(qs) = parse_q_list(&text(&s)) {
            accepted += 1;
            assert!(qs.iter().all(|&q| klingen_core::ffield::prime_power(q).is_some()));
        }
    }
    for s in seeds("n_list") {
        if let Ok(ns) = parse_n_list(&text(&s)) {
            accepted += 1;
            assert!(!ns.is_empty());
        }
    }
    for s in seeds("suite") {
        accepted += parse_suite(&text(&s)).is_ok() as usize;
    }
    assert!(accepted >= 8);
}

#[test]
fn sigma_seeds() {
    for s in seeds("sigma") {
        // the fuzz input is a string followed by two bytes for q and n
        let cut = s.len().saturating_sub(2);
        let _ = text(&s[..cut]).parse::<SigmaArg>().map(|a| a.resolve(2));
    }
}

#[test]
fn report_seeds() {
    let mut decoded = 0;
    for s in seeds("report") {
        let t = text(&s);
        if let Ok(r) = decode_report::<DimReport>("dim", &t) {
            decoded += 1;
            assert_eq!(decode_report::<DimReport>("dim", &encode_report("dim", &r).unwrap()).unwrap(), r);
        }
        if let Ok(r) = decode_report::<VerifyReport>("verify", &t) {
            decoded += 1;
            assert_eq!(decode_report::<VerifyReport>("verify", &encode_report("verify", &r).unwrap()).unwrap(), r);
        }
    }
    assert_eq!(decoded, 3);
}
