use klingen_core::chartab::SigmaFamily;
use klingen_core::dims::{dim_klingen, DimReport, DimRequest, Mode, Origin};
use klingen_core::parse::{decode_report, encode_report, parse_n_list, SigmaArg};
use proptest::prelude::*;

fn q_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16])
}

proptest! {
    #[test]
    fn dim_reports_round_trip(q in q_strategy(), n in 0i64..60, second: bool, paramodular: bool, mode in 0u8..3) {
        let mut req = DimRequest::new(q, n, SigmaFamily::generic(second, q % 2 == 0));
        if paramodular {
            req.origin = Origin::FromParamodular;
        }
        let mode = [Mode::Sum, Mode::Formula, Mode::Both][mode as usize];
        let r = dim_klingen(&req, mode).unwrap();
        let s = encode_report("dim", &r).unwrap();
        prop_assert_eq!(decode_report::<DimReport>("dim", &s).unwrap(), r);
    }

    #[test]
    fn sum_and_closed_form_agree(q in q_strategy(), n in 0i64..80, second: bool) {
        let req = DimRequest::new(q, n, SigmaFamily::generic(second, q % 2 == 0));
        // past the 128-bit guard both modes must refuse alike
        let sum = dim_klingen(&req, Mode::Sum).map(|r| r.total);
        let formula = dim_klingen(&req, Mode::Formula).map(|r| r.total);
        prop_assert_eq!(sum, formula);
    }

    #[test]
    fn printed_ranges_parse_back(lo in -50i64..50, len in 0i64..40) {
        let hi = lo + len;
        prop_assert_eq!(parse_n_list(&format!("{lo}..{hi}")).unwrap(), (lo..=hi).collect::<Vec<_>>());
    }

    #[test]
    fn family_names_parse_back(second: bool, even: bool) {
        let s = SigmaFamily::generic(second, even);
        prop_assert_eq!(s.to_string().parse::<SigmaArg>().unwrap(), SigmaArg::Family(s));
    }
}
