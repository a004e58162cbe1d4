use klingen_core::chartab::SigmaFamily;
use klingen_core::dims::{corollary_value, degree_in_q, dim_klingen, DimRequest, Mode};

#[test]
fn sum_matches_closed_form_on_a_grid() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for second in [false, true] {
            let sigma = SigmaFamily::generic(second, q % 2 == 0);
            for n in 0..=40 {
                let r = dim_klingen(&DimRequest::new(q, n, sigma.clone()), Mode::Both)
                    .unwrap_or_else(|e| panic!("q={q} n={n} {sigma}: {e}"));
                assert_eq!(r.agree, Some(true));
                assert!(r.total >= 0);
            }
        }
    }
}

#[test]
fn special_cases_match_the_general_form() {
    for n in 1..=60 {
        let two = dim_klingen(&DimRequest::new(2, n, SigmaFamily::generic(false, true)), Mode::Formula).unwrap();
        assert_eq!(two.total, corollary_value(2, n).unwrap(), "q=2 n={n}");
        let three = dim_klingen(&DimRequest::new(3, n, SigmaFamily::generic(false, false)), Mode::Formula).unwrap();
        assert_eq!(three.total, corollary_value(3, n).unwrap(), "q=3 n={n}");
    }
}

#[test]
fn degree_grows_by_one_every_four_levels() {
    for n in 2..=34 {
        assert_eq!(degree_in_q(n, false).unwrap(), (n / 4) as usize, "n={n}");
    }
}
