//! One test per acceptance criterion. Each writes a single `criterion N:
//! PASS|FAIL ...` line straight to stdout, so the line shows even when the
//! harness captures output.

use std::io::Write;
use std::time::Instant;

use klingen_core::chartab::{dixon_table, SigmaFamily};
use klingen_core::dims::{corollary_value, degree_in_q, dim_klingen, theorem_value, DimRequest, Mode, Origin};
use klingen_core::groupfq::{enumerate_gsp4, named_subgroup};
use klingen_core::verify::{class_intersections, run_suite, Suite, VerifyConfig};

fn report(n: u32, failures: &[String], detail: &str) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("criterion {n}: {verdict} ({detail})");
    for f in failures.iter().take(5) {
        line.push_str(&format!("\n    {f}"));
    }
    let _ = writeln!(std::io::stdout(), "{line}");
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

const PRIME_POWERS_TO_NINE: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

#[test]
fn criterion_1_formula_equals_weighted_sum() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for q in [2u64, 3, 4, 5, 7] {
        for second in [false, true] {
            let sigma = SigmaFamily::generic(second, q % 2 == 0);
            for n in 1..=40 {
                checked += 1;
                match dim_klingen(&DimRequest::new(q, n, sigma.clone()), Mode::Both) {
                    Ok(r) if r.agree == Some(true) => {}
                    Ok(r) => bad.push(format!("{sigma} q={q} n={n}: {r:?}")),
                    Err(e) => bad.push(format!("{sigma} q={q} n={n}: {e}")),
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        bad.push(format!("took {secs:.1}s, limit 10s"));
    }
    report(1, &bad, &format!("{checked} cases, {secs:.2}s"));
}

#[test]
fn criterion_2_special_cases() {
    let mut bad = Vec::new();
    let chi5 = SigmaFamily::generic(false, true);
    let x4 = SigmaFamily::generic(false, false);
    let d = |q, n, s: &SigmaFamily| dim_klingen(&DimRequest::new(q, n, s.clone()), Mode::Both).map(|r| r.total);
    for (n, want) in [(1, 0), (2, 1), (3, 4), (4, 11), (5, 22)] {
        match d(2, n, &chi5) {
            Ok(v) if v == want => {}
            other => bad.push(format!("chi5 q=2 n={n}: {other:?}, expected {want}")),
        }
    }
    match d(3, 4, &x4) {
        Ok(12) => {}
        other => bad.push(format!("X4 q=3 n=4: {other:?}, expected 12")),
    }
    for n in 1..=40 {
        for (q, s) in [(2, &chi5), (3, &x4)] {
            let (got, special) = (d(q, n, s), corollary_value(q, n));
            if got.is_err() || got != special {
                bad.push(format!("{s} q={q} n={n}: sum {got:?}, piecewise {special:?}"));
            }
        }
    }
    report(2, &bad, "q=2 chi5 and q=3 X4, n <= 40");
}

#[test]
fn criterion_3_counting_oracles() {
    let start = Instant::now();
    let cfg = VerifyConfig {
        qs: Some(vec![2, 3]),
        n_max: Some(14),
        ..VerifyConfig::default()
    };
    let r = run_suite(Suite::Counts, &cfg).unwrap();
    let mut bad = r.failures.clone();
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        bad.push(format!("took {secs:.1}s, limit 60s"));
    }
    report(3, &bad, &format!("{} comparisons incl. the n=8 witness, {secs:.2}s", r.checks));
}

#[test]
fn criterion_4_character_table_at_two() {
    let start = Instant::now();
    let g = enumerate_gsp4(2).unwrap();
    let t = dixon_table(&g).unwrap();
    let mut bad = Vec::new();
    let classes = t.representatives.len();
    if classes != 11 {
        bad.push(format!("{classes} classes, expected 11"));
    }
    let mut degrees = t.degrees();
    degrees.sort();
    if degrees != vec![1, 1, 5, 5, 5, 5, 9, 9, 10, 10, 16] {
        bad.push(format!("degrees {degrees:?}"));
    }
    let sum_sq: i64 = degrees.iter().map(|d| d * d).sum();
    if sum_sq != 720 {
        bad.push(format!("sum of squared degrees {sum_sq}"));
    }

    let names = ["U_S", "U_K", "M", "S", "A", "R_last", "B", "C", "D"];
    let groups: Vec<_> = names.iter().map(|n| named_subgroup(n, 2).unwrap()).collect();
    let profile = |chi: usize| -> Vec<i64> { groups.iter().map(|r| t.fixed_dim(chi, r).unwrap()).collect() };
    // U_S, U_K, M, S, A, R_last, B, C, D at q = 2
    let first_expected = [0, 0, 0, 1, 1, 1, 3, 1, 1];
    let second_expected = [0, 0, 2, 1, 1, 1, 3, 1, 1];
    let row_degrees = t.degrees();
    let of_degree = |d: i64| -> Vec<(usize, Vec<i64>)> {
        (0..row_degrees.len()).filter(|&c| row_degrees[c] == d).map(|c| (c, profile(c))).collect()
    };
    let first = of_degree(9);
    let second = of_degree(5);
    if !first.iter().any(|(_, p)| p[..] == first_expected) {
        bad.push(format!("no degree-9 character with profile {first_expected:?}; found {first:?}"));
    }
    if !second.iter().any(|(_, p)| p[..] == second_expected) {
        bad.push(format!(
            "no degree-5 character with profile {second_expected:?} over {names:?}; found {:?}",
            second.iter().map(|(_, p)| p).collect::<Vec<_>>()
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 30.0 {
        bad.push(format!("took {secs:.1}s, limit 30s"));
    }
    report(4, &bad, &format!("{classes} classes, degree-9 and degree-5 profiles, {secs:.2}s"));
}

#[test]
fn criterion_5_class_intersections() {
    let mut bad = Vec::new();
    let mut checked = 0;
    for q in [2, 3] {
        for (what, got, want) in class_intersections(q).unwrap() {
            checked += 1;
            if got != want {
                bad.push(format!("{what}: found {got}, expected {want}"));
            }
        }
    }
    report(5, &bad, &format!("{checked} cardinalities at q = 2, 3"));
}

#[test]
fn criterion_6_sampled_stabilizers() {
    let cfg = VerifyConfig {
        qs: Some(vec![2]),
        n_max: Some(5),
        budget: 500,
        seed: 7,
    };
    let first = run_suite(Suite::Rg, &cfg).unwrap();
    let again = run_suite(Suite::Rg, &cfg).unwrap();
    let mut bad = first.failures.clone();
    if first != again {
        bad.push("two runs with the same seed differ".into());
    }
    report(6, &bad, &format!("{} containment and order checks, seed 7", first.checks));
}

#[test]
fn criterion_7_structural_properties() {
    let mut bad = Vec::new();
    for q in PRIME_POWERS_TO_NINE {
        let even = q % 2 == 0;
        for n in 0..=40 {
            let nongeneric = DimRequest::new(q, n, SigmaFamily::Nongeneric);
            let mut paramodular = DimRequest::new(q, n, SigmaFamily::generic(true, even));
            paramodular.origin = Origin::FromParamodular;
            for req in [nongeneric, paramodular] {
                match dim_klingen(&req, Mode::Both) {
                    Ok(r) if r.total == 0 => {}
                    other => bad.push(format!("{req:?}: {other:?}")),
                }
            }
        }
        for n in 1..=60 {
            match (theorem_value(q, n, false), theorem_value(q, n, true)) {
                (Ok(a), Ok(b)) => {
                    if a < 0 || b < 0 {
                        bad.push(format!("negative at q={q} n={n}: {a}, {b}"));
                    }
                    if b - a != 2 * ((n as i128 - 1) / 2) {
                        bad.push(format!("type difference at q={q} n={n}: {}", b - a));
                    }
                }
                other => bad.push(format!("q={q} n={n}: {other:?}")),
            }
        }
    }
    for n in 0..=24 {
        match degree_in_q(n, false) {
            Ok(d) if d as i64 == n / 4 => {}
            other => bad.push(format!("degree in q at n={n}: {other:?}")),
        }
    }
    report(7, &bad, "zero paths, type difference, integrality, degree in q");
}
