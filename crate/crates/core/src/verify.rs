//! Oracle suites: every closed form against its brute-force counterpart.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chartab::{check_family_values, class_counts, verify_char_lemmas, ClassLabel, EvenClass, OddClass, SigmaFamily};
use crate::cosets::{non_skew_reps, skew_brute_count, skew_closed_count, table1_brute, table1_count, SkewCase};
use crate::dims::{corollary_value, degree_in_q, dim_klingen, theorem_value, DimRequest, Mode, Origin};
use crate::error::{Error, Result};
use crate::groupfq::named_subgroup;
use crate::padic::{estimate_rg, predicted_rg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Chartab,
    Counts,
    Rg,
    Theorem,
}

impl Suite {
    /// In name order, which is also the output order.
    pub const ALL: [Suite; 4] = [Suite::Chartab, Suite::Counts, Suite::Rg, Suite::Theorem];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Chartab => "chartab",
            Suite::Counts => "counts",
            Suite::Rg => "rg",
            Suite::Theorem => "theorem",
        }
    }

    fn default_qs(self) -> Vec<u64> {
        match self {
            Suite::Chartab | Suite::Rg => vec![2],
            Suite::Counts => vec![2, 3],
            Suite::Theorem => vec![2, 3, 4, 5, 7],
        }
    }

    fn default_n_max(self) -> i64 {
        match self {
            Suite::Chartab => 0,
            Suite::Counts => 14,
            Suite::Rg => 5,
            Suite::Theorem => 40,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bounds for a run. `None` means the suite's own default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub qs: Option<Vec<u64>>,
    pub n_max: Option<i64>,
    pub budget: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            qs: None,
            n_max: None,
            budget: 500,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

/// Runs `suites` in parallel; the report lists them in name order.
pub fn verify(suites: &[Suite], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut wanted = suites.to_vec();
    wanted.sort();
    wanted.dedup();
    let suites = wanted.par_iter().map(|&s| run_suite(s, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { suites })
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let qs = cfg.qs.clone().unwrap_or_else(|| suite.default_qs());
    let n_max = cfg.n_max.unwrap_or_else(|| suite.default_n_max());
    if qs.is_empty() {
        return Err(Error::Usage("empty q list".into()));
    }
    match suite {
        Suite::Counts => counts_suite(&qs, n_max),
        Suite::Rg => rg_suite(&qs, n_max, cfg.budget, cfg.seed),
        Suite::Chartab => chartab_suite(&qs),
        Suite::Theorem => theorem_suite(&qs, n_max),
    }
}

/// Brute force stops here for the last family.
pub const SKEW_BRUTE_LIMIT: i64 = 20;

fn counts_suite(qs: &[u64], n_max: i64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Counts);
    for n in 1..=n_max {
        for row in 1..=7u8 {
            let (closed, brute) = (table1_count(row, n)?, table1_brute(row, n)?);
            rep.check(closed == brute, || format!("row {row} n={n}: closed {closed}, brute {brute}"));
        }
    }
    if n_max > SKEW_BRUTE_LIMIT {
        rep.notes.push(format!("last-family brute force capped at n={SKEW_BRUTE_LIMIT}"));
    }
    for &q in qs {
        for n in 1..=n_max.min(SKEW_BRUTE_LIMIT) {
            for case in SkewCase::ALL {
                let (closed, brute) = (skew_closed_count(case, n, q)?, skew_brute_count(case, n, q)?);
                rep.check(closed == brute, || {
                    format!("{} q={q} n={n}: closed {closed}, brute {brute}", case.name())
                });
            }
        }
        if n_max >= 8 {
            let w = skew_brute_count(SkewCase::ZEqXyUnit, 8, q)?;
            rep.check(w == q as i128 - 2, || format!("zEQxy_unit q={q} n=8: {w}, expected q-2"));
        }
    }
    Ok(rep)
}

fn rg_suite(qs: &[u64], n_max: i64, budget: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Rg);
    for &q in qs {
        for n in 2..=n_max {
            for cr in non_skew_reps(n) {
                let est = estimate_rg(&cr, n, q, budget, seed)?;
                let want = predicted_rg(&cr, n, q)?;
                let inside = est.raw_elements().iter().all(|e| want.contains(e));
                rep.check(inside, || format!("{cr} q={q} n={n}: sample escapes the prediction"));
                rep.check(est.order() == want.order(), || {
                    format!("{cr} q={q} n={n}: sampled order {}, predicted {}", est.order(), want.order())
                });
            }
        }
    }
    Ok(rep)
}

/// Known class-intersection cardinalities: `(description, found, expected)`.
pub fn class_intersections(q: u64) -> Result<Vec<(String, usize, usize)>> {
    let qq = q as usize;
    let count = |name: &str, label: ClassLabel| -> Result<usize> {
        let r = named_subgroup(name, q)?;
        Ok(class_counts(&r).get(&label).copied().unwrap_or(0))
    };
    let mut out = Vec::new();
    let mut push = |name: &str, label: ClassLabel, want: usize| -> Result<()> {
        out.push((format!("|{name} ∩ {label}| at q={q}"), count(name, label)?, want));
        Ok(())
    };
    let half = (qq - 1) * (qq * qq - 1) / 2;
    if q.is_multiple_of(2) {
        use EvenClass::*;
        push("KlingenR", ClassLabel::Even(A2), qq * qq + qq - 2)?;
        push("KlingenR", ClassLabel::Even(A32), (qq - 1) * (qq * qq - 1))?;
        // both regular unipotent classes carry the label A41
        push("R_last", ClassLabel::Even(A41), qq * qq * (qq - 1))?;
        push("R_last", ClassLabel::Even(A31), qq - 1)?;
        push("R_last", ClassLabel::Even(A32), (qq - 1) * (qq - 1))?;
        push("M1", ClassLabel::Even(A2), qq * qq - 1)?;
    } else {
        use OddClass::*;
        push("KlingenR", ClassLabel::Odd(A1), qq * qq + qq - 2)?;
        push("KlingenR", ClassLabel::Odd(A21), half)?;
        push("KlingenR", ClassLabel::Odd(A22), half)?;
        push("KlingenR", ClassLabel::Odd(B1), qq - 1)?;
        push("KlingenR", ClassLabel::Odd(B31), half)?;
        push("KlingenR", ClassLabel::Odd(B32), half)?;
        push("R_last", ClassLabel::Odd(A3), qq * qq * (qq - 1))?;
        push("R_last", ClassLabel::Odd(A21), qq * (qq - 1))?;
        push("M1", ClassLabel::Odd(A1), qq * qq - 1)?;
    }
    Ok(out)
}

fn chartab_suite(qs: &[u64]) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Chartab);
    for &q in qs {
        for (what, got, want) in class_intersections(q)? {
            rep.check(got == want, || format!("{what}: found {got}, expected {want}"));
        }
        let bad = check_family_values(q)?;
        rep.checks += 2 * crate::chartab::FAMILY_NAMES.len();
        rep.failures.extend(bad);
        if q == 2 {
            match verify_char_lemmas(q) {
                Ok(lr) => {
                    rep.checks += lr.checks;
                    if lr.second_type.is_empty() {
                        rep.notes.push(format!(
                            "q={q}: no cuspidal character of the second generic type exists; \
                             degree-{} rows have (U_S, U_K, M) dims {:?}",
                            SigmaFamily::generic(true, true).degree(q).unwrap_or(0),
                            lr.second_degree_rows
                        ));
                    }
                }
                Err(Error::MismatchReport(v)) => {
                    rep.checks += v.len();
                    rep.failures.extend(v);
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(rep)
}

fn theorem_suite(qs: &[u64], n_max: i64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Theorem);
    for &q in qs {
        let even = q % 2 == 0;
        for second in [false, true] {
            let sigma = SigmaFamily::generic(second, even);
            for n in 0..=n_max {
                match dim_klingen(&DimRequest::new(q, n, sigma.clone()), Mode::Both) {
                    Ok(_) => rep.check(true, String::new),
                    Err(Error::Disagreement { sum, formula }) => {
                        rep.check(false, || format!("{sigma} q={q} n={n}: sum {sum}, closed form {formula}"))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        for n in 0..=n_max {
            for sigma in [SigmaFamily::Nongeneric, SigmaFamily::generic(false, even)] {
                let mut req = DimRequest::new(q, n, sigma.clone());
                if sigma.is_generic() {
                    req.origin = Origin::FromParamodular;
                }
                let d = dim_klingen(&req, Mode::Both)?.total;
                rep.check(d == 0, || format!("{sigma} {:?} q={q} n={n}: {d}, expected 0", req.origin));
            }
        }
        if q == 2 || q == 3 {
            for n in 1..=n_max {
                let general = theorem_value(q, n, false)?;
                let special = corollary_value(q, n)?;
                rep.check(general == special, || format!("special case q={q} n={n}: {special} vs {general}"));
            }
        }
    }
    for q in 2..=9u64 {
        for n in 2..=60 {
            let (one, two) = (theorem_value(q, n, false)?, theorem_value(q, n, true)?);
            rep.check(one >= 0 && two >= 0, || format!("negative closed form at q={q} n={n}"));
            rep.check(two - one == 2 * ((n as i128 - 1) / 2), || format!("type difference at q={q} n={n}"));
        }
    }
    for n in 0..=24 {
        let d = degree_in_q(n, false)?;
        rep.check(d as i64 == n / 4, || format!("degree in q at n={n}: {d}"));
    }
    Ok(rep)
}
