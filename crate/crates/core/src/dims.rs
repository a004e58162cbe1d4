//! `dim π^{Kl(n)}` two ways: the weighted sum over the support double
//! cosets, and the closed form in `q` and `n`.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chartab::SigmaFamily;
use crate::cosets::{enumerate_supp, Family};
use crate::error::{Error, Result};
use crate::ffield::prime_power;

type Q = Ratio<i128>;

/// Which maximal compact the representation is induced from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    FromK,
    FromParamodular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Sum,
    Formula,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRequest {
    pub q: u64,
    pub n: i64,
    pub sigma: SigmaFamily,
    pub origin: Origin,
}

impl DimRequest {
    pub fn new(q: u64, n: i64, sigma: SigmaFamily) -> Self {
        DimRequest {
            q,
            n,
            sigma,
            origin: Origin::FromK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTerm {
    pub family: Family,
    pub count: i128,
    pub per_coset_dim: i128,
    pub subtotal: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub q: u64,
    pub n: i64,
    pub sigma: SigmaFamily,
    pub origin: Origin,
    pub total: i128,
    pub by_family: Vec<FamilyTerm>,
    pub formula_value: Option<i128>,
    pub agree: Option<bool>,
}

fn exact(x: Q, what: &str) -> Result<i128> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::NonIntegralResult(format!("{what} = {x}")))
    }
}

fn qpow(q: i128, e: i128) -> Q {
    if e >= 0 {
        Q::from_integer(q.pow(e as u32))
    } else {
        Q::new(1, q.pow((-e) as u32))
    }
}

fn c_n(q: i128, n: i64) -> i128 {
    match n.rem_euclid(4) {
        0 => q * q + 36 * q + 71,
        1 => 4 * q * q + 50 * q + 72,
        2 => 11 * q + 61,
        _ => 22 * q + 68,
    }
}

/// The closed form, with floors toward `-∞` and negative powers kept exact.
pub fn theorem_value(q: u64, n: i64, second_type: bool) -> Result<i128> {
    if q < 2 {
        return Err(Error::Usage(format!("q = {q} is not a prime power")));
    }
    crate::cosets::check_size(q, n)?;
    let (qi, ni) = (q as i128, n as i128);
    let e = Integer::div_floor(&(ni - 2), &4);
    let head = (Q::from_integer((qi - 1) * c_n(qi, n) + 72) * qpow(qi, e) - 72) / Q::from_integer((qi - 1) * (qi - 1));
    let mut v = head - Q::new(18 * (ni + 2), qi - 1) - Q::from_integer(ni * (ni + 3));
    if second_type {
        v += Q::from_integer(2 * Integer::div_floor(&(ni - 1), &2));
    }
    exact(v, &format!("closed form at q={q}, n={n}"))
}

/// Piecewise closed forms for `(q, σ) = (2, χ5)` and `(3, X4)`.
pub fn corollary_value(q: u64, n: i64) -> Result<i128> {
    if n < 1 {
        return Err(Error::Usage("the special cases start at n = 1".into()));
    }
    crate::cosets::check_size(q, n)?;
    let ni = n as i128;
    let e = Integer::div_floor(&(ni - 2), &4);
    let r = n.rem_euclid(4) as usize;
    let v = match q {
        2 => -Q::from_integer((ni + 9) * (ni + 12)) + qpow(2, e) * [219, 260, 155, 184][r],
        3 => -Q::from_integer((ni + 6) * (ni + 6)) + qpow(3, e) * [112, 147, 65, 85][r],
        _ => return Err(Error::Usage("special cases exist for q = 2 and q = 3 only".into())),
    };
    exact(v, &format!("special case at q={q}, n={n}"))
}

/// Both dimensions vanish: nongeneric or paramodular origin, or `n <= 1`.
fn is_zero_path(req: &DimRequest) -> bool {
    req.origin == Origin::FromParamodular || !req.sigma.is_generic() || req.n <= 1
}

pub fn dim_klingen(req: &DimRequest, mode: Mode) -> Result<DimReport> {
    if prime_power(req.q).is_none() {
        return Err(Error::Usage(format!("q = {} is not a prime power", req.q)));
    }
    if req.n < 0 {
        return Err(Error::Usage("n must be nonnegative".into()));
    }
    req.sigma.check_parity(req.q)?;
    let mut report = DimReport {
        q: req.q,
        n: req.n,
        sigma: req.sigma.clone(),
        origin: req.origin,
        total: 0,
        by_family: Vec::new(),
        formula_value: None,
        agree: None,
    };
    let want_formula = mode != Mode::Sum;
    if is_zero_path(req) {
        if want_formula {
            report.formula_value = Some(0);
            report.agree = Some(true);
        }
        return Ok(report);
    }
    let second = req.sigma.second_type();
    let formula = if want_formula { Some(theorem_value(req.q, req.n, second)?) } else { None };
    if mode == Mode::Formula {
        report.total = formula.unwrap();
        report.formula_value = formula;
        return Ok(report);
    }
    for fc in enumerate_supp(req.q, req.n)? {
        let d = fc.per_coset_dim.eval(req.q as i128, second);
        report.by_family.push(FamilyTerm {
            family: fc.family,
            count: fc.count,
            per_coset_dim: d,
            subtotal: fc.count * d,
        });
    }
    report.total = report.by_family.iter().map(|t| t.subtotal).sum();
    if let Some(f) = formula {
        report.formula_value = Some(f);
        report.agree = Some(f == report.total);
        if f != report.total {
            return Err(Error::Disagreement {
                sum: report.total,
                formula: f,
            });
        }
    }
    Ok(report)
}

/// `dim_klingen` in `mode` over a grid, row-major in `ns` then `qs`.
pub fn dim_grid(qs: &[u64], ns: &[i64], second_type: bool, mode: Mode) -> Result<Vec<Vec<i128>>> {
    ns.par_iter()
        .map(|&n| {
            qs.iter()
                .map(|&q| {
                    let sigma = SigmaFamily::generic(second_type, q % 2 == 0);
                    dim_klingen(&DimRequest::new(q, n, sigma), mode).map(|r| r.total)
                })
                .collect()
        })
        .collect()
}

/// Sample points for the interpolation in [`degree_in_q`].
pub const INTERPOLATION_POINTS: [u64; 11] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17];
/// Largest degree [`degree_in_q`] accepts.
pub const MAX_DEGREE: usize = 8;

/// Degree of the closed form as a polynomial in `q`, by Newton interpolation.
pub fn degree_in_q(n: i64, second_type: bool) -> Result<usize> {
    if n < 0 {
        return Err(Error::Usage("n must be nonnegative".into()));
    }
    let xs: Vec<i128> = INTERPOLATION_POINTS.iter().map(|&q| q as i128).collect();
    let mut dd: Vec<Q> = INTERPOLATION_POINTS
        .iter()
        .map(|&q| {
            let v = if n <= 1 { 0 } else { theorem_value(q, n, second_type)? };
            Ok(Q::from_integer(v))
        })
        .collect::<Result<_>>()?;
    // dd[k] becomes the k-th divided difference
    let mut top = vec![dd[0]];
    for level in 1..xs.len() {
        for i in (level..xs.len()).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / Q::from_integer(xs[i] - xs[i - level]);
        }
        top.push(dd[level]);
    }
    let degree = top.iter().rposition(|c| *c != Q::from_integer(0)).unwrap_or(0);
    if degree > MAX_DEGREE {
        return Err(Error::NotPolynomial { max_degree: MAX_DEGREE });
    }
    Ok(degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi5() -> SigmaFamily {
        SigmaFamily::generic(false, true)
    }

    #[test]
    fn small_examples() {
        let d = |q, n, s: SigmaFamily| dim_klingen(&DimRequest::new(q, n, s), Mode::Both).unwrap().total;
        assert_eq!(d(2, 2, chi5()), 1);
        assert_eq!(d(2, 4, chi5()), 11);
        assert_eq!(d(2, 4, SigmaFamily::generic(true, true)), 13);
        assert_eq!(d(3, 4, SigmaFamily::generic(false, false)), 12);
        assert_eq!(d(2, 1, chi5()), 0);
    }

    #[test]
    fn special_cases() {
        assert_eq!(corollary_value(2, 3).unwrap(), 4);
        assert_eq!(corollary_value(2, 1).unwrap(), 0);
        assert_eq!(corollary_value(3, 4).unwrap(), 12);
    }

    #[test]
    fn closed_form_vanishes_at_level_one() {
        for q in 2..=9 {
            assert_eq!(theorem_value(q, 1, false).unwrap(), 0);
        }
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_in_q(4, false).unwrap(), 1);
        assert_eq!(degree_in_q(3, false).unwrap(), 0);
        assert_eq!(degree_in_q(16, true).unwrap(), 4);
    }

    #[test]
    fn parity_mismatch_is_usage() {
        let r = dim_klingen(&DimRequest::new(3, 4, chi5()), Mode::Both);
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn huge_levels_are_refused() {
        assert!(matches!(theorem_value(512, 200, false), Err(Error::TooLarge(_))));
        assert!(matches!(theorem_value(2, i64::MAX, true), Err(Error::TooLarge(_))));
        assert!(theorem_value(2, 300, false).is_ok());
    }

    #[test]
    fn zero_paths() {
        let mut req = DimRequest::new(2, 7, SigmaFamily::Nongeneric);
        assert_eq!(dim_klingen(&req, Mode::Both).unwrap().total, 0);
        req.sigma = chi5();
        req.origin = Origin::FromParamodular;
        assert_eq!(dim_klingen(&req, Mode::Both).unwrap().total, 0);
    }
}
