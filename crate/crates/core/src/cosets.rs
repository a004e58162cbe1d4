//! Representatives of the support double cosets, their membership
//! predicates, closed-form counts and brute-force counting oracles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A double coset representative `t_{i,j} S(x, y, z)` from one of the families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CosetRep {
    /// `t_{i,j}`.
    Diagonal { i: i64, j: i64 },
    /// `t_{i,j} S(p^k, 0, 0)`.
    X { i: i64, j: i64, k: i64 },
    /// `t_{i,j} S(0, p^k, 0)`.
    Y { i: i64, j: i64, k: i64 },
    /// `t_{i,j} S(0, 0, p^k)`.
    Z { i: i64, j: i64, k: i64 },
    /// `t_{i,j} S(p^kx, p^ky, u p^kz)` with `j` derived from the other data.
    /// `u` lists the coefficients of a unit of the unramified ring, modulo `p^n`.
    Skew {
        i: i64,
        kx: i64,
        ky: i64,
        kz: i64,
        u: Vec<u64>,
    },
}

/// Valuation of an integer, capped at `cap` for zero.
pub(crate) fn int_val(x: u64, p: u64, cap: i64) -> i64 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
        v += 1;
    }
    v.min(cap)
}

/// Valuation of `1 + u` for a unit given by integer coefficients, capped at `cap`.
pub(crate) fn val_one_plus(u: &[u64], p: u64, cap: i64) -> i64 {
    let pc = p.checked_pow(cap as u32).unwrap_or(u64::MAX);
    u.iter()
        .enumerate()
        .map(|(t, &c)| {
            let c = if t == 0 { c.wrapping_add(1) } else { c };
            int_val(if pc == u64::MAX { c } else { c % pc }, p, cap)
        })
        .min()
        .unwrap_or(cap)
}

impl CosetRep {
    pub fn i(&self) -> i64 {
        match self {
            CosetRep::Diagonal { i, .. }
            | CosetRep::X { i, .. }
            | CosetRep::Y { i, .. }
            | CosetRep::Z { i, .. }
            | CosetRep::Skew { i, .. } => *i,
        }
    }

    /// The `j` of `t_{i,j}`; for `Skew` it is
    /// `i + val(p^ky + u p^(kz-kx)) - (kx + kz - ky)`, with valuations of `1+u`
    /// capped at `cap` digits.
    pub fn j(&self, p: u64, cap: i64) -> i64 {
        match self {
            CosetRep::Diagonal { j, .. }
            | CosetRep::X { j, .. }
            | CosetRep::Y { j, .. }
            | CosetRep::Z { j, .. } => *j,
            CosetRep::Skew { i, kx, ky, kz, u } => {
                let v = skew_sum_val(*kx, *ky, *kz, u, p, cap);
                i + v - (kx + kz - ky)
            }
        }
    }
}

/// `val(p^ky + u p^(kz-kx))`.
pub(crate) fn skew_sum_val(kx: i64, ky: i64, kz: i64, u: &[u64], p: u64, cap: i64) -> i64 {
    let other = kz - kx;
    if other != ky {
        ky.min(other)
    } else {
        ky + val_one_plus(u, p, cap)
    }
}

impl fmt::Display for CosetRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetRep::Diagonal { i, j } => write!(f, "t({i},{j})"),
            CosetRep::X { i, j, k } => write!(f, "t({i},{j})X{k}"),
            CosetRep::Y { i, j, k } => write!(f, "t({i},{j})Y{k}"),
            CosetRep::Z { i, j, k } => write!(f, "t({i},{j})Z{k}"),
            CosetRep::Skew { i, kx, ky, kz, u } => {
                write!(f, "S(i={i},kx={kx},ky={ky},kz={kz},u={u:?})")
            }
        }
    }
}

/// Whether the representative lies in the support for level `n`. `p` is the
/// residue characteristic, used only for the unit of a `Skew` representative.
#[allow(clippy::int_plus_one)] // kept in the form of the membership inequalities
pub fn in_supp(rep: &CosetRep, n: i64, p: u64) -> bool {
    match *rep {
        CosetRep::Diagonal { i, j } => {
            if j < 0 {
                false
            } else if i <= 0 {
                2 - n <= i && 2 * i + j >= 1 && i + j <= n - 1
            } else if j == 0 {
                2 * i <= n - 1
            } else {
                i + j <= n - 1
            }
        }
        CosetRep::X { i, j, k } => {
            1 <= j && 1 <= i && i <= n - 1 && 1 <= k && k <= i - 1 && i + j + k <= n - 1
        }
        CosetRep::Y { i, j, k } => {
            1 <= j
                && 1 <= i
                && i <= n - 1
                && 1 <= k
                && k <= i + j - 1
                && 2 * i + j <= n.min(2 * k) - 1
        }
        CosetRep::Z { i, j, k } => {
            1 <= j && 1 <= i && i <= n - 1 && i + j + 1 <= k && k <= 2 * i + j - 1 && k <= n - 1
        }
        CosetRep::Skew {
            i,
            kx,
            ky,
            kz,
            ref u,
        } => {
            if u.is_empty() || u[0] % p == 0 {
                return false;
            }
            let sum_val = skew_sum_val(kx, ky, kz, u, p, n);
            if kz == kx + ky && sum_val - ky >= n {
                // 1 + u vanishes to the stored precision
                return false;
            }
            let j = i + sum_val - (kx + kz - ky);
            skew_conditions(i, j, kx, ky, kz, sum_val, n)
        }
    }
}

/// The inequalities of the last family, with `sum_val = val(y + z/x)`.
fn skew_conditions(i: i64, j: i64, kx: i64, ky: i64, kz: i64, sum_val: i64, n: i64) -> bool {
    1 <= kx
        && kx < i
        && 1 <= ky - kx
        && ky - kx < j
        && 1 <= kz - ky
        && j < sum_val
        && j + (kx + kz - ky) < n
        && j < 2 * (ky - kx)
}

/// Table rows and the four cases of the last family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Row(u8),
    Skew(SkewCase),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SkewCase {
    #[serde(rename = "zLTxy")]
    ZLtXy,
    #[serde(rename = "zGTxy")]
    ZGtXy,
    #[serde(rename = "zEQxy_unit")]
    ZEqXyUnit,
    #[serde(rename = "zEQxy_nonunit")]
    ZEqXyNonunit,
}

impl SkewCase {
    pub const ALL: [SkewCase; 4] = [
        SkewCase::ZLtXy,
        SkewCase::ZGtXy,
        SkewCase::ZEqXyUnit,
        SkewCase::ZEqXyNonunit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SkewCase::ZLtXy => "zLTxy",
            SkewCase::ZGtXy => "zGTxy",
            SkewCase::ZEqXyUnit => "zEQxy_unit",
            SkewCase::ZEqXyNonunit => "zEQxy_nonunit",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Row(r) => write!(f, "row{r}"),
            Family::Skew(c) => write!(f, "skew:{}", c.name()),
        }
    }
}

/// Per-coset fixed-vector dimension as a function of `q` and the family type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimSymbol {
    One,
    /// 0 for the first generic type, 2 for the second.
    ZeroOrTwo,
    QPlusOne,
    QMinusOne,
}

impl DimSymbol {
    pub fn eval(self, q: i128, second_type: bool) -> i128 {
        match self {
            DimSymbol::One => 1,
            DimSymbol::ZeroOrTwo => {
                if second_type {
                    2
                } else {
                    0
                }
            }
            DimSymbol::QPlusOne => q + 1,
            DimSymbol::QMinusOne => q - 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DimSymbol::One => "1",
            DimSymbol::ZeroOrTwo => "0 or 2",
            DimSymbol::QPlusOne => "q+1",
            DimSymbol::QMinusOne => "q-1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCount {
    pub family: Family,
    pub count: i128,
    pub per_coset_dim: DimSymbol,
}

pub fn family_dim(family: Family) -> DimSymbol {
    match family {
        Family::Row(1) | Family::Row(2) => DimSymbol::One,
        Family::Row(3) => DimSymbol::ZeroOrTwo,
        Family::Row(4) => DimSymbol::QPlusOne,
        _ => DimSymbol::QMinusOne,
    }
}

type Q = num_rational::Ratio<i128>;

fn fl(num: i128, den: i128) -> i128 {
    num_integer::Integer::div_floor(&num, &den)
}

fn rq(x: i128) -> Q {
    Q::from_integer(x)
}

fn bits(x: u128) -> u32 {
    128 - x.leading_zeros()
}

/// Refuses `(q, n)` whose closed forms could leave `i128`: the largest
/// intermediate is about `q^{n/4 + 4} n^3`.
pub(crate) fn check_size(q: u64, n: i64) -> Result<()> {
    let e = (n.max(0) as u128) / 4 + 4;
    let need = e.saturating_mul(bits(q.saturating_sub(1) as u128) as u128) + 3 * bits(n.unsigned_abs() as u128 + 2) as u128 + 8;
    if need > 120 {
        return Err(Error::TooLarge(format!("closed forms at q={q}, n={n} exceed 128-bit arithmetic")));
    }
    Ok(())
}

fn qpow(q: i128, e: i128) -> Q {
    if e >= 0 {
        rq(q.pow(e as u32))
    } else {
        Q::new(1, q.pow((-e) as u32))
    }
}

fn to_count(x: Q, what: &str) -> Result<i128> {
    if !x.is_integer() || x < rq(0) {
        return Err(Error::NonIntegralResult(format!("{what} = {x}")));
    }
    Ok(x.to_integer())
}

/// Closed form for rows 1 to 7 of the support table.
pub fn table1_count(row: u8, n: i64) -> Result<i128> {
    check_size(1, n)?;
    let n = n as i128;
    let v = match row {
        1 => rq(n * (n - 1) / 2),
        2 => rq(fl((n - 1) * (n - 1), 4)),
        3 => rq(fl(n - 1, 2)),
        4 => rq(fl((n - 2) * (n - 2), 4)),
        5 | 6 => rq(fl((n - 1) * (n - 3) * (2 * n - 7), 24)),
        7 => Q::new(n - 3, 6) * rq(fl(n * n - 6 * n + 8, 4)),
        _ => return Err(Error::Usage(format!("no table row {row}"))),
    };
    to_count(v, &format!("row {row} count at n={n}"))
}

pub fn a_q(n: i128, q: i128) -> Q {
    let d = rq(q - 1);
    rq(fl((n - 1) * (n - 3) * (2 * n - 7), 24))
        + rq(n * n - n + 1) / d
        + rq(8 * n + 12) / (d * d)
        + rq(32) / (d * d * d)
}

pub fn b_q(n: i128, q: i128) -> Q {
    let d = rq(q - 1);
    rq(fl((n - 2) * (n - 2), 4)) - rq(fl(n * n - 12 * n + 4, 4)) / d + rq(8 - 2 * n) / (d * d)
        - rq(8) / (d * d * d)
}

pub fn c_q(n: i128, q: i128) -> Q {
    let d = rq(q - 1);
    Q::new(n - 3, 6) * rq(fl((n - 2) * (n - 4), 4))
        + rq(fl(n * n - 2 * n + 2, 2)) / d
        + rq(4 * n + 4) / (d * d)
        + rq(16) / (d * d * d)
}

/// Closed count of the last family in one case.
pub fn skew_closed_count(case: SkewCase, n: i64, q: u64) -> Result<i128> {
    check_size(q, n)?;
    let (n, q) = (n as i128, q as i128);
    let (shift, form): (i128, fn(i128, i128) -> Q) = match case {
        SkewCase::ZLtXy | SkewCase::ZGtXy => (5, a_q),
        SkewCase::ZEqXyUnit => (4, b_q),
        SkewCase::ZEqXyNonunit => (6, c_q),
    };
    let e = fl(n - shift, 4);
    let v = qpow(q, e) * form(n - 4 * e, q) - form(n, q);
    to_count(v, &format!("{} count at n={n}, q={q}", case.name()))
}

/// Closed counts of every family for level `n`.
pub fn enumerate_supp(q: u64, n: i64) -> Result<Vec<FamilyCount>> {
    let mut out = Vec::new();
    for row in 1..=7u8 {
        let family = Family::Row(row);
        out.push(FamilyCount {
            family,
            count: table1_count(row, n)?,
            per_coset_dim: family_dim(family),
        });
    }
    for case in SkewCase::ALL {
        let family = Family::Skew(case);
        out.push(FamilyCount {
            family,
            count: skew_closed_count(case, n, q)?,
            per_coset_dim: family_dim(family),
        });
    }
    Ok(out)
}

/// Row of the support table for a non-skew representative.
pub fn row_of(rep: &CosetRep, n: i64) -> Option<u8> {
    match *rep {
        CosetRep::Diagonal { i, j } => Some(if j == 0 {
            3
        } else if i <= 0 {
            1
        } else if 2 * i + j < n {
            4
        } else {
            2
        }),
        CosetRep::Z { .. } => Some(5),
        CosetRep::X { .. } => Some(6),
        CosetRep::Y { .. } => Some(7),
        CosetRep::Skew { .. } => None,
    }
}

/// Diagonal, X, Y and Z representatives in the support, found by scanning a
/// box that contains every solution of the membership inequalities.
pub fn non_skew_reps(n: i64) -> Vec<CosetRep> {
    let mut out = Vec::new();
    let b = 4 * n.max(1);
    for i in -b..=b {
        for j in 0..=b {
            let d = CosetRep::Diagonal { i, j };
            if in_supp(&d, n, 2) {
                out.push(d);
            }
            for k in -b..=b {
                for rep in [CosetRep::X { i, j, k }, CosetRep::Y { i, j, k }, CosetRep::Z { i, j, k }] {
                    if in_supp(&rep, n, 2) {
                        out.push(rep);
                    }
                }
            }
        }
    }
    out
}

/// Row count by direct enumeration of the membership inequalities.
pub fn table1_brute(row: u8, n: i64) -> Result<i128> {
    if n > 40 {
        return Err(Error::TooLarge(format!("row brute force at n={n}")));
    }
    Ok(non_skew_reps(n)
        .iter()
        .filter(|r| row_of(r, n) == Some(row))
        .count() as i128)
}

/// Case of a skew tuple, given `v = val(1+u)` in the equal case.
fn skew_case(kx: i64, ky: i64, kz: i64, v: i64) -> SkewCase {
    use std::cmp::Ordering::*;
    match kz.cmp(&(kx + ky)) {
        Less => SkewCase::ZLtXy,
        Greater => SkewCase::ZGtXy,
        Equal if v == 0 => SkewCase::ZEqXyUnit,
        Equal => SkewCase::ZEqXyNonunit,
    }
}

/// Calls `visit(i, kx, ky, kz, v, j)` for every tuple satisfying the
/// inequalities, where `v` is the forced valuation of `1+u` (0 off the
/// equal case).
fn for_skew_tuples(n: i64, mut visit: impl FnMut(i64, i64, i64, i64, i64, i64)) {
    for i in 1..=n {
        for kx in 1..i {
            for ky in kx + 1..3 * n {
                for kz in ky + 1..4 * n {
                    if kz != kx + ky {
                        let sv = ky.min(kz - kx);
                        let j = i + sv - (kx + kz - ky);
                        if skew_conditions(i, j, kx, ky, kz, sv, n) {
                            visit(i, kx, ky, kz, 0, j);
                        }
                    } else {
                        // j grows with v; stop once the level bound fails
                        let mut v = 0;
                        loop {
                            let j = i + ky + v - 2 * kx;
                            if j + 2 * kx >= n {
                                break;
                            }
                            if skew_conditions(i, j, kx, ky, kz, ky + v, n) {
                                visit(i, kx, ky, kz, v, j);
                            }
                            v += 1;
                        }
                    }
                }
            }
        }
    }
}

/// Number of classes of `u` modulo `1 + p^e` with prescribed `val(1+u)`,
/// counted digit by digit in `w = 1 + u`.
fn unit_classes(q: u64, e: i64, equal_case: bool, v: i64) -> i128 {
    let q = q as i128;
    // Digits are indexed 0..q with 0 the zero digit and 1 the digit of 1.
    // The first v+1 digits of w decide val(w) and whether u = w - 1 is a unit;
    // the remaining e - v - 1 digits are free.
    let mut count = 0i128;
    let mut prefix = vec![0i128; (v + 1) as usize];
    loop {
        let val_w = prefix.iter().position(|&d| d != 0).map(|t| t as i64);
        let u_unit = prefix[0] != 1;
        let ok = if equal_case {
            u_unit && val_w == Some(v)
        } else {
            u_unit
        };
        if ok {
            count += q.pow((e - v - 1) as u32);
        }
        // next prefix in base q
        let mut t = 0;
        loop {
            if t == prefix.len() {
                return count;
            }
            prefix[t] += 1;
            if prefix[t] < q {
                break;
            }
            prefix[t] = 0;
            t += 1;
        }
    }
}

/// Brute count of the last family: enumerate valuation tuples and classes of units.
pub fn skew_brute_count(case: SkewCase, n: i64, q: u64) -> Result<i128> {
    if n > 20 {
        return Err(Error::TooLarge(format!("skew brute force at n={n} (limit 20)")));
    }
    let mut total = 0i128;
    for_skew_tuples(n, |_i, kx, ky, kz, v, j| {
        let equal = kz == kx + ky;
        if skew_case(kx, ky, kz, v) != case {
            return;
        }
        let e = j - (ky - kx);
        // off the equal case only units matter, and the first digit decides that
        let v_eff = if equal { v } else { 0 };
        total += unit_classes(q, e, equal, v_eff);
    });
    Ok(total)
}

/// Skew representatives, one per class of units, for small levels.
pub fn skew_reps(n: i64, q: u64, limit: usize) -> Result<Vec<CosetRep>> {
    let field = crate::ffield::field_of_order(q)?;
    let p = field.p() as u64;
    let mut tuples = Vec::new();
    for_skew_tuples(n, |i, kx, ky, kz, v, j| tuples.push((i, kx, ky, kz, v, j)));
    let mut out = Vec::new();
    for (i, kx, ky, kz, v, j) in tuples {
        let e = j - (ky - kx);
        let equal = kz == kx + ky;
        let total = (q as u128).checked_pow(e as u32).unwrap_or(u128::MAX);
        if total > limit as u128 || out.len() > limit {
            return Err(Error::TooLarge(format!("more than {limit} skew representatives")));
        }
        // every residue of w = 1 + u modulo p^e, digit by digit
        for code in 0..total as u64 {
            let mut c = code;
            let digits: Vec<u16> = (0..e)
                .map(|_| {
                    let d = (c % q) as u16;
                    c /= q;
                    d
                })
                .collect();
            let val_w = digits.iter().position(|&d| d != 0).map(|t| t as i64).unwrap_or(e);
            if digits[0] == 1 || (equal && val_w != v) {
                continue;
            }
            let f = field.degree() as usize;
            let mut w = vec![0u64; f];
            for (t, &d) in digits.iter().enumerate() {
                for (k, coef) in field.coeffs(d).into_iter().enumerate() {
                    w[k] += coef as u64 * p.pow(t as u32);
                }
            }
            let pe = p.pow(e as u32);
            let mut u = w.clone();
            u[0] = (u[0] + pe - 1) % pe;
            let rep = CosetRep::Skew { i, kx, ky, kz, u };
            debug_assert!(in_supp(&rep, n, p));
            out.push(rep);
        }
    }
    Ok(out)
}

/// Equality of double cosets inside the last family: same valuation data and
/// `u' / u` in `1 + p^(j - val(y/x))`, i.e. `u' = u` modulo that power.
pub fn skew_same_coset(a: &CosetRep, b: &CosetRep, n: i64, p: u64) -> bool {
    match (a, b) {
        (
            CosetRep::Skew { i, kx, ky, kz, u },
            CosetRep::Skew {
                i: i2,
                kx: kx2,
                ky: ky2,
                kz: kz2,
                u: u2,
            },
        ) => {
            if (i, kx, ky, kz) != (i2, kx2, ky2, kz2) {
                return false;
            }
            let (j, j2) = (a.j(p, n), b.j(p, n));
            if j != j2 {
                return false;
            }
            let pe = p.pow((j - (ky - kx)) as u32);
            let len = u.len().max(u2.len());
            (0..len).all(|t| u.get(t).copied().unwrap_or(0) % pe == u2.get(t).copied().unwrap_or(0) % pe)
        }
        _ => a == b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert!(in_supp(&CosetRep::Diagonal { i: 0, j: 1 }, 2, 2));
        assert!(!in_supp(&CosetRep::X { i: 2, j: 1, k: 1 }, 4, 2));
        assert!(in_supp(&CosetRep::X { i: 2, j: 1, k: 1 }, 5, 2));
        assert!(in_supp(&CosetRep::Z { i: 2, j: 1, k: 4 }, 8, 2));
    }

    #[test]
    fn table_examples() {
        assert_eq!(table1_count(1, 3).unwrap(), 3);
        assert_eq!(table1_count(5, 4).unwrap(), 0);
        assert_eq!(table1_count(7, 4).unwrap(), 0);
        assert!(table1_count(8, 4).is_err());
    }

    #[test]
    fn skew_examples() {
        for q in 2..=9u64 {
            if crate::ffield::prime_power(q).is_some() {
                assert_eq!(skew_closed_count(SkewCase::ZEqXyUnit, 8, q).unwrap(), q as i128 - 2);
            }
        }
        assert_eq!(skew_closed_count(SkewCase::ZLtXy, 8, 2).unwrap(), 0);
        assert_eq!(skew_closed_count(SkewCase::ZEqXyNonunit, 9, 3).unwrap(), 0);
        assert_eq!(skew_brute_count(SkewCase::ZEqXyUnit, 8, 3).unwrap(), 1);
        for case in SkewCase::ALL {
            assert_eq!(skew_brute_count(case, 5, 2).unwrap(), 0);
        }
        assert_eq!(
            skew_brute_count(SkewCase::ZLtXy, 9, 2).unwrap(),
            skew_closed_count(SkewCase::ZLtXy, 9, 2).unwrap()
        );
        assert!(matches!(skew_brute_count(SkewCase::ZLtXy, 21, 2), Err(Error::TooLarge(_))));
    }

    #[test]
    fn enumerate_examples() {
        let c = enumerate_supp(2, 2).unwrap();
        let nonzero: Vec<_> = c.iter().filter(|f| f.count != 0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].family, Family::Row(1));
        assert_eq!(nonzero[0].count, 1);
        let c = enumerate_supp(3, 4).unwrap();
        let counts: Vec<i128> = c.iter().map(|f| f.count).collect();
        assert_eq!(counts, vec![6, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn rows_match_brute() {
        for n in 1..=20 {
            for row in 1..=7 {
                assert_eq!(table1_count(row, n).unwrap(), table1_brute(row, n).unwrap(), "row {row} n {n}");
            }
        }
    }

    #[test]
    fn skew_matches_brute() {
        for q in [2u64, 3] {
            for n in 1..=20 {
                for case in SkewCase::ALL {
                    assert_eq!(
                        skew_closed_count(case, n, q).unwrap(),
                        skew_brute_count(case, n, q).unwrap(),
                        "{} n={n} q={q}",
                        case.name()
                    );
                }
            }
        }
    }

    #[test]
    fn closed_forms_integral_and_nonnegative() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for n in 1..=60 {
                assert!(enumerate_supp(q, n).is_ok(), "q={q} n={n}");
                assert_eq!(
                    skew_closed_count(SkewCase::ZLtXy, n, q).unwrap(),
                    skew_closed_count(SkewCase::ZGtXy, n, q).unwrap()
                );
                assert_eq!(table1_count(5, n).unwrap(), table1_count(6, n).unwrap());
            }
        }
    }

    #[test]
    fn skew_reps_match_counts_and_canonical_equality() {
        for (n, q) in [(9i64, 2u64), (10, 2), (9, 3)] {
            let reps = skew_reps(n, q, 100_000).unwrap();
            let total: i128 = SkewCase::ALL
                .iter()
                .map(|&c| skew_brute_count(c, n, q).unwrap())
                .sum();
            assert_eq!(reps.len() as i128, total);
            let p = crate::ffield::prime_power(q).unwrap().0;
            for (a, ra) in reps.iter().enumerate() {
                assert!(in_supp(ra, n, p));
                for rb in reps.iter().skip(a + 1) {
                    assert!(!skew_same_coset(ra, rb, n, p));
                }
            }
        }
    }

    #[test]
    fn skew_j_is_derived() {
        let rep = CosetRep::Skew {
            i: 3,
            kx: 1,
            ky: 3,
            kz: 4,
            u: vec![2],
        };
        // val(1 + 2) = 1 over Z_3, so val(y + z/x) = 4
        assert_eq!(rep.j(3, 9), 3 + 4 - 2);
    }
}
