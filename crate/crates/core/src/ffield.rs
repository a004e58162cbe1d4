//! Exact arithmetic in small finite fields `F_q`, `q = p^f`.
//!
//! Elements are encoded as integers `0..q` through their coefficient vector in
//! the polynomial basis: `c_0 + c_1 p + ... + c_{f-1} p^{f-1}`. Index 0 is the
//! zero element and index 1 the identity. All arithmetic goes through
//! precomputed tables, so a [`FieldSpec`] is immutable once built.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted by [`field_make`].
pub const DEFAULT_FIELD_BOUND: u64 = 512;

/// Shared handle to a field descriptor.
pub type Field = Arc<FieldSpec>;

/// Descriptor of `F_{p^f}` together with its operation tables.
pub struct FieldSpec {
    p: u32,
    f: u32,
    q: u32,
    /// Coefficients `m_0..m_{f-1}` of the monic modulus `x^f + m_{f-1}x^{f-1} + ... + m_0`.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    squares: Vec<bool>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, f)` with `q = p^f`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

/// Builds `F_{p^f}` with the default size bound.
pub fn field_make(p: u64, f: u32) -> Result<Field> {
    FieldSpec::with_bound(p, f, DEFAULT_FIELD_BOUND)
}

/// Builds `F_q` from the field order.
pub fn field_of_order(q: u64) -> Result<Field> {
    let (p, f) = prime_power(q).ok_or(Error::NotPrime(q))?;
    field_make(p, f)
}

// Polynomials over F_p as coefficient vectors, lowest degree first.
fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_pow(b[db], p - 2, p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `code`.
fn monic_from_code(code: u64, deg: u32, p: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(deg as usize + 1);
    let mut c = code;
    for _ in 0..deg {
        v.push(c % p);
        c /= p;
    }
    v.push(1);
    v
}

/// Irreducibility by exhaustive trial division with every monic polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) {
            let cand = monic_from_code(code, d, p);
            if poly_rem(poly, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree `f`,
/// comparing coefficients from `x^{f-1}` down to the constant term.
fn least_irreducible(p: u64, f: u32) -> Option<Vec<u64>> {
    let total = p.pow(f);
    // Enumerate codes so that the digit of x^{f-1} varies slowest.
    (0..total)
        .map(|code| {
            let mut digits = Vec::with_capacity(f as usize);
            let mut c = code;
            for _ in 0..f {
                digits.push(c % p);
                c /= p;
            }
            digits.reverse();
            let mut poly = digits;
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(poly, p))
}

impl FieldSpec {
    pub fn with_bound(p: u64, f: u32, bound: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::FieldTooLarge { p, f, bound });
        }
        let q = p
            .checked_pow(f)
            .filter(|&q| q <= bound && q <= u16::MAX as u64)
            .ok_or(Error::FieldTooLarge { p, f, bound })?;
        let modulus: Vec<u64> = if f == 1 {
            vec![0, 1]
        } else {
            least_irreducible(p, f).ok_or(Error::NoIrreducible { p, f })?
        };
        Ok(Arc::new(Self::build(p, f, q, &modulus)))
    }

    fn build(p: u64, f: u32, q: u64, modulus: &[u64]) -> Self {
        let qu = q as usize;
        let fu = f as usize;
        let digits = |mut x: u64| -> Vec<u64> {
            (0..fu)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[u64]| -> u16 { c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u16 };

        let mut add = vec![0u16; qu * qu];
        let mut mul = vec![0u16; qu * qu];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qu + b as usize] = encode(&s);
                let mut prod = vec![0u64; 2 * fu - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = if f == 1 {
                    prod
                } else {
                    poly_rem(&prod, modulus, p)
                };
                r.resize(fu, 0);
                mul[a as usize * qu + b as usize] = encode(&r);
            }
        }
        let mut neg = vec![0u16; qu];
        let mut inv = vec![0u16; qu];
        for a in 0..qu {
            for b in 0..qu {
                if add[a * qu + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * qu + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        let mut squares = vec![false; qu];
        for a in 0..qu {
            squares[mul[a * qu + a] as usize] = true;
        }
        FieldSpec {
            p: p as u32,
            f,
            q: q as u32,
            modulus: modulus[..fu].iter().map(|&c| c as u32).collect(),
            add,
            mul,
            neg,
            inv,
            squares,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Lower coefficients of the monic modulus (empty meaning for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    // Raw index arithmetic. Callers guarantee indices are below `q`.

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: u16) -> Option<u16> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: u16, mut e: u64) -> u16 {
        let mut base = a;
        let mut acc = 1u16;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn is_square_raw(&self, a: u16) -> bool {
        self.squares[a as usize]
    }

    /// Coefficients of element `a` in the polynomial basis.
    pub fn coeffs(&self, a: u16) -> Vec<u32> {
        let mut x = a as u32;
        (0..self.f)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> u16 {
        c.iter().rev().fold(0u32, |acc, &d| acc * self.p + d % self.p) as u16
    }

    /// Image of the integer `n` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> u16 {
        n.rem_euclid(self.p as i64) as u16
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u16 {
        let order = self.q as u64 - 1;
        let factors: Vec<u64> = (2..=order).filter(|d| order.is_multiple_of(*d) && is_prime(*d)).collect();
        (1..self.q as u16)
            .find(|&g| factors.iter().all(|&r| self.pow(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }
}

/// Element of a finite field, tied to its owner.
#[derive(Clone)]
pub struct FqElem {
    field: Field,
    value: u16,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.f == 1 {
            return write!(f, "{}", self.value);
        }
        let c = self.field.coeffs(self.value);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match (i, d) {
                (0, d) => format!("{d}"),
                (1, 1) => "a".to_string(),
                (1, d) => format!("{d}a"),
                (i, 1) => format!("a^{i}"),
                (i, d) => format!("{d}a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && *self.field == *other.field
    }
}

impl Eq for FqElem {}

/// Binary operations on field elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqOp {
    Add,
    Mul,
}

impl FqElem {
    pub fn new(field: &Field, value: u16) -> Self {
        assert!((value as u32) < field.q, "index out of range for F_{}", field.q);
        FqElem {
            field: field.clone(),
            value,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, 0)
    }

    pub fn one(field: &Field) -> Self {
        Self::new(field, 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn index(&self) -> u16 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn op(&self, other: &Self, op: FqOp) -> Result<Self> {
        self.same_field(other)?;
        let value = match op {
            FqOp::Add => self.field.add(self.value, other.value),
            FqOp::Mul => self.field.mul(self.value, other.value),
        };
        Ok(FqElem {
            field: self.field.clone(),
            value,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.op(other, FqOp::Add)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.op(other, FqOp::Mul)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FqElem {
            field: self.field.clone(),
            value: self.field.neg(self.value),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let value = self.field.inv(self.value).ok_or(Error::DivisionByZero)?;
        Ok(FqElem {
            field: self.field.clone(),
            value,
        })
    }

    pub fn pow(&self, e: u64) -> Self {
        FqElem {
            field: self.field.clone(),
            value: self.field.pow(self.value, e),
        }
    }

    /// True iff `self = b^2` for some `b`; zero counts as a square.
    pub fn is_square(&self) -> bool {
        self.field.is_square_raw(self.value)
    }
}

/// All `q` elements in index order: zero first, then one.
pub fn enumerate_field(field: &Field) -> Vec<FqElem> {
    (0..field.q as u16).map(|v| FqElem::new(field, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f2 = field_make(2, 1).unwrap();
        let one = FqElem::one(&f2);
        assert!(one.add(&one).unwrap().is_zero());
        let f3 = field_make(3, 1).unwrap();
        let two = FqElem::new(&f3, 2);
        assert_eq!(two.inv().unwrap(), two);
    }

    #[test]
    fn not_prime_and_too_large() {
        assert_eq!(field_make(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            field_make(2, 10).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
        assert!(field_make(2, 9).is_ok());
    }

    #[test]
    fn f4_modulus_and_alpha_squared() {
        let f4 = field_make(2, 2).unwrap();
        // x^2 + x + 1
        assert_eq!(f4.modulus(), &[1, 1]);
        let alpha = FqElem::new(&f4, 2);
        let sq = alpha.mul(&alpha).unwrap();
        // alpha + 1 has coefficients (1, 1) -> index 3
        assert_eq!(sq.index(), 3);
    }

    #[test]
    fn irreducible_quadratics_over_f2_by_exhaustion() {
        let irr: Vec<u64> = (0..4)
            .filter(|&c| is_irreducible(&monic_from_code(c, 2, 2), 2))
            .collect();
        assert_eq!(irr, vec![3]);
    }

    #[test]
    fn chosen_moduli_are_irreducible() {
        for (p, f) in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 2)] {
            let fld = field_make(p, f).unwrap();
            let mut poly: Vec<u64> = fld.modulus().iter().map(|&c| c as u64).collect();
            poly.push(1);
            assert!(is_irreducible(&poly, p), "F_{p}^{f}");
        }
    }

    #[test]
    fn is_square_examples() {
        let f3 = field_make(3, 1).unwrap();
        assert!(!FqElem::new(&f3, 2).is_square());
        let f2 = field_make(2, 1).unwrap();
        assert!(FqElem::one(&f2).is_square());
        let f5 = field_make(5, 1).unwrap();
        assert!(FqElem::new(&f5, 4).is_square());
        assert!(FqElem::zero(&f5).is_square());
    }

    #[test]
    fn enumeration_order_and_frobenius() {
        let f2 = field_make(2, 1).unwrap();
        let e: Vec<u16> = enumerate_field(&f2).iter().map(|x| x.index()).collect();
        assert_eq!(e, vec![0, 1]);
        assert_eq!(enumerate_field(&field_make(3, 1).unwrap()).len(), 3);
        let f4 = field_make(2, 2).unwrap();
        let all = enumerate_field(&f4);
        assert_eq!(all.len(), 4);
        for a in &all {
            assert_eq!(&a.pow(4), a);
        }
    }

    #[test]
    fn lagrange_and_square_agreement() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 25, 27, 49] {
            let fld = field_of_order(q).unwrap();
            let elems = enumerate_field(&fld);
            let squares: Vec<FqElem> = elems.iter().map(|a| a.mul(a).unwrap()).collect();
            for a in &elems {
                assert_eq!(&a.pow(q), a);
                if !a.is_zero() {
                    assert_eq!(a.pow(q - 1), FqElem::one(&fld));
                    assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), FqElem::one(&fld));
                }
                assert_eq!(a.is_square(), squares.contains(a), "q={q}");
            }
        }
    }

    #[test]
    fn axioms_on_all_triples_small_fields() {
        for q in [2u64, 3, 4, 5] {
            let fld = field_of_order(q).unwrap();
            let el = enumerate_field(&fld);
            for a in &el {
                for b in &el {
                    assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                    assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                    for c in &el {
                        let l = a.mul(&b.add(c).unwrap()).unwrap();
                        let r = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
                        assert_eq!(l, r);
                        assert_eq!(
                            a.mul(&b.mul(c).unwrap()).unwrap(),
                            a.mul(b).unwrap().mul(c).unwrap()
                        );
                        assert_eq!(
                            a.add(&b.add(c).unwrap()).unwrap(),
                            a.add(b).unwrap().add(c).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = FqElem::one(&field_make(2, 1).unwrap());
        let b = FqElem::one(&field_make(3, 1).unwrap());
        assert_eq!(a.add(&b).unwrap_err(), Error::MixedFields);
        assert_eq!(
            FqElem::zero(&field_make(5, 1).unwrap()).inv().unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(7), Some((7, 1)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn random_triples_large_fields(a in 0u16..49, b in 0u16..49, c in 0u16..49) {
                for q in [7u64, 8, 9, 49] {
                    let fld = field_of_order(q).unwrap();
                    let m = q as u16;
                    let (x, y, z) = (FqElem::new(&fld, a % m), FqElem::new(&fld, b % m), FqElem::new(&fld, c % m));
                    let l = x.mul(&y.add(&z).unwrap()).unwrap();
                    let r = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
                    prop_assert_eq!(l, r);
                }
            }
        }
    }
}
