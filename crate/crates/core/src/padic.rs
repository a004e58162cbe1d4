//! Truncated arithmetic in the unramified extension `o` of `Z_p` with residue
//! field `F_q`, using `p` itself as the uniformizer.
//!
//! Elements of `o / p^M` are integer polynomials of degree `< f` modulo the
//! monic lift of the residue field modulus, with coefficients modulo `p^M`.
//! A [`TruncAdic`] tracks its valuation and the number of known digits.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cosets::CosetRep;
use crate::error::{Error, Result};
use crate::ffield::{field_of_order, Field};
use crate::groupfq::{named_subgroup, subgroup_closure, GSpElem, Raw, Subgroup};

/// Maximum residue degree supported (`2^9 = 512`).
pub const MAX_F: usize = 9;

/// Coefficients of an element of `o / p^M`.
pub type Residue = [u64; MAX_F];

/// The ring `o / p^M` for the largest `M` with `p^M < 2^62`.
#[derive(Debug)]
pub struct PadicRing {
    field: Field,
    p: u64,
    f: usize,
    cap: u32,
    pows: Vec<u64>,
    modulus: Residue,
}

pub type Ring = Arc<PadicRing>;

impl PadicRing {
    pub fn new(q: u64) -> Result<Ring> {
        let field = field_of_order(q)?;
        let p = field.p() as u64;
        let f = field.degree() as usize;
        let mut pows = vec![1u64];
        while let Some(next) = pows.last().unwrap().checked_mul(p).filter(|&x| x < (1 << 62)) {
            pows.push(next);
        }
        let cap = (pows.len() - 1) as u32;
        let mut modulus = [0u64; MAX_F];
        if f > 1 {
            for (k, &c) in field.modulus().iter().enumerate() {
                modulus[k] = c as u64;
            }
        }
        Ok(Arc::new(PadicRing {
            field,
            p,
            f,
            cap,
            pows,
            modulus,
        }))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of `p`-adic digits the ring carries.
    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn pm(&self) -> u64 {
        self.pows[self.cap as usize]
    }

    fn ppow(&self, k: u32) -> u64 {
        self.pows[k as usize]
    }

    // Residue arithmetic modulo p^cap.

    pub fn res_from_int(&self, n: i64) -> Residue {
        let mut r = [0u64; MAX_F];
        r[0] = n.rem_euclid(self.pm() as i64) as u64;
        r
    }

    pub fn res_add(&self, a: &Residue, b: &Residue) -> Residue {
        let pm = self.pm();
        let mut r = [0u64; MAX_F];
        for k in 0..self.f {
            r[k] = (a[k] + b[k]) % pm;
        }
        r
    }

    pub fn res_neg(&self, a: &Residue) -> Residue {
        let pm = self.pm();
        let mut r = [0u64; MAX_F];
        for k in 0..self.f {
            r[k] = (pm - a[k] % pm) % pm;
        }
        r
    }

    pub fn res_mul(&self, a: &Residue, b: &Residue) -> Residue {
        let pm = self.pm() as u128;
        let f = self.f;
        let mut t = [0u128; 2 * MAX_F];
        for i in 0..f {
            if a[i] == 0 {
                continue;
            }
            for j in 0..f {
                t[i + j] = (t[i + j] + (a[i] as u128 * b[j] as u128) % pm) % pm;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = t[k];
            if c == 0 {
                continue;
            }
            t[k] = 0;
            for i in 0..f {
                let sub = (c * self.modulus[i] as u128) % pm;
                t[k - f + i] = (t[k - f + i] + pm - sub) % pm;
            }
        }
        let mut r = [0u64; MAX_F];
        for k in 0..f {
            r[k] = t[k] as u64;
        }
        r
    }

    fn res_scale_p(&self, a: &Residue, k: u32) -> Residue {
        let pm = self.pm() as u128;
        let s = self.ppow(k) as u128;
        let mut r = [0u64; MAX_F];
        for i in 0..self.f {
            r[i] = ((a[i] as u128 * s) % pm) as u64;
        }
        r
    }

    fn res_div_p(&self, a: &Residue, k: u32) -> Residue {
        let s = self.ppow(k);
        let mut r = [0u64; MAX_F];
        for i in 0..self.f {
            debug_assert_eq!(a[i] % s, 0);
            r[i] = a[i] / s;
        }
        r
    }

    fn res_trunc(&self, a: &Residue, digits: u32) -> Residue {
        let s = self.ppow(digits.min(self.cap));
        let mut r = [0u64; MAX_F];
        for i in 0..self.f {
            r[i] = a[i] % s;
        }
        r
    }

    /// Valuation of a residue, or `None` if it vanishes modulo `p^cap`.
    pub fn res_val(&self, a: &Residue) -> Option<u32> {
        a[..self.f]
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut v = 0;
                let mut x = c;
                while x % self.p == 0 {
                    x /= self.p;
                    v += 1;
                }
                v
            })
            .min()
    }

    /// Image in the residue field (as a field index).
    pub fn res_reduce(&self, a: &Residue) -> u16 {
        let c: Vec<u32> = a[..self.f].iter().map(|&x| (x % self.p) as u32).collect();
        self.field.from_coeffs(&c)
    }

    /// Teichmuller-free lift of a field element: its coefficient vector.
    pub fn res_lift(&self, x: u16) -> Residue {
        let mut r = [0u64; MAX_F];
        for (k, c) in self.field.coeffs(x).into_iter().enumerate() {
            r[k] = c as u64;
        }
        r
    }

    /// Inverse of a unit residue modulo `p^cap` by Newton iteration.
    pub fn res_unit_inv(&self, u: &Residue) -> Residue {
        let red = self.res_reduce(u);
        let mut w = self.res_lift(self.field.inv(red).expect("residue is a unit"));
        let two = self.res_from_int(2);
        let mut digits = 1;
        while digits < self.cap {
            let uw = self.res_mul(u, &w);
            w = self.res_mul(&w, &self.res_add(&two, &self.res_neg(&uw)));
            digits *= 2;
        }
        w
    }

    pub fn res_random_unit(&self, rng: &mut impl Rng, digits: u32) -> Residue {
        let s = self.ppow(digits.min(self.cap));
        loop {
            let mut r = [0u64; MAX_F];
            for k in 0..self.f {
                r[k] = rng.gen_range(0..s);
            }
            if self.res_reduce(&r) != 0 {
                return r;
            }
        }
    }

    // Truncated elements.

    pub fn zero_exact(&self) -> TruncAdic {
        TruncAdic::Zero { abs: None }
    }

    pub fn one(&self) -> TruncAdic {
        self.from_int(1)
    }

    /// An integer, carried with the full ring precision.
    pub fn from_int(&self, n: i64) -> TruncAdic {
        if n == 0 {
            return self.zero_exact();
        }
        let v = crate::cosets::int_val(n.unsigned_abs(), self.p, i64::MAX) as u32;
        let unit = n / (self.p as i64).pow(v);
        TruncAdic::Nonzero {
            val: v as i64,
            prec: self.cap,
            unit: self.res_from_int(unit),
        }
    }

    /// `p^val * unit` with `prec` known digits.
    pub fn from_parts(&self, val: i64, unit: Residue, prec: u32) -> TruncAdic {
        let prec = prec.min(self.cap);
        if prec == 0 {
            return TruncAdic::Zero { abs: Some(val) };
        }
        debug_assert_ne!(self.res_reduce(&unit), 0, "unit part must be a unit");
        TruncAdic::Nonzero {
            val,
            prec,
            unit: self.res_trunc(&unit, prec),
        }
    }

    /// `p^k` exactly.
    pub fn pi_pow(&self, k: i64) -> TruncAdic {
        TruncAdic::Nonzero {
            val: k,
            prec: self.cap,
            unit: self.res_from_int(1),
        }
    }

    /// A general ring element `p^val * r` where `r` need not be a unit.
    pub fn from_residue(&self, val: i64, r: &Residue, prec: u32) -> TruncAdic {
        let prec = prec.min(self.cap);
        let r = self.res_trunc(r, prec);
        match self.res_val(&r) {
            Some(w) if w < prec => TruncAdic::Nonzero {
                val: val + w as i64,
                prec: prec - w,
                unit: self.res_div_p(&r, w),
            },
            _ => TruncAdic::Zero {
                abs: Some(val + prec as i64),
            },
        }
    }

    pub fn neg(&self, a: &TruncAdic) -> TruncAdic {
        match a {
            TruncAdic::Zero { .. } => a.clone(),
            TruncAdic::Nonzero { val, prec, unit } => TruncAdic::Nonzero {
                val: *val,
                prec: *prec,
                unit: self.res_trunc(&self.res_neg(unit), *prec),
            },
        }
    }

    pub fn add(&self, a: &TruncAdic, b: &TruncAdic) -> TruncAdic {
        use TruncAdic::*;
        match (a, b) {
            (Zero { abs: None }, x) | (x, Zero { abs: None }) => x.clone(),
            (Zero { abs: Some(x) }, Zero { abs: Some(y) }) => Zero {
                abs: Some(*x.min(y)),
            },
            (Zero { abs: Some(z) }, Nonzero { val, prec, unit })
            | (Nonzero { val, prec, unit }, Zero { abs: Some(z) }) => {
                let abs = (*z).min(val + *prec as i64);
                if *val < abs {
                    let prec = (abs - val) as u32;
                    Nonzero {
                        val: *val,
                        prec,
                        unit: self.res_trunc(unit, prec),
                    }
                } else {
                    Zero { abs: Some(abs) }
                }
            }
            (
                Nonzero {
                    val: va,
                    prec: pa,
                    unit: ua,
                },
                Nonzero {
                    val: vb,
                    prec: pb,
                    unit: ub,
                },
            ) => {
                let abs = (va + *pa as i64).min(vb + *pb as i64);
                let v0 = (*va).min(*vb);
                let r = (abs - v0) as u32;
                let term = |v: i64, u: &Residue| -> Residue {
                    let shift = (v - v0) as u32;
                    if shift >= r {
                        [0; MAX_F]
                    } else {
                        self.res_scale_p(u, shift)
                    }
                };
                let s = self.res_add(&term(*va, ua), &term(*vb, ub));
                self.from_residue(v0, &s, r)
            }
        }
    }

    pub fn sub(&self, a: &TruncAdic, b: &TruncAdic) -> TruncAdic {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &TruncAdic, b: &TruncAdic) -> TruncAdic {
        use TruncAdic::*;
        match (a, b) {
            (Zero { abs: None }, _) | (_, Zero { abs: None }) => Zero { abs: None },
            (Zero { abs: Some(x) }, Zero { abs: Some(y) }) => Zero { abs: Some(x + y) },
            (Zero { abs: Some(z) }, Nonzero { val, .. })
            | (Nonzero { val, .. }, Zero { abs: Some(z) }) => Zero { abs: Some(z + val) },
            (
                Nonzero {
                    val: va,
                    prec: pa,
                    unit: ua,
                },
                Nonzero {
                    val: vb,
                    prec: pb,
                    unit: ub,
                },
            ) => {
                let prec = (*pa).min(*pb);
                Nonzero {
                    val: va + vb,
                    prec,
                    unit: self.res_trunc(&self.res_mul(ua, ub), prec),
                }
            }
        }
    }

    pub fn inv(&self, a: &TruncAdic) -> Result<TruncAdic> {
        match a {
            TruncAdic::Zero { .. } => Err(Error::PrecisionExhausted),
            TruncAdic::Nonzero { val, prec, unit } => Ok(TruncAdic::Nonzero {
                val: -val,
                prec: *prec,
                unit: self.res_trunc(&self.res_unit_inv(unit), *prec),
            }),
        }
    }

    /// Whether `val(a) >= bound`: `Some(answer)` when decided by the known digits.
    pub fn val_at_least(&self, a: &TruncAdic, bound: i64) -> Option<bool> {
        match a {
            TruncAdic::Zero { abs: None } => Some(true),
            TruncAdic::Zero { abs: Some(z) } => (*z >= bound).then_some(true),
            TruncAdic::Nonzero { val, .. } => Some(*val >= bound),
        }
    }

    /// Image in the residue field of an element known to be integral.
    pub fn reduce(&self, a: &TruncAdic) -> u16 {
        match a {
            TruncAdic::Nonzero { val: 0, unit, .. } => self.res_reduce(unit),
            _ => 0,
        }
    }
}

/// A truncated element `p^val * unit`, or zero known modulo `p^abs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TruncAdic {
    /// `abs = None` is an exact zero.
    Zero { abs: Option<i64> },
    /// `unit` is meaningful to `prec` digits.
    Nonzero { val: i64, prec: u32, unit: Residue },
}

impl TruncAdic {
    pub fn is_zero(&self) -> bool {
        matches!(self, TruncAdic::Zero { .. })
    }

    pub fn val(&self) -> Option<i64> {
        match self {
            TruncAdic::Nonzero { val, .. } => Some(*val),
            _ => None,
        }
    }

    pub fn prec(&self) -> Option<u32> {
        match self {
            TruncAdic::Nonzero { prec, .. } => Some(*prec),
            _ => None,
        }
    }
}

/// A 4x4 matrix of truncated elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicMat {
    pub e: [[TruncAdic; 4]; 4],
}

impl PadicMat {
    pub fn identity(ring: &PadicRing) -> Self {
        let mut e: [[TruncAdic; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| ring.zero_exact()));
        for (k, row) in e.iter_mut().enumerate() {
            row[k] = ring.one();
        }
        PadicMat { e }
    }

    pub fn diag(ring: &PadicRing, d: [TruncAdic; 4]) -> Self {
        let mut m = PadicMat::identity(ring);
        for (k, x) in d.into_iter().enumerate() {
            m.e[k][k] = x;
        }
        m
    }

    pub fn mul(&self, ring: &PadicRing, other: &PadicMat) -> PadicMat {
        let e = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                let mut s = ring.zero_exact();
                for k in 0..4 {
                    s = ring.add(&s, &ring.mul(&self.e[r][k], &other.e[k][c]));
                }
                s
            })
        });
        PadicMat { e }
    }

    pub fn transpose(&self) -> PadicMat {
        PadicMat {
            e: std::array::from_fn(|r| std::array::from_fn(|c| self.e[c][r].clone())),
        }
    }

    /// The form `J`, exactly.
    pub fn j(ring: &PadicRing) -> PadicMat {
        let mut m = PadicMat {
            e: std::array::from_fn(|_| std::array::from_fn(|_| ring.zero_exact())),
        };
        m.e[0][3] = ring.one();
        m.e[1][2] = ring.one();
        m.e[2][1] = ring.from_int(-1);
        m.e[3][0] = ring.from_int(-1);
        m
    }

    /// The `(1,4)` entry of `g^T J g`, which is `mu(g)` for `g` in `GSp(4)`.
    pub fn similitude(&self, ring: &PadicRing) -> TruncAdic {
        let j = PadicMat::j(ring);
        self.transpose().mul(ring, &j).mul(ring, self).e[0][3].clone()
    }

    /// `mu^{-1} (-J) g^T J` for `g` in `GSp(4)`.
    pub fn gsp_inverse(&self, ring: &PadicRing) -> Result<PadicMat> {
        let mu_inv = ring.inv(&self.similitude(ring))?;
        let j = PadicMat::j(ring);
        let mut neg_j = j.clone();
        for row in neg_j.e.iter_mut() {
            for x in row.iter_mut() {
                *x = ring.neg(x);
            }
        }
        let t = neg_j.mul(ring, &self.transpose()).mul(ring, &j);
        Ok(PadicMat {
            e: std::array::from_fn(|r| std::array::from_fn(|c| ring.mul(&mu_inv, &t.e[r][c]))),
        })
    }
}

/// `S(x, y, z)`.
pub fn unipotent_s(ring: &PadicRing, x: &TruncAdic, y: &TruncAdic, z: &TruncAdic) -> PadicMat {
    let mut m = PadicMat::identity(ring);
    m.e[1][0] = x.clone();
    m.e[2][0] = y.clone();
    m.e[3][0] = z.clone();
    m.e[3][1] = y.clone();
    m.e[3][2] = ring.neg(x);
    m
}

/// `t_{i,j} = diag(p^(2i+j), p^(i+j), p^i, 1)`.
pub fn torus_t(ring: &PadicRing, i: i64, j: i64) -> PadicMat {
    PadicMat::diag(
        ring,
        [
            ring.pi_pow(2 * i + j),
            ring.pi_pow(i + j),
            ring.pi_pow(i),
            ring.one(),
        ],
    )
}

/// Valuations `(2i+j, i+j, i, 0)` span this many digits.
fn spread(i: i64, j: i64) -> i64 {
    let v = [2 * i + j, i + j, i, 0];
    v.iter().max().unwrap() - v.iter().min().unwrap()
}

/// Digits needed to decide integrality after conjugating `Kl(n)` by `rep`.
pub fn min_precision(rep: &CosetRep, n: i64, p: u64) -> u32 {
    let j = rep.j(p, n);
    (n + spread(rep.i(), j) + 2).max(1) as u32
}

/// The matrix of a coset representative, entries carried to `m` digits.
pub fn build_rep(ring: &PadicRing, rep: &CosetRep, n: i64, m: u32) -> Result<PadicMat> {
    let need = min_precision(rep, n, ring.p());
    if m < need {
        return Err(Error::PrecisionTooLow { have: m, need });
    }
    if m > ring.cap() {
        return Err(Error::PrecisionTooLow {
            have: ring.cap(),
            need: m,
        });
    }
    let pw = |k: i64| ring.from_parts(k, ring.res_from_int(1), m);
    let zero = ring.zero_exact();
    let (i, j) = (rep.i(), rep.j(ring.p(), n));
    let s = match rep {
        CosetRep::Diagonal { .. } => PadicMat::identity(ring),
        CosetRep::X { k, .. } => unipotent_s(ring, &pw(*k), &zero, &zero),
        CosetRep::Y { k, .. } => unipotent_s(ring, &zero, &pw(*k), &zero),
        CosetRep::Z { k, .. } => unipotent_s(ring, &zero, &zero, &pw(*k)),
        CosetRep::Skew { kx, ky, kz, u, .. } => {
            let mut ur = [0u64; MAX_F];
            for (t, &c) in u.iter().enumerate().take(MAX_F) {
                ur[t] = c;
            }
            let z = ring.from_parts(*kz, ur, m);
            unipotent_s(ring, &pw(*kx), &pw(*ky), &z)
        }
    };
    Ok(torus_t(ring, i, j).mul(ring, &s))
}

const KL_POSITIONS: [(usize, usize); 5] = [(1, 0), (2, 0), (3, 0), (3, 1), (3, 2)];

/// Whether `h` lies in `Kl(n)`, deciding every entry from its known digits.
pub fn in_klingen(ring: &PadicRing, h: &PadicMat, n: i64) -> Result<bool> {
    for r in 0..4 {
        for c in 0..4 {
            let bound = if KL_POSITIONS.contains(&(r, c)) { n } else { 0 };
            match ring.val_at_least(&h.e[r][c], bound) {
                Some(true) => {}
                Some(false) => return Ok(false),
                None => return Err(Error::PrecisionInsufficient),
            }
        }
    }
    match ring.val_at_least(&h.similitude(ring), 1) {
        Some(false) => Ok(true),
        Some(true) => Ok(false),
        None => Err(Error::PrecisionInsufficient),
    }
}

/// Reduction modulo `p` of an integral matrix with unit similitude, or
/// `None` if some entry is provably non-integral.
pub fn reduce_if_integral(ring: &PadicRing, k: &PadicMat) -> Result<Option<GSpElem>> {
    let mut raw: Raw = [0; 16];
    for r in 0..4 {
        for c in 0..4 {
            match ring.val_at_least(&k.e[r][c], 0) {
                Some(true) => raw[4 * r + c] = ring.reduce(&k.e[r][c]),
                Some(false) => return Ok(None),
                None => return Err(Error::PrecisionInsufficient),
            }
        }
    }
    GSpElem::from_raw(ring.field(), raw).map(Some)
}

/// `g h g^{-1}` reduced modulo `p` when it lies in `K`.
pub fn conjugate_reduce(ring: &PadicRing, g: &PadicMat, h: &PadicMat, n: i64) -> Result<Option<GSpElem>> {
    if !in_klingen(ring, h, n)? {
        return Err(Error::Usage("conjugate_reduce expects an element of Kl(n)".into()));
    }
    let ginv = g.gsp_inverse(ring)?;
    reduce_if_integral(ring, &g.mul(ring, h).mul(ring, &ginv))
}

/// Root subgroup elements of `GSp(4)`: four positive roots then their transposes.
pub fn root_element(ring: &PadicRing, root: usize, c: &TruncAdic) -> PadicMat {
    let mut m = PadicMat::identity(ring);
    let mut put = |r: usize, col: usize, x: TruncAdic| {
        if root < 4 {
            m.e[r][col] = x;
        } else {
            m.e[col][r] = x;
        }
    };
    match root % 4 {
        0 => {
            put(0, 1, c.clone());
            put(2, 3, ring.neg(c));
        }
        1 => {
            put(0, 2, c.clone());
            put(1, 3, c.clone());
        }
        2 => put(0, 3, c.clone()),
        _ => put(1, 2, c.clone()),
    }
    m
}

/// Minimal valuation of the root parameter inside `Kl(n)`.
fn klingen_level(root: usize, n: i64) -> i64 {
    match root {
        4..=6 => n,
        _ => 0,
    }
}

/// Random elements of `Kl(n)` built as short products of root and torus elements.
pub struct KlingenSampler {
    ring: Ring,
    n: i64,
    prec: u32,
    extra: i64,
    rng: ChaCha8Rng,
}

impl KlingenSampler {
    pub fn new(ring: &Ring, n: i64, prec: u32, seed: u64) -> Self {
        KlingenSampler {
            ring: ring.clone(),
            n,
            prec,
            extra: 2,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn param(&mut self, level: i64) -> TruncAdic {
        let extra = if self.rng.gen_bool(0.5) {
            0
        } else {
            self.rng.gen_range(1..=self.extra.max(1))
        };
        let u = self.ring.res_random_unit(&mut self.rng, self.prec);
        self.ring.from_parts(level + extra, u, self.prec)
    }

    fn torus(&mut self) -> PadicMat {
        let r = self.ring.clone();
        let a = r.from_parts(0, r.res_random_unit(&mut self.rng, self.prec), self.prec);
        let b = r.from_parts(0, r.res_random_unit(&mut self.rng, self.prec), self.prec);
        let c = r.from_parts(0, r.res_random_unit(&mut self.rng, self.prec), self.prec);
        let cb = r.mul(&c, &r.inv(&b).unwrap());
        let ca = r.mul(&c, &r.inv(&a).unwrap());
        PadicMat::diag(&r, [a, b, cb, ca])
    }

    /// One factor; `levels` maps a root index to its minimal valuation.
    fn factor(&mut self, levels: impl Fn(usize) -> i64) -> PadicMat {
        let pick = self.rng.gen_range(0..9);
        if pick == 8 {
            return self.torus();
        }
        let c = self.param(levels(pick));
        root_element(&self.ring, pick, &c)
    }

    fn product(&mut self, levels: impl Fn(usize) -> i64 + Copy) -> PadicMat {
        let mut h = self.factor(levels);
        if self.rng.gen_bool(0.5) {
            let k = self.factor(levels);
            h = h.mul(&self.ring, &k);
        }
        h
    }

    /// An element of `Kl(n)`.
    pub fn sample(&mut self) -> PadicMat {
        let n = self.n;
        self.product(move |root| klingen_level(root, n))
    }

    /// An element of `K = GSp(4, o)`.
    pub fn sample_k(&mut self) -> PadicMat {
        self.product(|_| 0)
    }
}

/// Smallest `t` such that `p^t m` has `val(m_rc) + t >= offset_rc` everywhere,
/// reading an imprecise zero as its known lower bound.
fn scale_needed(m: &PadicMat, offset: impl Fn(usize, usize) -> i64) -> i64 {
    let mut t = i64::MIN;
    for r in 0..4 {
        for c in 0..4 {
            let v = match &m.e[r][c] {
                TruncAdic::Zero { abs: None } => continue,
                TruncAdic::Zero { abs: Some(a) } => *a,
                TruncAdic::Nonzero { val, .. } => *val,
            };
            t = t.max(offset(r, c) - v);
        }
    }
    t
}

fn klingen_offset(n: i64) -> impl Fn(usize, usize) -> i64 {
    move |r, c| if KL_POSITIONS.contains(&(r, c)) { n } else { 0 }
}

impl KlingenSampler {
    fn random_vector(&mut self) -> [TruncAdic; 4] {
        let r = self.ring.clone();
        std::array::from_fn(|_| {
            if self.rng.gen_ratio(1, 5) {
                r.zero_exact()
            } else {
                let e = self.rng.gen_range(0..=self.extra.max(1));
                let u = r.res_random_unit(&mut self.rng, self.prec);
                r.from_parts(e, u, self.prec)
            }
        })
    }

    /// `v v^T J` for a random vector `v`; `I + c v v^T J` is a symplectic
    /// transvection for every scalar `c`.
    fn transvection_direction(&mut self) -> PadicMat {
        let r = self.ring.clone();
        let v = self.random_vector();
        let mut vv = PadicMat::identity(&r);
        for a in 0..4 {
            for b in 0..4 {
                vv.e[a][b] = r.mul(&v[a], &v[b]);
            }
        }
        vv.mul(&r, &PadicMat::j(&r))
    }

    /// `I + p^t u dir` for a random unit `u`, `t` bumped by one 30% of the time.
    fn transvection(&mut self, dir: &PadicMat, t: i64) -> PadicMat {
        let r = self.ring.clone();
        let extra = if self.rng.gen_bool(0.7) { 0 } else { 1 };
        let c = r.from_parts(t + extra, r.res_random_unit(&mut self.rng, self.prec), self.prec);
        let mut m = PadicMat::identity(&r);
        for a in 0..4 {
            for b in 0..4 {
                m.e[a][b] = r.add(&m.e[a][b], &r.mul(&c, &dir.e[a][b]));
            }
        }
        m
    }
}

/// Randomized lower bound for `R_g`: the subgroup generated by reductions of
/// sampled elements of `g Kl(n) g^{-1} ∩ K`.
///
/// Proposals rotate between: a short product `h` of root and torus elements
/// of `Kl(n)` conjugated into `K`; a short product `k` in `K` kept when
/// `g^{-1} k g ∈ Kl(n)`; a transvection `I + c v v^T J`; and a single root
/// element. For the last two the scalar is chosen just large enough for both
/// integrality conditions, on either side.
pub fn estimate_rg(rep: &CosetRep, n: i64, q: u64, budget: usize, seed: u64) -> Result<Subgroup> {
    if budget == 0 {
        return Err(Error::Usage("budget must be positive".into()));
    }
    let ring = PadicRing::new(q)?;
    let m = min_precision(rep, n, ring.p());
    let g = build_rep(&ring, rep, n, m)?;
    let ginv = g.gsp_inverse(&ring)?;
    let mut sampler = KlingenSampler::new(&ring, n, m, seed);
    sampler.extra = spread(rep.i(), rep.j(ring.p(), n)) + 1;
    let conj = |x: &PadicMat| g.mul(&ring, x).mul(&ring, &ginv);
    let unconj = |x: &PadicMat| ginv.mul(&ring, x).mul(&ring, &g);

    // root directions E_r = x_r(1) - I, each with the smallest scale that
    // lands in both Kl(n) and, after conjugation, in K
    let one = ring.one();
    let roots: Vec<(PadicMat, i64, i64)> = (0..8)
        .map(|r| {
            let mut d = root_element(&ring, r, &one);
            for a in 0..4 {
                d.e[a][a] = ring.sub(&d.e[a][a], &one);
            }
            let from_kl = scale_needed(&d, klingen_offset(n)).max(scale_needed(&conj(&d), |_, _| 0));
            let from_k = scale_needed(&d, |_, _| 0).max(scale_needed(&unconj(&d), klingen_offset(n)));
            (d, from_kl, from_k)
        })
        .collect();

    let batch = (budget / 10).max(1);
    let mut gens: Vec<GSpElem> = Vec::new();
    let mut group = subgroup_closure(ring.field(), &[])?;
    let mut stable = 0;
    let mut used = 0;
    while used < budget {
        let before = group.order();
        for _ in 0..batch.min(budget - used) {
            used += 1;
            let found = match used % 6 {
                4 | 5 => {
                    let (dir, from_kl, from_k) = &roots[sampler.rng.gen_range(0..roots.len())];
                    if used % 6 == 4 {
                        let h = sampler.transvection(dir, *from_kl);
                        if in_klingen(&ring, &h, n)? {
                            reduce_if_integral(&ring, &conj(&h))?
                        } else {
                            None
                        }
                    } else {
                        let k = sampler.transvection(dir, *from_k);
                        if in_klingen(&ring, &unconj(&k), n)? {
                            reduce_if_integral(&ring, &k)?
                        } else {
                            None
                        }
                    }
                }
                0 => {
                    let h = sampler.sample();
                    reduce_if_integral(&ring, &conj(&h))?
                }
                1 => {
                    let k = sampler.sample_k();
                    if in_klingen(&ring, &unconj(&k), n)? {
                        reduce_if_integral(&ring, &k)?
                    } else {
                        None
                    }
                }
                2 => {
                    // transvection inside Kl(n), scaled to land in K after conjugation
                    let dir = sampler.transvection_direction();
                    let t = scale_needed(&dir, klingen_offset(n)).max(scale_needed(&conj(&dir), |_, _| 0));
                    let h = sampler.transvection(&dir, t);
                    if in_klingen(&ring, &h, n)? {
                        reduce_if_integral(&ring, &conj(&h))?
                    } else {
                        None
                    }
                }
                _ => {
                    // transvection inside K, scaled so that its pullback lies in Kl(n)
                    let dir = sampler.transvection_direction();
                    let t = scale_needed(&dir, |_, _| 0).max(scale_needed(&unconj(&dir), klingen_offset(n)));
                    let k = sampler.transvection(&dir, t);
                    if in_klingen(&ring, &unconj(&k), n)? {
                        reduce_if_integral(&ring, &k)?
                    } else {
                        None
                    }
                }
            };
            if let Some(x) = found {
                if !group.contains(x.raw()) {
                    gens.push(x.clone());
                    group = subgroup_closure(ring.field(), &gens)?;
                }
            }
        }
        if group.order() == before {
            stable += 1;
            if stable >= 3 {
                return Ok(group);
            }
        } else {
            stable = 0;
        }
    }
    Err(Error::NonConvergence { budget })
}

/// The subgroup listed for the representative's family.
pub fn predicted_rg(rep: &CosetRep, n: i64, q: u64) -> Result<Subgroup> {
    let name = match rep {
        CosetRep::Diagonal { i, j } => {
            if *j == 0 {
                "Row3"
            } else if *i <= 0 {
                "Row1"
            } else if 2 * i + j < n {
                "Row4"
            } else {
                "Row2"
            }
        }
        CosetRep::Z { .. } => "Row5",
        CosetRep::X { .. } => "Row6",
        CosetRep::Y { .. } => "Row7",
        CosetRep::Skew { .. } => "Row8",
    };
    named_subgroup(name, q)
}

/// Whether `small` lies in some diagonal conjugate `d big d^{-1}`.
pub fn contained_up_to_diagonal(small: &Subgroup, big: &Subgroup) -> bool {
    use crate::groupfq::{raw_inverse, raw_mul, raw_similitude};
    let f = &**small.field();
    let units: Vec<u16> = (1..f.order() as u16).collect();
    for &a in &units {
        for &b in &units {
            for &c in &units {
                let mut d = [0u16; 16];
                d[0] = a;
                d[5] = b;
                d[10] = f.mul(c, f.inv(b).unwrap());
                d[15] = f.mul(c, f.inv(a).unwrap());
                let di = raw_inverse(f, &d, raw_similitude(f, &d).unwrap());
                // d^{-1} x d must lie in big
                if small
                    .raw_elements()
                    .iter()
                    .all(|x| big.contains(&raw_mul(f, &raw_mul(f, &di, x), &d)))
                {
                    return true;
                }
            }
        }
    }
    false
}
