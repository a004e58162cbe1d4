//! The finite group `GSp(4, F_q)` as concrete 4x4 matrices.
//!
//! The symplectic form is the antidiagonal `J` with `J[0][3] = J[1][2] = 1`
//! and `J[2][1] = J[3][0] = -1`; an element satisfies `g^T J g = mu(g) J`.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::ffield::{field_of_order, Field, FieldSpec, FqElem};

/// Raw entry indices in row-major order.
pub type Raw = [u16; 16];

/// Default bound on subgroup closures.
pub const CLOSURE_BOUND: usize = 1_000_000;
/// Largest group for which conjugacy classes are computed.
pub const CLASS_BOUND: usize = 100_000;
/// Largest order materialized by [`enumerate_gsp4`].
pub const MATERIALIZE_BOUND: u64 = 1_000_000;
/// Largest order accepted by [`stream_gsp4`] with the opt-in flag.
pub const STREAM_BOUND: u64 = 50_000_000;

/// `|GSp(4, q)| = (q-1) q^4 (q^2-1) (q^4-1)`.
pub fn gsp4_order(q: u64) -> u64 {
    (q - 1) * q.pow(4) * (q * q - 1) * (q.pow(4) - 1)
}

#[inline]
fn idx(r: usize, c: usize) -> usize {
    4 * r + c
}

pub fn raw_identity() -> Raw {
    let mut e = [0u16; 16];
    for i in 0..4 {
        e[idx(i, i)] = 1;
    }
    e
}

pub fn raw_mul(f: &FieldSpec, a: &Raw, b: &Raw) -> Raw {
    let mut out = [0u16; 16];
    for r in 0..4 {
        for c in 0..4 {
            let mut s = 0u16;
            for k in 0..4 {
                let x = a[idx(r, k)];
                let y = b[idx(k, c)];
                if x != 0 && y != 0 {
                    s = f.add(s, f.mul(x, y));
                }
            }
            out[idx(r, c)] = s;
        }
    }
    out
}

pub fn raw_transpose(a: &Raw) -> Raw {
    let mut out = [0u16; 16];
    for r in 0..4 {
        for c in 0..4 {
            out[idx(c, r)] = a[idx(r, c)];
        }
    }
    out
}

pub fn raw_scale(f: &FieldSpec, s: u16, a: &Raw) -> Raw {
    a.map(|x| f.mul(s, x))
}

pub fn raw_sub(f: &FieldSpec, a: &Raw, b: &Raw) -> Raw {
    let mut out = [0u16; 16];
    for i in 0..16 {
        out[i] = f.sub(a[i], b[i]);
    }
    out
}

pub fn raw_add(f: &FieldSpec, a: &Raw, b: &Raw) -> Raw {
    let mut out = [0u16; 16];
    for i in 0..16 {
        out[i] = f.add(a[i], b[i]);
    }
    out
}

/// The form `J`.
pub fn raw_j(f: &FieldSpec) -> Raw {
    let mut e = [0u16; 16];
    e[idx(0, 3)] = 1;
    e[idx(1, 2)] = 1;
    e[idx(2, 1)] = f.neg(1);
    e[idx(3, 0)] = f.neg(1);
    e
}

/// `mu` with `m^T J m = mu J`, if it exists and is nonzero.
pub fn raw_similitude(f: &FieldSpec, m: &Raw) -> Option<u16> {
    let j = raw_j(f);
    let g = raw_mul(f, &raw_mul(f, &raw_transpose(m), &j), m);
    let mu = g[idx(0, 3)];
    if mu == 0 {
        return None;
    }
    (g == raw_scale(f, mu, &j)).then_some(mu)
}

/// Inverse of an element with similitude `mu`: `mu^{-1} (-J) m^T J`.
pub fn raw_inverse(f: &FieldSpec, m: &Raw, mu: u16) -> Raw {
    let j = raw_j(f);
    let neg_j = j.map(|x| f.neg(x));
    let t = raw_mul(f, &raw_mul(f, &neg_j, &raw_transpose(m)), &j);
    raw_scale(f, f.inv(mu).expect("similitude is nonzero"), &t)
}

/// Rank over the field by Gaussian elimination.
pub fn raw_rank(f: &FieldSpec, m: &Raw) -> usize {
    let mut a = *m;
    let mut rank = 0;
    for c in 0..4 {
        let Some(p) = (rank..4).find(|&r| a[idx(r, c)] != 0) else {
            continue;
        };
        for k in 0..4 {
            a.swap(idx(rank, k), idx(p, k));
        }
        let inv = f.inv(a[idx(rank, c)]).unwrap();
        for r in 0..4 {
            if r != rank && a[idx(r, c)] != 0 {
                let factor = f.mul(a[idx(r, c)], inv);
                for k in 0..4 {
                    let v = f.mul(factor, a[idx(rank, k)]);
                    a[idx(r, k)] = f.sub(a[idx(r, k)], v);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn raw_det(f: &FieldSpec, m: &Raw) -> u16 {
    let mut a = *m;
    let mut det = 1u16;
    for c in 0..4 {
        let Some(p) = (c..4).find(|&r| a[idx(r, c)] != 0) else {
            return 0;
        };
        if p != c {
            for k in 0..4 {
                a.swap(idx(c, k), idx(p, k));
            }
            det = f.neg(det);
        }
        let piv = a[idx(c, c)];
        det = f.mul(det, piv);
        let inv = f.inv(piv).unwrap();
        for r in c + 1..4 {
            if a[idx(r, c)] != 0 {
                let factor = f.mul(a[idx(r, c)], inv);
                for k in 0..4 {
                    let v = f.mul(factor, a[idx(c, k)]);
                    a[idx(r, k)] = f.sub(a[idx(r, k)], v);
                }
            }
        }
    }
    det
}

/// A 4x4 matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat4 {
    field: Field,
    e: Raw,
}

impl fmt::Debug for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..4 {
            let row: Vec<String> = (0..4).map(|c| self.entry(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Mat4 {
    pub fn from_raw(field: &Field, e: Raw) -> Self {
        assert!(e.iter().all(|&x| (x as u32) < field.order()));
        Mat4 {
            field: field.clone(),
            e,
        }
    }

    /// Matrix with integer entries mapped through `Z -> F_p`.
    pub fn from_ints(field: &Field, rows: [[i64; 4]; 4]) -> Self {
        let mut e = [0u16; 16];
        for r in 0..4 {
            for c in 0..4 {
                e[idx(r, c)] = field.from_int(rows[r][c]);
            }
        }
        Mat4 {
            field: field.clone(),
            e,
        }
    }

    pub fn from_elems(rows: [[FqElem; 4]; 4]) -> Result<Self> {
        let field = rows[0][0].field().clone();
        let mut e = [0u16; 16];
        for r in 0..4 {
            for c in 0..4 {
                if *rows[r][c].field() != field {
                    return Err(Error::MixedFields);
                }
                e[idx(r, c)] = rows[r][c].index();
            }
        }
        Ok(Mat4 { field, e })
    }

    pub fn identity(field: &Field) -> Self {
        Mat4::from_raw(field, raw_identity())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw(&self) -> &Raw {
        &self.e
    }

    pub fn entry(&self, r: usize, c: usize) -> FqElem {
        FqElem::new(&self.field, self.e[idx(r, c)])
    }

    pub fn mul(&self, other: &Mat4) -> Result<Mat4> {
        if *self.field != *other.field {
            return Err(Error::MixedFields);
        }
        Ok(Mat4 {
            field: self.field.clone(),
            e: raw_mul(&self.field, &self.e, &other.e),
        })
    }

    pub fn det(&self) -> FqElem {
        FqElem::new(&self.field, raw_det(&self.field, &self.e))
    }

    pub fn rank(&self) -> usize {
        raw_rank(&self.field, &self.e)
    }
}

/// `mu` with `m^T J m = mu J`, or `None` when `m` is not in `GSp(4)`.
pub fn similitude(m: &Mat4) -> Option<FqElem> {
    raw_similitude(&m.field, &m.e).map(|mu| FqElem::new(&m.field, mu))
}

/// An element of `GSp(4, F_q)` with its similitude.
#[derive(Clone, PartialEq, Eq)]
pub struct GSpElem {
    m: Mat4,
    mu: u16,
}

impl fmt::Debug for GSpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m)
    }
}

impl GSpElem {
    pub fn new(m: Mat4) -> Result<Self> {
        let mu = raw_similitude(&m.field, &m.e).ok_or(Error::NotSymplectic)?;
        Ok(GSpElem { m, mu })
    }

    pub fn from_raw(field: &Field, e: Raw) -> Result<Self> {
        Self::new(Mat4::from_raw(field, e))
    }

    pub fn from_ints(field: &Field, rows: [[i64; 4]; 4]) -> Result<Self> {
        Self::new(Mat4::from_ints(field, rows))
    }

    pub fn identity(field: &Field) -> Self {
        GSpElem {
            m: Mat4::identity(field),
            mu: 1,
        }
    }

    pub fn mat(&self) -> &Mat4 {
        &self.m
    }

    pub fn raw(&self) -> &Raw {
        &self.m.e
    }

    pub fn field(&self) -> &Field {
        &self.m.field
    }

    pub fn mu(&self) -> FqElem {
        FqElem::new(&self.m.field, self.mu)
    }
}

pub fn group_mul(a: &GSpElem, b: &GSpElem) -> Result<GSpElem> {
    let m = a.m.mul(&b.m)?;
    let mu = a.m.field.mul(a.mu, b.mu);
    Ok(GSpElem { m, mu })
}

pub fn group_inv(a: &GSpElem) -> GSpElem {
    let f = &a.m.field;
    GSpElem {
        m: Mat4::from_raw(f, raw_inverse(f, &a.m.e, a.mu)),
        mu: f.inv(a.mu).unwrap(),
    }
}

/// Weyl generator `s_1`.
pub fn s1(field: &Field) -> GSpElem {
    GSpElem::from_ints(
        field,
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    )
    .unwrap()
}

/// Weyl generator `s_2`.
pub fn s2(field: &Field) -> GSpElem {
    GSpElem::from_ints(
        field,
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, -1, 0, 0], [0, 0, 0, 1]],
    )
    .unwrap()
}

/// A finite subgroup stored as its sorted element list.
#[derive(Clone)]
pub struct Subgroup {
    field: Field,
    elements: Vec<Raw>,
    generators: Vec<Raw>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgroup(q={}, order={})",
            self.field.order(),
            self.elements.len()
        )
    }
}

impl Subgroup {
    fn from_parts(field: &Field, mut elements: Vec<Raw>, generators: Vec<Raw>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup {
            field: field.clone(),
            elements,
            generators,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in lexicographic order of their flattened entries.
    pub fn raw_elements(&self) -> &[Raw] {
        &self.elements
    }

    pub fn raw_generators(&self) -> &[Raw] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = GSpElem> + '_ {
        self.elements
            .iter()
            .map(|e| GSpElem::from_raw(&self.field, *e).expect("subgroup elements are symplectic"))
    }

    pub fn contains(&self, e: &Raw) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn position(&self, e: &Raw) -> Option<usize> {
        self.elements.binary_search(e).ok()
    }

    /// Checks closure under products and inverses exhaustively.
    pub fn is_closed(&self) -> bool {
        let f = &*self.field;
        self.elements.iter().all(|a| {
            let mu = raw_similitude(f, a).unwrap();
            self.contains(&raw_inverse(f, a, mu))
                && self
                    .elements
                    .iter()
                    .all(|b| self.contains(&raw_mul(f, a, b)))
        })
    }
}

/// Smallest subgroup containing `gens`, with the default bound.
pub fn subgroup_closure(field: &Field, gens: &[GSpElem]) -> Result<Subgroup> {
    subgroup_closure_bounded(field, gens, CLOSURE_BOUND)
}

pub fn subgroup_closure_bounded(field: &Field, gens: &[GSpElem], bound: usize) -> Result<Subgroup> {
    if gens.iter().any(|g| **g.field() != **field) {
        return Err(Error::MixedFields);
    }
    let f = &**field;
    let graw: Vec<Raw> = gens.iter().map(|g| *g.raw()).collect();
    let id = raw_identity();
    let mut seen: FxHashSet<Raw> = FxHashSet::default();
    seen.insert(id);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &graw {
            let y = raw_mul(f, &x, g);
            if seen.insert(y) {
                if seen.len() > bound {
                    return Err(Error::ClosureTooLarge { bound });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(Subgroup::from_parts(field, seen.into_iter().collect(), graw))
}

/// Subgroup given by an explicit element list; generators are the elements.
fn from_list(field: &Field, elements: Vec<Raw>) -> Subgroup {
    let s = Subgroup::from_parts(field, elements, Vec::new());
    let gens = s.elements.clone();
    Subgroup {
        generators: gens,
        ..s
    }
}

/// Runs `f` on every tuple in `F_q^units x F_q^free`, units ranging over nonzero values.
fn for_params(q: u16, units: usize, free: usize, mut f: impl FnMut(&[u16])) {
    let n = units + free;
    let mut t: Vec<u16> = (0..n).map(|i| if i < units { 1 } else { 0 }).collect();
    loop {
        f(&t);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            t[k] += 1;
            if t[k] < q {
                break;
            }
            t[k] = if k < units { 1 } else { 0 };
            k += 1;
        }
    }
}

/// All elements of `GSp(4)` whose support lies in `pattern`.
fn pattern_group(field: &Field, pattern: &[(usize, usize)]) -> Subgroup {
    let f = &**field;
    let diag: Vec<usize> = pattern.iter().filter(|(r, c)| r == c).map(|p| idx(p.0, p.1)).collect();
    let off: Vec<usize> = pattern.iter().filter(|(r, c)| r != c).map(|p| idx(p.0, p.1)).collect();
    let mut out = Vec::new();
    for_params(f.order() as u16, diag.len(), off.len(), |t| {
        let mut e = [0u16; 16];
        for (k, &p) in diag.iter().chain(off.iter()).enumerate() {
            e[p] = t[k];
        }
        if raw_similitude(f, &e).is_some() {
            out.push(e);
        }
    });
    from_list(field, out)
}

/// Elements built from parameters, keeping only the symplectic ones.
fn param_group(field: &Field, units: usize, free: usize, build: impl Fn(&FieldSpec, &[u16]) -> Raw) -> Subgroup {
    let f = &**field;
    let mut out = Vec::new();
    for_params(f.order() as u16, units, free, |t| {
        let e = build(f, t);
        if raw_similitude(f, &e).is_some() {
            out.push(e);
        }
    });
    from_list(field, out)
}

fn set(e: &mut Raw, r: usize, c: usize, v: u16) {
    e[idx(r - 1, c - 1)] = v;
}

/// Names accepted by [`named_subgroup`].
pub const SUBGROUP_NAMES: &[&str] = &[
    "U_S", "U_K", "CenterX", "Center", "M", "M1", "KlingenR", "S", "SSp", "A", "B", "C", "D",
    "R_last", "Row1", "Row2", "Row3", "Row4", "Row5", "Row6", "Row7", "Row8",
];

/// The literal matrix groups used in the fixed-vector analysis, over `F_q`.
pub fn named_subgroup(name: &str, q: u64) -> Result<Subgroup> {
    if !SUBGROUP_NAMES.contains(&name) {
        return Err(Error::UnknownName(name.to_string()));
    }
    let field = field_of_order(q)?;
    Ok(named_subgroup_in(name, &field))
}

fn named_subgroup_in(name: &str, field: &Field) -> Subgroup {
    let id = raw_identity();
    match name {
        "U_S" => param_group(field, 0, 3, |_, t| {
            let mut e = id;
            set(&mut e, 3, 1, t[0]);
            set(&mut e, 3, 2, t[1]);
            set(&mut e, 4, 1, t[2]);
            set(&mut e, 4, 2, t[0]);
            e
        }),
        "U_K" => param_group(field, 0, 3, |f, t| unipotent_s(f, t[0], t[1], t[2])),
        "CenterX" => param_group(field, 0, 1, |_, t| {
            let mut e = id;
            set(&mut e, 1, 4, t[0]);
            e
        }),
        "Center" => param_group(field, 1, 0, |f, t| raw_scale(f, t[0], &id)),
        // lambda * diag(1, D, det D)
        "M" => param_group(field, 1, 4, |f, t| {
            let mut e = [0u16; 16];
            let det = f.sub(f.mul(t[1], t[4]), f.mul(t[2], t[3]));
            set(&mut e, 1, 1, 1);
            set(&mut e, 2, 2, t[1]);
            set(&mut e, 2, 3, t[2]);
            set(&mut e, 3, 2, t[3]);
            set(&mut e, 3, 3, t[4]);
            set(&mut e, 4, 4, det);
            raw_scale(f, t[0], &e)
        }),
        "M1" => klingen_r(field, false),
        "KlingenR" => klingen_r(field, true),
        "S" => pattern_group(field, &[(0, 0), (1, 1), (2, 2), (3, 3), (2, 0), (3, 0), (3, 1)])
            .filtered(|f, e| e[idx(0, 0)] == e[idx(2, 2)] && e[idx(1, 1)] == e[idx(3, 3)] && raw_similitude(f, e).is_some()),
        "SSp" => named_subgroup_in("S", field).filtered(|f, e| raw_similitude(f, e) == Some(1)),
        "A" => param_group(field, 2, 2, |f, t| {
            let (a, d, x, z) = (t[0], t[1], t[2], t[3]);
            let mut e = [0u16; 16];
            let dinv = f.inv(d).unwrap();
            set(&mut e, 1, 1, a);
            set(&mut e, 2, 1, x);
            set(&mut e, 2, 2, f.mul(a, d));
            set(&mut e, 3, 3, f.mul(a, dinv));
            set(&mut e, 4, 1, z);
            set(&mut e, 4, 3, f.neg(f.mul(x, dinv)));
            set(&mut e, 4, 4, a);
            e
        }),
        "B" => borel_like(field, false, false),
        "C" => borel_like(field, true, false),
        "D" => borel_like(field, false, true),
        "R_last" => param_group(field, 0, 3, |f, t| {
            let mut v = id;
            set(&mut v, 3, 2, t[0]);
            raw_mul(f, &unipotent_s(f, t[0], t[1], t[2]), &v)
        }),
        "Row1" => pattern_group(field, &[(0, 0), (0, 1), (1, 1), (2, 1), (2, 2), (2, 3), (3, 3)]),
        "Row2" => pattern_group(field, &[(0, 0), (1, 1), (2, 1), (2, 2), (3, 0), (3, 3)]),
        "Row3" => named_subgroup_in("M", field),
        "Row4" => named_subgroup_in("B", field),
        // diag(a, ad, a/d, a) with free (3,2) and (4,1) entries
        "Row5" => param_group(field, 2, 2, |f, t| {
            let (a, d) = (t[0], t[1]);
            let mut e = [0u16; 16];
            set(&mut e, 1, 1, a);
            set(&mut e, 2, 2, f.mul(a, d));
            set(&mut e, 3, 3, f.mul(a, f.inv(d).unwrap()));
            set(&mut e, 4, 4, a);
            set(&mut e, 3, 2, t[2]);
            set(&mut e, 4, 1, t[3]);
            e
        }),
        "Row6" => param_group(field, 2, 3, |_, t| {
            let (a, d) = (t[0], t[1]);
            let mut e = [0u16; 16];
            set(&mut e, 1, 1, a);
            set(&mut e, 2, 2, a);
            set(&mut e, 3, 3, d);
            set(&mut e, 4, 4, d);
            set(&mut e, 2, 1, t[2]);
            set(&mut e, 4, 1, t[3]);
            set(&mut e, 4, 3, t[4]);
            e
        }),
        "Row7" => param_group(field, 2, 3, |_, t| {
            let (a, d) = (t[0], t[1]);
            let mut e = [0u16; 16];
            set(&mut e, 1, 1, a);
            set(&mut e, 2, 2, d);
            set(&mut e, 3, 3, a);
            set(&mut e, 4, 4, d);
            set(&mut e, 3, 1, t[2]);
            set(&mut e, 3, 2, t[3]);
            set(&mut e, 4, 2, t[4]);
            e
        }),
        // scalars times R_last
        "Row8" => param_group(field, 1, 3, |f, t| {
            let mut v = id;
            set(&mut v, 3, 2, t[1]);
            raw_scale(f, t[0], &raw_mul(f, &unipotent_s(f, t[1], t[2], t[3]), &v))
        }),
        _ => unreachable!("name checked by caller"),
    }
}

impl Subgroup {
    fn filtered(self, keep: impl Fn(&FieldSpec, &Raw) -> bool) -> Subgroup {
        let f = self.field.clone();
        let elements: Vec<Raw> = self.elements.into_iter().filter(|e| keep(&f, e)).collect();
        from_list(&f, elements)
    }
}

/// `S(x, y, z)`, the lower unipotent matrix of the Klingen radical.
pub fn unipotent_s(f: &FieldSpec, x: u16, y: u16, z: u16) -> Raw {
    let mut e = raw_identity();
    set(&mut e, 2, 1, x);
    set(&mut e, 3, 1, y);
    set(&mut e, 4, 1, z);
    set(&mut e, 4, 2, y);
    set(&mut e, 4, 3, f.neg(x));
    e
}

/// `[1; D; x 1]` with `D` in `SL(2)`; `with_x = false` forces `x = 0`.
fn klingen_r(field: &Field, with_x: bool) -> Subgroup {
    param_group(field, 0, if with_x { 5 } else { 4 }, |f, t| {
        let det = f.sub(f.mul(t[0], t[3]), f.mul(t[1], t[2]));
        let mut e = [0u16; 16];
        if det != 1 {
            return e;
        }
        set(&mut e, 1, 1, 1);
        set(&mut e, 2, 2, t[0]);
        set(&mut e, 2, 3, t[1]);
        set(&mut e, 3, 2, t[2]);
        set(&mut e, 3, 3, t[3]);
        set(&mut e, 4, 4, 1);
        if with_x {
            set(&mut e, 4, 1, t[4]);
        }
        e
    })
}

/// `diag(a, b, c/b, c/a)` with free `(3,2)` entry, plus `(4,1)` for `C` or
/// the coupled `(1,2)`, `(3,4)` pair for `D`.
fn borel_like(field: &Field, with_41: bool, with_12: bool) -> Subgroup {
    let extra = usize::from(with_41 || with_12);
    param_group(field, 3, 1 + extra, move |f, t| {
        let (a, b, c, x) = (t[0], t[1], t[2], t[3]);
        let mut e = [0u16; 16];
        let cb = f.mul(c, f.inv(b).unwrap());
        set(&mut e, 1, 1, a);
        set(&mut e, 2, 2, b);
        set(&mut e, 3, 3, cb);
        set(&mut e, 4, 4, f.mul(c, f.inv(a).unwrap()));
        set(&mut e, 3, 2, x);
        if with_41 {
            set(&mut e, 4, 1, t[4]);
        }
        if with_12 {
            let y = t[4];
            set(&mut e, 1, 2, f.mul(a, y));
            set(&mut e, 3, 4, f.neg(f.mul(cb, y)));
        }
        e
    })
}

/// Positive root elements, one per root and basis vector of `F_q / F_p`,
/// together with their transposes and a torus element of nontrivial similitude.
pub fn gsp4_generators(field: &Field) -> Vec<GSpElem> {
    let f = &**field;
    let basis: Vec<u16> = (0..f.degree())
        .map(|i| {
            let mut c = vec![0u32; f.degree() as usize];
            c[i as usize] = 1;
            f.from_coeffs(&c)
        })
        .collect();
    let mut gens = Vec::new();
    for &t in &basis {
        let mut roots = Vec::new();
        let mut e = raw_identity();
        set(&mut e, 1, 2, t);
        set(&mut e, 3, 4, f.neg(t));
        roots.push(e);
        let mut e = raw_identity();
        set(&mut e, 1, 3, t);
        set(&mut e, 2, 4, t);
        roots.push(e);
        let mut e = raw_identity();
        set(&mut e, 1, 4, t);
        roots.push(e);
        let mut e = raw_identity();
        set(&mut e, 2, 3, t);
        roots.push(e);
        for r in roots {
            gens.push(GSpElem::from_raw(field, r).unwrap());
            gens.push(GSpElem::from_raw(field, raw_transpose(&r)).unwrap());
        }
    }
    let g = f.primitive_element();
    let mut d = raw_identity();
    set(&mut d, 3, 3, g);
    set(&mut d, 4, 4, g);
    gens.push(GSpElem::from_raw(field, d).unwrap());
    // a scalar so that the torus is fully covered in characteristic 2 as well
    gens.push(GSpElem::from_raw(field, raw_scale(f, g, &raw_identity())).unwrap());
    gens
}

/// Streams every element of `GSp(4, q)` through `visit` using the Bruhat
/// decomposition `g = u1 w t u2`, with `u1` in `U ∩ w U^- w^{-1}`.
/// Returns the number of elements visited.
pub fn stream_gsp4(q: u64, allow_large: bool, mut visit: impl FnMut(&Raw)) -> Result<u64> {
    let order = gsp4_order(q);
    let bound = if allow_large { STREAM_BOUND } else { MATERIALIZE_BOUND };
    if order > bound {
        return Err(Error::GroupTooLarge { order, bound });
    }
    let field = field_of_order(q)?;
    let f = &*field;
    let qq = q as u16;

    let weyl = weyl_representatives(&field);
    // upper unitriangular elements of Sp(4)
    let mut upper = Vec::new();
    for_params(qq, 0, 6, |t| {
        let mut e = raw_identity();
        let pos = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (k, &(r, c)) in pos.iter().enumerate() {
            e[idx(r, c)] = t[k];
        }
        if raw_similitude(f, &e) == Some(1) {
            upper.push(e);
        }
    });
    let mut torus = Vec::new();
    for_params(qq, 3, 0, |t| {
        let (a, b, c) = (t[0], t[1], t[2]);
        let mut e = [0u16; 16];
        e[idx(0, 0)] = a;
        e[idx(1, 1)] = b;
        e[idx(2, 2)] = f.mul(c, f.inv(b).unwrap());
        e[idx(3, 3)] = f.mul(c, f.inv(a).unwrap());
        torus.push(e);
    });

    let mut count = 0u64;
    for w in &weyl {
        let winv = raw_inverse(f, w, raw_similitude(f, w).unwrap());
        let u_w: Vec<&Raw> = upper
            .iter()
            .filter(|u| is_lower_triangular(&raw_mul(f, &raw_mul(f, &winv, u), w)))
            .collect();
        for t in &torus {
            let wt = raw_mul(f, w, t);
            for u2 in &upper {
                let wtu = raw_mul(f, &wt, u2);
                for u1 in &u_w {
                    visit(&raw_mul(f, u1, &wtu));
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn is_lower_triangular(e: &Raw) -> bool {
    (0..4).all(|r| (r + 1..4).all(|c| e[idx(r, c)] == 0))
}

/// One matrix per element of the Weyl group, drawn from `<s1, s2>`.
pub fn weyl_representatives(field: &Field) -> Vec<Raw> {
    let group = subgroup_closure(field, &[s1(field), s2(field)]).expect("small group");
    let mut seen: Vec<[bool; 16]> = Vec::new();
    let mut reps = Vec::new();
    for e in group.raw_elements() {
        let support = e.map(|x| x != 0);
        if !seen.contains(&support) {
            seen.push(support);
            reps.push(*e);
        }
    }
    reps
}

/// The whole group, materialized. Requires order at most 10^6.
pub fn enumerate_gsp4(q: u64) -> Result<Subgroup> {
    let order = gsp4_order(q);
    if order > MATERIALIZE_BOUND {
        return Err(Error::GroupTooLarge {
            order,
            bound: MATERIALIZE_BOUND,
        });
    }
    let field = field_of_order(q)?;
    let mut elements = Vec::with_capacity(order as usize);
    stream_gsp4(q, false, |e| elements.push(*e))?;
    let gens = gsp4_generators(&field).iter().map(|g| *g.raw()).collect();
    Ok(Subgroup::from_parts(&field, elements, gens))
}

/// A conjugacy class with its lexicographically least representative.
#[derive(Debug, Clone)]
pub struct ConjClass {
    pub representative: Raw,
    pub members: Vec<Raw>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partition of `group` into conjugacy classes, sorted by representative.
pub fn conjugacy_classes(group: &Subgroup) -> Result<Vec<ConjClass>> {
    if group.order() > CLASS_BOUND {
        return Err(Error::GroupTooLarge {
            order: group.order() as u64,
            bound: CLASS_BOUND as u64,
        });
    }
    let f = &*group.field;
    let gens: Vec<(Raw, Raw)> = group
        .generators
        .iter()
        .map(|g| (*g, raw_inverse(f, g, raw_similitude(f, g).unwrap())))
        .collect();
    let mut class_of = vec![usize::MAX; group.order()];
    let mut classes = Vec::new();
    for start in 0..group.order() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        class_of[start] = cid;
        let mut members = vec![group.elements[start]];
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for (g, gi) in &gens {
                let y = raw_mul(f, &raw_mul(f, g, &x), gi);
                let p = group.position(&y).expect("conjugate stays in the group");
                if class_of[p] == usize::MAX {
                    class_of[p] = cid;
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        // elements are scanned in sorted order, so the first unassigned one is least
        classes.push(ConjClass {
            representative: group.elements[start],
            members,
        });
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field_make;

    fn f(q: u64) -> Field {
        field_of_order(q).unwrap()
    }

    #[test]
    fn similitude_examples() {
        let f3 = f(3);
        assert_eq!(similitude(&Mat4::identity(&f3)).unwrap().index(), 1);
        assert_eq!(s2(&f3).mu().index(), 1);
        assert_eq!(s1(&f3).mu().index(), 1);
        let m = Mat4::from_ints(&f3, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]]);
        assert!(similitude(&m).is_none());
    }

    #[test]
    fn s2_squared() {
        let f3 = f(3);
        let sq = group_mul(&s2(&f3), &s2(&f3)).unwrap();
        let want = GSpElem::from_ints(&f3, [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]).unwrap();
        assert_eq!(sq, want);
        assert_eq!(sq.mu().index(), 1);
    }

    #[test]
    fn inverse_and_mu_multiplicative() {
        use rand::{Rng, SeedableRng};
        let g = enumerate_gsp4(3).unwrap();
        let fld = g.field().clone();
        let els = g.raw_elements();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = GSpElem::from_raw(&fld, els[rng.gen_range(0..els.len())]).unwrap();
            let b = GSpElem::from_raw(&fld, els[rng.gen_range(0..els.len())]).unwrap();
            let ab = group_mul(&a, &b).unwrap();
            let direct = similitude(ab.mat()).unwrap();
            assert_eq!(direct, a.mu().mul(&b.mu()).unwrap());
            assert_eq!(group_mul(&a, &group_inv(&a)).unwrap(), GSpElem::identity(&fld));
            assert_eq!(group_inv(&a).mu(), a.mu().inv().unwrap());
        }
    }

    #[test]
    fn mixed_fields_in_product() {
        let a = s1(&f(2));
        let b = s1(&f(3));
        assert_eq!(group_mul(&a, &b).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn closure_examples() {
        let f3 = f(3);
        assert_eq!(subgroup_closure(&f3, &[]).unwrap().order(), 1);
        let c = subgroup_closure(&f3, &[s2(&f3)]).unwrap();
        assert_eq!(c.order(), 4);
        assert_eq!(conjugacy_classes(&c).unwrap().len(), 4);
        let f2 = f(2);
        let us = named_subgroup("U_S", 2).unwrap();
        let gens: Vec<GSpElem> = us.elements().collect();
        assert_eq!(subgroup_closure(&f2, &gens).unwrap().order(), 8);
    }

    #[test]
    fn closure_bound_enforced() {
        let f3 = f(3);
        let gens = gsp4_generators(&f3);
        assert_eq!(
            subgroup_closure_bounded(&f3, &gens, 1000).unwrap_err(),
            Error::ClosureTooLarge { bound: 1000 }
        );
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(named_subgroup("Q", 2), Err(Error::UnknownName(_))));
    }

    #[test]
    fn named_orders() {
        for q in [2u64, 3] {
            let o = |n: &str| named_subgroup(n, q).unwrap().order() as u64;
            let u = q - 1;
            assert_eq!(o("U_S"), q.pow(3));
            assert_eq!(o("U_K"), q.pow(3));
            assert_eq!(o("R_last"), q.pow(3));
            assert_eq!(o("Row8"), u * q.pow(3));
            assert_eq!(o("CenterX"), q);
            assert_eq!(o("Center"), u);
            assert_eq!(o("M"), u * u * q * (q * q - 1));
            assert_eq!(o("M1"), q * (q * q - 1));
            assert_eq!(o("KlingenR"), q * q * (q * q - 1));
            assert_eq!(o("SSp"), q * q * u);
            assert_eq!(o("S"), q * q * u * u);
            assert_eq!(o("A"), u * u * q * q);
            assert_eq!(o("B"), q * u.pow(3));
            assert_eq!(o("Row4"), q * u.pow(3));
            assert_eq!(o("C"), q * q * u.pow(3));
            assert_eq!(o("D"), q * q * u.pow(3));
            assert_eq!(o("Row1"), q * q * u.pow(3));
            assert_eq!(o("Row2"), q * q * u.pow(3));
            assert_eq!(o("Row5"), q * q * u * u);
            assert_eq!(o("Row6"), q * q * u * u);
            assert_eq!(o("Row7"), q * q * u * u);
        }
    }

    #[test]
    fn named_are_closed_subgroups() {
        for q in [2u64, 3] {
            for name in SUBGROUP_NAMES {
                let g = named_subgroup(name, q).unwrap();
                assert!(g.is_closed(), "{name} q={q}");
                assert_eq!(gsp4_order(q) % g.order() as u64, 0, "{name}");
            }
        }
    }

    #[test]
    fn gsp4_2_matches_gl4_scan() {
        let f2 = field_make(2, 1).unwrap();
        let mut scan = Vec::new();
        for bits in 0u32..(1 << 16) {
            let mut e = [0u16; 16];
            for (k, x) in e.iter_mut().enumerate() {
                *x = ((bits >> k) & 1) as u16;
            }
            if raw_similitude(&f2, &e).is_some() {
                scan.push(e);
            }
        }
        scan.sort_unstable();
        let g = enumerate_gsp4(2).unwrap();
        assert_eq!(g.order(), 720);
        assert_eq!(g.raw_elements(), &scan[..]);
    }

    #[test]
    fn gsp4_3_order_and_generators() {
        let g = enumerate_gsp4(3).unwrap();
        assert_eq!(g.order(), 103_680);
        let fld = f(3);
        let c = subgroup_closure(&fld, &gsp4_generators(&fld)).unwrap();
        assert_eq!(c.raw_elements(), g.raw_elements());
    }

    #[test]
    fn gsp4_4_streaming_count() {
        assert!(matches!(enumerate_gsp4(4), Err(Error::GroupTooLarge { .. })));
        let mut seen = FxHashSet::default();
        let n = stream_gsp4(4, true, |e| {
            seen.insert(*e);
        })
        .unwrap();
        assert_eq!(n, gsp4_order(4));
        assert_eq!(seen.len() as u64, n);
    }

    #[test]
    fn too_large_refused() {
        assert!(matches!(enumerate_gsp4(7), Err(Error::GroupTooLarge { .. })));
        assert!(matches!(stream_gsp4(7, true, |_| {}), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn classes_of_gsp4_2() {
        let g = enumerate_gsp4(2).unwrap();
        let cl = conjugacy_classes(&g).unwrap();
        assert_eq!(cl.len(), 11);
        assert_eq!(cl.iter().map(|c| c.size()).sum::<usize>(), 720);
        for c in &cl {
            assert_eq!(720 % c.size(), 0);
            assert_eq!(c.representative, c.members[0]);
        }
        assert!(matches!(
            conjugacy_classes(&enumerate_gsp4(3).unwrap()),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn even_q_scalar_times_sp() {
        for q in [2u64, 4] {
            let fld = f(q);
            let fs = &*fld;
            // every mu is a square in characteristic 2, so g = s * g' with mu(g') = 1
            let mut checked = 0;
            stream_gsp4(q, true, |e| {
                if checked % 97 == 0 {
                    let mu = raw_similitude(fs, e).unwrap();
                    let roots: Vec<u16> = (1..q as u16).filter(|&s| fs.mul(s, s) == mu).collect();
                    assert_eq!(roots.len(), 1);
                    let inv = fs.inv(roots[0]).unwrap();
                    assert_eq!(raw_similitude(fs, &raw_scale(fs, inv, e)), Some(1));
                }
                checked += 1;
            })
            .unwrap();
        }
    }
}
