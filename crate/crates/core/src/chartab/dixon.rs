//! Dixon–Schneider character tables of small subgroups, and the `q = 2`
//! cross-check of every closed fixed-vector dimension.

use num_integer::Integer;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::cyclo::Cyclotomic;
use super::{char_value, classify, dim_fixed, dim_fixed_family, ClassLabel, SigmaFamily, FAMILY_NAMES};
use crate::error::{Error, Result};
use crate::ffield::is_prime;
use crate::groupfq::{conjugacy_classes, enumerate_gsp4, named_subgroup, raw_identity, raw_mul, Raw, Subgroup};

/// Largest group handled.
pub const DIXON_ORDER_BOUND: usize = 20_000;
/// Largest number of classes handled.
pub const DIXON_CLASS_BOUND: usize = 64;

#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub order: usize,
    pub representatives: Vec<Raw>,
    pub class_sizes: Vec<usize>,
    pub exponent: u32,
    pub prime: u64,
    /// One row per irreducible character, ordered by degree.
    pub characters: Vec<Vec<Cyclotomic>>,
    class_of: FxHashMap<Raw, usize>,
}

impl CharacterTable {
    pub fn degrees(&self) -> Vec<i64> {
        self.characters.iter().map(|c| c[0].as_integer().expect("degrees are integers")).collect()
    }

    pub fn class_of(&self, g: &Raw) -> Option<usize> {
        self.class_of.get(g).copied()
    }

    /// `(1/|R|) Σ_{r in R} χ(r)` for the character in row `chi`.
    pub fn fixed_dim(&self, chi: usize, r: &Subgroup) -> Result<i64> {
        let mut total = Cyclotomic::from_int(self.exponent, 0);
        for g in r.raw_elements() {
            let k = self.class_of(g).ok_or_else(|| Error::Usage("subgroup is not inside the tabulated group".into()))?;
            total = total.add(&self.characters[chi][k]);
        }
        let n = total.as_integer().ok_or_else(|| Error::NonIntegralDimension(total.to_string()))?;
        if n % r.order() as i64 != 0 || n < 0 {
            return Err(Error::NonIntegralDimension(format!("{n}/{}", r.order())));
        }
        Ok(n / r.order() as i64)
    }

    /// `Σ_k |C_k| χ_a(g_k) conj(χ_b(g_k))`, which is `|G|` times the inner product.
    pub fn weighted_inner(&self, a: usize, b: usize) -> Cyclotomic {
        let mut s = Cyclotomic::from_int(self.exponent, 0);
        for (k, &size) in self.class_sizes.iter().enumerate() {
            let t = self.characters[a][k].mul(&self.characters[b][k].conj());
            s = s.add(&t.scale(size as i64));
        }
        s
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1)).expect("prime has a primitive root")
}

/// Square matrix over `F_p`, row-major.
type Mat = Vec<Vec<u64>>;

/// Basis of the kernel of an `n x m` matrix.
fn kernel_mod(a: &Mat, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(pr) = (row..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = inv_mod(a[row][c], p);
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != row && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..cols {
                    a[r][k] = (a[r][k] + p - f * a[row][k] % p) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][free]) % p;
            }
            v
        })
        .collect()
}

/// Coordinates of `target` in the basis `basis` (known to contain it).
fn coordinates(basis: &[Vec<u64>], target: &[u64], p: u64) -> Vec<u64> {
    let m = basis.len();
    let n = target.len();
    // augmented system: columns are basis vectors, last column the target
    let mut a: Mat = (0..n).map(|r| basis.iter().map(|b| b[r]).chain([target[r]]).collect()).collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for c in 0..m {
        let Some(pr) = (row..n).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = inv_mod(a[row][c], p);
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..n {
            if r != row && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..=m {
                    a[r][k] = (a[r][k] + p - f * a[row][k] % p) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let mut x = vec![0u64; m];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][m];
    }
    x
}

/// Splits `space` into common eigenspaces of every matrix in `mats`.
fn split_spaces(mats: &[Mat], r: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let identity: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
    let mut spaces = vec![identity];
    for a in mats {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let m = space.len();
            // matrix of `a` restricted to the space, in its basis
            let images: Vec<Vec<u64>> = space
                .iter()
                .map(|b| (0..r).map(|i| (0..r).fold(0, |acc, j| (acc + a[i][j] * b[j]) % p)).collect())
                .collect();
            let coords: Vec<Vec<u64>> = images.iter().map(|im| coordinates(&space, im, p)).collect();
            // c[i][l]: coefficient of basis i in image of basis l
            let c: Mat = (0..m).map(|i| (0..m).map(|l| coords[l][i]).collect()).collect();
            let mut found = 0;
            for lam in 0..p {
                let shifted: Mat = (0..m)
                    .map(|i| (0..m).map(|l| if i == l { (c[i][l] + p - lam) % p } else { c[i][l] }).collect())
                    .collect();
                let ker = kernel_mod(&shifted, m, p);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|v| (0..r).map(|i| (0..m).fold(0, |acc, l| (acc + v[l] * space[l][i]) % p)).collect())
                    .collect();
                next.push(sub);
                if found == m {
                    break;
                }
            }
            assert_eq!(found, m, "class matrices are diagonalizable over the splitting prime");
        }
        spaces = next;
    }
    spaces
}

/// Full irreducible character table of `g` by the Dixon–Schneider method.
pub fn dixon_table(g: &Subgroup) -> Result<CharacterTable> {
    let order = g.order();
    if order > DIXON_ORDER_BOUND {
        return Err(Error::GroupTooLarge {
            order: order as u64,
            bound: DIXON_ORDER_BOUND as u64,
        });
    }
    let id = raw_identity();
    let mut classes = conjugacy_classes(g)?;
    // identity class first, so column 0 holds the degrees
    classes.sort_by_key(|c| c.representative != id);
    let r = classes.len();
    if r > DIXON_CLASS_BOUND {
        return Err(Error::TooLarge(format!("{r} classes exceed {DIXON_CLASS_BOUND}")));
    }
    let f = &**g.field();
    let mut class_of = FxHashMap::default();
    for (k, c) in classes.iter().enumerate() {
        for m in &c.members {
            class_of.insert(*m, k);
        }
    }
    let id_class = 0;
    let elem_order = |x: &Raw| {
        let mut y = *x;
        let mut k = 1u32;
        while y != id {
            y = raw_mul(f, &y, x);
            k += 1;
        }
        k
    };
    let orders: Vec<u32> = classes.iter().map(|c| elem_order(&c.representative)).collect();
    let exponent = orders.iter().fold(1u32, |a, &b| a.lcm(&b));
    let root_bound = 2 * ((order as f64).sqrt().ceil() as u64) + 1;
    let mut p = exponent as u64 + 1;
    while !(is_prime(p) && p > root_bound) {
        p += exponent as u64;
    }

    // a[i][j][k] = #{x in C_i : x^{-1} z_k in C_j}
    let mut mats: Vec<Mat> = vec![vec![vec![0u64; r]; r]; r];
    let inverse_of = |x: &Raw| {
        let mut y = *x;
        loop {
            let next = raw_mul(f, &y, x);
            if next == id {
                return y;
            }
            y = next;
        }
    };
    let invs: FxHashMap<Raw, Raw> = g.raw_elements().iter().map(|x| (*x, if *x == id { id } else { inverse_of(x) })).collect();
    for (i, ci) in classes.iter().enumerate() {
        for x in &ci.members {
            let xi = invs[x];
            for (k, ck) in classes.iter().enumerate() {
                let y = raw_mul(f, &xi, &ck.representative);
                let j = class_of[&y];
                mats[i][j][k] += 1;
            }
        }
    }
    for m in mats.iter_mut() {
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x %= p;
            }
        }
    }
    let spaces = split_spaces(&mats, r, p);
    if spaces.len() != r {
        return Err(Error::MismatchReport(vec![format!("found {} characters for {r} classes", spaces.len())]));
    }

    let inverse_class: Vec<usize> = classes.iter().map(|c| class_of[&invs[&c.representative]]).collect();
    let sizes: Vec<usize> = classes.iter().map(|c| c.size()).collect();
    let gen = primitive_root(p);
    let zeta_e = pow_mod(gen, (p - 1) / exponent as u64, p);
    // power maps: class of g_k^l
    let powers: Vec<Vec<usize>> = classes
        .iter()
        .zip(&orders)
        .map(|(c, &o)| {
            let mut y = id;
            (0..o)
                .map(|_| {
                    let k = class_of[&y];
                    y = raw_mul(f, &y, &c.representative);
                    k
                })
                .collect()
        })
        .collect();

    let mut characters = Vec::with_capacity(r);
    for space in spaces {
        let v = &space[0];
        let scale = inv_mod(v[id_class], p);
        let w: Vec<u64> = v.iter().map(|x| x * scale % p).collect();
        let s = (0..r).fold(0, |acc, k| (acc + w[k] * w[inverse_class[k]] % p * inv_mod(sizes[k] as u64 % p, p)) % p);
        let d2 = order as u64 % p * inv_mod(s, p) % p;
        let d = (1..=(order as f64).sqrt() as u64 + 1)
            .find(|&d| d * d % p == d2)
            .ok_or_else(|| Error::MismatchReport(vec!["no degree fits".into()]))?;
        let modp: Vec<u64> = (0..r).map(|k| d % p * w[k] % p * inv_mod(sizes[k] as u64 % p, p) % p).collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let o = orders[k];
            let zeta_o = pow_mod(zeta_e, (exponent / o) as u64, p);
            let o_inv = inv_mod(o as u64, p);
            let mut mult = vec![0i64; o as usize];
            for (j, m) in mult.iter_mut().enumerate() {
                let mut acc = 0u64;
                for l in 0..o as usize {
                    let e = (o as u64 - (j as u64 * l as u64) % o as u64) % o as u64;
                    acc = (acc + modp[powers[k][l]] * pow_mod(zeta_o, e, p)) % p;
                }
                let val = acc * o_inv % p;
                if val > d {
                    return Err(Error::MismatchReport(vec![format!("eigenvalue multiplicity {val} exceeds degree {d}")]));
                }
                *m = val as i64;
            }
            let stride = (exponent / o) as usize;
            let mut coeffs = vec![0i64; exponent as usize];
            for (j, &m) in mult.iter().enumerate() {
                coeffs[j * stride] += m;
            }
            row.push(Cyclotomic::from_powers(exponent, &coeffs));
        }
        characters.push(row);
    }
    characters.sort_by_key(|c| (c[0].as_integer().unwrap_or(0), c.iter().map(|x| x.to_string()).collect::<Vec<_>>()));

    let table = CharacterTable {
        order,
        representatives: classes.iter().map(|c| c.representative).collect(),
        class_sizes: sizes,
        exponent,
        prime: p,
        characters,
        class_of,
    };
    check_orthogonality(&table)?;
    Ok(table)
}

fn check_orthogonality(t: &CharacterTable) -> Result<()> {
    let r = t.characters.len();
    let mut bad = Vec::new();
    let degsq: i64 = t.degrees().iter().map(|d| d * d).sum();
    if degsq != t.order as i64 {
        bad.push(format!("sum of squared degrees {degsq} != {}", t.order));
    }
    for a in 0..r {
        for b in 0..r {
            let want = if a == b { t.order as i64 } else { 0 };
            if t.weighted_inner(a, b).as_integer() != Some(want) {
                bad.push(format!("rows {a},{b} not orthonormal"));
            }
        }
    }
    for k in 0..r {
        for l in 0..r {
            let mut s = Cyclotomic::from_int(t.exponent, 0);
            for chi in &t.characters {
                s = s.add(&chi[k].mul(&chi[l].conj()));
            }
            let want = if k == l { (t.order / t.class_sizes[k]) as i64 } else { 0 };
            if s.as_integer() != Some(want) {
                bad.push(format!("columns {k},{l} not orthogonal"));
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::MismatchReport(bad))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub q: u64,
    pub class_count: usize,
    pub degrees: Vec<i64>,
    /// Table rows identified as the two generic cuspidal families. Either
    /// list may be empty when the family has no members for this `q`.
    pub first_type: Vec<usize>,
    pub second_type: Vec<usize>,
    /// `(row, U_S dim, U_K dim, M dim)` for every character of the second-type degree.
    pub second_degree_rows: Vec<(usize, i64, i64, i64)>,
    /// `(subgroup, family, oracle dim, closed dim)`.
    pub dims: Vec<(String, String, i64, i128)>,
    pub checks: usize,
}

/// Recomputes every closed fixed-vector dimension at `q = 2` from the
/// Dixon–Schneider table and compares class by class with [`char_value`].
pub fn verify_char_lemmas(q: u64) -> Result<LemmaReport> {
    if q != 2 {
        return Err(Error::Usage("the character-table oracle runs at q = 2 only".into()));
    }
    let g = enumerate_gsp4(q)?;
    let table = dixon_table(&g)?;
    let qi = q as i64;
    let u_s = named_subgroup("U_S", q)?;
    let u_k = named_subgroup("U_K", q)?;
    let cuspidal = |chi: usize| -> Result<bool> { Ok(table.fixed_dim(chi, &u_s)? == 0 && table.fixed_dim(chi, &u_k)? == 0) };
    let degrees = table.degrees();
    let mut first_type = Vec::new();
    let mut second_type = Vec::new();
    for (chi, &d) in degrees.iter().enumerate() {
        if !cuspidal(chi)? {
            continue;
        }
        if d == (qi * qi - 1).pow(2) {
            first_type.push(chi);
        } else if d == (qi * qi + 1) * (qi - 1).pow(2) {
            second_type.push(chi);
        }
    }
    let m = named_subgroup("M", q)?;
    let mut second_degree_rows = Vec::new();
    for (chi, &d) in degrees.iter().enumerate() {
        if d == (qi * qi + 1) * (qi - 1).pow(2) {
            second_degree_rows.push((chi, table.fixed_dim(chi, &u_s)?, table.fixed_dim(chi, &u_k)?, table.fixed_dim(chi, &m)?));
        }
    }
    let mut bad = Vec::new();
    if first_type.is_empty() && second_type.is_empty() {
        bad.push("no cuspidal character of a generic degree".into());
    }
    let mut dims = Vec::new();
    let mut checks = 0;
    for (second, rows) in [(false, &first_type), (true, &second_type)] {
        let sigma = SigmaFamily::generic(second, true);
        // the elliptic token resolves to -2 when there is a single elliptic class
        let token = if q == 2 { Some(-2) } else { None };
        for &chi in rows.iter() {
            for (k, rep) in table.representatives.iter().enumerate() {
                let label = classify(g.field(), rep);
                let oracle = &table.characters[chi][k];
                let Ok(v) = char_value(&sigma, label, q) else {
                    continue;
                };
                let pinned = match (v.omega == 0.into(), v.param, token) {
                    (true, None, _) => Some(v.constant),
                    (true, Some(_), Some(t)) => Some(v.constant + v.token * t as i128),
                    _ => None,
                };
                if let Some(x) = pinned {
                    checks += 1;
                    if !x.is_integer() || oracle.as_integer() != Some(x.to_integer() as i64) {
                        bad.push(format!("{sigma} on {label}: table says {oracle}, values give {x}"));
                    }
                } else if label == ClassLabel::NotScoped {
                    continue;
                }
            }
            for &name in FAMILY_NAMES {
                let r = named_subgroup(name, q)?;
                let oracle = table.fixed_dim(chi, &r)?;
                let closed = dim_fixed_family(name, &sigma, q)?;
                let summed = dim_fixed(&r, &sigma)?;
                checks += 1;
                if oracle as i128 != closed || summed != closed {
                    bad.push(format!("{name} {sigma}: oracle {oracle}, class sum {summed}, closed {closed}"));
                }
                dims.push((name.to_string(), sigma.to_string(), oracle, closed));
            }
        }
    }
    // elliptic contributions cancel inside the Klingen Levi R
    let r = named_subgroup("KlingenR", q)?;
    for &chi in first_type.iter().chain(&second_type) {
        let mut s = Cyclotomic::from_int(table.exponent, 0);
        for x in r.raw_elements() {
            if matches!(classify(g.field(), x), ClassLabel::Even(super::EvenClass::C3(_) | super::EvenClass::D3(_))) {
                s = s.add(&table.characters[chi][table.class_of(x).unwrap()]);
            }
        }
        checks += 1;
        if !s.is_zero() {
            bad.push(format!("elliptic sum over R for row {chi} is {s}"));
        }
    }
    if !bad.is_empty() {
        return Err(Error::MismatchReport(bad));
    }
    Ok(LemmaReport {
        q,
        class_count: table.characters.len(),
        degrees,
        first_type,
        second_type,
        second_degree_rows,
        dims,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field_of_order;
    use crate::groupfq::{subgroup_closure, unipotent_s, GSpElem};

    #[test]
    fn trivial_group() {
        let f = field_of_order(2).unwrap();
        let t = dixon_table(&subgroup_closure(&f, &[]).unwrap()).unwrap();
        assert_eq!(t.characters.len(), 1);
        assert_eq!(t.characters[0][0].as_integer(), Some(1));
    }

    #[test]
    fn cyclic_of_order_four() {
        // a regular unipotent element has order 4 in characteristic 2
        let f = field_of_order(2).unwrap();
        let mut v = raw_identity();
        v[9] = 1;
        let g = GSpElem::from_raw(&f, raw_mul(&f, &unipotent_s(&f, 1, 0, 0), &v)).unwrap();
        let c = subgroup_closure(&f, &[g]).unwrap();
        assert_eq!(c.order(), 4);
        let t = dixon_table(&c).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn lemmas_at_two() {
        let rep = verify_char_lemmas(2).unwrap();
        assert_eq!(rep.first_type.len(), 1);
        // the second generic family has no members at q = 2
        assert!(rep.second_type.is_empty());
        assert!(rep.checks > 20);
    }

    #[test]
    fn gsp4_over_f2() {
        let t = dixon_table(&enumerate_gsp4(2).unwrap()).unwrap();
        assert_eq!(t.prime, 61);
        let mut d = t.degrees();
        d.sort_unstable();
        assert_eq!(d, vec![1, 1, 5, 5, 5, 5, 9, 9, 10, 10, 16]);
    }
}
