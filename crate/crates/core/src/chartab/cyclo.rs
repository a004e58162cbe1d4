//! Exact elements of `Z[ζ_e]`, stored reduced modulo the cyclotomic polynomial.

use std::fmt;

use num_integer::Integer;

/// Coefficients of `Φ_e`, lowest degree first.
pub fn cyclotomic_poly(e: u32) -> Vec<i64> {
    let mut num = vec![0i64; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in 1..e {
        if e.is_multiple_of(d) {
            num = divide_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn divide_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut quo = vec![0i64; a.len() - db];
    for k in (0..quo.len()).rev() {
        let c = rem[k + db];
        quo[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            rem[k + i] -= c * bi;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quo
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    e: u32,
    c: Vec<i64>,
}

impl Cyclotomic {
    pub fn from_int(e: u32, n: i64) -> Self {
        let mut c = vec![0; phi(e)];
        c[0] = n;
        Cyclotomic { e, c }
    }

    /// `Σ_j coeffs[j] ζ_e^j`, with any number of terms.
    pub fn from_powers(e: u32, coeffs: &[i64]) -> Self {
        let mut folded = vec![0i64; e as usize];
        for (j, &x) in coeffs.iter().enumerate() {
            folded[j % e as usize] += x;
        }
        Cyclotomic::reduce(e, folded)
    }

    fn reduce(e: u32, mut a: Vec<i64>) -> Self {
        let phi_e = cyclotomic_poly(e);
        let d = phi_e.len() - 1;
        for k in (d..a.len()).rev() {
            let c = a[k];
            if c != 0 {
                for (i, &p) in phi_e.iter().enumerate() {
                    a[k - d + i] -= c * p;
                }
            }
        }
        a.resize(d, 0);
        Cyclotomic { e, c: a }
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.e, o.e, "mixed cyclotomic fields");
        Cyclotomic {
            e: self.e,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.e, o.e, "mixed cyclotomic fields");
        let mut t = vec![0i64; self.e as usize];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                t[(i + j) % self.e as usize] += a * b;
            }
        }
        Cyclotomic::reduce(self.e, t)
    }

    pub fn scale(&self, k: i64) -> Self {
        Cyclotomic {
            e: self.e,
            c: self.c.iter().map(|x| x * k).collect(),
        }
    }

    /// Complex conjugate, `ζ -> ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let e = self.e as usize;
        let mut t = vec![0i64; e];
        for (j, &a) in self.c.iter().enumerate() {
            t[(e - j) % e] += a;
        }
        Cyclotomic::reduce(self.e, t)
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.c[1..].iter().all(|&x| x == 0).then_some(self.c[0])
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let w = std::f64::consts::TAU / self.e as f64;
        self.c.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, &a)| {
            (re + a as f64 * (w * j as f64).cos(), im + a as f64 * (w * j as f64).sin())
        })
    }
}

fn phi(e: u32) -> usize {
    (1..=e).filter(|k| k.gcd(&e) == 1).count()
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (j, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let sign = if a < 0 { "-" } else if first { "" } else { "+" };
            let mag = a.abs();
            match (j, mag) {
                (0, _) => write!(f, "{sign}{mag}")?,
                (_, 1) => write!(f, "{sign}z{}^{j}", self.e)?,
                _ => write!(f, "{sign}{mag}*z{}^{j}", self.e)?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let s = Cyclotomic::from_powers(5, &[1, 1, 1, 1, 1]);
        assert!(s.is_zero());
        let i = Cyclotomic::from_powers(4, &[0, 1]);
        assert_eq!(i.mul(&i).as_integer(), Some(-1));
        assert_eq!(i.mul(&i.conj()).as_integer(), Some(1));
    }
}
