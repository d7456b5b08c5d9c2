//! Finite fields `F_p` and single-level extensions `F_p[x]/(m)`.
//!
//! Elements are `u32` indices: the coefficient tuple `(c_0, .., c_{k-1})` of
//! the residue of `c_0 + c_1 x + ..` maps to `c_0 + c_1 p + .. + c_{k-1} p^{k-1}`.
//! This is also the canonical enumeration order used by every deterministic
//! search in the crate.

use crate::error::{Error, Result};

/// Largest field order we build log/exp tables for.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, ascending coefficients, length `k + 1`. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl std::hash::Hash for FiniteField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.modulus.hash(state);
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// If `q = p^k` for a prime `p`, returns `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(p));
        }
        Ok(Self::build(p as u32, vec![0, 1]))
    }

    /// Builds `F_p[x]/(m)` where `m` is given by ascending coefficients mod `p`.
    /// The leading coefficient is normalised to 1; `m` must have degree >= 2 and be irreducible.
    pub fn extension(p: u64, modulus: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut m: Vec<u32> = modulus.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
        trim(&mut m);
        if m.len() < 3 {
            return Err(Error::InvalidDescriptor(format!(
                "extension modulus must have degree >= 2, got {}",
                fmt_poly(&m, "x")
            )));
        }
        let k = (m.len() - 1) as u32;
        if (p as u128).pow(k) > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(p.pow(k)));
        }
        let prime = Self::prime(p)?;
        let lead_inv = prime.inv(*m.last().unwrap());
        for c in m.iter_mut() {
            *c = prime.mul(*c, lead_inv);
        }
        if !prime.poly_is_irreducible(&m) {
            return Err(Error::ReducibleModulus(fmt_poly(&m, "x")));
        }
        Ok(Self::build(p as u32, m))
    }

    fn build(p: u32, modulus: Vec<u32>) -> Self {
        let k = (modulus.len() - 1) as u32;
        let q = p.pow(k);
        let mut field = FiniteField { p, k, q, modulus, exp: Vec::new(), log: Vec::new(), add_table: None };
        if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add_table = Some(table);
        }
        // log/exp tables from the first primitive element in canonical order
        let order = q - 1;
        for g in 1..q {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            let mut primitive = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    primitive = false;
                    break;
                }
                exp.push(x);
                x = field.mul_slow(x, g);
            }
            if primitive && x == 1 {
                let mut log = vec![0; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                field.exp = exp;
                field.log = log;
                break;
            }
        }
        field
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// The class of the integer `n`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// The residue of `x`, i.e. the generator of the extension (or `0`'s successor in `F_p`).
    pub fn generator(&self) -> u32 {
        if self.k == 1 {
            1 % self.p
        } else {
            self.p
        }
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut scale, mut out) = (a, b, 1, 0);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.from_digits(&d)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(s % (self.q - 1)) as usize]
    }

    /// Multiplication by polynomial arithmetic modulo the defining polynomial.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; da.len() + db.len() - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let k = self.k as usize;
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate().take(k) {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
            prod[top] = 0;
        }
        let digits: Vec<u32> = prod.iter().take(k).map(|&c| c as u32).collect();
        self.from_digits(&digits)
    }

    /// Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.q);
        let l = self.log[a as usize];
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let ord = (self.q - 1) as i64;
        let l = (self.log[a as usize] as i64 * e.rem_euclid(ord)).rem_euclid(ord);
        self.exp[l as usize]
    }

    // ---- polynomials over the field, ascending coefficient vectors ----

    pub fn poly_trim(&self, f: &mut Vec<u32>) {
        trim(f);
    }

    pub fn poly_mul(&self, f: &[u32], g: &[u32]) -> Vec<u32> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(a, b));
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `f` modulo a nonzero `g`.
    pub fn poly_rem(&self, f: &[u32], g: &[u32]) -> Vec<u32> {
        let mut r = f.to_vec();
        trim(&mut r);
        let dg = g.len() - 1;
        let lead_inv = self.inv(g[dg]);
        while r.len() > dg {
            let top = r.len() - 1;
            let c = self.mul(r[top], lead_inv);
            for (i, &gi) in g.iter().enumerate() {
                let idx = top - dg + i;
                r[idx] = self.sub(r[idx], self.mul(c, gi));
            }
            trim(&mut r);
        }
        r
    }

    /// Evaluates `f` at `x`.
    pub fn poly_eval(&self, f: &[u32], x: u32) -> u32 {
        f.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Monic polynomials of the given degree, in canonical order of their
    /// lower coefficient tuple.
    pub fn monic_polys(&self, degree: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
        let count = (self.q as u64).pow(degree as u32);
        (0..count).map(move |mut idx| {
            let mut f = Vec::with_capacity(degree + 1);
            for _ in 0..degree {
                f.push((idx % self.q as u64) as u32);
                idx /= self.q as u64;
            }
            f.push(1);
            f
        })
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn poly_is_irreducible(&self, f: &[u32]) -> bool {
        let mut f = f.to_vec();
        trim(&mut f);
        let d = match f.len() {
            0 | 1 => return false,
            n => n - 1,
        };
        for e in 1..=d / 2 {
            for g in self.monic_polys(e) {
                if self.poly_rem(&f, &g).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    pub fn format_elem(&self, a: u32) -> String {
        if self.k == 1 {
            a.to_string()
        } else {
            fmt_poly(&self.digits(a), "x")
        }
    }
}

pub(crate) fn trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Formats an ascending coefficient vector of small nonnegative integers.
pub fn fmt_poly(coeffs: &[u32], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn f4_multiplication_table() {
        let f = FiniteField::extension(2, &[1, 1, 1]).unwrap();
        let g = f.generator();
        assert_eq!(g, 2);
        // g^2 = g + 1
        assert_eq!(f.mul(g, g), 3);
        assert_eq!(f.mul(3, 3), g);
        assert_eq!(f.mul(g, 3), 1);
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn table_mul_agrees_with_polynomial_mul() {
        for (p, m) in [(3u64, vec![1i64, 0, 1]), (2, vec![1, 1, 0, 1]), (5, vec![2, 0, 1])] {
            let f = FiniteField::extension(p, &m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn reducible_and_nonprime_rejected() {
        assert_eq!(FiniteField::extension(2, &[0, 0, 1]).unwrap_err(), Error::ReducibleModulus("x^2".into()));
        assert_eq!(FiniteField::prime(9).unwrap_err(), Error::NotPrime(9));
    }

    #[test]
    fn negation_and_subtraction() {
        let f = FiniteField::extension(3, &[1, 0, 1]).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            for b in f.elements() {
                assert_eq!(f.add(f.sub(a, b), b), a);
            }
        }
    }
}
