//! Canonical text forms for ring descriptors and elements.
//!
//! Rings: `fq:5`, `fq:4`, `fq:2^2:x^2+x+1`, `int`, `order:x^2+1`,
//! `poly:<ring>`, `laurent:<ring>`. Elements are expressions in `t` (the
//! polynomial variable) and `x` (generator of an extension field or of an
//! order) built from integers, `+ - * ^` and parentheses; negative powers are
//! allowed for units, e.g. `t^-2` in a Laurent ring.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::descriptor::{DescriptorKind, RingDescriptor, Scalar};
use super::elem::RingElem;
use super::field::{prime_power, FiniteField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            out.push(Tok::Ident(c.to_string()));
            i += 1;
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

/// Target algebra for the expression parser.
trait Alg {
    type V: Clone;
    fn int(&self, n: &BigInt) -> Result<Self::V>;
    fn var(&self, name: &str) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn inv(&self, a: &Self::V) -> Result<Self::V>;
}

struct Parser<'a, A: Alg> {
    alg: &'a A,
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl<'a, A: Alg> Parser<'a, A> {
    fn run(alg: &'a A, src: &'a str) -> Result<A::V> {
        let toks = tokenize(src)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut p = Parser { alg, toks, pos: 0, src };
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} of `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<A::V> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = self.alg.neg(&acc);
        }
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.alg.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.alg.add(&acc, &self.alg.neg(&t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<A::V> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let f = self.power()?;
                acc = self.alg.mul(&acc, &f);
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('('))) {
                let f = self.power()?;
                acc = self.alg.mul(&acc, &f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<A::V> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => n.to_u32().ok_or_else(|| self.err("exponent too large"))?,
            _ => return Err(self.err("expected exponent")),
        };
        self.pos += 1;
        let b = if neg { self.alg.inv(&base)? } else { base };
        let mut acc = self.alg.int(&BigInt::one())?;
        for _ in 0..e {
            acc = self.alg.mul(&acc, &b);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<A::V> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                self.alg.int(&n)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.alg.var(&name)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

struct ElemAlg<'a>(&'a RingDescriptor);

fn big_scalar(base: &RingDescriptor, n: &BigInt) -> Scalar {
    match base.kind() {
        DescriptorKind::Field(f) => Scalar::F(n.mod_floor(&BigInt::from(f.characteristic())).to_u32().unwrap()),
        DescriptorKind::Integers => Scalar::Z(n.clone()),
        DescriptorKind::Order(o) => {
            let mut v = vec![BigInt::zero(); o.degree()];
            v[0] = n.clone();
            Scalar::O(v)
        }
        _ => unreachable!(),
    }
}

impl Alg for ElemAlg<'_> {
    type V = RingElem;

    fn int(&self, n: &BigInt) -> Result<RingElem> {
        let base = self.0.base();
        let c = RingElem::from_scalar(base.clone(), big_scalar(base, n));
        if self.0.is_base() {
            Ok(c)
        } else {
            self.0.constant(&c)
        }
    }

    fn var(&self, name: &str) -> Result<RingElem> {
        let ring = self.0;
        match name {
            "t" if !ring.is_base() => ring.var(),
            "x" => {
                let base = ring.base();
                let g = match base.kind() {
                    DescriptorKind::Field(f) if !f.is_prime_field() => base.field_elem(f.generator())?,
                    DescriptorKind::Order(_) => base.var()?,
                    _ => return Err(Error::Parse(format!("`x` is not defined in {ring}"))),
                };
                if ring.is_base() {
                    Ok(g)
                } else {
                    ring.constant(&g)
                }
            }
            _ => Err(Error::Parse(format!("unknown variable `{name}` in {ring}"))),
        }
    }

    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        a + b
    }

    fn neg(&self, a: &RingElem) -> RingElem {
        -a
    }

    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        a * b
    }

    fn inv(&self, a: &RingElem) -> Result<RingElem> {
        a.inv().ok_or_else(|| Error::NotAUnit(a.to_string()))
    }
}

/// Parses an element of `ring`.
pub fn parse_elem(ring: &RingDescriptor, s: &str) -> Result<RingElem> {
    Parser::run(&ElemAlg(ring), s)
}

struct IntPolyAlg;

impl Alg for IntPolyAlg {
    type V = Vec<BigInt>;

    fn int(&self, n: &BigInt) -> Result<Vec<BigInt>> {
        Ok(vec![n.clone()])
    }

    fn var(&self, name: &str) -> Result<Vec<BigInt>> {
        match name {
            "x" | "X" => Ok(vec![BigInt::zero(), BigInt::one()]),
            _ => Err(Error::Parse(format!("unknown variable `{name}` in integer polynomial"))),
        }
    }

    fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect()
    }

    fn neg(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().map(|c| -c).collect()
    }

    fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn inv(&self, _: &Vec<BigInt>) -> Result<Vec<BigInt>> {
        Err(Error::Parse("negative exponent in integer polynomial".into()))
    }
}

/// Integer polynomial in `x`, ascending and trimmed.
pub fn parse_int_poly(s: &str) -> Result<Vec<BigInt>> {
    let mut v = Parser::run(&IntPolyAlg, s)?;
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    Ok(v)
}

struct FieldPolyAlg<'a>(&'a FiniteField);

impl Alg for FieldPolyAlg<'_> {
    type V = Vec<u32>;

    fn int(&self, n: &BigInt) -> Result<Vec<u32>> {
        let p = BigInt::from(self.0.characteristic());
        Ok(vec![n.mod_floor(&p).to_u32().unwrap()])
    }

    fn var(&self, name: &str) -> Result<Vec<u32>> {
        match name {
            "X" => Ok(vec![0, 1]),
            "x" if self.0.is_prime_field() => Ok(vec![0, 1]),
            "x" => Ok(vec![self.0.generator()]),
            _ => Err(Error::Parse(format!("unknown variable `{name}` in polynomial over F_{}", self.0.order()))),
        }
    }

    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let n = a.len().max(b.len());
        (0..n).map(|i| self.0.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect()
    }

    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        a.iter().map(|&c| self.0.neg(c)).collect()
    }

    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        self.0.poly_mul(a, b)
    }

    fn inv(&self, _: &Vec<u32>) -> Result<Vec<u32>> {
        Err(Error::Parse("negative exponent in polynomial".into()))
    }
}

/// Polynomial over a finite field. The indeterminate is `X`; over a prime
/// field `x` is accepted as well, over an extension `x` is the field
/// generator.
pub fn parse_field_poly(f: &FiniteField, s: &str) -> Result<Vec<u32>> {
    let mut v = Parser::run(&FieldPolyAlg(f), s)?;
    super::field::trim(&mut v);
    Ok(v)
}

/// Formats a polynomial over `f` in the variable `var`.
pub fn fmt_field_poly(f: &FiniteField, coeffs: &[u32], var: &str) -> String {
    let terms: Vec<(i64, String)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i as i64, f.format_elem(c)))
        .collect();
    join_terms(terms, var)
}

fn fmt_int_poly(coeffs: &[BigInt], var: &str) -> String {
    let terms: Vec<(i64, String)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, c.to_string()))
        .collect();
    join_terms(terms, var)
}

/// Joins `(exponent, coefficient text)` pairs into a descending sum.
fn join_terms(mut terms: Vec<(i64, String)>, var: &str) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.sort_by_key(|(e, _)| -e);
    let mut out = String::new();
    for (k, (e, c)) in terms.into_iter().enumerate() {
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        let compound = c.chars().skip(1).any(|ch| ch == '+' || ch == '-');
        let piece = if mono.is_empty() {
            if compound && k > 0 {
                format!("({c})")
            } else {
                c
            }
        } else if c == "1" {
            mono
        } else if c == "-1" {
            format!("-{mono}")
        } else if compound {
            format!("({c})*{mono}")
        } else {
            format!("{c}*{mono}")
        };
        if k > 0 && !piece.starts_with('-') {
            out.push('+');
        }
        out.push_str(&piece);
    }
    out
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            DescriptorKind::Field(fld) if fld.is_prime_field() => write!(f, "fq:{}", fld.characteristic()),
            DescriptorKind::Field(fld) => {
                write!(f, "fq:{}^{}:{}", fld.characteristic(), fld.degree(), super::field::fmt_poly(fld.modulus(), "x"))
            }
            DescriptorKind::Integers => write!(f, "int"),
            DescriptorKind::Order(o) => write!(f, "order:{}", fmt_int_poly(o.minpoly(), "x")),
            DescriptorKind::Poly(b) => write!(f, "poly:{b}"),
            DescriptorKind::Laurent(b) => write!(f, "laurent:{b}"),
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.ring();
        let base_text = |c: &RingElem| -> String {
            match c.scalar() {
                Scalar::F(a) => c.ring().field().unwrap().format_elem(*a),
                Scalar::Z(n) => n.to_string(),
                Scalar::O(v) => fmt_int_poly(v, "x"),
            }
        };
        if ring.is_base() {
            return write!(f, "{}", base_text(self));
        }
        let terms = self.terms().iter().map(|(e, c)| (*e, base_text(c))).collect();
        write!(f, "{}", join_terms(terms, "t"))
    }
}

/// Parses a ring descriptor.
pub fn parse_ring(s: &str) -> Result<RingDescriptor> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("poly:") {
        return RingDescriptor::poly(parse_ring(rest)?);
    }
    if let Some(rest) = s.strip_prefix("laurent:") {
        return RingDescriptor::laurent(parse_ring(rest)?);
    }
    if let Some(rest) = s.strip_prefix("order:") {
        return RingDescriptor::order_big(parse_int_poly(rest)?);
    }
    if matches!(s, "int" | "zz" | "z" | "Z") {
        return Ok(RingDescriptor::integers());
    }
    if let Some(rest) = s.strip_prefix("fq:") {
        let (q_text, modulus) = match rest.split_once(':') {
            Some((q, m)) => (q, Some(m)),
            None => (rest, None),
        };
        let q = match q_text.split_once('^') {
            Some((p, k)) => {
                let p: u64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad field order `{q_text}`")))?;
                let k: u32 = k.trim().parse().map_err(|_| Error::Parse(format!("bad field order `{q_text}`")))?;
                p.checked_pow(k).ok_or(Error::FieldTooLarge(u64::MAX))?
            }
            None => q_text.trim().parse().map_err(|_| Error::Parse(format!("bad field order `{q_text}`")))?,
        };
        let (p, k) = prime_power(q).ok_or(Error::NotPrime(q))?;
        return match modulus {
            None => RingDescriptor::field_of_order(q),
            Some(m) => {
                let m = parse_int_poly(m)?;
                let pb = BigInt::from(p);
                let m: Vec<i64> = m.iter().map(|c| c.mod_floor(&pb).to_i64().unwrap()).collect();
                let deg = m.len().saturating_sub(1);
                if deg as u32 != k {
                    return Err(Error::InvalidDescriptor(format!("modulus degree {deg} does not match q = {q}")));
                }
                RingDescriptor::extension_field(p, &m)
            }
        };
    }
    Err(Error::Parse(format!("unknown ring `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_round_trip() {
        for s in ["fq:5", "fq:2^2:x^2+x+1", "poly:fq:3", "laurent:fq:2^2:x^2+x+1", "order:x^2+1", "int", "poly:order:x^3-2"] {
            let r = parse_ring(s).unwrap();
            assert_eq!(r.to_string(), s);
            assert_eq!(parse_ring(&r.to_string()).unwrap(), r);
        }
        assert_eq!(parse_ring("fq:4").unwrap(), parse_ring("fq:4:x^2+x+1").unwrap());
        assert_eq!(parse_ring("fq:2:x^2").unwrap_err(), Error::InvalidDescriptor("modulus degree 2 does not match q = 2".into()));
        assert!(matches!(parse_ring("fq:6"), Err(Error::NotPrime(6))));
    }

    #[test]
    fn elem_round_trip() {
        let cases = [
            ("laurent:fq:5", "t^3+2*t^-1"),
            ("poly:fq:2^2:x^2+x+1", "(x+1)*t^2+x*t+1"),
            ("poly:int", "-3*t^2+t-1"),
            ("order:x^2+1", "2*x-1"),
            ("laurent:order:x^2+1", "-t+(x+1)*t^-1"),
        ];
        for (r, e) in cases {
            let ring = parse_ring(r).unwrap();
            let v = parse_elem(&ring, e).unwrap();
            assert_eq!(v.to_string(), e, "in {r}");
            assert_eq!(parse_elem(&ring, &v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn implicit_products_and_errors() {
        let ring = parse_ring("poly:fq:5").unwrap();
        assert_eq!(parse_elem(&ring, "2t^2").unwrap(), parse_elem(&ring, "2*t^2").unwrap());
        assert_eq!(parse_elem(&ring, "(t+1)^2").unwrap(), parse_elem(&ring, "t^2+2*t+1").unwrap());
        assert!(parse_elem(&ring, "t^-1").is_err());
        assert!(parse_elem(&ring, "y").is_err());
        let f = FiniteField::prime(5).unwrap();
        assert_eq!(parse_field_poly(&f, "x^2+x+2").unwrap(), vec![2, 1, 1]);
        assert_eq!(fmt_field_poly(&f, &[2, 1, 1], "X"), "X^2+X+2");
    }
}
