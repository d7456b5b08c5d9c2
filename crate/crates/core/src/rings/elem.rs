use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::descriptor::{DescriptorKind, RingDescriptor, Scalar};
use crate::error::{Error, Result};

/// An exact element of one of the supported rings.
///
/// Polynomials are dense and trimmed; Laurent polynomials are sparse maps
/// with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: RingDescriptor,
    value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Value {
    Scalar(Scalar),
    Poly(Vec<Scalar>),
    Laurent(BTreeMap<i64, Scalar>),
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ring)
    }
}

impl RingDescriptor {
    pub fn zero(&self) -> RingElem {
        let value = match self.kind() {
            DescriptorKind::Poly(_) => Value::Poly(Vec::new()),
            DescriptorKind::Laurent(_) => Value::Laurent(BTreeMap::new()),
            _ => Value::Scalar(self.s_zero()),
        };
        RingElem { ring: self.clone(), value }
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        let c = self.base().s_from_int(n);
        self.constant_scalar(c)
    }

    fn constant_scalar(&self, c: Scalar) -> RingElem {
        let value = match self.kind() {
            DescriptorKind::Poly(_) => Value::Poly(vec![c]),
            DescriptorKind::Laurent(_) => Value::Laurent(BTreeMap::from([(0, c)])),
            _ => Value::Scalar(c),
        };
        RingElem::normalized(self.clone(), value)
    }

    /// Embeds a base-ring element as a constant.
    pub fn constant(&self, c: &RingElem) -> Result<RingElem> {
        self.base().check_same(c.ring())?;
        Ok(self.constant_scalar(c.scalar().clone()))
    }

    /// Field element by canonical index.
    pub fn field_elem(&self, index: u32) -> Result<RingElem> {
        let f = self.field().ok_or_else(|| Error::InvalidParams(format!("{self} is not a field")))?;
        if index >= f.order() {
            return Err(Error::InvalidParams(format!("index {index} out of range for F_{}", f.order())));
        }
        Ok(RingElem { ring: self.clone(), value: Value::Scalar(Scalar::F(index)) })
    }

    pub fn integer(&self, n: BigInt) -> Result<RingElem> {
        match self.kind() {
            DescriptorKind::Integers => Ok(RingElem { ring: self.clone(), value: Value::Scalar(Scalar::Z(n)) }),
            _ => Err(Error::InvalidParams(format!("{self} is not Z"))),
        }
    }

    /// Order element from its power-basis coefficients.
    pub fn order_elem(&self, coeffs: Vec<BigInt>) -> Result<RingElem> {
        let o = self.order_spec().ok_or_else(|| Error::InvalidParams(format!("{self} is not an order")))?;
        if coeffs.len() != o.degree() {
            return Err(Error::InvalidParams(format!("order element needs {} coefficients", o.degree())));
        }
        Ok(RingElem { ring: self.clone(), value: Value::Scalar(Scalar::O(coeffs)) })
    }

    /// The variable `t` of a polynomial or Laurent ring, or `x` of an order.
    pub fn var(&self) -> Result<RingElem> {
        match self.kind() {
            DescriptorKind::Poly(_) | DescriptorKind::Laurent(_) => self.monomial(&self.base().one(), 1),
            DescriptorKind::Order(o) => {
                let mut v = vec![BigInt::from(0); o.degree()];
                if o.degree() == 1 {
                    // x is the integer -m_0
                    v[0] = -o.minpoly()[0].clone();
                } else {
                    v[1] = BigInt::from(1);
                }
                self.order_elem(v)
            }
            _ => Err(Error::InvalidParams(format!("{self} has no variable"))),
        }
    }

    /// `c * t^e`; negative exponents only in Laurent rings.
    pub fn monomial(&self, c: &RingElem, e: i64) -> Result<RingElem> {
        self.laurent_from_terms([(e, c.clone())])
    }

    /// Polynomial from ascending base coefficients.
    pub fn poly_from_coeffs(&self, coeffs: &[RingElem]) -> Result<RingElem> {
        self.laurent_from_terms(coeffs.iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
    }

    /// Sum of `c * t^e` terms; works for both polynomial and Laurent rings.
    pub fn laurent_from_terms(&self, terms: impl IntoIterator<Item = (i64, RingElem)>) -> Result<RingElem> {
        let base = self.base().clone();
        let mut map: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            base.check_same(c.ring())?;
            let entry = map.entry(e).or_insert_with(|| base.s_zero());
            *entry = base.s_add(entry, c.scalar());
        }
        let value = match self.kind() {
            DescriptorKind::Poly(_) => {
                if map.keys().next().is_some_and(|&e| e < 0) && map.iter().any(|(&e, c)| e < 0 && !base.s_is_zero(c)) {
                    return Err(Error::InvalidParams(format!("negative exponent in {self}")));
                }
                let top = map.keys().next_back().copied().unwrap_or(-1).max(-1);
                let mut v = vec![base.s_zero(); (top + 1) as usize];
                for (e, c) in map {
                    if e >= 0 {
                        v[e as usize] = c;
                    }
                }
                Value::Poly(v)
            }
            DescriptorKind::Laurent(_) => Value::Laurent(map),
            _ => return Err(Error::InvalidParams(format!("{self} is not a polynomial ring"))),
        };
        Ok(RingElem::normalized(self.clone(), value))
    }
}

impl RingElem {
    pub(crate) fn normalized(ring: RingDescriptor, mut value: Value) -> Self {
        let base = ring.base().clone();
        match &mut value {
            Value::Poly(v) => {
                while v.last().is_some_and(|c| base.s_is_zero(c)) {
                    v.pop();
                }
            }
            Value::Laurent(m) => m.retain(|_, c| !base.s_is_zero(c)),
            Value::Scalar(_) => {}
        }
        RingElem { ring, value }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub(crate) fn scalar(&self) -> &Scalar {
        match &self.value {
            Value::Scalar(s) => s,
            _ => panic!("{self} is not a base-ring element"),
        }
    }

    pub(crate) fn from_scalar(ring: RingDescriptor, s: Scalar) -> Self {
        RingElem { ring, value: Value::Scalar(s) }
    }

    /// Canonical index of a field element.
    pub fn field_index(&self) -> Option<u32> {
        match &self.value {
            Value::Scalar(Scalar::F(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match &self.value {
            Value::Scalar(Scalar::Z(x)) => Some(x),
            _ => None,
        }
    }

    /// Power-basis coefficients of an order element.
    pub fn order_coeffs(&self) -> Option<&[BigInt]> {
        match &self.value {
            Value::Scalar(Scalar::O(v)) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Scalar(s) => self.ring.s_is_zero(s),
            Value::Poly(v) => v.is_empty(),
            Value::Laurent(m) => m.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    /// Nonzero terms `(exponent, coefficient)` in ascending order; a base
    /// element is a single term of exponent 0.
    pub fn terms(&self) -> Vec<(i64, RingElem)> {
        let base = self.ring.base().clone();
        match &self.value {
            Value::Scalar(_) => {
                if self.is_zero() {
                    Vec::new()
                } else {
                    vec![(0, self.clone())]
                }
            }
            Value::Poly(v) => v
                .iter()
                .enumerate()
                .filter(|(_, c)| !base.s_is_zero(c))
                .map(|(i, c)| (i as i64, RingElem::from_scalar(base.clone(), c.clone())))
                .collect(),
            Value::Laurent(m) => m.iter().map(|(&e, c)| (e, RingElem::from_scalar(base.clone(), c.clone()))).collect(),
        }
    }

    /// Coefficient of `t^e` (base-ring element).
    pub fn coeff(&self, e: i64) -> RingElem {
        let base = self.ring.base().clone();
        let s = match &self.value {
            Value::Scalar(s) => {
                if e == 0 {
                    s.clone()
                } else {
                    base.s_zero()
                }
            }
            Value::Poly(v) => usize::try_from(e).ok().and_then(|i| v.get(i).cloned()).unwrap_or_else(|| base.s_zero()),
            Value::Laurent(m) => m.get(&e).cloned().unwrap_or_else(|| base.s_zero()),
        };
        RingElem::from_scalar(base, s)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.terms().last().map(|(e, _)| *e)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i64> {
        self.terms().first().map(|(e, _)| *e)
    }

    fn check(&self, other: &RingElem) {
        assert!(self.ring == other.ring, "ring mismatch: {} vs {}", self.ring, other.ring);
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        self.check(other);
        let base = self.ring.base();
        let value = match (&self.value, &other.value) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(self.ring.s_add(a, b)),
            (Value::Poly(a), Value::Poly(b)) => {
                let n = a.len().max(b.len());
                let zero = base.s_zero();
                Value::Poly((0..n).map(|i| base.s_add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero))).collect())
            }
            (Value::Laurent(a), Value::Laurent(b)) => {
                let mut out = a.clone();
                for (e, c) in b {
                    let entry = out.entry(*e).or_insert_with(|| base.s_zero());
                    *entry = base.s_add(entry, c);
                }
                Value::Laurent(out)
            }
            _ => unreachable!(),
        };
        RingElem::normalized(self.ring.clone(), value)
    }

    pub fn neg(&self) -> RingElem {
        let base = self.ring.base();
        let value = match &self.value {
            Value::Scalar(a) => Value::Scalar(self.ring.s_neg(a)),
            Value::Poly(v) => Value::Poly(v.iter().map(|c| base.s_neg(c)).collect()),
            Value::Laurent(m) => Value::Laurent(m.iter().map(|(e, c)| (*e, base.s_neg(c))).collect()),
        };
        RingElem { ring: self.ring.clone(), value }
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        self.check(other);
        let base = self.ring.base();
        let value = match (&self.value, &other.value) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(self.ring.s_mul(a, b)),
            (Value::Poly(a), Value::Poly(b)) => {
                if a.is_empty() || b.is_empty() {
                    Value::Poly(Vec::new())
                } else {
                    let mut out = vec![base.s_zero(); a.len() + b.len() - 1];
                    for (i, x) in a.iter().enumerate() {
                        if base.s_is_zero(x) {
                            continue;
                        }
                        for (j, y) in b.iter().enumerate() {
                            out[i + j] = base.s_add(&out[i + j], &base.s_mul(x, y));
                        }
                    }
                    Value::Poly(out)
                }
            }
            (Value::Laurent(a), Value::Laurent(b)) => {
                let mut out: BTreeMap<i64, Scalar> = BTreeMap::new();
                for (i, x) in a {
                    for (j, y) in b {
                        let entry = out.entry(i + j).or_insert_with(|| base.s_zero());
                        *entry = base.s_add(entry, &base.s_mul(x, y));
                    }
                }
                Value::Laurent(out)
            }
            _ => unreachable!(),
        };
        RingElem::normalized(self.ring.clone(), value)
    }

    pub fn pow(&self, e: u32) -> RingElem {
        let mut out = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    pub fn is_unit(&self) -> bool {
        self.inv().is_some()
    }

    /// Multiplicative inverse, if `self` is a unit. All supported rings are
    /// integral domains, so polynomial units are unit constants and Laurent
    /// units are unit monomials.
    pub fn inv(&self) -> Option<RingElem> {
        let base = self.ring.base();
        match &self.value {
            Value::Scalar(s) => self.ring.s_inv(s).map(|i| RingElem::from_scalar(self.ring.clone(), i)),
            Value::Poly(v) => {
                if v.len() != 1 {
                    return None;
                }
                base.s_inv(&v[0]).map(|i| RingElem { ring: self.ring.clone(), value: Value::Poly(vec![i]) })
            }
            Value::Laurent(m) => {
                if m.len() != 1 {
                    return None;
                }
                let (e, c) = m.iter().next().unwrap();
                base.s_inv(c).map(|i| RingElem { ring: self.ring.clone(), value: Value::Laurent(BTreeMap::from([(-e, i)])) })
            }
        }
    }

    /// `self / 2` when 2 is invertible or the division is exact.
    pub fn half(&self) -> Option<RingElem> {
        let base = self.ring.base().clone();
        let terms: Option<Vec<(i64, RingElem)>> = self
            .terms()
            .into_iter()
            .map(|(e, c)| base.s_half(c.scalar()).map(|h| (e, RingElem::from_scalar(base.clone(), h))))
            .collect();
        let terms = terms?;
        if self.ring.is_base() {
            return Some(terms.into_iter().next().map(|(_, c)| c).unwrap_or_else(|| self.ring.zero()));
        }
        self.ring.laurent_from_terms(terms).ok()
    }

    /// Multiplies by a base-ring scalar.
    pub fn scale(&self, c: &RingElem) -> RingElem {
        if self.ring.is_base() {
            return self.mul(c);
        }
        let terms = self.terms().into_iter().map(|(e, x)| (e, &x * c));
        self.ring.laurent_from_terms(terms).expect("scaling keeps the support")
    }

    /// Multiplies by `t^k` (Laurent rings, or polynomial rings with `k >= 0`).
    pub fn shift(&self, k: i64) -> Result<RingElem> {
        self.ring.laurent_from_terms(self.terms().into_iter().map(|(e, c)| (e + k, c)))
    }

    /// If `self = c * t^k` with `c` a base element, returns `(c, k)`.
    pub fn as_monomial(&self) -> Option<(RingElem, i64)> {
        let terms = self.terms();
        match terms.as_slice() {
            [(e, c)] => Some((c.clone(), *e)),
            _ => None,
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                RingElem::$method(self, rhs)
            }
        }
        impl $trait<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                RingElem::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(self)
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(&self)
    }
}
