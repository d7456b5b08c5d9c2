use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{prime_power, FiniteField};
use super::find_irreducible_poly;
use crate::error::{Error, Result};
use crate::linalg::int::{int_det, int_solve};

/// Cheaply clonable handle to one of the supported base rings.
#[derive(Clone)]
pub struct RingDescriptor(Arc<DescriptorKind>);

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum DescriptorKind {
    /// `F_p` or `F_p[x]/(m)`.
    Field(FiniteField),
    Integers,
    /// `Z[x]/(m)` for monic `m` with integer coefficients.
    Order(MonogenicOrder),
    Poly(RingDescriptor),
    Laurent(RingDescriptor),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonogenicOrder {
    /// Monic, ascending.
    minpoly: Vec<BigInt>,
}

impl MonogenicOrder {
    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

/// Coefficient-level element of a base ring (field, integers or order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scalar {
    F(u32),
    Z(BigInt),
    O(Vec<BigInt>),
}

impl PartialEq for RingDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for RingDescriptor {}

impl std::hash::Hash for RingDescriptor {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingDescriptor({self})")
    }
}

impl RingDescriptor {
    fn new(kind: DescriptorKind) -> Self {
        RingDescriptor(Arc::new(kind))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Ok(Self::new(DescriptorKind::Field(FiniteField::prime(p)?)))
    }

    /// `F_p[x]/(m)`, modulus given by ascending integer coefficients.
    pub fn extension_field(p: u64, modulus: &[i64]) -> Result<Self> {
        Ok(Self::new(DescriptorKind::Field(FiniteField::extension(p, modulus)?)))
    }

    /// `F_q` for a prime power `q`, using the canonical irreducible modulus when `q` is not prime.
    pub fn field_of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrime(q))?;
        if k == 1 {
            return Self::prime_field(p);
        }
        let base = FiniteField::prime(p)?;
        let m = find_irreducible_poly(&base, k as usize);
        let m: Vec<i64> = m.into_iter().map(i64::from).collect();
        Self::extension_field(p, &m)
    }

    pub fn integers() -> Self {
        Self::new(DescriptorKind::Integers)
    }

    pub fn order(minpoly: &[i64]) -> Result<Self> {
        Self::order_big(minpoly.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn order_big(mut minpoly: Vec<BigInt>) -> Result<Self> {
        while minpoly.last().is_some_and(|c| c.is_zero()) {
            minpoly.pop();
        }
        if minpoly.len() < 2 || !minpoly.last().unwrap().is_one() {
            return Err(Error::InvalidDescriptor("order minimal polynomial must be monic of degree >= 1".into()));
        }
        Ok(Self::new(DescriptorKind::Order(MonogenicOrder { minpoly })))
    }

    pub fn poly(base: RingDescriptor) -> Result<Self> {
        if !base.is_base() {
            return Err(Error::InvalidDescriptor(format!("polynomial base must be a field, Z or an order, got {base}")));
        }
        Ok(Self::new(DescriptorKind::Poly(base)))
    }

    pub fn laurent(base: RingDescriptor) -> Result<Self> {
        if !base.is_base() {
            return Err(Error::InvalidDescriptor(format!("Laurent base must be a field, Z or an order, got {base}")));
        }
        Ok(Self::new(DescriptorKind::Laurent(base)))
    }

    pub fn kind(&self) -> &DescriptorKind {
        &self.0
    }

    /// Field, integers or order.
    pub fn is_base(&self) -> bool {
        matches!(*self.0, DescriptorKind::Field(_) | DescriptorKind::Integers | DescriptorKind::Order(_))
    }

    /// Coefficient ring of a polynomial or Laurent ring; `self` for base rings.
    pub fn base(&self) -> &RingDescriptor {
        match &*self.0 {
            DescriptorKind::Poly(b) | DescriptorKind::Laurent(b) => b,
            _ => self,
        }
    }

    pub fn field(&self) -> Option<&FiniteField> {
        match &*self.0 {
            DescriptorKind::Field(f) => Some(f),
            _ => None,
        }
    }

    /// The finite field of coefficients, for fields and rings over fields.
    pub fn coefficient_field(&self) -> Option<&FiniteField> {
        self.base().field()
    }

    pub fn order_spec(&self) -> Option<&MonogenicOrder> {
        match &*self.0 {
            DescriptorKind::Order(o) => Some(o),
            _ => None,
        }
    }

    pub fn is_poly(&self) -> bool {
        matches!(*self.0, DescriptorKind::Poly(_))
    }

    pub fn is_laurent(&self) -> bool {
        matches!(*self.0, DescriptorKind::Laurent(_))
    }

    pub fn is_finite(&self) -> bool {
        self.field().is_some()
    }

    pub(crate) fn check_same(&self, other: &RingDescriptor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch { expected: self.to_string(), found: other.to_string() })
        }
    }

    // ---------------------------------------------------------------
    // Scalar arithmetic; `self` must be a base ring.
    // ---------------------------------------------------------------

    pub(crate) fn s_zero(&self) -> Scalar {
        match &*self.0 {
            DescriptorKind::Field(_) => Scalar::F(0),
            DescriptorKind::Integers => Scalar::Z(BigInt::zero()),
            DescriptorKind::Order(o) => Scalar::O(vec![BigInt::zero(); o.degree()]),
            _ => unreachable!("scalar op on non-base ring {self}"),
        }
    }

    pub(crate) fn s_from_int(&self, n: i64) -> Scalar {
        match &*self.0 {
            DescriptorKind::Field(f) => Scalar::F(f.from_int(n)),
            DescriptorKind::Integers => Scalar::Z(BigInt::from(n)),
            DescriptorKind::Order(o) => {
                let mut v = vec![BigInt::zero(); o.degree()];
                v[0] = BigInt::from(n);
                Scalar::O(v)
            }
            _ => unreachable!(),
        }
    }

    pub(crate) fn s_is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::F(x) => *x == 0,
            Scalar::Z(x) => x.is_zero(),
            Scalar::O(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub(crate) fn s_add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (DescriptorKind::Field(f), Scalar::F(x), Scalar::F(y)) => Scalar::F(f.add(*x, *y)),
            (_, Scalar::Z(x), Scalar::Z(y)) => Scalar::Z(x + y),
            (_, Scalar::O(x), Scalar::O(y)) => Scalar::O(x.iter().zip(y).map(|(u, v)| u + v).collect()),
            _ => panic!("scalar kind mismatch in {self}"),
        }
    }

    pub(crate) fn s_neg(&self, a: &Scalar) -> Scalar {
        match (&*self.0, a) {
            (DescriptorKind::Field(f), Scalar::F(x)) => Scalar::F(f.neg(*x)),
            (_, Scalar::Z(x)) => Scalar::Z(-x),
            (_, Scalar::O(x)) => Scalar::O(x.iter().map(|u| -u).collect()),
            _ => panic!("scalar kind mismatch in {self}"),
        }
    }

    pub(crate) fn s_mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (DescriptorKind::Field(f), Scalar::F(x), Scalar::F(y)) => Scalar::F(f.mul(*x, *y)),
            (_, Scalar::Z(x), Scalar::Z(y)) => Scalar::Z(x * y),
            (DescriptorKind::Order(o), Scalar::O(x), Scalar::O(y)) => Scalar::O(order_mul(o, x, y)),
            _ => panic!("scalar kind mismatch in {self}"),
        }
    }

    pub(crate) fn s_is_unit(&self, a: &Scalar) -> bool {
        match (&*self.0, a) {
            (DescriptorKind::Field(_), Scalar::F(x)) => *x != 0,
            (_, Scalar::Z(x)) => x.abs().is_one(),
            (DescriptorKind::Order(o), Scalar::O(x)) => int_det(&order_mul_matrix(o, x)).abs().is_one(),
            _ => false,
        }
    }

    pub(crate) fn s_inv(&self, a: &Scalar) -> Option<Scalar> {
        if !self.s_is_unit(a) {
            return None;
        }
        match (&*self.0, a) {
            (DescriptorKind::Field(f), Scalar::F(x)) => Some(Scalar::F(f.inv(*x))),
            (_, Scalar::Z(x)) => Some(Scalar::Z(x.clone())),
            (DescriptorKind::Order(o), Scalar::O(x)) => {
                let m = order_mul_matrix(o, x);
                let mut e0 = vec![BigInt::zero(); o.degree()];
                e0[0] = BigInt::one();
                int_solve(&m, &e0).map(Scalar::O)
            }
            _ => None,
        }
    }

    /// Exact division by 2, if defined.
    pub(crate) fn s_half(&self, a: &Scalar) -> Option<Scalar> {
        let two = self.s_from_int(2);
        if let Some(inv) = self.s_inv(&two) {
            return Some(self.s_mul(a, &inv));
        }
        let two = BigInt::from(2);
        match a {
            Scalar::Z(x) => (x % &two).is_zero().then(|| Scalar::Z(x / &two)),
            Scalar::O(v) => v.iter().all(|c| (c % &two).is_zero()).then(|| Scalar::O(v.iter().map(|c| c / &two).collect())),
            Scalar::F(_) => None,
        }
    }
}

/// Product in `Z[x]/(m)`, reducing with the monic minimal polynomial.
pub(crate) fn order_mul(o: &MonogenicOrder, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let d = o.degree();
    let mut prod = vec![BigInt::zero(); 2 * d - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            prod[i + j] += a * b;
        }
    }
    for top in (d..prod.len()).rev() {
        let c = std::mem::take(&mut prod[top]);
        if c.is_zero() {
            continue;
        }
        for i in 0..d {
            let m = &o.minpoly[i];
            prod[top - d + i] -= &c * m;
        }
    }
    prod.truncate(d);
    prod
}

/// Matrix (columns = images of the power basis) of multiplication by `x`.
pub(crate) fn order_mul_matrix(o: &MonogenicOrder, x: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = o.degree();
    let mut m = vec![vec![BigInt::zero(); d]; d];
    for j in 0..d {
        let mut basis = vec![BigInt::zero(); d];
        basis[j] = BigInt::one();
        let col = order_mul(o, x, &basis);
        for i in 0..d {
            m[i][j] = col[i].clone();
        }
    }
    m
}
