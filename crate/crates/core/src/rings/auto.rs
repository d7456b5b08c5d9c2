use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::descriptor::{order_mul, DescriptorKind, RingDescriptor, Scalar};
use super::elem::RingElem;
use crate::error::{Error, Result};
use crate::linalg::int::{identity, int_det, int_rank, int_solve, sub, IntMatrix};

/// Ring automorphisms used by the paper's constructions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum RingAuto {
    Identity,
    /// `t -> a t + b` on `R_0[t]`; `a` a unit of `R_0`.
    PolyAffine { a: RingElem, b: RingElem },
    /// `t -> t^(-1)` when set, identity otherwise.
    LaurentFlip(bool),
    /// `x -> image` on `Z[x]/(m)`.
    OrderRootMap(RingElem),
}

impl RingAuto {
    pub fn poly_affine(ring: &RingDescriptor, a: RingElem, b: RingElem) -> Result<Self> {
        if !ring.is_poly() {
            return Err(Error::InvalidAutomorphism(format!("affine substitution needs a polynomial ring, got {ring}")));
        }
        ring.base().check_same(a.ring())?;
        ring.base().check_same(b.ring())?;
        if !a.is_unit() {
            return Err(Error::NotAUnit(a.to_string()));
        }
        Ok(RingAuto::PolyAffine { a, b })
    }

    /// Checks that `image` is a root of `m` and that the induced integer
    /// matrix is unimodular.
    pub fn order_root_map(ring: &RingDescriptor, image: RingElem) -> Result<Self> {
        let o = ring
            .order_spec()
            .ok_or_else(|| Error::InvalidAutomorphism(format!("{ring} is not a monogenic order")))?;
        ring.check_same(image.ring())?;
        let x = image.order_coeffs().unwrap();
        // Horner evaluation of m at the image
        let mut acc = vec![BigInt::zero(); o.degree()];
        for c in o.minpoly().iter().rev() {
            acc = order_mul(o, &acc, x);
            acc[0] += c;
        }
        if !acc.iter().all(Zero::is_zero) {
            return Err(Error::InvalidAutomorphism(format!("{image} is not a root of the minimal polynomial")));
        }
        let auto = RingAuto::OrderRootMap(image);
        if !int_det(&auto.order_matrix(ring)?).abs().is_one() {
            return Err(Error::InvalidAutomorphism("induced integer matrix is not unimodular".into()));
        }
        Ok(auto)
    }

    /// Matrix of the automorphism on the power basis of an order.
    pub fn order_matrix(&self, ring: &RingDescriptor) -> Result<IntMatrix> {
        // Z is the rank one order; its only automorphism is the identity
        if matches!(ring.kind(), DescriptorKind::Integers) && matches!(self, RingAuto::Identity) {
            return Ok(identity(1));
        }
        let o = ring
            .order_spec()
            .ok_or_else(|| Error::InvalidAutomorphism(format!("{ring} is not a monogenic order")))?;
        let d = o.degree();
        match self {
            RingAuto::Identity => Ok(identity(d)),
            RingAuto::OrderRootMap(img) => {
                ring.check_same(img.ring())?;
                let x = img.order_coeffs().unwrap();
                let mut m = vec![vec![BigInt::zero(); d]; d];
                let mut pow = vec![BigInt::zero(); d];
                pow[0] = BigInt::one();
                for j in 0..d {
                    for i in 0..d {
                        m[i][j] = pow[i].clone();
                    }
                    pow = order_mul(o, &pow, x);
                }
                Ok(m)
            }
            _ => Err(Error::DescriptorMismatch { expected: self.to_string(), found: ring.to_string() }),
        }
    }

    /// Whether the automorphism is defined on `ring`.
    pub fn compatible(&self, ring: &RingDescriptor) -> bool {
        match self {
            RingAuto::Identity => true,
            RingAuto::PolyAffine { a, .. } => ring.is_poly() && ring.base() == a.ring(),
            RingAuto::LaurentFlip(_) => ring.is_laurent(),
            RingAuto::OrderRootMap(img) => img.ring() == ring,
        }
    }

    pub fn inverse(&self) -> RingAuto {
        match self {
            RingAuto::Identity | RingAuto::LaurentFlip(_) => self.clone(),
            RingAuto::PolyAffine { a, b } => {
                let ai = a.inv().expect("a is a unit");
                RingAuto::PolyAffine { b: -(&ai * b), a: ai }
            }
            RingAuto::OrderRootMap(img) => {
                let ring = img.ring().clone();
                let m = self.order_matrix(&ring).expect("validated");
                let d = m.len();
                let mut x = vec![BigInt::zero(); d];
                if d == 1 {
                    return RingAuto::Identity;
                }
                x[1] = BigInt::one();
                let pre = int_solve(&m, &x).expect("unimodular");
                RingAuto::OrderRootMap(ring.order_elem(pre).unwrap())
            }
        }
    }

    /// Whether every element of degree `<= d` stays of degree `<= d`.
    pub fn preserves_degree(&self) -> bool {
        matches!(self, RingAuto::Identity | RingAuto::PolyAffine { .. })
    }
}

/// Exact image of `r` under `alpha`.
pub fn ring_auto_apply(alpha: &RingAuto, r: &RingElem) -> Result<RingElem> {
    let ring = r.ring();
    if !alpha.compatible(ring) {
        return Err(Error::DescriptorMismatch { expected: format!("ring for {alpha}"), found: ring.to_string() });
    }
    match alpha {
        RingAuto::Identity | RingAuto::LaurentFlip(false) => Ok(r.clone()),
        RingAuto::LaurentFlip(true) => ring.laurent_from_terms(r.terms().into_iter().map(|(e, c)| (-e, c))),
        RingAuto::PolyAffine { a, b } => {
            let sub = ring.poly_from_coeffs(&[b.clone(), a.clone()])?;
            let mut acc = ring.zero();
            let d = r.degree().unwrap_or(-1);
            for e in (0..=d).rev() {
                acc = &(&acc * &sub) + &ring.constant(&r.coeff(e))?;
            }
            Ok(acc)
        }
        RingAuto::OrderRootMap(_) => {
            let m = alpha.order_matrix(ring)?;
            let v: Vec<BigInt> = r.order_coeffs().unwrap().to_vec();
            let img = crate::linalg::int::mul_vec(&m, &v);
            Ok(RingElem::from_scalar(ring.clone(), Scalar::O(img)))
        }
    }
}

/// Rank of the fixed submodule `ker(sigma - id)` of an order automorphism.
pub fn fixed_submodule_rank(sigma: &RingAuto, ring: &RingDescriptor) -> Result<usize> {
    if !matches!(ring.kind(), DescriptorKind::Order(_)) {
        return Err(Error::InvalidParams(format!("{ring} is not a monogenic order")));
    }
    let m = sigma.order_matrix(ring)?;
    let d = m.len();
    Ok(d - int_rank(&sub(&m, &identity(d))))
}

impl fmt::Display for RingAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingAuto::Identity => write!(f, "id"),
            RingAuto::PolyAffine { a, b } => write!(f, "t->a*t+b:a={a},b={b}"),
            RingAuto::LaurentFlip(e) => write!(f, "eps={}", u8::from(*e)),
            RingAuto::OrderRootMap(img) => write!(f, "x->{img}"),
        }
    }
}

impl fmt::Debug for RingAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingAuto({self})")
    }
}
