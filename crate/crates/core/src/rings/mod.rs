//! Base rings, their elements and automorphisms.

mod auto;
mod descriptor;
mod elem;
mod field;
mod text;

pub use auto::{fixed_submodule_rank, ring_auto_apply, RingAuto};
pub use descriptor::{DescriptorKind, MonogenicOrder, RingDescriptor, Scalar};
pub use elem::RingElem;
pub use field::{fmt_poly, is_prime, prime_power, FiniteField, MAX_FIELD_ORDER};
pub use text::{fmt_field_poly, parse_elem, parse_field_poly, parse_int_poly, parse_ring};

use crate::error::{Error, Result};
use crate::linalg::FqMatrix;

/// `F_p` when `modulus` is absent, otherwise `F_p[x]/(m)`.
pub fn make_finite_field(p: u64, modulus: Option<&[i64]>) -> Result<RingDescriptor> {
    match modulus {
        None => RingDescriptor::prime_field(p),
        Some(m) => RingDescriptor::extension_field(p, m),
    }
}

/// First monic irreducible polynomial of degree `d` over `f`, ordering
/// candidates by the base-`q` index of their lower coefficients
/// (`a_0 + a_1 q + ... + a_{d-1} q^{d-1}`).
pub(crate) fn find_irreducible_poly(f: &FiniteField, d: usize) -> Vec<u32> {
    f.monic_polys(d)
        .find(|g| f.poly_is_irreducible(g))
        .expect("irreducible polynomials exist in every degree")
}

/// Canonical monic irreducible polynomial of degree `d >= 2` over a finite
/// field, as ascending coefficient indices.
pub fn find_irreducible(ring: &RingDescriptor, d: usize) -> Result<Vec<u32>> {
    let f = ring.field().ok_or_else(|| Error::InvalidParams(format!("{ring} is not a finite field")))?;
    if d < 2 {
        return Err(Error::InvalidParams(format!("degree {d} < 2")));
    }
    Ok(find_irreducible_poly(f, d))
}

/// Companion matrix of the monic `p` (ones on the subdiagonal, last column
/// `-p_0, ..., -p_{d-1}`) and whether `det(I - a C_P) != 0`.
pub fn companion_lula(f: &FiniteField, p: &[u32], a: u32) -> Result<(FqMatrix, bool)> {
    let p = monic_check(f, p)?;
    if !f.poly_is_irreducible(&p) {
        return Err(Error::ReducibleP(fmt_field_poly(f, &p, "X")));
    }
    let c = companion(f, &p);
    let ok = lula_det(f, &c, a) != 0;
    Ok((c, ok))
}

pub(crate) fn monic_check(f: &FiniteField, p: &[u32]) -> Result<Vec<u32>> {
    let mut p = p.to_vec();
    field::trim(&mut p);
    if p.len() < 2 || *p.last().unwrap() != 1 {
        return Err(Error::InvalidParams(format!("{} is not monic of positive degree", fmt_field_poly(f, &p, "X"))));
    }
    Ok(p)
}

/// Companion matrix without any irreducibility check.
pub fn companion(f: &FiniteField, p: &[u32]) -> FqMatrix {
    let d = p.len() - 1;
    let mut c = FqMatrix::zeros(d, d);
    for i in 1..d {
        c.set(i, i - 1, 1);
    }
    for i in 0..d {
        c.set(i, d - 1, f.neg(p[i]));
    }
    c
}

/// `det(I - a C)`.
pub fn lula_det(f: &FiniteField, c: &FqMatrix, a: u32) -> u32 {
    FqMatrix::identity(c.rows()).sub(f, &c.scale(f, a)).det(f)
}

/// First nonzero `a` in canonical order with `1 - a^2 != 0`.
pub fn find_flip_unit(ring: &RingDescriptor) -> Result<u32> {
    let f = ring
        .coefficient_field()
        .ok_or_else(|| Error::InvalidParams(format!("{ring} has no finite coefficient field")))?;
    f.elements()
        .skip(1)
        .find(|&a| f.sub(1, f.mul(a, a)) != 0)
        .ok_or(Error::FieldTooSmall(f.order() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(q: u64) -> RingDescriptor {
        RingDescriptor::field_of_order(q).unwrap()
    }

    #[test]
    fn canonical_irreducibles() {
        assert_eq!(find_irreducible(&fq(2), 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_irreducible(&fq(3), 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(find_irreducible(&fq(5), 2).unwrap(), vec![2, 0, 1]);
        assert_eq!(find_irreducible(&fq(3), 3).unwrap(), vec![1, 2, 0, 1]);
    }

    #[test]
    fn companion_of_x2_x_2() {
        let f = FiniteField::prime(5).unwrap();
        let (c, ok) = companion_lula(&f, &[2, 1, 1], 1).unwrap();
        assert_eq!(c.to_rows(), vec![vec![0, 3], vec![1, 4]]);
        assert!(ok);
        assert_eq!(lula_det(&f, &c, 1), 4);
        let (_, ok0) = companion_lula(&f, &[2, 1, 1], 0).unwrap();
        assert!(ok0);
        assert!(matches!(companion_lula(&f, &[0, 0, 1], 1), Err(Error::ReducibleP(_))));
    }

    #[test]
    fn flip_units() {
        assert_eq!(find_flip_unit(&fq(5)).unwrap(), 2);
        assert_eq!(find_flip_unit(&fq(4)).unwrap(), 2);
        assert_eq!(find_flip_unit(&fq(3)).unwrap_err(), Error::FieldTooSmall(3));
        assert_eq!(find_flip_unit(&fq(2)).unwrap_err(), Error::FieldTooSmall(2));
        assert!(make_finite_field(2, Some(&[0, 0, 1])).is_err());
    }
}
