//! The `s~` automorphisms of `U_4` and the action on the abelianization.

use super::{elem_tri, extend_from_generators, flip_gen, AutExpr};
use crate::error::{Error, Result};
use crate::matgroups::{GroupElem, GroupTag, TriMatrix};
use crate::rings::{RingDescriptor, RingElem};

/// The two admissible shapes of `s` in `SL_2(R)` over a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StildeShape {
    /// `(a, 0; 0, 1/a)`
    Diagonal(RingElem),
    /// `(0, c; -1/c, 0)`
    Antidiagonal(RingElem),
}

impl StildeShape {
    pub fn unit(&self) -> &RingElem {
        match self {
            StildeShape::Diagonal(a) | StildeShape::Antidiagonal(a) => a,
        }
    }

    /// Rows of `s`.
    pub fn matrix(&self) -> Result<[[RingElem; 2]; 2]> {
        let u = self.unit();
        let ui = u.inv().ok_or_else(|| Error::NotAUnit(u.to_string()))?;
        let z = u.ring().zero();
        Ok(match self {
            StildeShape::Diagonal(_) => [[u.clone(), z.clone()], [z, ui]],
            StildeShape::Antidiagonal(_) => [[z.clone(), u.clone()], [-&ui, z]],
        })
    }

    /// The diagonal `d` displayed alongside the identity `s~ = tau o iota_d`.
    pub fn displayed_d(&self) -> Vec<RingElem> {
        let u = self.unit();
        let one = u.ring().one();
        match self {
            StildeShape::Diagonal(_) => vec![u.clone(), one.clone(), one, u.clone()],
            StildeShape::Antidiagonal(_) => vec![u.clone(), one.clone(), one, -u],
        }
    }
}

/// `s~(x)` on `U_4(R)` from the six generator rules.
pub fn stilde_apply(shape: &StildeShape, x: &GroupElem) -> Result<GroupElem> {
    if x.n() != 4 || x.tag() != GroupTag::Unipotent {
        return Err(Error::SignatureMismatch(format!("{x:?} is not in U_4")));
    }
    let [[a11, a12], [a21, a22]] = shape.matrix()?;
    let ring = x.ring().clone();
    let e = |i, j, r: &RingElem| elem_tri(4, &ring, i, j, r);
    extend_from_generators(x, |i, j, r| {
        Ok(match (i, j) {
            (1, 2) => e(1, 2, &(&a11 * r)).mul(&e(3, 4, &(&a12 * r))),
            (2, 3) => e(2, 3, r),
            (3, 4) => e(1, 2, &(&a21 * r)).mul(&e(3, 4, &(&a22 * r))),
            (1, 3) => e(1, 3, &(&a11 * r)).mul(&e(2, 4, &-(&a12 * r))),
            (2, 4) => e(1, 3, &-(&a21 * r)).mul(&e(2, 4, &(&a22 * r))),
            (1, 4) => e(1, 4, &(&(&(&a11 * &a22) + &(&a12 * &a21)) * r)),
            _ => unreachable!(),
        })
    })
}

/// Outcome of comparing `s~` with `tau o iota_d` on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StildeCheck {
    pub holds: bool,
    /// whether `s~` agrees with `iota_d` alone
    pub equals_inner_d: bool,
    /// first disagreements as `(generator, s~ image, tau o iota_d image)`
    pub mismatches: Vec<(String, String, String)>,
}

fn conj_diag(d: &[RingElem], x: &GroupElem) -> Result<GroupElem> {
    let mut m = TriMatrix::identity(4, x.ring());
    for (i, di) in d.iter().enumerate() {
        m.set(i, i, di.clone());
    }
    GroupElem::new(x.tag(), m.mul(x.matrix()).mul(&m.inv().unwrap()))
}

/// Compares `s~` with `tau o iota_d` (the displayed `d`) on `e_{i,j}(r)` for
/// all six positions and every `r` in `samples`.
pub fn verify_stilde_identity(shape: &StildeShape, samples: &[RingElem]) -> Result<StildeCheck> {
    let ring: RingDescriptor = shape.unit().ring().clone();
    let d = shape.displayed_d();
    let mut check = StildeCheck { holds: true, equals_inner_d: true, mismatches: Vec::new() };
    for (i, j) in crate::matgroups::superdiagonal_order(4) {
        for r in samples {
            let g = GroupElem::new(GroupTag::Unipotent, elem_tri(4, &ring, i, j, r))?;
            let lhs = stilde_apply(shape, &g)?;
            let inner = conj_diag(&d, &g)?;
            let rhs = extend_from_generators(&inner, |a, b, s| Ok(flip_gen(4, a, b, s)))?;
            if lhs != inner {
                check.equals_inner_d = false;
            }
            if lhs != rhs {
                check.holds = false;
                if check.mismatches.len() < 6 {
                    check.mismatches.push((format!("e_{{{i},{j}}}({r})"), lhs.to_string(), rhs.to_string()));
                }
            }
        }
    }
    Ok(check)
}

/// Superdiagonal of `psi(e_{1,2}(v_1) ... e_{n-1,n}(v_{n-1}))`: the induced
/// map on `U_n^ab = R^(n-1)`.
pub fn abelianization_image(psi: &AutExpr, v: &[RingElem]) -> Result<Vec<RingElem>> {
    let n = psi.sig.n;
    if psi.sig.tag != GroupTag::Unipotent || v.len() + 1 != n {
        return Err(Error::SignatureMismatch(format!("abelianization needs U_n and {} coordinates", n - 1)));
    }
    let mut m = TriMatrix::identity(n, &psi.sig.ring);
    for (i, r) in v.iter().enumerate() {
        m = m.mul(&elem_tri(n, &psi.sig.ring, i + 1, i + 2, r));
    }
    let y = psi.apply(&GroupElem::new(GroupTag::Unipotent, m)?)?;
    Ok((0..n - 1).map(|i| y.matrix().get(i, i + 1).clone()).collect())
}

/// 1-based indices `i` of the factors `E_{i,i+1}` forming `E_mid`.
pub fn emid_positions(n: usize) -> Vec<usize> {
    let m = (n - 1).div_ceil(2);
    if n % 2 == 0 {
        vec![m]
    } else {
        vec![m, m + 1]
    }
}

/// The induced map on `E_mid`; fails if `E_mid` is not preserved modulo the
/// other superdiagonal factors.
pub fn emid_restriction(psi: &AutExpr, coords: &[RingElem]) -> Result<Vec<RingElem>> {
    let n = psi.sig.n;
    let pos = emid_positions(n);
    if coords.len() != pos.len() {
        return Err(Error::InvalidParams(format!("E_mid of U_{n} has {} coordinates", pos.len())));
    }
    let mut v = vec![psi.sig.ring.zero(); n - 1];
    for (p, c) in pos.iter().zip(coords) {
        v[p - 1] = c.clone();
    }
    let img = abelianization_image(psi, &v)?;
    for (i, x) in img.iter().enumerate() {
        if !pos.contains(&(i + 1)) && !x.is_zero() {
            return Err(Error::InvalidAutomorphism(format!("E_mid is not preserved in U_{n}")));
        }
    }
    Ok(pos.iter().map(|p| img[p - 1].clone()).collect())
}
