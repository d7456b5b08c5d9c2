//! Twisted classes of the flip automorphisms of rank-two groups over
//! `F_q[t, 1/t]`.
//!
//! With `g = (t^k, f; t^l)` and `c = diag(t^x, t^y)` the twisted image
//! `g c phi_B(g)^-1` is `(t^(2k+x), t^(l+y) f(t) - a t^(2k+l+x) f(1/t); t^(2l+y))`,
//! so the diagonal exponents mod 2 are invariants and every element is
//! reached from one of the four diagonal representatives. Writing
//! `F = t^(l+y) f` turns the corner into `h_m = F_m - a F_(N-m)` with
//! `N = 2k+2l+x+y`, solved per index pair `{m, N-m}`.

use std::collections::BTreeSet;

use super::{twist_orbit, ClassReport, Obstruction, Verdict, Witness};
use crate::autos::{AutExpr, AutStep, Sec6Kind};
use crate::error::{Error, Result};
use crate::matgroups::{GroupElem, GroupTag, TriMatrix};
use crate::rings::RingElem;

/// `F` with `F(t) - a t^n F(1/t) = h`, for `a` a field index with `1 - a^2 != 0`.
pub fn solve_flip_twisted(h: &RingElem, a: u32, n: i64) -> Result<RingElem> {
    let ring = h.ring();
    let f = ring
        .coefficient_field()
        .filter(|_| ring.is_laurent())
        .ok_or_else(|| Error::InvalidParams(format!("{ring} is not F_q[t,1/t]")))?;
    let det = f.sub(1, f.mul(a, a));
    if det == 0 {
        return Err(Error::InvalidParams(format!("1 - a^2 vanishes for a = {}", f.format_elem(a))));
    }
    let det_inv = f.inv(det);
    let hc = |m: i64| h.coeff(m).field_index().unwrap();
    let support: BTreeSet<i64> = h.terms().iter().map(|(m, _)| (*m).min(n - m)).collect();
    let mut terms = Vec::new();
    for m in support {
        let m2 = n - m;
        if m == m2 {
            terms.push((m, f.mul(hc(m), f.inv(f.sub(1, a)))));
        } else {
            let (h1, h2) = (hc(m), hc(m2));
            terms.push((m, f.mul(f.add(h1, f.mul(a, h2)), det_inv)));
            terms.push((m2, f.mul(f.add(h2, f.mul(a, h1)), det_inv)));
        }
    }
    let base = ring.base();
    let big_f = ring.laurent_from_terms(
        terms.into_iter().map(|(e, c)| Ok((e, base.field_elem(c)?))).collect::<Result<Vec<_>>>()?,
    )?;
    let flipped = ring.laurent_from_terms(big_f.terms().into_iter().map(|(e, c)| (n - e, c)))?;
    let check = &big_f - &flipped.scale(&base.field_elem(a)?);
    assert_eq!(&check, h, "flip equation solution failed verification");
    Ok(big_f)
}

fn flip_params(psi: &AutExpr) -> Result<(Sec6Kind, u32)> {
    match psi.steps.as_slice() {
        [AutStep::Section6 { kind: kind @ (Sec6Kind::PhiA | Sec6Kind::PhiB | Sec6Kind::PhiPrime), a, .. }] => Ok((*kind, *a)),
        _ => Err(Error::InvalidAutomorphism(format!("{psi} is not one of phiA, phiB, phiPrime"))),
    }
}

fn exponent(u: &RingElem) -> Result<i64> {
    match u.as_monomial() {
        Some((c, e)) if c.is_one() => Ok(e),
        _ => Err(Error::TagMismatch(format!("diagonal entry {u} is not a power of t"))),
    }
}

fn parities(b: &GroupElem) -> Result<Vec<i64>> {
    b.matrix().diagonal().iter().map(|d| Ok(exponent(d)?.rem_euclid(2))).collect()
}

/// `g` with `g diag(t^x, t^y) psi(g)^-1 = b`, where `x, y` are the parities
/// of the diagonal exponents of `b`.
fn reach(b: &GroupElem, psi: &AutExpr, a: u32) -> Result<GroupElem> {
    let ring = b.ring();
    let one = ring.base().one();
    let m = b.matrix();
    let (e1, e2) = (exponent(m.get(0, 0))?, exponent(m.get(1, 1))?);
    let (x, y) = (e1.rem_euclid(2), e2.rem_euclid(2));
    let (k, l) = ((e1 - x) / 2, (e2 - y) / 2);
    let big_f = solve_flip_twisted(m.get(0, 1), a, e1 + e2)?;
    let f = big_f.shift(-(l + y))?;
    let g = GroupElem::new(b.tag(), TriMatrix::from_rows(ring, vec![
        vec![ring.monomial(&one, k)?, f],
        vec![ring.zero(), ring.monomial(&one, l)?],
    ])?)?;
    let c = GroupElem::new(b.tag(), TriMatrix::from_rows(ring, vec![
        vec![ring.monomial(&one, x)?, ring.zero()],
        vec![ring.zero(), ring.monomial(&one, y)?],
    ])?)?;
    assert_eq!(&twist_orbit(&g, &c, psi)?, b, "diagonal representative not reached");
    Ok(g)
}

/// Decides `b ~ b2` under `phi_B` on `B_2^+`, `phi_A` on `PB_2^+` or `phi'`
/// on `U_2`, over `F_q[t,1/t]`.
pub fn laurent_b2_decide(b: &GroupElem, b2: &GroupElem, psi: &AutExpr) -> Result<ClassReport> {
    let (kind, a) = flip_params(psi)?;
    psi.sig.check(b)?;
    psi.sig.check(b2)?;
    let ring = &psi.sig.ring;
    let f = ring.coefficient_field().unwrap();
    if f.order() < 4 {
        return Err(Error::FieldTooSmall(u64::from(f.order())));
    }
    let tag_ok = match kind {
        Sec6Kind::PhiB => psi.sig.tag == GroupTag::BorelPlus,
        Sec6Kind::PhiA => psi.sig.tag == GroupTag::ProjBorelPlus,
        _ => psi.sig.tag == GroupTag::Unipotent,
    };
    if !tag_ok {
        return Err(Error::SignatureMismatch(format!("{} on {} is not a solved case", kind.name(), psi.sig)));
    }
    let g = if kind == Sec6Kind::PhiPrime {
        let h = b2.matrix().get(0, 1) - b.matrix().get(0, 1);
        let s = solve_flip_twisted(&h, a, 0)?;
        let mut m = TriMatrix::identity(2, ring);
        m.set(0, 1, s);
        GroupElem::new(GroupTag::Unipotent, m)?
    } else {
        let (p1, p2) = (parities(b)?, parities(b2)?);
        if p1 != p2 {
            return Ok(ClassReport::new(Verdict::Distinct(Obstruction::Parity { left: p1, right: p2 })));
        }
        reach(b2, psi, a)?.mul(&reach(b, psi, a)?.inv())?
    };
    assert_eq!(&twist_orbit(&g, b, psi)?, b2, "witness failed verification");
    Ok(ClassReport::new(Verdict::Witness(Witness::Group(g))))
}
