//! Twisted classes of additive maps: `x ~ x + s - l(s)`, decided by linear
//! algebra on a finite window.
//!
//! Windows are chosen so that the answer on the window is the answer in the
//! whole ring. For `t -> a t + b` over `F_p`, `F_p[t]` is free over the
//! invariant subring `F_p[t^p - b^(p-1) t]` with basis `1, .., t^(p-1)`, so a
//! preimage of degree at most `deg + p - 1` exists whenever any preimage
//! does. The flip of `F_q[t, 1/t]` and block companion maps are exact on
//! symmetric and block aligned windows.

use num_bigint::BigUint;
use num_integer::Integer;

use super::{ClassReport, InfiniteCertificate, Obstruction, Verdict, Witness};
use crate::autos::{truncation_matrix, AdditiveMapSpec, TruncationMap, Window};
use crate::error::{Error, Result};
use crate::linalg::fq::dot;
use crate::linalg::{FqMatrix, Solution};
use crate::rings::{companion, monic_check, ring_auto_apply, RingAuto, RingDescriptor, RingElem};

/// Result of a linear membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearOutcome<W> {
    Witness(W),
    Obstructed(Obstruction),
}

#[derive(Debug, Clone)]
pub struct AdditiveClassData {
    pub map: AdditiveMapSpec,
    pub trunc: TruncationMap,
    /// `I - A`
    pub m: FqMatrix,
    pub rank: usize,
    /// `q^(dim - rank)`
    pub count: BigUint,
}

fn q_pow(q: u32, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

fn monomial_labels(labels: &[i64], prefix: &str) -> Vec<String> {
    labels.iter().map(|e| format!("{prefix}t^{e}")).collect()
}

/// Re-checks a left null certificate before it leaves the solver.
fn certify(m: &FqMatrix, f: &crate::rings::FiniteField, v: Vec<u32>, b: &[u32], labels: Vec<String>) -> Obstruction {
    assert!(m.vec_mul(f, &v).iter().all(|&x| x == 0), "certificate is not a left null vector");
    let residual = dot(f, &v, b);
    assert_ne!(residual, 0, "certificate does not separate");
    Obstruction::Functional { labels, functional: v, residual }
}

pub fn additive_class_data(l: &AdditiveMapSpec, ring: &RingDescriptor, window: Window) -> Result<AdditiveClassData> {
    let trunc = truncation_matrix(l, ring, window)?;
    let f = trunc.field();
    let m = FqMatrix::identity(trunc.dim()).sub(f, &trunc.matrix);
    let rank = m.rank(f);
    let count = q_pow(f.order(), trunc.dim() - rank);
    Ok(AdditiveClassData { map: l.clone(), trunc, m, rank, count })
}

impl AdditiveClassData {
    /// `s` with `s - l(s) = target`, or a functional vanishing on the image.
    pub fn solve(&self, target: &RingElem) -> Result<LinearOutcome<RingElem>> {
        let f = self.trunc.field();
        let b = self.trunc.coords(target)?;
        match self.m.solve(f, &b) {
            Solution::Solved(x) => {
                let s = self.trunc.elem(&x);
                let check = &s - &self.map.apply(&s)?;
                assert_eq!(&check, target, "additive witness failed verification");
                Ok(LinearOutcome::Witness(s))
            }
            Solution::Obstructed(v) => {
                Ok(LinearOutcome::Obstructed(certify(&self.m, f, v, &b, monomial_labels(&self.trunc.labels, ""))))
            }
        }
    }

    /// Decides `x ~ y`, i.e. whether `y - x` lies in the image of `id - l`.
    pub fn decide(&self, x: &RingElem, y: &RingElem) -> Result<ClassReport> {
        Ok(ClassReport::new(match self.solve(&(y - x))? {
            LinearOutcome::Witness(s) => Verdict::Witness(Witness::Ring(s)),
            LinearOutcome::Obstructed(o) => Verdict::Distinct(o),
        }))
    }

    pub fn count_report(&self) -> ClassReport {
        ClassReport::new(Verdict::Count(self.count.clone()))
    }
}

fn block_sizes(l: &AdditiveMapSpec, out: &mut Vec<usize>) {
    match l {
        AdditiveMapSpec::BlockCompanion { p, .. } => out.push(p.len().saturating_sub(1).max(1)),
        AdditiveMapSpec::Compose(parts) => parts.iter().for_each(|m| block_sizes(m, out)),
        _ => {}
    }
}

/// A window containing `elems` on which membership in the image of `id - l`
/// is decided exactly (for the degree preserving maps described above).
pub fn default_window(l: &AdditiveMapSpec, ring: &RingDescriptor, elems: &[RingElem]) -> Result<Window> {
    let f = ring
        .coefficient_field()
        .ok_or_else(|| Error::InvalidParams(format!("{ring} has no finite coefficient field")))?;
    if ring.is_laurent() {
        let m = elems
            .iter()
            .flat_map(|e| [e.degree(), e.low_degree()])
            .flatten()
            .map(i64::abs)
            .max()
            .unwrap_or(0);
        return Ok(Window::Support(-m, m));
    }
    if !ring.is_poly() {
        return Err(Error::InvalidParams(format!("{ring} is not a polynomial or Laurent ring")));
    }
    let d = elems.iter().filter_map(RingElem::degree).max().unwrap_or(0) as usize;
    let mut top = d + f.characteristic() as usize - 1;
    let mut blocks = Vec::new();
    block_sizes(l, &mut blocks);
    let b = blocks.into_iter().fold(1usize, |acc, x| acc.lcm(&x));
    top = (top + 1).div_ceil(b) * b - 1;
    Ok(Window::Degree(top))
}

/// Linear data for `id - tau_alpha` on `R x R`, `tau_alpha(r, s) = (alpha(s), alpha(r))`.
#[derive(Debug, Clone)]
pub struct FlipPairClassData {
    pub alpha: RingAuto,
    pub trunc: TruncationMap,
    /// `[[I, -A], [-A, I]]` on the doubled window
    pub m: FqMatrix,
    pub rank: usize,
    pub count: BigUint,
}

pub fn flip_pair_class_data(alpha: &RingAuto, ring: &RingDescriptor, window: Window) -> Result<FlipPairClassData> {
    let trunc = truncation_matrix(&AdditiveMapSpec::RingAutoInduced(alpha.clone()), ring, window)?;
    let f = trunc.field();
    let d = trunc.dim();
    let mut m = FqMatrix::identity(2 * d);
    for i in 0..d {
        for j in 0..d {
            let c = f.neg(trunc.matrix.get(i, j));
            m.set(i, d + j, c);
            m.set(d + i, j, c);
        }
    }
    let rank = m.rank(f);
    let count = q_pow(f.order(), 2 * d - rank);
    Ok(FlipPairClassData { alpha: alpha.clone(), trunc, m, rank, count })
}

impl FlipPairClassData {
    /// `(r, s)` with `(r, s) - tau(r, s) = (u, v)`, or a separating functional.
    pub fn solve(&self, u: &RingElem, v: &RingElem) -> Result<LinearOutcome<(RingElem, RingElem)>> {
        let f = self.trunc.field();
        let d = self.trunc.dim();
        let mut b = self.trunc.coords(u)?;
        b.extend(self.trunc.coords(v)?);
        match self.m.solve(f, &b) {
            Solution::Solved(x) => {
                let r = self.trunc.elem(&x[..d]);
                let s = self.trunc.elem(&x[d..]);
                let ok = &(&r - &ring_auto_apply(&self.alpha, &s)?) == u && &(&s - &ring_auto_apply(&self.alpha, &r)?) == v;
                assert!(ok, "pair witness failed verification");
                Ok(LinearOutcome::Witness((r, s)))
            }
            Solution::Obstructed(w) => {
                let mut labels = monomial_labels(&self.trunc.labels, "r:");
                labels.extend(monomial_labels(&self.trunc.labels, "s:"));
                Ok(LinearOutcome::Obstructed(certify(&self.m, f, w, &b, labels)))
            }
        }
    }

    pub fn decide(&self, x: (&RingElem, &RingElem), y: (&RingElem, &RingElem)) -> Result<ClassReport> {
        Ok(ClassReport::new(match self.solve(&(y.0 - x.0), &(y.1 - x.1))? {
            LinearOutcome::Witness((r, s)) => Verdict::Witness(Witness::Pair(r, s)),
            LinearOutcome::Obstructed(o) => Verdict::Distinct(o),
        }))
    }
}

/// `s` with `s - a Phi_P(s) = r`, block by block through `(I - a C_P)^-1`.
#[allow(non_snake_case)]
pub fn phi_P_witness(r: &RingElem, a: u32, p: &[u32]) -> Result<RingElem> {
    let ring = r.ring();
    let f = match (ring.is_poly(), ring.coefficient_field()) {
        (true, Some(f)) => f,
        _ => return Err(Error::InvalidParams(format!("Phi_P needs F_q[t], got {ring}"))),
    };
    let p = monic_check(f, p)?;
    let d = p.len() - 1;
    let c = companion(f, &p);
    let lula = FqMatrix::identity(d).sub(f, &c.scale(f, a));
    let inv = lula.inverse(f).ok_or_else(|| Error::LulaFails(f.format_elem(a)))?;
    let coeffs: Vec<u32> = (0..=r.degree().unwrap_or(-1)).map(|e| r.coeff(e).field_index().unwrap()).collect();
    let mut out = Vec::with_capacity(coeffs.len() + d);
    for k in 0..coeffs.len().div_ceil(d) {
        let block: Vec<u32> = (0..d).map(|i| coeffs.get(k * d + i).copied().unwrap_or(0)).collect();
        out.extend(inv.mul_vec(f, &block));
    }
    let base = ring.base();
    let s = ring.poly_from_coeffs(&out.into_iter().map(|x| base.field_elem(x)).collect::<Result<Vec<_>>>()?)?;
    let l = AdditiveMapSpec::Compose(vec![
        AdditiveMapSpec::MulUnit(ring.constant(&base.field_elem(a)?)?),
        AdditiveMapSpec::BlockCompanion { p, inverse: false },
    ]);
    assert_eq!(&(&s - &l.apply(&s)?), r, "Phi_P witness failed verification");
    Ok(s)
}

/// The map whose twisted classes a family is spread over.
#[derive(Debug, Clone)]
pub enum FamilyMap {
    Additive(AdditiveMapSpec),
    /// `tau_alpha` on `R x R`; members are `(x_i, 0)`.
    FlipPair(RingAuto),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `t^(p(p-1)i + p - 1)`
    Characteristic,
    /// `t^i`
    Monomial,
}

impl FamilyKind {
    pub fn exponent(self, p: u32, i: usize) -> i64 {
        let i = i as i64;
        let p = i64::from(p);
        match self {
            FamilyKind::Characteristic => p * (p - 1) * i + p - 1,
            FamilyKind::Monomial => i,
        }
    }

    fn describe(self, p: u32) -> String {
        match self {
            FamilyKind::Characteristic => format!("t^({}i+{})", p * (p - 1), p - 1),
            FamilyKind::Monomial => "t^i".into(),
        }
    }
}

/// Checks that the members `i = 1..=i_max` are pairwise not twisted
/// conjugate, collecting one separating functional per pair.
pub fn certify_infinite_family(
    ring: &RingDescriptor,
    map: &FamilyMap,
    kind: FamilyKind,
    i_max: usize,
) -> Result<ClassReport> {
    let f = ring
        .coefficient_field()
        .ok_or_else(|| Error::InvalidParams(format!("{ring} has no finite coefficient field")))?;
    let p = f.characteristic();
    let one = ring.base().one();
    let members = (1..=i_max).map(|i| ring.monomial(&one, kind.exponent(p, i))).collect::<Result<Vec<_>>>()?;
    let zero = ring.zero();
    let (label, mut decide): (String, Box<dyn FnMut(&RingElem) -> Result<LinearOutcome<()>>>) = match map {
        FamilyMap::Additive(l) => {
            let data = additive_class_data(l, ring, default_window(l, ring, &members)?)?;
            (format!("{l}"), Box::new(move |x| Ok(strip(data.solve(x)?))))
        }
        FamilyMap::FlipPair(alpha) => {
            let l = AdditiveMapSpec::RingAutoInduced(alpha.clone());
            let data = flip_pair_class_data(alpha, ring, default_window(&l, ring, &members)?)?;
            (format!("pair:{alpha}"), Box::new(move |x| Ok(strip(data.solve(x, &zero)?))))
        }
    };
    let mut pairs = Vec::new();
    let mut obstructions = Vec::new();
    for i in 1..=i_max {
        for j in 1..i {
            match decide(&(&members[i - 1] - &members[j - 1]))? {
                LinearOutcome::Witness(()) => return Err(Error::CertificationFailed { i, j }),
                LinearOutcome::Obstructed(o) => {
                    pairs.push((i, j));
                    obstructions.push(o);
                }
            }
        }
    }
    let description = format!("{} for i=1..{i_max} under {label} over {ring}", kind.describe(p));
    Ok(ClassReport::new(Verdict::Infinite(InfiniteCertificate::Family { description, pairs, obstructions })))
}

fn strip<W>(o: LinearOutcome<W>) -> LinearOutcome<()> {
    match o {
        LinearOutcome::Witness(_) => LinearOutcome::Witness(()),
        LinearOutcome::Obstructed(o) => LinearOutcome::Obstructed(o),
    }
}
