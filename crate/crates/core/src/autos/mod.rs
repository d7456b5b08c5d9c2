//! Automorphisms of triangular groups: Levčuk's generators and the explicit
//! maps used in the finite-count and Laurent arguments.

mod additive;
mod levchuk;
mod text;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matgroups::{normal_form, GroupElem, GroupTag, TriMatrix};
use crate::rings::{
    find_flip_unit, find_irreducible, lula_det, companion, monic_check, ring_auto_apply, fmt_field_poly, RingAuto,
    RingDescriptor, RingElem,
};

pub use additive::{build_phi_P, phi_p_matrix, truncation_matrix, AdditiveMapSpec, TruncationMap, Window};
pub use levchuk::{abelianization_image, emid_positions, emid_restriction, stilde_apply, verify_stilde_identity, StildeCheck, StildeShape};
pub use text::{parse_additive, parse_aut};

/// The group an automorphism acts on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub n: usize,
    pub ring: RingDescriptor,
    pub tag: GroupTag,
}

impl Signature {
    pub fn new(n: usize, ring: &RingDescriptor, tag: GroupTag) -> Self {
        Signature { n, ring: ring.clone(), tag }
    }

    pub(crate) fn check(&self, g: &GroupElem) -> Result<()> {
        if g.n() != self.n || g.ring() != &self.ring || g.tag() != self.tag {
            return Err(Error::SignatureMismatch(format!("{g:?} is not in {self}")));
        }
        Ok(())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}({})", self.tag.name(), self.n, self.ring)
    }
}

/// The explicit automorphisms of rank-two groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sec6Kind {
    /// `[u, r; v] -> [u, Phi_P(r); v]` on `PB_2(F_q[t])`
    PhiAP,
    /// the same rule on `B_2(F_q[t])`
    PhiBP,
    /// `[t^k, f; t^j] -> [t^-k, a f(1/t); t^-j]` on `PB_2^+(F_q[t,1/t])`
    PhiA,
    /// the same rule on `B_2^+(F_q[t,1/t])`
    PhiB,
    /// restriction to `U_2(F_q[t,1/t])`
    PhiPrime,
}

impl Sec6Kind {
    pub fn name(self) -> &'static str {
        match self {
            Sec6Kind::PhiAP => "phiAP",
            Sec6Kind::PhiBP => "phiBP",
            Sec6Kind::PhiA => "phiA",
            Sec6Kind::PhiB => "phiB",
            Sec6Kind::PhiPrime => "phiPrime",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "phiAP" => Sec6Kind::PhiAP,
            "phiBP" => Sec6Kind::PhiBP,
            "phiA" => Sec6Kind::PhiA,
            "phiB" => Sec6Kind::PhiB,
            "phiPrime" | "phi'" => Sec6Kind::PhiPrime,
            _ => return Err(Error::Parse(format!("unknown explicit automorphism `{s}`"))),
        })
    }

    fn uses_p(self) -> bool {
        matches!(self, Sec6Kind::PhiAP | Sec6Kind::PhiBP)
    }

    /// The canonical group of the map, given the ring.
    pub fn signature(self, ring: &RingDescriptor) -> Signature {
        let tag = match self {
            Sec6Kind::PhiAP => GroupTag::ProjBorel,
            Sec6Kind::PhiBP => GroupTag::Borel,
            Sec6Kind::PhiA => GroupTag::ProjBorelPlus,
            Sec6Kind::PhiB => GroupTag::BorelPlus,
            Sec6Kind::PhiPrime => GroupTag::Unipotent,
        };
        Signature::new(2, ring, tag)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum AutStep {
    /// `x -> g x g^-1`
    Inner(GroupElem),
    /// conjugation by `diag(u_1, ..., u_n)`
    DiagConj(Vec<RingElem>),
    /// `A -> A e_{1,n}(l(a_{i,i+1}))`, `i` 1-based
    Central { i: usize, lambda: AdditiveMapSpec },
    Sigma { lambda: AdditiveMapSpec, a: RingElem, primed: bool },
    Flip,
    RingInduced(RingAuto),
    /// `(1, r; 1) -> (1, a Phi_P(r); 1)` on `U_2(F_q[t])`; `a` a field index
    ExplicitPhiP { p: Vec<u32>, a: u32, inverse: bool },
    /// `p` is used by the `Phi_P` kinds, `a` (a field index) by the Laurent ones
    Section6 { kind: Sec6Kind, p: Vec<u32>, a: u32, inverse: bool },
}

/// A composite `steps[0] o steps[1] o ...`, applied right to left.
#[derive(Clone, PartialEq, Eq)]
pub struct AutExpr {
    pub sig: Signature,
    pub steps: Vec<AutStep>,
}

fn elem_tri(n: usize, ring: &RingDescriptor, i: usize, j: usize, r: &RingElem) -> TriMatrix {
    let mut m = TriMatrix::identity(n, ring);
    m.set(i - 1, j - 1, r.clone());
    m
}

fn commutator(a: &TriMatrix, b: &TriMatrix) -> TriMatrix {
    a.mul(b).mul(&a.inv().unwrap()).mul(&b.inv().unwrap())
}

/// Rebuilds `x` from its normal form with every factor `e_{i,j}(r)` replaced
/// by `image(i, j, r)`.
pub(crate) fn extend_from_generators(
    x: &GroupElem,
    image: impl Fn(usize, usize, &RingElem) -> Result<TriMatrix>,
) -> Result<GroupElem> {
    let nf = normal_form(x)?;
    let mut m = TriMatrix::identity(x.n(), x.ring());
    for ((i, j), r) in &nf.coeffs {
        if !r.is_zero() {
            m = m.mul(&image(*i, *j, r)?);
        }
    }
    GroupElem::new(GroupTag::Unipotent, m)
}

fn sigma_gen(
    n: usize,
    i: usize,
    j: usize,
    r: &RingElem,
    lambda: &AdditiveMapSpec,
    a: &RingElem,
    primed: bool,
) -> Result<TriMatrix> {
    let ring = r.ring();
    if j > i + 1 {
        let x = sigma_gen(n, i, i + 1, r, lambda, a, primed)?;
        let y = sigma_gen(n, i + 1, j, &ring.one(), lambda, a, primed)?;
        return Ok(commutator(&x, &y));
    }
    let ar = a * r;
    Ok(match (primed, i) {
        (false, 1) => elem_tri(n, ring, 1, 2, r)
            .mul(&elem_tri(n, ring, 2, n, &ar))
            .mul(&elem_tri(n, ring, 1, n, &(&lambda.apply(r)? - &(&ar * r)))),
        (true, i) if i == n - 1 => elem_tri(n, ring, n - 1, n, r)
            .mul(&elem_tri(n, ring, 1, n - 1, &ar))
            .mul(&elem_tri(n, ring, 1, n, &lambda.apply(r)?)),
        _ => elem_tri(n, ring, i, j, r),
    })
}

/// `tau(e_{i,j}(r)) = e_{n-j+1,n-i+1}((-1)^(j-i-1) r)`
pub(crate) fn flip_gen(n: usize, i: usize, j: usize, r: &RingElem) -> TriMatrix {
    let r = if (j - i - 1) % 2 == 1 { -r } else { r.clone() };
    elem_tri(n, r.ring(), n + 1 - j, n + 1 - i, &r)
}

fn field_of(ring: &RingDescriptor) -> Result<&crate::rings::FiniteField> {
    ring.coefficient_field().ok_or_else(|| Error::InvalidParams(format!("{ring} has no finite coefficient field")))
}

fn base_elem(ring: &RingDescriptor, a: u32) -> Result<RingElem> {
    ring.constant(&ring.base().field_elem(a)?)
}

/// Rank-two map acting on the diagonal and the corner entry separately.
fn map_rank_two(
    x: &GroupElem,
    diag: impl Fn(&RingElem) -> Result<RingElem>,
    off: impl Fn(&RingElem) -> Result<RingElem>,
) -> Result<GroupElem> {
    let m = x.matrix();
    let mut out = TriMatrix::identity(2, x.ring());
    out.set(0, 0, diag(m.get(0, 0))?);
    out.set(1, 1, diag(m.get(1, 1))?);
    out.set(0, 1, off(m.get(0, 1))?);
    GroupElem::new(x.tag(), out)
}

impl AutStep {
    /// Checks that the step is defined on `sig`.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let n = sig.n;
        let ring = &sig.ring;
        let need = |ok: bool, what: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::SignatureMismatch(format!("{what} is not defined on {sig}")))
            }
        };
        match self {
            AutStep::Inner(g) => need(g.n() == n && g.ring() == ring, "inner automorphism"),
            AutStep::DiagConj(u) => {
                need(u.len() == n && u.iter().all(|x| x.ring() == ring), "diagonal conjugation")?;
                match u.iter().find(|x| !x.is_unit()) {
                    Some(x) => Err(Error::NotAUnit(x.to_string())),
                    None => Ok(()),
                }
            }
            AutStep::Central { i, lambda } => {
                need(sig.tag == GroupTag::Unipotent && n >= 3, "central automorphism")?;
                if *i == 0 || *i >= n {
                    return Err(Error::IndexOutOfRange(*i, *i + 1));
                }
                if !lambda.is_additive() {
                    return Err(Error::InvalidAutomorphism(format!("{lambda} is not additive")));
                }
                Ok(())
            }
            AutStep::Sigma { lambda, a, .. } => {
                need(sig.tag == GroupTag::Unipotent && n >= 4, "sigma automorphism")?;
                ring.check_same(a.ring())?;
                if !validate_sigma(lambda, a, 200)? {
                    return Err(Error::InvalidAutomorphism(format!("({lambda}, {a}) fails l(r+s) = a r s + l(r) + l(s)")));
                }
                Ok(())
            }
            AutStep::Flip => need(sig.tag == GroupTag::Unipotent && n >= 2, "flip"),
            AutStep::RingInduced(alpha) => need(alpha.compatible(ring), "ring automorphism"),
            AutStep::ExplicitPhiP { p, a, .. } => {
                need(sig.tag == GroupTag::Unipotent && n == 2 && ring.is_poly(), "Phi_P")?;
                let f = field_of(ring)?;
                let (_, ok) = crate::rings::companion_lula(f, p, *a)?;
                if *a == 0 || !ok {
                    return Err(Error::LulaFails(f.format_elem(*a)));
                }
                Ok(())
            }
            AutStep::Section6 { kind, p, a, .. } => {
                let canon = kind.signature(ring);
                let tag_ok = match kind {
                    Sec6Kind::PhiA => matches!(sig.tag, GroupTag::ProjBorelPlus | GroupTag::ProjBorel),
                    Sec6Kind::PhiB => matches!(sig.tag, GroupTag::BorelPlus | GroupTag::Borel),
                    _ => sig.tag == canon.tag,
                };
                let ring_ok = if kind.uses_p() { ring.is_poly() } else { ring.is_laurent() };
                need(n == 2 && tag_ok && ring_ok, kind.name())?;
                let f = field_of(ring)?;
                if kind.uses_p() {
                    let p = monic_check(f, p)?;
                    if !f.poly_is_irreducible(&p) {
                        return Err(Error::ReducibleP(fmt_field_poly(f, &p, "X")));
                    }
                } else if *a == 0 {
                    return Err(Error::NotAUnit("0".into()));
                }
                Ok(())
            }
        }
    }

    fn apply(&self, sig: &Signature, x: &GroupElem) -> Result<GroupElem> {
        let n = sig.n;
        let ring = &sig.ring;
        match self {
            AutStep::Inner(g) => {
                let gi = g.matrix().inv().unwrap();
                GroupElem::new(x.tag(), g.matrix().mul(x.matrix()).mul(&gi))
            }
            AutStep::DiagConj(u) => {
                let mut d = TriMatrix::identity(n, ring);
                for (i, ui) in u.iter().enumerate() {
                    d.set(i, i, ui.clone());
                }
                GroupElem::new(x.tag(), d.mul(x.matrix()).mul(&d.inv().unwrap()))
            }
            AutStep::Central { i, lambda } => {
                let c = lambda.apply(x.matrix().get(i - 1, *i))?;
                GroupElem::new(x.tag(), x.matrix().mul(&elem_tri(n, ring, 1, n, &c)))
            }
            AutStep::Sigma { lambda, a, primed } => {
                extend_from_generators(x, |i, j, r| sigma_gen(n, i, j, r, lambda, a, *primed))
            }
            AutStep::Flip => extend_from_generators(x, |i, j, r| Ok(flip_gen(n, i, j, r))),
            AutStep::RingInduced(alpha) => GroupElem::new(x.tag(), x.matrix().map_entries(|r| ring_auto_apply(alpha, r))?),
            AutStep::ExplicitPhiP { p, a, inverse } => {
                let l = phi_p_map(ring, p, *a, *inverse)?;
                map_rank_two(x, |d| Ok(d.clone()), |r| l.apply(r))
            }
            AutStep::Section6 { kind, p, a, inverse } => {
                if kind.uses_p() {
                    let l = AdditiveMapSpec::BlockCompanion { p: p.clone(), inverse: *inverse };
                    map_rank_two(x, |d| Ok(d.clone()), |r| l.apply(r))
                } else {
                    let flip = RingAuto::LaurentFlip(true);
                    let av = base_elem(ring, *a)?;
                    map_rank_two(x, |d| ring_auto_apply(&flip, d), |r| Ok(&av * &ring_auto_apply(&flip, r)?))
                }
            }
        }
    }

    fn inverse(&self, sig: &Signature) -> Result<AutStep> {
        let ring = &sig.ring;
        Ok(match self {
            AutStep::Inner(g) => AutStep::Inner(g.inv()),
            AutStep::DiagConj(u) => AutStep::DiagConj(u.iter().map(|x| x.inv().unwrap()).collect()),
            AutStep::Central { i, lambda } => AutStep::Central { i: *i, lambda: lambda.negated(ring) },
            AutStep::Sigma { lambda, a, primed } => AutStep::Sigma { lambda: lambda.negated(ring), a: -a, primed: *primed },
            AutStep::Flip => AutStep::Flip,
            AutStep::RingInduced(alpha) => AutStep::RingInduced(alpha.inverse()),
            AutStep::ExplicitPhiP { p, a, inverse } => AutStep::ExplicitPhiP {
                p: p.clone(),
                a: field_of(ring)?.inv(*a),
                inverse: !inverse,
            },
            AutStep::Section6 { kind, p, a, inverse } => {
                if kind.uses_p() {
                    AutStep::Section6 { kind: *kind, p: p.clone(), a: *a, inverse: !inverse }
                } else {
                    AutStep::Section6 { kind: *kind, p: p.clone(), a: field_of(ring)?.inv(*a), inverse: false }
                }
            }
        })
    }
}

/// `m_a o Phi_P`, or its inverse `Phi_P^-1 o m_(1/a)`.
fn phi_p_map(ring: &RingDescriptor, p: &[u32], a: u32, inverse: bool) -> Result<AdditiveMapSpec> {
    let f = field_of(ring)?;
    let block = AdditiveMapSpec::BlockCompanion { p: p.to_vec(), inverse };
    Ok(if inverse {
        AdditiveMapSpec::Compose(vec![block, AdditiveMapSpec::MulUnit(base_elem(ring, f.inv(a))?)])
    } else {
        AdditiveMapSpec::Compose(vec![AdditiveMapSpec::MulUnit(base_elem(ring, a)?), block])
    })
}

impl AutExpr {
    pub fn identity(sig: Signature) -> Self {
        AutExpr { sig, steps: Vec::new() }
    }

    pub fn single(sig: Signature, step: AutStep) -> Result<Self> {
        step.validate(&sig)?;
        Ok(AutExpr { sig, steps: vec![step] })
    }

    pub fn apply(&self, g: &GroupElem) -> Result<GroupElem> {
        self.sig.check(g)?;
        self.steps.iter().rev().try_fold(g.clone(), |x, s| s.apply(&self.sig, &x))
    }

    pub fn inverse(&self) -> Result<AutExpr> {
        let steps = self.steps.iter().rev().map(|s| s.inverse(&self.sig)).collect::<Result<Vec<_>>>()?;
        Ok(AutExpr { sig: self.sig.clone(), steps })
    }

    /// The additive map on the corner entry when the group is `U_2`.
    pub fn corner_map(&self) -> Result<AdditiveMapSpec> {
        if self.sig.n != 2 || self.sig.tag != GroupTag::Unipotent {
            return Err(Error::SignatureMismatch(format!("{} is not U_2", self.sig)));
        }
        let ring = &self.sig.ring;
        let parts = self
            .steps
            .iter()
            .map(|s| {
                Ok(match s {
                    AutStep::Inner(g) => {
                        let m = g.matrix();
                        AdditiveMapSpec::MulUnit(m.get(0, 0) * &m.get(1, 1).inv().unwrap())
                    }
                    AutStep::DiagConj(u) => AdditiveMapSpec::MulUnit(&u[0] * &u[1].inv().unwrap()),
                    AutStep::Flip => AdditiveMapSpec::Compose(Vec::new()),
                    AutStep::RingInduced(alpha) => AdditiveMapSpec::RingAutoInduced(alpha.clone()),
                    AutStep::ExplicitPhiP { p, a, inverse } => phi_p_map(ring, p, *a, *inverse)?,
                    AutStep::Section6 { kind: Sec6Kind::PhiPrime, a, .. } => AdditiveMapSpec::Compose(vec![
                        AdditiveMapSpec::MulUnit(base_elem(ring, *a)?),
                        AdditiveMapSpec::RingAutoInduced(RingAuto::LaurentFlip(true)),
                    ]),
                    _ => return Err(Error::SignatureMismatch("step is not defined on U_2".into())),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AdditiveMapSpec::Compose(parts))
    }
}

pub fn aut_apply(psi: &AutExpr, g: &GroupElem) -> Result<GroupElem> {
    psi.apply(g)
}

/// `psi1 o psi2`
pub fn aut_compose(psi1: &AutExpr, psi2: &AutExpr) -> Result<AutExpr> {
    if psi1.sig != psi2.sig {
        return Err(Error::SignatureMismatch(format!("{} vs {}", psi1.sig, psi2.sig)));
    }
    let mut steps = psi1.steps.clone();
    steps.extend(psi2.steps.iter().cloned());
    Ok(AutExpr { sig: psi1.sig.clone(), steps })
}

/// Whether `l(r + s) = a r s + l(r) + l(s)` on sample pairs; exhaustive over
/// the ring when it is finite, and over polynomials of degree `<= 3` when the
/// coefficient field is small enough.
pub fn validate_sigma(lambda: &AdditiveMapSpec, a: &RingElem, samples: usize) -> Result<bool> {
    let ring = a.ring();
    let elems = sample_elements(ring, samples, 0x5167);
    for r in &elems {
        for s in &elems {
            let lhs = lambda.apply(&(r + s))?;
            let rhs = &(&(a * r) * s) + &(&lambda.apply(r)? + &lambda.apply(s)?);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A deterministic sample of ring elements: all of them for a finite field,
/// all of degree `<= 3` for `F_q[t]` with `q^4 <= 256`, random ones otherwise.
pub fn sample_elements(ring: &RingDescriptor, count: usize, seed: u64) -> Vec<RingElem> {
    if let Some(f) = ring.field() {
        return f.elements().map(|x| ring.field_elem(x).unwrap()).collect();
    }
    if let (true, Some(f)) = (ring.is_poly(), ring.coefficient_field()) {
        let q = f.order() as usize;
        if q.pow(4) <= 256 {
            return (0..q.pow(4))
                .map(|mut idx| {
                    let coeffs: Vec<RingElem> = (0..4)
                        .map(|_| {
                            let c = (idx % q) as u32;
                            idx /= q;
                            ring.base().field_elem(c).unwrap()
                        })
                        .collect();
                    ring.poly_from_coeffs(&coeffs).unwrap()
                })
                .collect();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = count.max(1).isqrt().max(8);
    (0..n).map(|_| random_elem(ring, &mut rng, 3, 5)).collect()
}

/// Random element with exponents in `[-span, span]` (`[0, span]` for
/// polynomials) and integer coefficients in `[-bound, bound]`.
pub fn random_elem(ring: &RingDescriptor, rng: &mut impl Rng, span: i64, bound: i64) -> RingElem {
    let scalar = |rng: &mut dyn rand::RngCore, base: &RingDescriptor| -> RingElem {
        match base.field() {
            Some(f) => base.field_elem(rng.gen_range(0..f.order())).unwrap(),
            None => match base.order_spec() {
                Some(o) => base
                    .order_elem((0..o.degree()).map(|_| rng.gen_range(-bound..=bound).into()).collect())
                    .unwrap(),
                None => base.from_int(rng.gen_range(-bound..=bound)),
            },
        }
    };
    if ring.is_base() {
        return scalar(rng, ring);
    }
    let lo = if ring.is_laurent() { -span } else { 0 };
    let terms: Vec<(i64, RingElem)> = (lo..=span).map(|e| (e, scalar(rng, ring.base()))).collect();
    ring.laurent_from_terms(terms).unwrap()
}

/// The explicit rank-two automorphisms with canonical defaults: `P` is the
/// first irreducible quadratic and `a` the first unit with `1 - a^2 != 0`.
pub fn build_explicit(kind: Sec6Kind, ring: &RingDescriptor, p: Option<Vec<u32>>, a: Option<u32>) -> Result<AutExpr> {
    let f = field_of(ring)?;
    let step = if kind.uses_p() {
        let p = match p {
            Some(p) => p,
            None => find_irreducible(ring.base(), 2)?,
        };
        AutStep::Section6 { kind, p, a: 1, inverse: false }
    } else {
        let a = match a {
            Some(a) => {
                if f.sub(1, f.mul(a, a)) == 0 {
                    return Err(Error::InvalidParams(format!("1 - a^2 vanishes for a = {}", f.format_elem(a))));
                }
                a
            }
            None => find_flip_unit(ring)?,
        };
        AutStep::Section6 { kind, p: Vec::new(), a, inverse: false }
    };
    AutExpr::single(kind.signature(ring), step)
}

/// `m_a o Phi_P` on `U_2(F_q[t])`; fails when `det(I - a C_P) = 0`.
pub fn build_phi_p_aut(ring: &RingDescriptor, p: &[u32], a: u32) -> Result<AutExpr> {
    let f = field_of(ring)?;
    let p = monic_check(f, p)?;
    if a != 0 && lula_det(f, &companion(f, &p), a) == 0 {
        return Err(Error::LulaFails(f.format_elem(a)));
    }
    AutExpr::single(Signature::new(2, ring, GroupTag::Unipotent), AutStep::ExplicitPhiP { p, a, inverse: false })
}

impl fmt::Display for AutExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.steps.len() {
            0 => write!(f, "id"),
            1 => write!(f, "{}", text::StepDisplay(&self.steps[0], &self.sig)),
            _ => {
                write!(f, "compose(")?;
                for (i, s) in self.steps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", text::StepDisplay(s, &self.sig))?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for AutExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} on {}", self.sig)
    }
}

#[cfg(test)]
mod tests;
