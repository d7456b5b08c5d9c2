//! Additive maps `R -> R` and their matrices on finite monomial windows.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::FqMatrix;
use crate::rings::{companion, fmt_field_poly, monic_check, ring_auto_apply, RingAuto, RingDescriptor, RingElem};

#[derive(Clone, PartialEq, Eq)]
pub enum AdditiveMapSpec {
    /// `r -> c r`
    MulUnit(RingElem),
    RingAutoInduced(RingAuto),
    /// Companion matrix of `P` on the blocks `t^(kd) .. t^(kd+d-1)` of `F_q[t]`.
    BlockCompanion { p: Vec<u32>, inverse: bool },
    /// `a r^2 / 2`, or `a (r^2 - r) / 2` when shifted; satisfies
    /// `l(r + s) = l(r) + l(s) + a r s` but is not additive.
    QuadraticHalf { a: RingElem, shifted: bool },
    /// `r -> r^p` in characteristic `p`.
    Frobenius,
    ZeroMap,
    /// Applied right to left.
    Compose(Vec<AdditiveMapSpec>),
}

impl AdditiveMapSpec {
    pub fn apply(&self, r: &RingElem) -> Result<RingElem> {
        let ring = r.ring();
        match self {
            AdditiveMapSpec::MulUnit(c) => {
                ring.check_same(c.ring())?;
                Ok(c * r)
            }
            AdditiveMapSpec::RingAutoInduced(alpha) => ring_auto_apply(alpha, r),
            AdditiveMapSpec::BlockCompanion { p, inverse } => block_companion_apply(p, *inverse, r),
            AdditiveMapSpec::QuadraticHalf { a, shifted } => {
                ring.check_same(a.ring())?;
                let sq = r * r;
                let num = if *shifted { &sq - r } else { sq };
                let half = num.half().ok_or_else(|| Error::InvalidParams(format!("{num} is not divisible by 2 in {ring}")))?;
                Ok(a * &half)
            }
            AdditiveMapSpec::Frobenius => {
                let f = ring
                    .coefficient_field()
                    .ok_or_else(|| Error::InvalidParams(format!("{ring} has characteristic 0")))?;
                Ok(r.pow(f.characteristic()))
            }
            AdditiveMapSpec::ZeroMap => Ok(ring.zero()),
            AdditiveMapSpec::Compose(parts) => parts.iter().rev().try_fold(r.clone(), |acc, m| m.apply(&acc)),
        }
    }

    /// Whether the map is additive by construction.
    pub fn is_additive(&self) -> bool {
        match self {
            AdditiveMapSpec::QuadraticHalf { .. } => false,
            AdditiveMapSpec::Compose(parts) => parts.iter().all(AdditiveMapSpec::is_additive),
            _ => true,
        }
    }

    /// Whether the map is linear over the coefficient field of `ring`, so that
    /// it has a matrix on monomial windows.
    pub fn is_coefficient_linear(&self, ring: &RingDescriptor) -> bool {
        match self {
            AdditiveMapSpec::MulUnit(_) | AdditiveMapSpec::RingAutoInduced(_) | AdditiveMapSpec::ZeroMap => true,
            AdditiveMapSpec::BlockCompanion { .. } => ring.is_poly(),
            AdditiveMapSpec::Frobenius => ring.coefficient_field().is_some_and(|f| f.is_prime_field()),
            AdditiveMapSpec::QuadraticHalf { .. } => false,
            AdditiveMapSpec::Compose(parts) => parts.iter().all(|m| m.is_coefficient_linear(ring)),
        }
    }

    /// `-l`
    pub fn negated(&self, ring: &RingDescriptor) -> AdditiveMapSpec {
        match self {
            AdditiveMapSpec::ZeroMap => AdditiveMapSpec::ZeroMap,
            AdditiveMapSpec::MulUnit(c) => AdditiveMapSpec::MulUnit(-c),
            AdditiveMapSpec::QuadraticHalf { a, shifted } => AdditiveMapSpec::QuadraticHalf { a: -a, shifted: *shifted },
            m => AdditiveMapSpec::Compose(vec![AdditiveMapSpec::MulUnit(ring.from_int(-1)), m.clone()]),
        }
    }
}

fn block_companion_apply(p: &[u32], inverse: bool, r: &RingElem) -> Result<RingElem> {
    let ring = r.ring();
    let f = match (ring.is_poly(), ring.coefficient_field()) {
        (true, Some(f)) => f,
        _ => return Err(Error::InvalidParams(format!("block companion map needs F_q[t], got {ring}"))),
    };
    let p = monic_check(f, p)?;
    let d = p.len() - 1;
    let mut c = companion(f, &p);
    if inverse {
        c = c.inverse(f).ok_or_else(|| Error::InvalidParams("companion matrix is singular".into()))?;
    }
    let coeffs: Vec<u32> = (0..=r.degree().unwrap_or(-1)).map(|e| r.coeff(e).field_index().unwrap()).collect();
    let blocks = coeffs.len().div_ceil(d);
    let mut out = Vec::with_capacity(blocks * d);
    for k in 0..blocks {
        let v: Vec<u32> = (0..d).map(|i| coeffs.get(k * d + i).copied().unwrap_or(0)).collect();
        out.extend(c.mul_vec(f, &v));
    }
    let base = ring.base();
    let elems = out.into_iter().map(|x| base.field_elem(x)).collect::<Result<Vec<_>>>()?;
    ring.poly_from_coeffs(&elems)
}

/// The block companion map of `P` for the window `deg <= D`; requires
/// `deg P | D + 1` so that the window is a union of blocks.
#[allow(non_snake_case)]
pub fn build_phi_P(f: &crate::rings::FiniteField, p: &[u32], d_window: usize) -> Result<AdditiveMapSpec> {
    phi_p_matrix(f, p, d_window + 1)?;
    Ok(AdditiveMapSpec::BlockCompanion { p: monic_check(f, p)?, inverse: false })
}

/// Block-diagonal matrix of the companion map on `F_q^dim`.
pub fn phi_p_matrix(f: &crate::rings::FiniteField, p: &[u32], dim: usize) -> Result<FqMatrix> {
    let p = monic_check(f, p)?;
    if !f.poly_is_irreducible(&p) {
        return Err(Error::ReducibleP(fmt_field_poly(f, &p, "X")));
    }
    let d = p.len() - 1;
    if dim % d != 0 {
        return Err(Error::BlockMismatch { block: d, dim });
    }
    let c = companion(f, &p);
    let mut m = FqMatrix::zeros(dim, dim);
    for k in 0..dim / d {
        for i in 0..d {
            for j in 0..d {
                m.set(k * d + i, k * d + j, c.get(i, j));
            }
        }
    }
    Ok(m)
}

/// A finite set of monomial exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// `t^0 .. t^D`
    Degree(usize),
    /// `t^lo .. t^hi`
    Support(i64, i64),
}

impl Window {
    pub fn labels(&self) -> Vec<i64> {
        match *self {
            Window::Degree(d) => (0..=d as i64).collect(),
            Window::Support(lo, hi) => (lo..=hi).collect(),
        }
    }

    /// Smallest window of the same kind containing `self` and `other`.
    pub fn union(&self, other: &Window) -> Window {
        match (*self, *other) {
            (Window::Degree(a), Window::Degree(b)) => Window::Degree(a.max(b)),
            (a, b) => {
                let (l1, h1) = a.bounds();
                let (l2, h2) = b.bounds();
                Window::Support(l1.min(l2), h1.max(h2))
            }
        }
    }

    pub fn bounds(&self) -> (i64, i64) {
        match *self {
            Window::Degree(d) => (0, d as i64),
            Window::Support(lo, hi) => (lo, hi),
        }
    }

    pub fn contains(&self, e: i64) -> bool {
        let (lo, hi) = self.bounds();
        (lo..=hi).contains(&e)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Degree(d) => write!(f, "deg<={d}"),
            Window::Support(lo, hi) => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// Exact matrix of a coefficient-linear map on a window; column `j` holds
/// the image of `t^labels[j]`.
#[derive(Debug, Clone)]
pub struct TruncationMap {
    pub ring: RingDescriptor,
    pub window: Window,
    pub labels: Vec<i64>,
    pub matrix: FqMatrix,
}

impl TruncationMap {
    pub fn field(&self) -> &crate::rings::FiniteField {
        self.ring.coefficient_field().unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Coordinates of `r`; fails if `r` has support outside the window.
    pub fn coords(&self, r: &RingElem) -> Result<Vec<u32>> {
        self.ring.check_same(r.ring())?;
        let mut v = vec![0; self.labels.len()];
        let lo = self.labels[0];
        for (e, c) in r.terms() {
            if !self.window.contains(e) {
                return Err(Error::WindowNotInvariant(format!("{r} has a term t^{e} outside {}", self.window)));
            }
            v[(e - lo) as usize] = c.field_index().unwrap();
        }
        Ok(v)
    }

    pub fn elem(&self, v: &[u32]) -> RingElem {
        let base = self.ring.base();
        self.ring
            .laurent_from_terms(self.labels.iter().zip(v).map(|(&e, &c)| (e, base.field_elem(c).unwrap())))
            .unwrap()
    }
}

pub fn truncation_matrix(l: &AdditiveMapSpec, ring: &RingDescriptor, window: Window) -> Result<TruncationMap> {
    ring.coefficient_field()
        .filter(|_| ring.is_poly() || ring.is_laurent())
        .ok_or_else(|| Error::InvalidParams(format!("{ring} is not a polynomial or Laurent ring over a finite field")))?;
    if !l.is_coefficient_linear(ring) {
        return Err(Error::InvalidParams("map is not linear over the coefficient field".into()));
    }
    if ring.is_poly() && window.bounds().0 < 0 {
        return Err(Error::InvalidParams(format!("window {window} has negative exponents in {ring}")));
    }
    let labels = window.labels();
    let mut tm = TruncationMap { ring: ring.clone(), window, matrix: FqMatrix::zeros(labels.len(), labels.len()), labels };
    let one = ring.base().one();
    for j in 0..tm.labels.len() {
        let img = l.apply(&ring.monomial(&one, tm.labels[j])?)?;
        let col = tm.coords(&img).map_err(|_| {
            Error::WindowNotInvariant(format!("image of t^{} is {img}, outside {window}", tm.labels[j]))
        })?;
        for (i, c) in col.into_iter().enumerate() {
            tm.matrix.set(i, j, c);
        }
    }
    Ok(tm)
}

impl fmt::Display for AdditiveMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdditiveMapSpec::MulUnit(c) => write!(f, "mul:{c}"),
            AdditiveMapSpec::RingAutoInduced(a) => write!(f, "ring:{a}"),
            AdditiveMapSpec::BlockCompanion { p, inverse } => {
                write!(f, "block:P={}", fmt_poly_ascending(p))?;
                if *inverse {
                    write!(f, ",inv")?;
                }
                Ok(())
            }
            AdditiveMapSpec::QuadraticHalf { a, shifted: false } => write!(f, "half:{a}"),
            AdditiveMapSpec::QuadraticHalf { a, shifted: true } => write!(f, "halfshift:{a}"),
            AdditiveMapSpec::Frobenius => write!(f, "frob"),
            AdditiveMapSpec::ZeroMap => write!(f, "zero"),
            AdditiveMapSpec::Compose(parts) => {
                if parts.is_empty() {
                    return write!(f, "id");
                }
                write!(f, "compose(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for AdditiveMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Coefficient indices, lowest first, e.g. `[1,1,1]`.
pub(crate) fn fmt_poly_ascending(p: &[u32]) -> String {
    format!("[{}]", p.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
}
