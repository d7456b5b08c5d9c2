//! Triangular matrix groups over the supported rings.
//!
//! Matrix positions are 0-based; generator and normal-form indices follow
//! the paper and are 1-based (`e_{1,2}` is the entry at row 0, column 1).

mod text;
mod truncated;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rings::{RingDescriptor, RingElem};

pub use text::{parse_group_elem, parse_matrix};
pub use truncated::{AbelianGroup, FiniteGroup, TruncatedGroup, DEFAULT_ENUMERATION_CAP, DEFAULT_ORACLE_CAP};

/// Largest supported matrix size.
pub const MAX_N: usize = 8;

/// Square matrix with zeros below the diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TriMatrix {
    n: usize,
    ring: RingDescriptor,
    entries: Vec<RingElem>,
}

impl TriMatrix {
    pub fn identity(n: usize, ring: &RingDescriptor) -> Self {
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ring.one();
        }
        TriMatrix { n, ring: ring.clone(), entries }
    }

    /// From full rows; entries below the diagonal must be zero.
    pub fn from_rows(ring: &RingDescriptor, rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let n = rows.len();
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::InvalidParams(format!("matrix size {n} outside 1..={MAX_N}")));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, x) in row.into_iter().enumerate() {
                ring.check_same(x.ring())?;
                if j < i && !x.is_zero() {
                    return Err(Error::InvalidParams(format!("entry ({i},{j}) below the diagonal is nonzero")));
                }
                entries.push(x);
            }
        }
        Ok(TriMatrix { n, ring: ring.clone(), entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        assert!(j >= i || v.is_zero(), "entry below the diagonal");
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<RingElem>> {
        self.entries.chunks(self.n).map(<[RingElem]>::to_vec).collect()
    }

    pub fn mul(&self, other: &TriMatrix) -> TriMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = TriMatrix::identity(n, &self.ring);
        for i in 0..n {
            for j in i..n {
                let mut acc = self.ring.zero();
                for k in i..=j {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.get(k, j));
                }
                out.entries[i * n + j] = acc;
            }
        }
        out
    }

    /// Inverse by back substitution; `None` if a diagonal entry is not a unit.
    pub fn inv(&self) -> Option<TriMatrix> {
        let n = self.n;
        let dinv: Vec<RingElem> = (0..n).map(|i| self.get(i, i).inv()).collect::<Option<_>>()?;
        let mut x = TriMatrix::identity(n, &self.ring);
        for i in 0..n {
            x.entries[i * n + i] = dinv[i].clone();
        }
        for gap in 1..n {
            for i in 0..n - gap {
                let j = i + gap;
                let mut acc = self.ring.zero();
                for k in i..j {
                    acc = &acc + &(x.get(i, k) * self.get(k, j));
                }
                x.entries[i * n + j] = -(&acc * &dinv[j]);
            }
        }
        Some(x)
    }

    pub fn scale(&self, c: &RingElem) -> TriMatrix {
        TriMatrix { n: self.n, ring: self.ring.clone(), entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn map_entries(&self, f: impl Fn(&RingElem) -> Result<RingElem>) -> Result<TriMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(TriMatrix { n: self.n, ring: self.ring.clone(), entries })
    }

    pub fn is_unipotent(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_one())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<RingElem> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    fn diagonal_part(&self) -> TriMatrix {
        let mut d = TriMatrix::identity(self.n, &self.ring);
        for i in 0..self.n {
            d.entries[i * self.n + i] = self.get(i, i).clone();
        }
        d
    }
}

/// Which subgroup of `B_n(R)` an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTag {
    Borel,
    Unipotent,
    Diagonal,
    ProjBorel,
    BorelPlus,
    ProjBorelPlus,
}

impl GroupTag {
    pub fn is_projective(self) -> bool {
        matches!(self, GroupTag::ProjBorel | GroupTag::ProjBorelPlus)
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupTag::Borel => "B",
            GroupTag::Unipotent => "U",
            GroupTag::Diagonal => "D",
            GroupTag::ProjBorel => "PB",
            GroupTag::BorelPlus => "B+",
            GroupTag::ProjBorelPlus => "PB+",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "B" | "borel" => GroupTag::Borel,
            "U" | "unipotent" => GroupTag::Unipotent,
            "D" | "diagonal" => GroupTag::Diagonal,
            "PB" | "proj_borel" => GroupTag::ProjBorel,
            "B+" | "borel_plus" => GroupTag::BorelPlus,
            "PB+" | "proj_borel_plus" => GroupTag::ProjBorelPlus,
            _ => return Err(Error::Parse(format!("unknown group tag `{s}`"))),
        })
    }
}

/// Whether `u` lies in the torsion-free unit complement: `t^k` in a Laurent
/// ring, `1` elsewhere.
fn is_torsion_free_unit(u: &RingElem) -> bool {
    if u.ring().is_laurent() {
        matches!(u.as_monomial(), Some((c, _)) if c.is_one())
    } else {
        u.is_one()
    }
}

/// A group element: a triangular matrix together with the group it lives in.
/// Projective elements are stored with `(1,1)` entry `1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    tag: GroupTag,
    matrix: TriMatrix,
}

impl GroupElem {
    /// Validates the tag invariants; projective tags are canonicalized.
    pub fn new(tag: GroupTag, matrix: TriMatrix) -> Result<Self> {
        for (i, d) in matrix.diagonal().iter().enumerate() {
            if !d.is_unit() {
                return Err(Error::NotAUnit(format!("diagonal entry {} = {d}", i + 1)));
            }
        }
        let matrix = if tag.is_projective() { canonical_projective(&matrix) } else { matrix };
        let ok = match tag {
            GroupTag::Borel | GroupTag::ProjBorel => true,
            GroupTag::Unipotent => matrix.is_unipotent(),
            GroupTag::Diagonal => matrix.is_diagonal(),
            GroupTag::BorelPlus | GroupTag::ProjBorelPlus => matrix.diagonal().iter().all(is_torsion_free_unit),
        };
        if !ok {
            return Err(Error::TagMismatch(format!("matrix {matrix} is not in {}", tag.name())));
        }
        Ok(GroupElem { tag, matrix })
    }

    pub fn identity(tag: GroupTag, n: usize, ring: &RingDescriptor) -> Self {
        GroupElem { tag, matrix: TriMatrix::identity(n, ring) }
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn matrix(&self) -> &TriMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.matrix.ring
    }

    /// Same matrix viewed in another group.
    pub fn with_tag(&self, tag: GroupTag) -> Result<Self> {
        GroupElem::new(tag, self.matrix.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == TriMatrix::identity(self.n(), self.ring())
    }

    fn check_compatible(&self, other: &GroupElem) -> Result<()> {
        if self.tag != other.tag || self.n() != other.n() || self.ring() != other.ring() {
            return Err(Error::TagMismatch(format!(
                "{}{} over {} vs {}{} over {}",
                self.tag.name(),
                self.n(),
                self.ring(),
                other.tag.name(),
                other.n(),
                other.ring()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &GroupElem) -> Result<GroupElem> {
        self.check_compatible(other)?;
        let m = self.matrix.mul(&other.matrix);
        let m = if self.tag.is_projective() { canonical_projective(&m) } else { m };
        Ok(GroupElem { tag: self.tag, matrix: m })
    }

    pub fn inv(&self) -> GroupElem {
        let m = self.matrix.inv().expect("diagonal entries are units");
        let m = if self.tag.is_projective() { canonical_projective(&m) } else { m };
        GroupElem { tag: self.tag, matrix: m }
    }

    /// `[g, h] = g h g^-1 h^-1`
    pub fn commutator(&self, other: &GroupElem) -> Result<GroupElem> {
        self.mul(other)?.mul(&self.inv())?.mul(&other.inv())
    }

    pub fn conjugate_by(&self, g: &GroupElem) -> Result<GroupElem> {
        let m = g.matrix.mul(&self.matrix).mul(&g.matrix.inv().ok_or_else(|| Error::NotAUnit(g.to_string()))?);
        GroupElem::new(self.tag, m)
    }

    /// Diagonal part `d` of `b = u d`.
    pub fn diagonal_part(&self) -> GroupElem {
        let tag = match self.tag {
            GroupTag::Unipotent => GroupTag::Unipotent,
            t => t,
        };
        GroupElem::new(tag, self.matrix.diagonal_part()).expect("diagonal part keeps the tag invariants")
    }

    /// Unipotent part `u` of `b = u d`.
    pub fn unipotent_part(&self) -> GroupElem {
        let d = self.matrix.diagonal_part().inv().unwrap();
        GroupElem { tag: GroupTag::Unipotent, matrix: self.matrix.mul(&d) }
    }
}

fn canonical_projective(m: &TriMatrix) -> TriMatrix {
    let c = m.get(0, 0).inv().expect("unit diagonal");
    if c.is_one() {
        m.clone()
    } else {
        m.scale(&c)
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.tag.name(), self.n(), self.matrix)
    }
}

impl fmt::Debug for TriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// Standard generators; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// `e_{i,j}(r)`
    Elem { i: usize, j: usize, r: RingElem },
    /// `d_i(u)`
    Diag { i: usize, u: RingElem },
}

pub fn generator(kind: &Generator, n: usize, ring: &RingDescriptor, tag: GroupTag) -> Result<GroupElem> {
    let mut m = TriMatrix::identity(n, ring);
    match kind {
        Generator::Elem { i, j, r } => {
            if *i == 0 || *j == 0 || *i > n || *j > n || i >= j {
                return Err(Error::IndexOutOfRange(*i, *j));
            }
            ring.check_same(r.ring())?;
            m.set(i - 1, j - 1, r.clone());
        }
        Generator::Diag { i, u } => {
            if *i == 0 || *i > n {
                return Err(Error::IndexOutOfRange(*i, *i));
            }
            ring.check_same(u.ring())?;
            if !u.is_unit() {
                return Err(Error::NotAUnit(u.to_string()));
            }
            m.set(i - 1, i - 1, u.clone());
        }
    }
    GroupElem::new(tag, m)
}

/// `e_{i,j}(r)` in `U_n`, 1-based.
pub fn elementary(n: usize, i: usize, j: usize, r: &RingElem) -> Result<GroupElem> {
    generator(&Generator::Elem { i, j, r: r.clone() }, n, r.ring(), GroupTag::Unipotent)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOp {
    Mul,
    /// Inverse of the first operand; the second is ignored.
    Inv,
}

pub fn group_op(a: &GroupElem, b: &GroupElem, op: GroupOp) -> Result<GroupElem> {
    match op {
        GroupOp::Mul => a.mul(b),
        GroupOp::Inv => Ok(a.inv()),
    }
}

/// Coefficients `r_{i,j}` of the superdiagonal-ordered product
/// `e_{1,2}(r_{1,2}) ... e_{n-1,n}(r_{n-1,n}) e_{1,3}(r_{1,3}) ... e_{1,n}(r_{1,n})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub n: usize,
    pub ring: RingDescriptor,
    /// `((i, j), r_{i,j})`, 1-based, in product order.
    pub coeffs: Vec<((usize, usize), RingElem)>,
}

/// Positions `(i, j)` (1-based) in superdiagonal order.
pub fn superdiagonal_order(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|k| (1..=n - k).map(move |i| (i, i + k))).collect()
}

pub fn normal_form(u: &GroupElem) -> Result<NormalForm> {
    if !u.matrix.is_unipotent() {
        return Err(Error::NotUnipotent);
    }
    let n = u.n();
    let ring = u.ring().clone();
    let mut x = u.matrix.clone();
    let mut coeffs = Vec::new();
    for k in 1..n {
        // the remainder has zero superdiagonals below level k
        let mut level = TriMatrix::identity(n, &ring);
        for i in 1..=n - k {
            let r = x.get(i - 1, i - 1 + k).clone();
            let mut e = TriMatrix::identity(n, &ring);
            e.set(i - 1, i - 1 + k, r.clone());
            level = level.mul(&e);
            coeffs.push(((i, i + k), r));
        }
        x = level.inv().unwrap().mul(&x);
    }
    debug_assert_eq!(x, TriMatrix::identity(n, &ring));
    Ok(NormalForm { n, ring, coeffs })
}

impl NormalForm {
    pub fn recompose(&self) -> GroupElem {
        let mut m = TriMatrix::identity(self.n, &self.ring);
        for ((i, j), r) in &self.coeffs {
            let mut e = TriMatrix::identity(self.n, &self.ring);
            e.set(i - 1, j - 1, r.clone());
            m = m.mul(&e);
        }
        GroupElem { tag: GroupTag::Unipotent, matrix: m }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Option<&RingElem> {
        self.coeffs.iter().find(|((a, b), _)| (*a, *b) == (i, j)).map(|(_, r)| r)
    }
}

/// Image of a Borel element in `PB_n` (or of a `B_n^+` element in `PB_n^+`).
pub fn projective_reduce(b: &GroupElem) -> Result<GroupElem> {
    let tag = match b.tag {
        GroupTag::Borel | GroupTag::Unipotent | GroupTag::Diagonal | GroupTag::ProjBorel => GroupTag::ProjBorel,
        GroupTag::BorelPlus | GroupTag::ProjBorelPlus => GroupTag::ProjBorelPlus,
    };
    GroupElem::new(tag, b.matrix.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::parse_elem;

    fn zz() -> RingDescriptor {
        RingDescriptor::integers()
    }

    #[test]
    fn paper_generator_examples() {
        let r = zz();
        let e = generator(&Generator::Elem { i: 1, j: 2, r: r.from_int(2) }, 2, &r, GroupTag::Borel).unwrap();
        assert_eq!(e.to_string(), "(1,2;0,1)");
        let d = generator(&Generator::Diag { i: 2, u: r.from_int(-1) }, 2, &r, GroupTag::Borel).unwrap();
        assert_eq!(d.to_string(), "(1,0;0,-1)");
        let bad = generator(&Generator::Elem { i: 2, j: 1, r: r.one() }, 2, &r, GroupTag::Borel);
        assert_eq!(bad.unwrap_err(), Error::IndexOutOfRange(2, 1));
        let nonunit = generator(&Generator::Diag { i: 1, u: r.from_int(2) }, 2, &r, GroupTag::Borel);
        assert!(matches!(nonunit, Err(Error::NotAUnit(_))));
    }

    #[test]
    fn normal_form_of_e23_e12() {
        let ring = RingDescriptor::poly(zz()).unwrap();
        let r = parse_elem(&ring, "t+2").unwrap();
        let s = parse_elem(&ring, "3*t^2-1").unwrap();
        let x = elementary(3, 2, 3, &r).unwrap().mul(&elementary(3, 1, 2, &s).unwrap()).unwrap();
        let nf = normal_form(&x).unwrap();
        assert_eq!(nf.coeff(1, 2), Some(&s));
        assert_eq!(nf.coeff(2, 3), Some(&r));
        assert_eq!(nf.coeff(1, 3), Some(&-(&s * &r)));
        assert_eq!(nf.recompose(), x);
    }

    #[test]
    fn projective_scaling() {
        let ring = RingDescriptor::laurent(RingDescriptor::prime_field(5).unwrap()).unwrap();
        let m = parse_matrix(&ring, "(t,t^2+1;0,1)").unwrap();
        let b = GroupElem::new(GroupTag::BorelPlus, m).unwrap();
        let pb = projective_reduce(&b).unwrap();
        assert_eq!(pb.to_string(), "(1,t+t^-1;0,t^-1)");
        let u = ring.from_int(3);
        let scalar = GroupElem::new(GroupTag::Borel, TriMatrix::identity(3, &ring).scale(&u)).unwrap();
        assert!(projective_reduce(&scalar).unwrap().is_identity());
    }

    #[test]
    fn tag_checks() {
        let r = zz();
        let m = parse_matrix(&r, "(1,2;0,-1)").unwrap();
        assert!(GroupElem::new(GroupTag::Unipotent, m.clone()).is_err());
        assert!(GroupElem::new(GroupTag::Diagonal, m.clone()).is_err());
        let b = GroupElem::new(GroupTag::Borel, m).unwrap();
        let u = GroupElem::identity(GroupTag::Unipotent, 2, &r);
        assert!(matches!(b.mul(&u), Err(Error::TagMismatch(_))));
        assert!(b.mul(&b.inv()).unwrap().is_identity());
    }
}
