//! Finite groups for exhaustive checks.
//!
//! A truncated group is `B_n`, `U_n`, `D_n` or `PB_n` over `F_q[t]/(t^(D+1))`
//! with constant diagonal entries. For `n = 2` this is exactly the subset of
//! `B_2(F_q[t])` with off-diagonal degree `<= D`, which is closed under
//! multiplication; for larger `n` it is the quotient by the congruence
//! subgroup of level `t^(D+1)`.

use std::cell::RefCell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GroupElem, GroupTag, TriMatrix, MAX_N};
use crate::error::{Error, Result};
use crate::rings::{FiniteField, RingDescriptor, RingElem};

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;
pub const DEFAULT_ORACLE_CAP: u128 = 10_000;

/// A finite group with elements `0..order()`.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn describe(&self, a: usize) -> String;
}

fn check_cap(requested: u128, cap: u128) -> Result<()> {
    if requested > cap {
        return Err(Error::SizeCapExceeded { requested, cap });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct TruncatedGroup {
    field: FiniteField,
    ring: RingDescriptor,
    n: usize,
    deg: usize,
    tag: GroupTag,
    /// positions `(i, j)`, `i < j`, stored per element
    off: Vec<(usize, usize)>,
    /// first diagonal position carried in the coordinates
    diag_start: usize,
    ndiag: usize,
    width: usize,
    order: usize,
    coords: Vec<u32>,
    inverses: Vec<u32>,
}

thread_local! {
    static SCRATCH: RefCell<[Vec<u32>; 3]> = const { RefCell::new([Vec::new(), Vec::new(), Vec::new()]) };
}

impl TruncatedGroup {
    /// `field` must be a finite field descriptor; tags other than `Borel`,
    /// `Unipotent`, `Diagonal` and `ProjBorel` are rejected.
    pub fn new(field: &RingDescriptor, n: usize, deg: usize, tag: GroupTag, cap: u128) -> Result<Self> {
        let f = field.field().ok_or_else(|| Error::InvalidParams(format!("{field} is not a finite field")))?.clone();
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::InvalidParams(format!("n = {n} outside 1..={MAX_N}")));
        }
        let (diag_start, ndiag, off) = match tag {
            GroupTag::Borel => (0, n, true),
            GroupTag::ProjBorel => (1, n - 1, true),
            GroupTag::Unipotent => (0, 0, true),
            GroupTag::Diagonal => (0, n, false),
            _ => return Err(Error::InvalidParams(format!("no finite truncation of {}", tag.name()))),
        };
        let off: Vec<(usize, usize)> =
            if off { (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect() } else { Vec::new() };
        let q = u128::from(f.order());
        let requested = (q - 1)
            .checked_pow(ndiag as u32)
            .and_then(|a| q.checked_pow((off.len() * (deg + 1)) as u32).and_then(|b| a.checked_mul(b)))
            .unwrap_or(u128::MAX);
        check_cap(requested, cap)?;
        let width = ndiag + off.len() * (deg + 1);
        let order = requested as usize;
        let ring = RingDescriptor::poly(field.clone())?;
        let mut g = TruncatedGroup {
            field: f,
            ring,
            n,
            deg,
            tag,
            off,
            diag_start,
            ndiag,
            width,
            order,
            coords: Vec::with_capacity(order * width),
            inverses: Vec::new(),
        };
        let mut digits = vec![0u32; width];
        for idx in 0..order {
            g.decode_into(idx, &mut digits);
            g.coords.extend_from_slice(&digits);
        }
        let inverses: Vec<u32> = (0..order).map(|a| g.compute_inv(a) as u32).collect();
        g.inverses = inverses;
        Ok(g)
    }

    /// Parses `B2/fq:5/D3`, `U3/fq:2/D0`, `PB2/fq:3/D1`, `D2/fq:5/D0`.
    pub fn parse_spec(s: &str, cap: u128) -> Result<Self> {
        let parts: Vec<&str> = s.split('/').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("group spec `{s}` should look like B2/fq:5/D3")));
        }
        let split = parts[0].find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::Parse(format!("missing n in `{s}`")))?;
        let tag = GroupTag::from_name(&parts[0][..split])?;
        let n: usize = parts[0][split..].parse().map_err(|_| Error::Parse(format!("bad n in `{s}`")))?;
        let field = crate::rings::parse_ring(parts[1])?;
        let deg: usize = parts[2]
            .strip_prefix('D')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad degree bound in `{s}`")))?;
        TruncatedGroup::new(&field, n, deg, tag, cap)
    }

    pub fn spec(&self) -> String {
        format!("{}{}/{}/D{}", self.tag.name(), self.n, self.ring.base(), self.deg)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// The polynomial ring `F_q[t]` the elements are drawn from.
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> usize {
        self.deg
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    fn q(&self) -> u32 {
        self.field.order()
    }

    fn decode_into(&self, mut idx: usize, out: &mut [u32]) {
        let q = self.q() as usize;
        for (k, slot) in out.iter_mut().enumerate() {
            let radix = if k < self.ndiag { q - 1 } else { q };
            let d = idx % radix;
            idx /= radix;
            *slot = if k < self.ndiag { d as u32 + 1 } else { d as u32 };
        }
    }

    fn coords_of(&self, a: usize) -> &[u32] {
        &self.coords[a * self.width..(a + 1) * self.width]
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        (i * self.n + j) * (self.deg + 1)
    }

    /// Dense `n x n` matrix of truncated polynomials.
    fn to_dense(&self, c: &[u32], out: &mut Vec<u32>) {
        let dl = self.deg + 1;
        out.clear();
        out.resize(self.n * self.n * dl, 0);
        for i in 0..self.n {
            let d = if i >= self.diag_start && self.ndiag > 0 { c[i - self.diag_start] } else { 1 };
            out[self.cell(i, i)] = d;
        }
        for (k, &(i, j)) in self.off.iter().enumerate() {
            let src = self.ndiag + k * dl;
            let dst = self.cell(i, j);
            out[dst..dst + dl].copy_from_slice(&c[src..src + dl]);
        }
    }

    fn from_dense(&self, m: &[u32]) -> usize {
        let q = self.q() as usize;
        let dl = self.deg + 1;
        let mut idx = 0usize;
        for &(i, j) in self.off.iter().rev() {
            let src = self.cell(i, j);
            for e in (0..dl).rev() {
                idx = idx * q + m[src + e] as usize;
            }
        }
        for k in (0..self.ndiag).rev() {
            let i = k + self.diag_start;
            idx = idx * (q - 1) + (m[self.cell(i, i)] as usize - 1);
        }
        idx
    }

    /// `acc += x * y` truncated at degree `D`.
    fn mul_acc(&self, acc: &mut [u32], x: &[u32], y: &[u32]) {
        let f = &self.field;
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (b, &yb) in y[..x.len() - a].iter().enumerate() {
                if yb != 0 {
                    acc[a + b] = f.add(acc[a + b], f.mul(xa, yb));
                }
            }
        }
    }

    fn dense_mul(&self, x: &[u32], y: &[u32], out: &mut Vec<u32>) {
        let dl = self.deg + 1;
        let n = self.n;
        out.clear();
        out.resize(n * n * dl, 0);
        for i in 0..n {
            for j in i..n {
                let o = self.cell(i, j);
                for k in i..=j {
                    let a = self.cell(i, k);
                    let b = self.cell(k, j);
                    self.mul_acc(&mut out[o..o + dl], &x[a..a + dl], &y[b..b + dl]);
                }
            }
        }
    }

    fn compute_inv(&self, a: usize) -> usize {
        let dl = self.deg + 1;
        let n = self.n;
        let f = &self.field;
        let mut m = Vec::new();
        self.to_dense(self.coords_of(a), &mut m);
        let mut x = vec![0u32; n * n * dl];
        let dinv: Vec<u32> = (0..n).map(|i| f.inv(m[self.cell(i, i)])).collect();
        for i in 0..n {
            x[self.cell(i, i)] = dinv[i];
        }
        for gap in 1..n {
            for i in 0..n - gap {
                let j = i + gap;
                let mut acc = vec![0u32; dl];
                for k in i..j {
                    let xa = self.cell(i, k);
                    let mb = self.cell(k, j);
                    self.mul_acc(&mut acc, &x[xa..xa + dl], &m[mb..mb + dl]);
                }
                let o = self.cell(i, j);
                for (e, v) in acc.into_iter().enumerate() {
                    x[o + e] = f.neg(f.mul(v, dinv[j]));
                }
            }
        }
        self.from_dense(&x)
    }

    /// The element as a matrix over `F_q[t]`.
    pub fn to_elem(&self, a: usize) -> GroupElem {
        let mut m = Vec::new();
        self.to_dense(self.coords_of(a), &mut m);
        let dl = self.deg + 1;
        let base = self.ring.base().clone();
        let mut tm = TriMatrix::identity(self.n, &self.ring);
        for i in 0..self.n {
            for j in i..self.n {
                let o = self.cell(i, j);
                let coeffs: Vec<RingElem> = m[o..o + dl].iter().map(|&c| base.field_elem(c).unwrap()).collect();
                tm.set(i, j, self.ring.poly_from_coeffs(&coeffs).unwrap());
            }
        }
        GroupElem::new(self.tag, tm).expect("truncated elements satisfy the tag invariants")
    }

    /// Index of the reduction of `g` modulo `t^(D+1)`.
    pub fn from_elem(&self, g: &GroupElem) -> Result<usize> {
        if g.tag() != self.tag || g.n() != self.n || g.ring() != &self.ring {
            return Err(Error::TagMismatch(format!("{g:?} is not in {}", self.spec())));
        }
        let dl = self.deg + 1;
        let mut m = vec![0u32; self.n * self.n * dl];
        for i in 0..self.n {
            for j in i..self.n {
                let x = g.matrix().get(i, j);
                if i == j && x.degree().unwrap_or(0) > 0 {
                    return Err(Error::NotAUnit(format!("{x} in the truncated group")));
                }
                let o = self.cell(i, j);
                for e in 0..dl {
                    m[o + e] = x.coeff(e as i64).field_index().unwrap();
                }
            }
        }
        Ok(self.from_dense(&m))
    }

    /// Permutation induced by `map`, checked to be a bijection and, on
    /// `samples` random pairs, a homomorphism.
    pub fn perm_from_map(
        &self,
        map: impl Fn(&GroupElem) -> Result<GroupElem>,
        samples: usize,
        seed: u64,
    ) -> Result<Vec<usize>> {
        let perm = (0..self.order).map(|a| self.from_elem(&map(&self.to_elem(a))?)).collect::<Result<Vec<_>>>()?;
        check_automorphism(self, &perm, samples, seed)?;
        Ok(perm)
    }
}

/// Checks that `perm` is a bijection and respects products on sampled pairs.
pub(crate) fn check_automorphism(g: &impl FiniteGroup, perm: &[usize], samples: usize, seed: u64) -> Result<()> {
    let n = g.order();
    if perm.len() != n {
        return Err(Error::InvalidAutomorphism("permutation has the wrong length".into()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidAutomorphism("map is not a bijection on the finite group".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if perm[g.mul(a, b)] != g.mul(perm[a], perm[b]) {
            return Err(Error::InvalidAutomorphism(format!(
                "not a homomorphism at ({}, {})",
                g.describe(a),
                g.describe(b)
            )));
        }
    }
    Ok(())
}

impl FiniteGroup for TruncatedGroup {
    fn order(&self) -> usize {
        self.order
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        SCRATCH.with(|s| {
            let mut s = s.borrow_mut();
            let [x, y, z] = &mut *s;
            self.to_dense(self.coords_of(a), x);
            self.to_dense(self.coords_of(b), y);
            self.dense_mul(x, y, z);
            self.from_dense(z)
        })
    }

    fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    fn describe(&self, a: usize) -> String {
        self.to_elem(a).to_string()
    }
}

/// `Z/m_1 x ... x Z/m_k`, elements encoded in mixed radix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    orders: Vec<u64>,
    size: usize,
}

impl AbelianGroup {
    pub fn new(orders: Vec<u64>, cap: u128) -> Result<Self> {
        if orders.iter().any(|&m| m == 0) {
            return Err(Error::InvalidParams("cyclic factor of order 0".into()));
        }
        let requested = orders.iter().try_fold(1u128, |acc, &m| acc.checked_mul(u128::from(m))).unwrap_or(u128::MAX);
        check_cap(requested, cap)?;
        Ok(AbelianGroup { orders, size: requested as usize })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn decode(&self, mut a: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&m| {
                let d = a as u64 % m;
                a /= m as usize;
                d
            })
            .collect()
    }

    pub fn encode(&self, x: &[u64]) -> usize {
        self.orders.iter().zip(x).rev().fold(0usize, |acc, (&m, &d)| acc * m as usize + (d % m) as usize)
    }

    /// Permutation of the endomorphism whose column `j` is the image of the
    /// `j`-th generator; fails unless it is a well-defined automorphism.
    pub fn perm_from_matrix(&self, cols: &[Vec<i64>]) -> Result<Vec<usize>> {
        let k = self.orders.len();
        if cols.len() != k || cols.iter().any(|c| c.len() != k) {
            return Err(Error::InvalidParams(format!("action must be a {k}x{k} matrix")));
        }
        let red = |v: i64, m: u64| v.rem_euclid(m as i64) as u64;
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                let m = self.orders[i] as i128;
                if (i128::from(v) * i128::from(self.orders[j] as i64)).rem_euclid(m) != 0 {
                    return Err(Error::InvalidAutomorphism(format!("generator {j} has order {} but its image does not", self.orders[j])));
                }
            }
        }
        let perm: Vec<usize> = (0..self.size)
            .map(|a| {
                let x = self.decode(a);
                let y: Vec<u64> = (0..k)
                    .map(|i| {
                        let m = self.orders[i];
                        x.iter().zip(cols).fold(0u64, |acc, (&xj, col)| (acc + xj % m * red(col[i], m)) % m)
                    })
                    .collect();
                self.encode(&y)
            })
            .collect();
        check_automorphism(self, &perm, 0, 0)?;
        Ok(perm)
    }
}

impl FiniteGroup for AbelianGroup {
    fn order(&self) -> usize {
        self.size
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let x = self.decode(a);
        let y = self.decode(b);
        let z: Vec<u64> = x.iter().zip(&y).zip(&self.orders).map(|((a, b), m)| (a + b) % m).collect();
        self.encode(&z)
    }

    fn inv(&self, a: usize) -> usize {
        let x = self.decode(a);
        let z: Vec<u64> = x.iter().zip(&self.orders).map(|(a, m)| (m - a) % m).collect();
        self.encode(&z)
    }

    fn describe(&self, a: usize) -> String {
        let x = self.decode(a);
        format!("({})", x.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_caps() {
        let f5 = RingDescriptor::prime_field(5).unwrap();
        let g = TruncatedGroup::new(&f5, 2, 1, GroupTag::Borel, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(g.order(), 16 * 25);
        let f2 = RingDescriptor::prime_field(2).unwrap();
        assert_eq!(TruncatedGroup::new(&f2, 2, 1, GroupTag::Borel, 100).unwrap().order(), 4);
        assert_eq!(TruncatedGroup::parse_spec("U3/fq:2/D0", 100).unwrap().order(), 8);
        assert_eq!(TruncatedGroup::parse_spec("PB2/fq:3/D1", 100).unwrap().order(), 18);
        let err = TruncatedGroup::new(&f5, 3, 3, GroupTag::Borel, DEFAULT_ENUMERATION_CAP).unwrap_err();
        assert!(matches!(err, Error::SizeCapExceeded { .. }));
    }

    #[test]
    fn round_trip_and_axioms() {
        let g = TruncatedGroup::parse_spec("B3/fq:3/D1", 1_000_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = rng.gen_range(0..g.order());
            let b = rng.gen_range(0..g.order());
            assert_eq!(g.from_elem(&g.to_elem(a)).unwrap(), a);
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            let prod = g.to_elem(a).mul(&g.to_elem(b)).unwrap();
            assert_eq!(g.from_elem(&prod).unwrap(), g.mul(a, b));
        }
    }

    #[test]
    fn abelian_automorphism() {
        let z5 = AbelianGroup::new(vec![5], 100).unwrap();
        let perm = z5.perm_from_matrix(&[vec![2]]).unwrap();
        assert_eq!(perm, vec![0, 2, 4, 1, 3]);
        let z2z4 = AbelianGroup::new(vec![2, 4], 100).unwrap();
        assert!(z2z4.perm_from_matrix(&[vec![0, 1], vec![1, 0]]).is_err());
    }
}
