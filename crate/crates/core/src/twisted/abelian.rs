//! Reidemeister numbers of automorphisms of `Z^r + T`, `T` finite.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use super::{brute_force_reidemeister, ClassReport, InfiniteCertificate, Verdict};
use crate::error::{Error, Result};
use crate::linalg::int::{identity, int_det, int_kernel, mul_vec, sub, IntMatrix};
use crate::matgroups::{AbelianGroup, DEFAULT_ORACLE_CAP};

/// `m` acts on `Z^r + Z/n_1 + ... + Z/n_k` (columns are images of the
/// generators, torsion coordinates last). The torsion part must map into
/// itself.
///
/// With `I - M_free` nonsingular the count is `|det(I - M_free)|` times the
/// count on the torsion part; otherwise a nonzero fixed vector of the free
/// part is returned.
pub fn reidemeister_fg_abelian(m: &IntMatrix, torsion: &[u64]) -> Result<ClassReport> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) || n < torsion.len() {
        return Err(Error::InvalidParams("matrix must be square and cover the torsion part".into()));
    }
    let r = n - torsion.len();
    if m[..r].iter().any(|row| row[r..].iter().any(|x| !x.is_zero())) {
        return Err(Error::SplittingViolation);
    }
    let free: IntMatrix = m[..r].iter().map(|row| row[..r].to_vec()).collect();
    let i_m = sub(&identity(r), &free);
    let det = int_det(&i_m);
    if det.is_zero() {
        let kernel = int_kernel(&i_m).into_iter().next().expect("singular matrix has a kernel");
        debug_assert!(mul_vec(&i_m, &kernel).iter().all(Zero::is_zero));
        return Ok(ClassReport::new(Verdict::Infinite(InfiniteCertificate::FixedPoints { kernel })));
    }
    let mut count = det.abs().to_biguint().unwrap();
    if !torsion.is_empty() {
        let group = AbelianGroup::new(torsion.to_vec(), DEFAULT_ORACLE_CAP)?;
        let cols: Vec<Vec<i64>> = (r..n)
            .map(|j| (r..n).map(|i| to_i64(&m[i][j])).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let perm = group.perm_from_matrix(&cols)?;
        count *= BigUint::from(brute_force_reidemeister(&group, &perm, DEFAULT_ORACLE_CAP)?.count);
    }
    Ok(ClassReport::new(Verdict::Count(count)))
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::InvalidParams(format!("entry {x} is too large")))
}
