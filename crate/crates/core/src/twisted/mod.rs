//! Twisted conjugacy: `b ~ g b psi(g)^-1`.
//!
//! Every positive answer carries a witness that has been re-checked by
//! substitution, and every negative answer carries a certificate that can be
//! checked independently (a parity mismatch or a linear functional).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use crate::autos::AutExpr;
use crate::error::Result;
use crate::matgroups::GroupElem;
use crate::rings::RingElem;

mod abelian;
mod laurent;
mod linear;
mod oracle;
mod text;

pub use abelian::reidemeister_fg_abelian;
pub use laurent::{laurent_b2_decide, solve_flip_twisted};
pub use linear::{
    additive_class_data, certify_infinite_family, default_window, flip_pair_class_data, phi_P_witness,
    AdditiveClassData, FamilyKind, FamilyMap, FlipPairClassData, LinearOutcome,
};
pub use oracle::{brute_force_reidemeister, BruteForce};
pub use text::{additive_or_corner, count_classes, decide_text};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Group(GroupElem),
    Ring(RingElem),
    Pair(RingElem, RingElem),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Group(g) => write!(f, "{g}"),
            Witness::Ring(r) => write!(f, "{r}"),
            Witness::Pair(r, s) => write!(f, "({r}, {s})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// Diagonal exponents mod 2 on each side.
    Parity { left: Vec<i64>, right: Vec<i64> },
    /// A functional `v` on the window with `v (I - A) = 0` and
    /// `v . target = residual != 0`.
    Functional { labels: Vec<String>, functional: Vec<u32>, residual: u32 },
}

impl Obstruction {
    pub fn to_json(&self) -> Value {
        match self {
            Obstruction::Parity { left, right } => json!({"kind": "parity", "left": left, "right": right}),
            Obstruction::Functional { labels, functional, residual } => json!({
                "kind": "functional",
                "labels": labels,
                "functional": functional,
                "residual": residual,
            }),
        }
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Parity { left, right } => write!(f, "parity {left:?} vs {right:?}"),
            Obstruction::Functional { labels, functional, residual } => {
                let terms: Vec<String> = labels
                    .iter()
                    .zip(functional)
                    .filter(|(_, &c)| c != 0)
                    .map(|(l, c)| format!("{c}*[{l}]"))
                    .collect();
                write!(f, "functional {} takes value {residual}", terms.join(" + "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfiniteCertificate {
    /// A nonzero integer vector fixed by the free part of the map.
    FixedPoints { kernel: Vec<BigInt> },
    /// Family members `1..=i_max`, with one obstruction per pair `(i, j)`, `j < i`.
    Family { description: String, pairs: Vec<(usize, usize)>, obstructions: Vec<Obstruction> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Witness(Witness),
    Distinct(Obstruction),
    Count(BigUint),
    Infinite(InfiniteCertificate),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Witness(_) => "witness",
            Verdict::Distinct(_) => "distinct",
            Verdict::Count(_) => "count",
            Verdict::Infinite(_) => "infinite",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub verdict: Verdict,
    pub timing_ms: Option<f64>,
    pub seed: Option<u64>,
}

impl ClassReport {
    pub fn new(verdict: Verdict) -> Self {
        ClassReport { verdict, timing_ms: None, seed: None }
    }

    pub fn with_timing(mut self, ms: f64) -> Self {
        self.timing_ms = Some(ms);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut witness = Value::Null;
        let mut obstruction = Value::Null;
        let mut count = Value::Null;
        let mut pairs = Value::Null;
        let mut certificate = Value::Null;
        match &self.verdict {
            Verdict::Witness(w) => witness = json!(w.to_string()),
            Verdict::Distinct(o) => obstruction = o.to_json(),
            Verdict::Count(n) => count = json!(n.to_string()),
            Verdict::Infinite(InfiniteCertificate::FixedPoints { kernel }) => {
                certificate = json!({"kind": "fixed_points", "kernel": kernel.iter().map(BigInt::to_string).collect::<Vec<_>>()});
            }
            Verdict::Infinite(InfiniteCertificate::Family { description, pairs: ps, obstructions }) => {
                pairs = json!(ps);
                certificate = json!({
                    "kind": "family",
                    "family": description,
                    "obstructions": obstructions.iter().map(Obstruction::to_json).collect::<Vec<_>>(),
                });
            }
        }
        json!({
            "verdict": self.verdict.name(),
            "witness": witness,
            "obstruction": obstruction,
            "count": count,
            "pairs": pairs,
            "certificate": certificate,
            "timing_ms": self.timing_ms,
            "seed": self.seed,
        })
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Witness(w) => write!(f, "twisted conjugate, witness {w}"),
            Verdict::Distinct(o) => write!(f, "distinct: {o}"),
            Verdict::Count(n) => write!(f, "count {n}"),
            Verdict::Infinite(InfiniteCertificate::FixedPoints { kernel }) => {
                let k: Vec<String> = kernel.iter().map(BigInt::to_string).collect();
                write!(f, "infinite: fixed vector ({})", k.join(","))
            }
            Verdict::Infinite(InfiniteCertificate::Family { description, pairs, .. }) => {
                write!(f, "infinite: {description}, {} pairs distinct", pairs.len())
            }
        }
    }
}

/// `g b psi(g)^-1`
pub fn twist_orbit(g: &GroupElem, b: &GroupElem, psi: &AutExpr) -> Result<GroupElem> {
    psi.sig.check(g)?;
    psi.sig.check(b)?;
    g.mul(b)?.mul(&psi.apply(g)?.inv())
}

#[cfg(test)]
mod tests;
