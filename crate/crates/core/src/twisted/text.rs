//! Entry points taking the text forms of rings, automorphisms and matrices.

use super::{additive_class_data, default_window, laurent_b2_decide, reidemeister_fg_abelian, ClassReport};
use crate::autos::{parse_additive, parse_aut, AdditiveMapSpec, AutStep, Sec6Kind, Signature, Window};
use crate::error::{Error, Result};
use crate::matgroups::{parse_group_elem, parse_matrix, GroupTag};
use crate::rings::{parse_ring, DescriptorKind, RingAuto, RingDescriptor};

/// An additive map, or an automorphism of `U2` read through its corner entry.
pub fn additive_or_corner(ring: &RingDescriptor, aut: &str) -> Result<AdditiveMapSpec> {
    match parse_additive(ring, aut) {
        Ok(m) => Ok(m),
        Err(first) => {
            let sig = Signature::new(2, ring, GroupTag::Unipotent);
            let psi = parse_aut(aut, &sig).map_err(|_| first)?;
            psi.corner_map()
        }
    }
}

/// Twisted classes of an additive map. Over `Z` and orders the answer is
/// exact; over `F_q[t]` and `F_q[t,1/t]` it is the count on the window of
/// degree `<= D`, resp. `[-D, D]`.
pub fn count_classes(ring: &str, aut: &str, window: Option<usize>) -> Result<ClassReport> {
    let ring = parse_ring(ring)?;
    let map = additive_or_corner(&ring, aut)?;
    if ring.order_spec().is_some() || matches!(ring.kind(), DescriptorKind::Integers) {
        let alpha = match &map {
            AdditiveMapSpec::RingAutoInduced(a) => a.clone(),
            AdditiveMapSpec::MulUnit(u) if u.is_one() => RingAuto::Identity,
            _ => return Err(Error::InvalidParams(format!("over {ring} only ring automorphisms can be counted"))),
        };
        return reidemeister_fg_abelian(&alpha.order_matrix(&ring)?, &[]);
    }
    let w = match window {
        Some(d) if ring.is_laurent() => Window::Support(-(d as i64), d as i64),
        Some(d) => Window::Degree(d),
        None if ring.is_poly() || ring.is_laurent() => {
            return Err(Error::InvalidParams(format!("a window is required over {ring}")))
        }
        None => Window::Degree(0),
    };
    Ok(additive_class_data(&map, &ring, w)?.count_report())
}

/// Decides `b ~ b'`. Explicit `B2` automorphisms over Laurent rings go to the
/// parity decision; automorphisms of `U2` act on the corner entry. `group`
/// is a tag name and defaults to the one implied by the automorphism, else `U`.
pub fn decide_text(ring: &str, aut: &str, b: &str, bprime: &str, group: Option<&str>) -> Result<ClassReport> {
    let ring = parse_ring(ring)?;
    let n = parse_matrix(&ring, b)?.n();
    let tag = match group {
        Some(g) => GroupTag::from_name(g)?,
        None => sec6_tag(&ring, aut).unwrap_or(GroupTag::Unipotent),
    };
    let psi = parse_aut(aut, &Signature::new(n, &ring, tag))?;
    let x = parse_group_elem(tag, &ring, b)?;
    let y = parse_group_elem(tag, &ring, bprime)?;
    if matches!(psi.steps.as_slice(), [AutStep::Section6 { .. }]) && ring.is_laurent() {
        return laurent_b2_decide(&x, &y, &psi);
    }
    if n == 2 && tag == GroupTag::Unipotent {
        // in U2 the action is x -> r + x - l(r) on the corner entry
        let l = psi.corner_map()?;
        let (cx, cy) = (x.matrix().get(0, 1).clone(), y.matrix().get(0, 1).clone());
        let w = default_window(&l, &ring, &[cx.clone(), cy.clone()])?;
        return additive_class_data(&l, &ring, w)?.decide(&cx, &cy);
    }
    Err(Error::InvalidParams(format!(
        "no decision procedure for {}{n} under `{aut}`; use a finite truncation and the oracle",
        tag.name()
    )))
}

fn sec6_tag(ring: &RingDescriptor, aut: &str) -> Option<GroupTag> {
    let kind = aut.trim().strip_prefix("sec6:")?.split(':').next()?;
    Some(Sec6Kind::from_name(kind).ok()?.signature(ring).tag)
}
