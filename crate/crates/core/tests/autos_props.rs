mod common;

use common::*;
use proptest::prelude::*;

use tritwist::autos::{
    abelianization_image, build_phi_P, parse_aut, truncation_matrix, AutExpr, AutStep, Signature, Window,
};
use tritwist::matgroups::GroupTag;
use tritwist::rings::{find_irreducible, RingDescriptor, RingElem};

/// `(ring, tag, n, expression)`; `inner` gets a random Borel element.
const VARIANTS: &[(&str, GroupTag, usize, &str)] = &[
    ("poly:int", GroupTag::Unipotent, 4, "flip"),
    ("poly:int", GroupTag::Unipotent, 5, "flip"),
    ("poly:int", GroupTag::Unipotent, 4, "inner"),
    ("poly:int", GroupTag::Unipotent, 4, "central:i=2,lambda=id"),
    ("poly:int", GroupTag::Unipotent, 3, "central:i=1,lambda=ring:a=-1,b=3"),
    ("poly:int", GroupTag::Unipotent, 4, "ring:a=-1,b=2"),
    ("fq:5", GroupTag::Unipotent, 4, "sigma:a=2"),
    ("poly:fq:5", GroupTag::Unipotent, 5, "sigma':a=3"),
    ("poly:fq:5", GroupTag::Unipotent, 4, "compose(flip,sigma:a=1,central:i=3,lambda=mul:2)"),
    ("poly:fq:3", GroupTag::Borel, 3, "diag:(2,1,2)"),
    ("poly:fq:3", GroupTag::Borel, 3, "inner"),
    ("poly:fq:3", GroupTag::Borel, 3, "ring:a=2,b=1"),
    ("poly:fq:3", GroupTag::Unipotent, 2, "phiP:P=X^2+1,a=1"),
    ("poly:fq:3", GroupTag::Borel, 2, "sec6:phiBP"),
    ("poly:fq:3", GroupTag::ProjBorel, 2, "sec6:phiAP"),
    ("laurent:fq:5", GroupTag::BorelPlus, 2, "sec6:phiB:a=2"),
    ("laurent:fq:5", GroupTag::ProjBorelPlus, 2, "sec6:phiA:a=2"),
    ("laurent:fq:5", GroupTag::Unipotent, 2, "sec6:phiPrime:a=3"),
    ("laurent:fq:5", GroupTag::BorelPlus, 3, "ring:eps=1"),
];

fn build(which: usize, seed: u64) -> (AutExpr, rand_chacha::ChaCha8Rng) {
    let (r, tag, n, text) = VARIANTS[which];
    let r = ring(r);
    let sig = Signature::new(n, &r, tag);
    let mut g = rng(seed);
    let psi = if text == "inner" {
        let by = group_elem(GroupTag::Borel, n, &r, &mut g);
        AutExpr::single(sig, AutStep::Inner(by)).unwrap()
    } else {
        parse_aut(text, &sig).unwrap()
    };
    (psi, g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn automorphisms_are_homomorphisms(seed in any::<u64>(), which in 0..VARIANTS.len()) {
        let (psi, mut g) = build(which, seed);
        let (tag, n, r) = (psi.sig.tag, psi.sig.n, psi.sig.ring.clone());
        for _ in 0..4 {
            let (x, y) = (group_elem(tag, n, &r, &mut g), group_elem(tag, n, &r, &mut g));
            let lhs = psi.apply(&x.mul(&y).unwrap()).unwrap();
            let rhs = psi.apply(&x).unwrap().mul(&psi.apply(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs, "{}", VARIANTS[which].3);
        }
    }

    #[test]
    fn automorphisms_invert(seed in any::<u64>(), which in 0..VARIANTS.len()) {
        let (psi, mut g) = build(which, seed);
        let inv = psi.inverse().unwrap();
        let x = group_elem(psi.sig.tag, psi.sig.n, &psi.sig.ring, &mut g);
        prop_assert_eq!(inv.apply(&psi.apply(&x).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(psi.apply(&inv.apply(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn flip_is_an_involution(seed in any::<u64>(), n in 2..=6usize, which in 0..RINGS.len()) {
        let r = ring(RINGS[which]);
        let flip = AutExpr::single(Signature::new(n, &r, GroupTag::Unipotent), AutStep::Flip).unwrap();
        let mut g = rng(seed);
        let x = group_elem(GroupTag::Unipotent, n, &r, &mut g);
        prop_assert_eq!(flip.apply(&flip.apply(&x).unwrap()).unwrap(), x);
    }
}

fn vectors(f: &RingDescriptor, len: usize) -> Vec<Vec<RingElem>> {
    let q = f.field().unwrap().order() as usize;
    (0..q.pow(len as u32))
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let c = (i % q) as u32;
                    i /= q;
                    f.field_elem(c).unwrap()
                })
                .collect()
        })
        .collect()
}

#[test]
fn central_and_sigma_trivial_on_abelianization() {
    for q in [3u64, 5] {
        let f = RingDescriptor::prime_field(q).unwrap();
        for n in [4usize, 5] {
            let sig = Signature::new(n, &f, GroupTag::Unipotent);
            let mut exprs: Vec<String> = (1..n).map(|i| format!("central:i={i},lambda=mul:2")).collect();
            exprs.extend(["sigma:a=1", "sigma:a=2", "sigma':a=1", "central:i=1,lambda=id"].map(String::from));
            for e in &exprs {
                let psi = parse_aut(e, &sig).unwrap();
                for v in vectors(&f, n - 1) {
                    assert_eq!(abelianization_image(&psi, &v).unwrap(), v, "{e} on U{n}(F_{q})");
                }
            }
        }
    }
}

#[test]
fn block_companion_is_bijective_on_windows() {
    for q in [2u64, 3, 4, 5] {
        let base = RingDescriptor::field_of_order(q).unwrap();
        let r = RingDescriptor::poly(base.clone()).unwrap();
        let f = base.field().unwrap();
        for d in 2..=3 {
            let p = find_irreducible(&base, d).unwrap();
            for blocks in 1..=3 {
                let window = d * blocks - 1;
                let l = build_phi_P(f, &p, window).unwrap();
                let m = truncation_matrix(&l, &r, Window::Degree(window)).unwrap();
                assert_ne!(m.matrix.det(f), 0, "q={q} P={p:?} D={window}");
            }
        }
    }
}
