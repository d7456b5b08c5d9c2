use super::*;
use crate::autos::{build_explicit, parse_additive, parse_aut, Sec6Kind, Signature, Window};
use crate::linalg::int::int_matrix;
use crate::matgroups::{parse_group_elem, AbelianGroup, FiniteGroup, GroupTag, TruncatedGroup};
use crate::rings::{parse_elem, RingAuto, RingDescriptor};
use crate::Error;

fn poly(p: u64) -> RingDescriptor {
    RingDescriptor::poly(RingDescriptor::prime_field(p).unwrap()).unwrap()
}

fn laurent(p: u64) -> RingDescriptor {
    RingDescriptor::laurent(RingDescriptor::prime_field(p).unwrap()).unwrap()
}

fn affine(ring: &RingDescriptor, a: i64, b: i64) -> RingAuto {
    let base = ring.base();
    RingAuto::poly_affine(ring, base.from_int(a), base.from_int(b)).unwrap()
}

fn count(report: &ClassReport) -> u64 {
    match &report.verdict {
        Verdict::Count(n) => n.try_into().unwrap(),
        v => panic!("expected a count, got {v:?}"),
    }
}

#[test]
fn twist_orbit_examples() {
    let ring = laurent(5);
    let phi = build_explicit(Sec6Kind::PhiB, &ring, None, None).unwrap();
    let b = parse_group_elem(GroupTag::BorelPlus, &ring, "(t,t^2+3;0,t^-1)").unwrap();
    let e = GroupElem::identity(GroupTag::BorelPlus, 2, &ring);
    assert_eq!(twist_orbit(&e, &b, &phi).unwrap(), b);

    // (t^k, f; t^l) diag(t^x, t^y) phi_B(..)^-1 with k=2, l=-1, x=1, y=0, a=2
    let g = parse_group_elem(GroupTag::BorelPlus, &ring, "(t^2,t+4*t^-3;0,t^-1)").unwrap();
    let c = parse_group_elem(GroupTag::BorelPlus, &ring, "(t,0;0,1)").unwrap();
    let f = parse_elem(&ring, "t+4*t^-3").unwrap();
    let f_inv = parse_elem(&ring, "t^-1+4*t^3").unwrap();
    let corner = &f.shift(-1).unwrap() - &f_inv.shift(4).unwrap().scale(&ring.base().from_int(2));
    let got = twist_orbit(&g, &c, &phi).unwrap();
    assert_eq!(got.matrix().get(0, 0), &parse_elem(&ring, "t^5").unwrap());
    assert_eq!(got.matrix().get(1, 1), &parse_elem(&ring, "t^-2").unwrap());
    assert_eq!(got.matrix().get(0, 1), &corner);

    let zz = RingDescriptor::poly(RingDescriptor::integers()).unwrap();
    let sig = Signature::new(3, &zz, GroupTag::Borel);
    let id = parse_aut("id", &sig).unwrap();
    let g = parse_group_elem(GroupTag::Borel, &zz, "(1,t,2;0,-1,t^2;0,0,1)").unwrap();
    let b = parse_group_elem(GroupTag::Borel, &zz, "(-1,1,0;0,1,3;0,0,1)").unwrap();
    assert_eq!(twist_orbit(&g, &b, &id).unwrap(), b.conjugate_by(&g).unwrap());
    let other = parse_group_elem(GroupTag::Borel, &zz, "(1,0;0,1)").unwrap();
    assert!(matches!(twist_orbit(&other, &b, &id), Err(Error::SignatureMismatch(_))));
}

#[test]
fn additive_counts() {
    let f2 = poly(2);
    let id = parse_additive(&f2, "ring:id").unwrap();
    assert_eq!(count(&additive_class_data(&id, &f2, Window::Degree(3)).unwrap().count_report()), 16);
    let shift = parse_additive(&f2, "ring:a=1,b=1").unwrap();
    let data = additive_class_data(&shift, &f2, Window::Degree(1)).unwrap();
    assert_eq!(count(&data.count_report()), 2);
    // image of id - (t -> t+1) on deg <= 1 is the constants
    let t = parse_elem(&f2, "t").unwrap();
    assert!(matches!(data.solve(&f2.one()).unwrap(), LinearOutcome::Witness(_)));
    match data.solve(&t).unwrap() {
        LinearOutcome::Obstructed(Obstruction::Functional { functional, residual, .. }) => {
            assert_eq!(residual, 1);
            assert_eq!(functional[1], 1);
        }
        o => panic!("{o:?}"),
    }
    let phi = parse_additive(&f2, "phiP:P=X^2+X+1,a=1").unwrap();
    for d in [1, 3, 5] {
        assert_eq!(count(&additive_class_data(&phi, &f2, Window::Degree(d)).unwrap().count_report()), 1);
    }
    assert!(matches!(additive_class_data(&phi, &f2, Window::Degree(2)), Err(Error::BlockMismatch { .. }) | Err(Error::WindowNotInvariant(_))));
}

#[test]
fn witnesses_verify_independently() {
    let f3 = poly(3);
    let l = parse_additive(&f3, "ring:a=2,b=1").unwrap();
    let target = parse_elem(&f3, "t^3+2*t+1").unwrap();
    let data = additive_class_data(&l, &f3, default_window(&l, &f3, &[target.clone()]).unwrap()).unwrap();
    match data.solve(&target).unwrap() {
        LinearOutcome::Witness(s) => assert_eq!(&s - &l.apply(&s).unwrap(), target),
        LinearOutcome::Obstructed(Obstruction::Functional { functional, residual, .. }) => {
            let f = data.trunc.field();
            assert!(data.m.vec_mul(f, &functional).iter().all(|&x| x == 0));
            assert_eq!(crate::linalg::fq::dot(f, &functional, &data.trunc.coords(&target).unwrap()), residual);
        }
        o => panic!("{o:?}"),
    }
}

#[test]
fn flip_pair_examples() {
    for p in [2u64, 3] {
        let ring = poly(p);
        let alpha = affine(&ring, 1, 1);
        let one = ring.base().one();
        let x = |i: i64| ring.monomial(&one, (p * (p - 1)) as i64 * i + p as i64 - 1).unwrap();
        let l = crate::autos::AdditiveMapSpec::RingAutoInduced(alpha.clone());
        let data = flip_pair_class_data(&alpha, &ring, default_window(&l, &ring, &[x(4)]).unwrap()).unwrap();
        let zero = ring.zero();
        for i in 1..=4 {
            for j in 1..i {
                let r = data.decide((&x(i), &zero), (&zero, &-&x(j))).unwrap();
                assert!(matches!(r.verdict, Verdict::Distinct(_)), "p={p} i={i} j={j}");
            }
        }
    }
    let ring = laurent(5);
    let flip = RingAuto::LaurentFlip(true);
    let data = flip_pair_class_data(&flip, &ring, Window::Support(-6, 6)).unwrap();
    let one = ring.base().one();
    let zero = ring.zero();
    for i in 2..=6 {
        for j in 1..i {
            let ti = ring.monomial(&one, i).unwrap();
            let tj = ring.monomial(&one, j).unwrap();
            let r = data.decide((&ti, &zero), (&zero, &-&tj)).unwrap();
            assert!(matches!(r.verdict, Verdict::Distinct(_)));
        }
    }
}

#[test]
fn flip_pair_identity_matches_enumeration() {
    // tau_id on (F_2 deg <= 1)^2: classes are the fibres of (r, s) -> r + s
    let ring = poly(2);
    let data = flip_pair_class_data(&RingAuto::Identity, &ring, Window::Degree(1)).unwrap();
    assert_eq!(data.count, 4u32.into());
    let g = AbelianGroup::new(vec![2, 2, 2, 2], 100).unwrap();
    // coordinates (r_0, r_1, s_0, s_1); tau swaps r and s
    let perm = g.perm_from_matrix(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
    let bf = brute_force_reidemeister(&g, &perm, 100).unwrap();
    assert_eq!(bf.count, 4);
    for a in 0..16 {
        for b in 0..16 {
            let (x, y) = (g.decode(a), g.decode(b));
            let sum = |v: &[u64]| ((v[0] + v[2]) % 2, (v[1] + v[3]) % 2);
            assert_eq!(bf.class_of[a] == bf.class_of[b], sum(&x) == sum(&y));
            let elem = |v: &[u64]| (data.trunc.elem(&[v[0] as u32, v[1] as u32]), data.trunc.elem(&[v[2] as u32, v[3] as u32]));
            let (ex, ey) = (elem(&x), elem(&y));
            let r = data.decide((&ex.0, &ex.1), (&ey.0, &ey.1)).unwrap();
            assert_eq!(matches!(r.verdict, Verdict::Witness(_)), sum(&x) == sum(&y));
        }
    }
}

#[test]
fn phi_p_witness_examples() {
    let ring = poly(2);
    let p = [1, 1, 1];
    assert!(phi_P_witness(&ring.zero(), 1, &p).unwrap().is_zero());
    let t = parse_elem(&ring, "t").unwrap();
    // C = [[0,1],[1,1]], (I - C)^-1 = [[0,1],[1,1]], so e_2 -> (1,1)
    assert_eq!(phi_P_witness(&t, 1, &p).unwrap(), parse_elem(&ring, "t+1").unwrap());
    let l = parse_additive(&ring, "phiP:P=X^2+X+1,a=1").unwrap();
    for s in ["t^5+t^2+1", "t^7+t^6+t^3", "t^4"] {
        let r = parse_elem(&ring, s).unwrap();
        let w = phi_P_witness(&r, 1, &p).unwrap();
        assert_eq!(&w - &l.apply(&w).unwrap(), r);
    }
    // X^2 + 1 over F_5 with a = 3: det(I - 3C) = 1 + 9 = 0
    let f5 = poly(5);
    assert!(matches!(phi_P_witness(&parse_elem(&f5, "t").unwrap(), 3, &[1, 0, 1]), Err(Error::LulaFails(_))));
}

#[test]
fn laurent_decisions() {
    let ring = laurent(5);
    let phi = build_explicit(Sec6Kind::PhiB, &ring, None, Some(2)).unwrap();
    let b = parse_group_elem(GroupTag::BorelPlus, &ring, "(t,t^3+2*t^-2+1;0,1)").unwrap();
    let b2 = parse_group_elem(GroupTag::BorelPlus, &ring, "(t,0;0,1)").unwrap();
    let r = laurent_b2_decide(&b, &b2, &phi).unwrap();
    match &r.verdict {
        Verdict::Witness(Witness::Group(g)) => assert_eq!(twist_orbit(g, &b, &phi).unwrap(), b2),
        v => panic!("{v:?}"),
    }
    let e = parse_group_elem(GroupTag::BorelPlus, &ring, "(1,0;0,1)").unwrap();
    let r = laurent_b2_decide(&e, &b2, &phi).unwrap();
    assert_eq!(r.verdict, Verdict::Distinct(Obstruction::Parity { left: vec![0, 0], right: vec![1, 0] }));
    let far = parse_group_elem(GroupTag::BorelPlus, &ring, "(t^-5,t^4;0,t^6)").unwrap();
    let near = parse_group_elem(GroupTag::BorelPlus, &ring, "(t,3*t^-1;0,1)").unwrap();
    assert!(matches!(laurent_b2_decide(&far, &near, &phi).unwrap().verdict, Verdict::Witness(_)));

    let phi_a = build_explicit(Sec6Kind::PhiA, &ring, None, None).unwrap();
    let x = parse_group_elem(GroupTag::ProjBorelPlus, &ring, "(t^2,t;0,t^5)").unwrap();
    let y = parse_group_elem(GroupTag::ProjBorelPlus, &ring, "(1,0;0,t)").unwrap();
    let z = parse_group_elem(GroupTag::ProjBorelPlus, &ring, "(1,0;0,1)").unwrap();
    assert!(matches!(laurent_b2_decide(&x, &y, &phi_a).unwrap().verdict, Verdict::Witness(_)));
    assert!(matches!(laurent_b2_decide(&x, &z, &phi_a).unwrap().verdict, Verdict::Distinct(_)));

    let phi_p = build_explicit(Sec6Kind::PhiPrime, &ring, None, None).unwrap();
    let u = parse_group_elem(GroupTag::Unipotent, &ring, "(1,t^3+t^-3+4;0,1)").unwrap();
    let v = parse_group_elem(GroupTag::Unipotent, &ring, "(1,2*t;0,1)").unwrap();
    assert!(matches!(laurent_b2_decide(&u, &v, &phi_p).unwrap().verdict, Verdict::Witness(_)));
}

#[test]
fn abelian_examples() {
    let inf = reidemeister_fg_abelian(&int_matrix(&[&[0, 1], &[1, 0]]), &[]).unwrap();
    match inf.verdict {
        Verdict::Infinite(InfiniteCertificate::FixedPoints { kernel }) => assert_eq!(kernel[0], kernel[1]),
        v => panic!("{v:?}"),
    }
    assert_eq!(count(&reidemeister_fg_abelian(&int_matrix(&[&[-1, 1], &[-1, 0]]), &[]).unwrap()), 3);
    assert_eq!(count(&reidemeister_fg_abelian(&int_matrix(&[&[-1, 0], &[0, -1]]), &[]).unwrap()), 4);
    // Z + Z/4 with -1 on both parts: 2 * |coker(2 on Z/4)| = 2 * 2
    assert_eq!(count(&reidemeister_fg_abelian(&int_matrix(&[&[-1, 0], &[1, -1]]), &[4]).unwrap()), 4);
    assert_eq!(reidemeister_fg_abelian(&int_matrix(&[&[-1, 1], &[0, -1]]), &[4]).unwrap_err(), Error::SplittingViolation);
}

#[test]
fn brute_force_examples() {
    let z5 = AbelianGroup::new(vec![5], 100).unwrap();
    let id: Vec<usize> = (0..5).collect();
    assert_eq!(brute_force_reidemeister(&z5, &id, 100).unwrap().count, 5);
    let double = z5.perm_from_matrix(&[vec![2]]).unwrap();
    let bf = brute_force_reidemeister(&z5, &double, 100).unwrap();
    assert_eq!((bf.count, bf.reps.clone()), (1, vec![0]));

    let u3 = TruncatedGroup::parse_spec("U3/fq:2/D0", 100).unwrap();
    let id: Vec<usize> = (0..u3.order()).collect();
    assert_eq!(brute_force_reidemeister(&u3, &id, 100).unwrap().count, 5);
    assert!(matches!(brute_force_reidemeister(&u3, &id, 4), Err(Error::SizeCapExceeded { .. })));
}

#[test]
fn infinite_families() {
    let f2 = poly(2);
    let id = crate::autos::AdditiveMapSpec::RingAutoInduced(RingAuto::Identity);
    let r = certify_infinite_family(&f2, &FamilyMap::Additive(id), FamilyKind::Characteristic, 4).unwrap();
    match &r.verdict {
        Verdict::Infinite(InfiniteCertificate::Family { pairs, .. }) => assert_eq!(pairs.len(), 6),
        v => panic!("{v:?}"),
    }
    let f3 = poly(3);
    let l = crate::autos::AdditiveMapSpec::RingAutoInduced(affine(&f3, 2, 1));
    assert!(certify_infinite_family(&f3, &FamilyMap::Additive(l), FamilyKind::Characteristic, 3).is_ok());
    let f5 = laurent(5);
    let flip = crate::autos::AdditiveMapSpec::RingAutoInduced(RingAuto::LaurentFlip(true));
    assert!(certify_infinite_family(&f5, &FamilyMap::Additive(flip), FamilyKind::Monomial, 5).is_ok());
    // id - 0 is onto, so every pair merges
    let zero_map = crate::autos::AdditiveMapSpec::ZeroMap;
    assert_eq!(
        certify_infinite_family(&f2, &FamilyMap::Additive(zero_map), FamilyKind::Monomial, 3).unwrap_err(),
        Error::CertificationFailed { i: 2, j: 1 }
    );
}

#[test]
fn report_json_fields() {
    let r = ClassReport::new(Verdict::Count(5u32.into())).with_seed(7);
    let v = r.to_json();
    assert_eq!(v["verdict"], "count");
    assert_eq!(v["count"], "5");
    assert_eq!(v["seed"], 7);
    for k in ["witness", "obstruction", "pairs", "timing_ms"] {
        assert!(v.get(k).is_some(), "{k}");
    }
}
