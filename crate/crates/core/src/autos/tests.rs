use super::*;
use crate::matgroups::{elementary, parse_group_elem, superdiagonal_order};
use crate::rings::parse_elem;

fn zz_poly() -> RingDescriptor {
    RingDescriptor::poly(RingDescriptor::integers()).unwrap()
}

fn random_unipotent(n: usize, ring: &RingDescriptor, rng: &mut impl Rng) -> GroupElem {
    let mut m = TriMatrix::identity(n, ring);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, random_elem(ring, rng, 2, 3));
        }
    }
    GroupElem::new(GroupTag::Unipotent, m).unwrap()
}

#[test]
fn flip_examples() {
    let ring = RingDescriptor::integers();
    let r = ring.from_int(7);
    let u3 = Signature::new(3, &ring, GroupTag::Unipotent);
    let flip3 = parse_aut("flip", &u3).unwrap();
    assert_eq!(flip3.apply(&elementary(3, 1, 2, &r).unwrap()).unwrap(), elementary(3, 2, 3, &r).unwrap());
    let u4 = Signature::new(4, &ring, GroupTag::Unipotent);
    let flip4 = parse_aut("flip", &u4).unwrap();
    assert_eq!(flip4.apply(&elementary(4, 1, 3, &r).unwrap()).unwrap(), elementary(4, 2, 4, &-&r).unwrap());
}

#[test]
fn flip_is_an_involutive_homomorphism() {
    let ring = zz_poly();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=6 {
        let sig = Signature::new(n, &ring, GroupTag::Unipotent);
        let flip = AutExpr::single(sig, AutStep::Flip).unwrap();
        for _ in 0..20 {
            let g = random_unipotent(n, &ring, &mut rng);
            let h = random_unipotent(n, &ring, &mut rng);
            assert_eq!(flip.apply(&flip.apply(&g).unwrap()).unwrap(), g);
            assert_eq!(flip.apply(&g.mul(&h).unwrap()).unwrap(), flip.apply(&g).unwrap().mul(&flip.apply(&h).unwrap()).unwrap());
        }
    }
}

#[test]
fn phi_b_rule() {
    let ring = RingDescriptor::laurent(RingDescriptor::prime_field(5).unwrap()).unwrap();
    let phi = build_explicit(Sec6Kind::PhiB, &ring, None, None).unwrap();
    assert_eq!(phi.to_string(), "sec6:phiB:a=2");
    let b = parse_group_elem(GroupTag::BorelPlus, &ring, "(t^2,t+3*t^-1;0,t^-1)").unwrap();
    let img = phi.apply(&b).unwrap();
    assert_eq!(img.to_string(), "(t^-2,t+2*t^-1;0,t)");
    assert_eq!(phi.inverse().unwrap().apply(&img).unwrap(), b);
    assert_eq!(parse_aut("sec6:phiB:a=2", &phi.sig).unwrap(), phi);
    let f3 = RingDescriptor::laurent(RingDescriptor::prime_field(3).unwrap()).unwrap();
    assert_eq!(build_explicit(Sec6Kind::PhiB, &f3, None, None).unwrap_err(), Error::FieldTooSmall(3));
}

#[test]
fn phi_bp_fixes_the_diagonal() {
    let ring = RingDescriptor::poly(RingDescriptor::prime_field(3).unwrap()).unwrap();
    let phi = build_explicit(Sec6Kind::PhiBP, &ring, None, None).unwrap();
    let d = parse_group_elem(GroupTag::Borel, &ring, "(2,0;0,1)").unwrap();
    assert_eq!(phi.apply(&d).unwrap(), d);
    let b = parse_group_elem(GroupTag::Borel, &ring, "(2,1;0,1)").unwrap();
    // Phi_P(1) = t for the companion of X^2 + 1
    assert_eq!(phi.apply(&b).unwrap().to_string(), "(2,t;0,1)");
}

#[test]
fn sigma_generator_images() {
    let ring = RingDescriptor::integers();
    let n = 4;
    let sig = Signature::new(n, &ring, GroupTag::Unipotent);
    let psi = parse_aut("sigma:a=2,lambda=halfshift", &sig).unwrap();
    let a = ring.from_int(2);
    let lambda = AdditiveMapSpec::QuadraticHalf { a: a.clone(), shifted: true };
    for k in [-3, 0, 1, 4] {
        let r = ring.from_int(k);
        let expected = elementary(n, 1, 2, &r)
            .unwrap()
            .mul(&elementary(n, 2, n, &(&a * &r)).unwrap())
            .unwrap()
            .mul(&elementary(n, 1, n, &(&lambda.apply(&r).unwrap() - &(&(&a * &r) * &r))).unwrap())
            .unwrap();
        assert_eq!(psi.apply(&elementary(n, 1, 2, &r).unwrap()).unwrap(), expected);
        for i in 2..n {
            let g = elementary(n, i, i + 1, &r).unwrap();
            assert_eq!(psi.apply(&g).unwrap(), g);
        }
    }
    let z = RingDescriptor::integers();
    let sig = Signature::new(5, &z, GroupTag::Unipotent);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for text in ["sigma:a=3,lambda=halfshift", "sigma':a=-1,lambda=halfshift", "sigma:a=0,lambda=mul:4"] {
        let psi = parse_aut(text, &sig).unwrap();
        let inv = psi.inverse().unwrap();
        for _ in 0..20 {
            let g = random_unipotent(5, &z, &mut rng);
            let h = random_unipotent(5, &z, &mut rng);
            assert_eq!(psi.apply(&g.mul(&h).unwrap()).unwrap(), psi.apply(&g).unwrap().mul(&psi.apply(&h).unwrap()).unwrap(), "{text}");
            assert_eq!(inv.apply(&psi.apply(&g).unwrap()).unwrap(), g);
        }
    }
    assert!(parse_aut("sigma:a=1,lambda=zero", &sig).is_err());
    let u3 = Signature::new(3, &z, GroupTag::Unipotent);
    assert!(matches!(parse_aut("sigma:a=0,lambda=zero", &u3), Err(Error::SignatureMismatch(_))));
}

#[test]
fn sigma_validation_examples() {
    let f5 = RingDescriptor::poly(RingDescriptor::prime_field(5).unwrap()).unwrap();
    let a = f5.from_int(3);
    assert!(validate_sigma(&AdditiveMapSpec::QuadraticHalf { a: a.clone(), shifted: false }, &a, 100).unwrap());
    let z = f5.zero();
    assert!(validate_sigma(&AdditiveMapSpec::ZeroMap, &z, 100).unwrap());
    let f2 = RingDescriptor::poly(RingDescriptor::prime_field(2).unwrap()).unwrap();
    assert!(validate_sigma(&AdditiveMapSpec::Frobenius, &f2.zero(), 100).unwrap());
    assert!(!validate_sigma(&AdditiveMapSpec::Frobenius, &f2.one(), 100).unwrap());
}

#[test]
fn composition_rules() {
    let ring = zz_poly();
    let sig = Signature::new(3, &ring, GroupTag::Unipotent);
    let x = parse_group_elem(GroupTag::Borel, &ring, "(1,t,2;0,-1,t^2;0,0,1)").unwrap();
    let y = parse_group_elem(GroupTag::Borel, &ring, "(-1,3,0;0,1,1-t;0,0,1)").unwrap();
    let ix = AutExpr::single(sig.clone(), AutStep::Inner(x.clone())).unwrap();
    let iy = AutExpr::single(sig.clone(), AutStep::Inner(y.clone())).unwrap();
    let ixy = AutExpr::single(sig.clone(), AutStep::Inner(x.mul(&y).unwrap())).unwrap();
    let both = aut_compose(&ix, &iy).unwrap();
    let central = parse_aut("central:i=2,lambda=mul:t+1", &sig).unwrap();
    let u = parse_group_elem(GroupTag::Borel, &ring, "(1,t,0;0,1,5;0,0,1)").unwrap();
    let iu = AutExpr::single(sig.clone(), AutStep::Inner(u)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let g = random_unipotent(3, &ring, &mut rng);
        assert_eq!(both.apply(&g).unwrap(), ixy.apply(&g).unwrap());
        assert_eq!(both.apply(&g).unwrap(), ix.apply(&iy.apply(&g).unwrap()).unwrap());
        let cu = aut_compose(&central, &iu).unwrap();
        let uc = aut_compose(&iu, &central).unwrap();
        assert_eq!(cu.apply(&g).unwrap(), uc.apply(&g).unwrap());
    }
    let other = Signature::new(3, &ring, GroupTag::Borel);
    assert!(matches!(aut_compose(&ix, &AutExpr::identity(other)), Err(Error::SignatureMismatch(_))));
}

#[test]
fn stilde_shapes() {
    let f5 = RingDescriptor::prime_field(5).unwrap();
    let samples: Vec<RingElem> = (1..5).map(|k| f5.from_int(k)).collect();
    let anti = verify_stilde_identity(&StildeShape::Antidiagonal(f5.from_int(2)), &samples).unwrap();
    assert!(anti.holds);
    let g = elementary(4, 1, 4, &f5.one()).unwrap();
    let img = stilde_apply(&StildeShape::Antidiagonal(f5.from_int(2)), &g).unwrap();
    assert_eq!(img, elementary(4, 1, 4, &f5.from_int(-1)).unwrap());
    // the displayed rules for the diagonal shape give iota_d, not tau o iota_d
    let diag = verify_stilde_identity(&StildeShape::Diagonal(f5.from_int(2)), &samples).unwrap();
    assert!(!diag.holds);
    assert!(diag.equals_inner_d);
}

#[test]
fn abelianization_actions() {
    let ring = RingDescriptor::poly(RingDescriptor::prime_field(2).unwrap()).unwrap();
    let v: Vec<RingElem> = ["t", "1", "t+1", "0"].iter().map(|s| parse_elem(&ring, s).unwrap()).collect();
    let u5 = Signature::new(5, &ring, GroupTag::Unipotent);
    let flip = parse_aut("flip", &u5).unwrap();
    let mut rev = v.clone();
    rev.reverse();
    assert_eq!(abelianization_image(&flip, &v).unwrap(), rev);
    let central = parse_aut("central:i=1,lambda=mul:t", &u5).unwrap();
    assert_eq!(abelianization_image(&central, &v).unwrap(), v);
    let alpha = parse_aut("compose(flip,ring:a=1,b=1)", &u5).unwrap();
    let r = parse_elem(&ring, "t^2").unwrap();
    let s = parse_elem(&ring, "t").unwrap();
    let img = emid_restriction(&alpha, &[r.clone(), s.clone()]).unwrap();
    let shift = RingAuto::poly_affine(&ring, ring.base().one(), ring.base().one()).unwrap();
    assert_eq!(img, vec![ring_auto_apply(&shift, &s).unwrap(), ring_auto_apply(&shift, &r).unwrap()]);
    assert_eq!(emid_positions(4), vec![2]);
    assert_eq!(emid_positions(5), vec![2, 3]);
    assert_eq!(emid_positions(6), vec![3]);
}

#[test]
fn text_round_trips() {
    let ring = RingDescriptor::poly(RingDescriptor::prime_field(3).unwrap()).unwrap();
    let u4 = Signature::new(4, &ring, GroupTag::Unipotent);
    for text in [
        "flip",
        "ring:t->a*t+b:a=2,b=1",
        "compose(flip,ring:t->a*t+b:a=1,b=1)",
        "central:i=3,lambda=mul:t+1",
        "sigma:a=1,lambda=half:1",
        "diag:(1,2,2,1)",
        "inner:(1,t,0,0;0,1,0,0;0,0,1,1;0,0,0,1)",
    ] {
        let psi = parse_aut(text, &u4).unwrap();
        assert_eq!(psi.to_string(), text);
    }
    let u2 = Signature::new(2, &ring, GroupTag::Unipotent);
    let phi = parse_aut("phiP:P=X^2+1,a=2", &u2).unwrap();
    assert_eq!(parse_aut(&phi.to_string(), &u2).unwrap(), phi);
    assert!(parse_aut("ring:eps=1", &u2).is_err());
    assert!(parse_aut("bogus", &u2).is_err());
    let add = parse_additive(&ring, "compose(mul:2,ring:a=1,b=2)").unwrap();
    assert_eq!(add.to_string(), "compose(mul:2,ring:t->a*t+b:a=1,b=2)");
    assert_eq!(parse_additive(&ring, &add.to_string()).unwrap(), add);
}

#[test]
fn every_generator_pair_satisfies_the_commutator_relations() {
    let ring = zz_poly();
    let n = 4;
    let r = parse_elem(&ring, "t+2").unwrap();
    let s = parse_elem(&ring, "3-t^2").unwrap();
    for (i, j) in superdiagonal_order(n) {
        for (k, l) in superdiagonal_order(n) {
            let c = elementary(n, i, j, &r).unwrap().commutator(&elementary(n, k, l, &s).unwrap()).unwrap();
            if j == k {
                assert_eq!(c, elementary(n, i, l, &(&r * &s)).unwrap());
            } else if i != l {
                assert!(c.is_identity());
            }
        }
    }
}
