mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;

use tritwist::linalg::{FqMatrix, Solution};
use tritwist::rings::{
    companion, companion_lula, find_flip_unit, lula_det, parse_elem, ring_auto_apply, RingAuto, RingDescriptor,
};

fn autos_of(r: &RingDescriptor, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<RingAuto> {
    let mut out = vec![RingAuto::Identity];
    if r.is_poly() {
        let a = loop {
            let a = elem(r.base(), rng);
            if a.is_unit() {
                break a;
            }
        };
        out.push(RingAuto::poly_affine(r, a, elem(r.base(), rng)).unwrap());
    }
    if r.is_laurent() {
        out.extend([RingAuto::LaurentFlip(false), RingAuto::LaurentFlip(true)]);
    }
    if r.to_string() == "order:x^2+1" {
        out.push(RingAuto::order_root_map(r, parse_elem(r, "-x").unwrap()).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), which in 0..RINGS.len()) {
        let r = ring(RINGS[which]);
        let mut g = rng(seed);
        let (a, b, c) = (elem(&r, &mut g), elem(&r, &mut g), elem(&r, &mut g));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, r.zero());
        prop_assert_eq!(&a * &r.one(), a.clone());
        let u = unit(&r, &mut g);
        prop_assert_eq!(&u * &u.inv().unwrap(), r.one());
    }

    #[test]
    fn ring_autos_are_invertible_homomorphisms(seed in any::<u64>(), which in 0..RINGS.len()) {
        let r = ring(RINGS[which]);
        let mut g = rng(seed);
        for alpha in autos_of(&r, &mut g) {
            let inv = alpha.inverse();
            for _ in 0..4 {
                let (x, y) = (elem(&r, &mut g), elem(&r, &mut g));
                let f = |z: &tritwist::rings::RingElem| ring_auto_apply(&alpha, z).unwrap();
                prop_assert_eq!(f(&(&x + &y)), &f(&x) + &f(&y));
                prop_assert_eq!(f(&(&x * &y)), &f(&x) * &f(&y));
                prop_assert_eq!(ring_auto_apply(&inv, &f(&x)).unwrap(), x);
            }
        }
    }

    #[test]
    fn affine_substitution_preserves_degree(seed in any::<u64>(), which in 0..3usize) {
        let r = ring(["poly:fq:3", "poly:int", "poly:fq:2^2:x^2+x+1"][which]);
        let mut g = rng(seed);
        let alpha = autos_of(&r, &mut g).pop().unwrap();
        let h = elem(&r, &mut g);
        prop_assert_eq!(ring_auto_apply(&alpha, &h).unwrap().degree(), h.degree());
    }
}

#[test]
fn flip_unit_gives_solvable_systems() {
    for q in [4u64, 5, 7, 8, 9] {
        let r = RingDescriptor::field_of_order(q).unwrap();
        let f = r.field().unwrap();
        let a = find_flip_unit(&r).unwrap();
        let m = FqMatrix::from_rows(&[vec![1, f.neg(a)], vec![f.neg(a), 1]]);
        for l in f.elements() {
            for k in f.elements() {
                assert!(matches!(m.solve(f, &[l, k]), Solution::Solved(_)), "q={q}");
            }
        }
        assert_eq!(m.rank(f), 2);
    }
}

#[test]
fn irreducible_companions_have_invertible_lula() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = RingDescriptor::field_of_order(q).unwrap().field().unwrap().clone();
        for d in 2..=3 {
            for p in f.monic_polys(d).filter(|p| f.poly_is_irreducible(p)) {
                for a in f.elements().skip(1) {
                    assert!(companion_lula(&f, &p, a).unwrap().1, "q={q} P={p:?} a={a}");
                }
            }
        }
    }
}

#[test]
fn reducible_with_root_at_inverse_vanishes() {
    let mut g = rng(1);
    for q in [3u64, 4, 5, 7, 8, 9] {
        let f = RingDescriptor::field_of_order(q).unwrap().field().unwrap().clone();
        for _ in 0..20 {
            let a = g.gen_range(1..f.order());
            let lambda = f.inv(a);
            let mu = g.gen_range(0..f.order());
            // (X - lambda)(X - mu)
            let p = f.poly_mul(&[f.neg(lambda), 1], &[f.neg(mu), 1]);
            assert_eq!(lula_det(&f, &companion(&f, &p), a), 0);
            assert!(companion_lula(&f, &p, a).is_err());
        }
    }
}
