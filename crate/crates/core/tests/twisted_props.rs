mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use tritwist::autos::{build_explicit, AdditiveMapSpec, AutExpr, AutStep, Sec6Kind, Signature, Window};
use tritwist::linalg::fq::dot;
use tritwist::linalg::int::{identity, int_det, int_matrix, mul_vec, sub};
use tritwist::matgroups::{AbelianGroup, FiniteGroup, GroupTag, TruncatedGroup, DEFAULT_ORACLE_CAP};
use tritwist::rings::{ring_auto_apply, RingAuto, RingDescriptor, RingElem};
use tritwist::twisted::{
    additive_class_data, brute_force_reidemeister, laurent_b2_decide, reidemeister_fg_abelian, twist_orbit,
    InfiniteCertificate, LinearOutcome, Obstruction, Verdict, Witness,
};

fn fp_poly(p: u64) -> RingDescriptor {
    RingDescriptor::poly(RingDescriptor::prime_field(p).unwrap()).unwrap()
}

fn affine(r: &RingDescriptor, a: i64, b: i64) -> RingAuto {
    RingAuto::poly_affine(r, r.base().from_int(a), r.base().from_int(b)).unwrap()
}

fn poly(r: &RingDescriptor, coeffs: &[i64]) -> RingElem {
    let cs: Vec<RingElem> = coeffs.iter().map(|&c| r.base().from_int(c)).collect();
    r.poly_from_coeffs(&cs).unwrap()
}

fn random_poly(r: &RingDescriptor, g: &mut rand_chacha::ChaCha8Rng, deg: usize) -> RingElem {
    let p = r.coefficient_field().unwrap().order() as i64;
    let cs: Vec<i64> = (0..=deg).map(|_| g.gen_range(0..p)).collect();
    poly(r, &cs)
}

/// Whether `target` lies in the image of `id - alpha` on the degree window.
fn in_image(r: &RingDescriptor, alpha: &RingAuto, target: &RingElem, window: usize) -> bool {
    let l = AdditiveMapSpec::RingAutoInduced(alpha.clone());
    let data = additive_class_data(&l, r, Window::Degree(window)).unwrap();
    matches!(data.solve(target).unwrap(), LinearOutcome::Witness(_))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Solver answers are checked here without going through the solver's own checks.
    #[test]
    fn additive_answers_verify_independently(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), deg in 0..6usize) {
        let r = fp_poly(p);
        let mut g = rng(seed);
        let alpha = affine(&r, g.gen_range(1..p as i64), g.gen_range(0..p as i64));
        let target = random_poly(&r, &mut g, deg);
        let window = deg + p as usize - 1;
        let data = additive_class_data(&AdditiveMapSpec::RingAutoInduced(alpha.clone()), &r, Window::Degree(window)).unwrap();
        match data.solve(&target).unwrap() {
            LinearOutcome::Witness(s) => prop_assert_eq!(&s - &ring_auto_apply(&alpha, &s).unwrap(), target),
            LinearOutcome::Obstructed(Obstruction::Functional { functional, residual, .. }) => {
                let f = r.coefficient_field().unwrap();
                // v vanishes on every image vector s - alpha(s), s = t^j
                for j in 0..=window {
                    let s = r.monomial(&r.base().one(), j as i64).unwrap();
                    let img = &s - &ring_auto_apply(&alpha, &s).unwrap();
                    prop_assert_eq!(dot(f, &functional, &data.trunc.coords(&img).unwrap()), 0);
                }
                let v = dot(f, &functional, &data.trunc.coords(&target).unwrap());
                prop_assert_eq!(v, residual);
                prop_assert_ne!(v, 0);
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    /// Membership is stable once the window reaches `deg + p - 1`.
    #[test]
    fn window_stability(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), deg in 0..5usize) {
        let r = fp_poly(p);
        let mut g = rng(seed);
        let alpha = affine(&r, g.gen_range(1..p as i64), g.gen_range(0..p as i64));
        let target = random_poly(&r, &mut g, deg);
        let base = deg + p as usize - 1;
        let answer = in_image(&r, &alpha, &target, base);
        for extra in [1, 3, 7] {
            prop_assert_eq!(in_image(&r, &alpha, &target, base + extra), answer);
        }
    }

    /// For `t -> a t` the coefficient of `t^(p theta + p - 1)` in `h - alpha(g)`
    /// only involves the same coefficient of `h` and `g`.
    #[test]
    fn characteristic_coefficients_without_translation(
        seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), theta in 1..4usize
    ) {
        let r = fp_poly(p);
        let mut g = rng(seed);
        let a = g.gen_range(1..p as i64);
        let alpha = affine(&r, a, 0);
        let (h, x) = (random_poly(&r, &mut g, 20), random_poly(&r, &mut g, 20));
        let m = (p as usize * theta + p as usize - 1) as i64;
        let lhs = (&h - &ring_auto_apply(&alpha, &x).unwrap()).coeff(m);
        let apow = r.base().from_int(a).pow((p as usize * theta) as u32);
        prop_assert_eq!(lhs, &h.coeff(m) - &(&x.coeff(m) * &apow));
    }

    /// `phi_B` twisting keeps both diagonal exponents mod 2.
    #[test]
    fn parity_is_invariant(seed in any::<u64>(), q in prop::sample::select(vec![4u64, 5, 7])) {
        let r = RingDescriptor::laurent(RingDescriptor::field_of_order(q).unwrap()).unwrap();
        let psi = build_explicit(Sec6Kind::PhiB, &r, None, None).unwrap();
        let mut g = rng(seed);
        let b = group_elem(GroupTag::BorelPlus, 2, &r, &mut g);
        let parity = |x: &tritwist::matgroups::GroupElem| {
            let e = |i| x.matrix().get(i, i).as_monomial().unwrap().1.rem_euclid(2);
            (e(0), e(1))
        };
        let mut x = b.clone();
        for _ in 0..5 {
            let h = group_elem(GroupTag::BorelPlus, 2, &r, &mut g);
            x = twist_orbit(&h, &x, &psi).unwrap();
            prop_assert_eq!(parity(&x), parity(&b));
        }
        // and the decision finds its way back
        match laurent_b2_decide(&b, &x, &psi).unwrap().verdict {
            Verdict::Witness(Witness::Group(w)) => prop_assert_eq!(twist_orbit(&w, &b, &psi).unwrap(), x),
            v => prop_assert!(false, "expected a witness, got {:?}", v),
        }
    }

    /// Infinity only with a fixed vector; otherwise the count is |det(I - M)|.
    #[test]
    fn free_abelian_counts(entries in prop::collection::vec(-3i64..=3, 4)) {
        let m = int_matrix(&[&entries[0..2], &entries[2..4]]);
        if int_det(&m).abs() != BigInt::from(1) {
            return Ok(());
        }
        let det = int_det(&sub(&identity(2), &m));
        match reidemeister_fg_abelian(&m, &[]).unwrap().verdict {
            Verdict::Count(n) => prop_assert_eq!(BigInt::from(n), det.abs()),
            Verdict::Infinite(InfiniteCertificate::FixedPoints { kernel }) => {
                prop_assert!(det.is_zero());
                prop_assert!(kernel.iter().any(|k| !k.is_zero()));
                prop_assert!(mul_vec(&sub(&identity(2), &m), &kernel).iter().all(Zero::is_zero));
            }
            v => prop_assert!(false, "unexpected {:?}", v),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// R(inner o psi) = R(psi) on truncated Borel groups.
    #[test]
    fn inner_twist_keeps_count(seed in any::<u64>(), spec in prop::sample::select(vec!["B2/fq:3/D1", "B2/fq:4/D1", "B3/fq:2/D1"])) {
        let g = TruncatedGroup::parse_spec(spec, DEFAULT_ORACLE_CAP).unwrap();
        let mut rg = rng(seed);
        let sig = Signature::new(g.n(), g.ring(), GroupTag::Borel);
        let q = g.field().order();
        let c = g.ring().base().field_elem(rg.gen_range(1..q)).unwrap();
        let psi = AutExpr::single(sig.clone(), AutStep::RingInduced(RingAuto::poly_affine(g.ring(), c, g.ring().base().zero()).unwrap())).unwrap();
        let perm = g.perm_from_map(|x| psi.apply(x), 16, seed).unwrap();
        let h = rg.gen_range(0..g.order());
        let inner = AutExpr::single(sig, AutStep::Inner(g.to_elem(h))).unwrap();
        let composed = tritwist::autos::aut_compose(&inner, &psi).unwrap();
        let perm2 = g.perm_from_map(|x| composed.apply(x), 16, seed).unwrap();
        let a = brute_force_reidemeister(&g, &perm, DEFAULT_ORACLE_CAP).unwrap().count;
        let b = brute_force_reidemeister(&g, &perm2, DEFAULT_ORACLE_CAP).unwrap().count;
        prop_assert_eq!(a, b);
    }
}

/// The rank count on the window agrees with orbit enumeration on `F_p^(D+1)`.
#[test]
fn oracle_equivalence_exhaustive() {
    for p in [2u64, 3] {
        let r = fp_poly(p);
        for d in 0..=4usize {
            let group = AbelianGroup::new(vec![p; d + 1], DEFAULT_ORACLE_CAP).unwrap();
            for a in 1..p as i64 {
                for b in 0..p as i64 {
                    let l = AdditiveMapSpec::RingAutoInduced(affine(&r, a, b));
                    let data = additive_class_data(&l, &r, Window::Degree(d)).unwrap();
                    let cols: Vec<Vec<i64>> = (0..=d)
                        .map(|j| (0..=d).map(|i| i64::from(data.trunc.matrix.get(i, j))).collect())
                        .collect();
                    let perm = group.perm_from_matrix(&cols).unwrap();
                    let bf = brute_force_reidemeister(&group, &perm, DEFAULT_ORACLE_CAP).unwrap();
                    assert_eq!(data.count, bf.count.into(), "p={p} D={d} a={a} b={b}");
                }
            }
        }
    }
}

/// A window of exactly the target's degree is not enough: over `F_2` with
/// `t -> t + 1`, the constant 1 is `t - alpha(t)` but nothing of degree 0
/// maps to it.
#[test]
fn degree_window_alone_is_unsound() {
    let r = fp_poly(2);
    let alpha = affine(&r, 1, 1);
    let one = r.one();
    assert!(!in_image(&r, &alpha, &one, 0));
    assert!(in_image(&r, &alpha, &one, 1));
}

/// With a translation the coefficient identity above breaks: `(t + 1)^7`
/// has `C(7, 3) = 35` as its `t^3` coefficient.
#[test]
fn characteristic_coefficients_with_translation_counterexample() {
    let r = fp_poly(2);
    let alpha = affine(&r, 1, 1);
    let g = r.monomial(&r.base().one(), 7).unwrap();
    let lhs = (&r.zero() - &ring_auto_apply(&alpha, &g).unwrap()).coeff(3);
    let claimed = &r.zero().coeff(3) - &g.coeff(3);
    assert_ne!(lhs, claimed);
}
