#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tritwist::autos::random_elem;
use tritwist::matgroups::{GroupElem, GroupTag, TriMatrix};
use tritwist::rings::{parse_ring, RingDescriptor, RingElem};

pub const RINGS: &[&str] = &[
    "fq:5",
    "fq:2^2:x^2+x+1",
    "int",
    "order:x^2+1",
    "order:x^3-2",
    "poly:fq:3",
    "poly:int",
    "laurent:fq:5",
    "laurent:fq:2^2:x^2+x+1",
];

pub fn ring(s: &str) -> RingDescriptor {
    parse_ring(s).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn elem(r: &RingDescriptor, rng: &mut ChaCha8Rng) -> RingElem {
    random_elem(r, rng, 3, 6)
}

/// A random unit; over Laurent rings `c t^k`.
pub fn unit(r: &RingDescriptor, rng: &mut ChaCha8Rng) -> RingElem {
    loop {
        let c = if r.is_base() { elem(r, rng) } else { r.constant(&elem(r.base(), rng)).unwrap() };
        let c = if r.order_spec().is_some() {
            // the units we can name in Z[x]/(m): +-1, +-x
            let x = r.var().unwrap();
            [r.one(), -&r.one(), x.clone(), -&x][rng.gen_range(0..4)].clone()
        } else {
            c
        };
        if !c.is_unit() {
            continue;
        }
        if r.is_laurent() {
            return c.shift(rng.gen_range(-3..=3)).unwrap();
        }
        return c;
    }
}

pub fn torsion_free_unit(r: &RingDescriptor, rng: &mut ChaCha8Rng) -> RingElem {
    if r.is_laurent() {
        r.monomial(&r.base().one(), rng.gen_range(-3..=3)).unwrap()
    } else {
        r.one()
    }
}

pub fn group_elem(tag: GroupTag, n: usize, r: &RingDescriptor, rng: &mut ChaCha8Rng) -> GroupElem {
    let mut m = TriMatrix::identity(n, r);
    for i in 0..n {
        let d = match tag {
            GroupTag::Unipotent => r.one(),
            GroupTag::BorelPlus | GroupTag::ProjBorelPlus => torsion_free_unit(r, rng),
            _ => unit(r, rng),
        };
        m.set(i, i, d);
        if tag != GroupTag::Diagonal {
            for j in i + 1..n {
                m.set(i, j, elem(r, rng));
            }
        }
    }
    if tag.is_projective() {
        let inv = m.get(0, 0).inv().unwrap();
        m = m.scale(&inv);
    }
    GroupElem::new(tag, m).unwrap()
}
