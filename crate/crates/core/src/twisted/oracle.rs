//! Exhaustive twisted class counting on enumerated groups.

use crate::error::{Error, Result};
use crate::matgroups::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    pub count: usize,
    /// least element of each class, ascending
    pub reps: Vec<usize>,
    /// `class_of[b]` indexes into `reps`
    pub class_of: Vec<usize>,
}

/// Greedy generating set: each new generator is the least element outside
/// the subgroup generated so far.
fn generators<G: FiniteGroup + ?Sized>(g: &G) -> Vec<usize> {
    let n = g.order();
    let mut gens = Vec::new();
    let mut inside = vec![false; n];
    inside[g.identity()] = true;
    let mut next = 0;
    loop {
        while next < n && inside[next] {
            next += 1;
        }
        if next == n {
            return gens;
        }
        gens.push(next);
        inside = vec![false; n];
        inside[g.identity()] = true;
        let mut stack = vec![g.identity()];
        while let Some(h) = stack.pop() {
            for &s in &gens {
                let x = g.mul(h, s);
                if !inside[x] {
                    inside[x] = true;
                    stack.push(x);
                }
            }
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partitions `G` under `b -> g b psi(g)^-1`, with `psi` given as a
/// permutation of the elements.
///
/// The orbits of the action are the components of the graph joining `b` to
/// `s b psi(s)^-1` for `s` in a generating set, merged by union-find with
/// the least index as root.
pub fn brute_force_reidemeister<G: FiniteGroup + ?Sized>(g: &G, psi: &[usize], cap: u128) -> Result<BruteForce> {
    let n = g.order();
    if n as u128 > cap {
        return Err(Error::SizeCapExceeded { requested: n as u128, cap });
    }
    if psi.len() != n {
        return Err(Error::InvalidParams(format!("automorphism has {} images for {n} elements", psi.len())));
    }
    let gens = generators(g);
    let mut parent: Vec<usize> = (0..n).collect();
    for &s in &gens {
        let right = g.inv(psi[s]);
        for b in 0..n {
            let x = g.mul(g.mul(s, b), right);
            let (rb, rx) = (find(&mut parent, b), find(&mut parent, x));
            if rb != rx {
                let (lo, hi) = if rb < rx { (rb, rx) } else { (rx, rb) };
                parent[hi] = lo;
            }
        }
    }
    let mut reps = Vec::new();
    let mut class_of = vec![0; n];
    let mut slot = vec![usize::MAX; n];
    for b in 0..n {
        let r = find(&mut parent, b);
        if slot[r] == usize::MAX {
            slot[r] = reps.len();
            reps.push(r);
        }
        class_of[b] = slot[r];
    }
    Ok(BruteForce { count: reps.len(), reps, class_of })
}
