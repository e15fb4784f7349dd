//! Double description: generators of `{x : E x = 0, A x >= 0}` over the integers.
//!
//! Rays are kept primitive. Adjacency uses the combinatorial test on zero sets,
//! which is exact because every stored ray is extreme at every stage.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::num::{dot_int, make_primitive, Echelon, IntVec};

#[derive(Debug, Clone, Default)]
pub(crate) struct Generators {
    /// Basis of the lineality space.
    pub lineality: Vec<IntVec>,
    /// Extreme rays modulo the lineality space (not yet reduced).
    pub rays: Vec<IntVec>,
}

struct Ray {
    v: IntVec,
    zero: FixedBitSet,
}

pub(crate) fn double_description(n: usize, eqs: &[IntVec], ineqs: &[IntVec]) -> Generators {
    let mut lineality: Vec<IntVec> = if eqs.is_empty() {
        (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect()
    } else {
        Echelon::from_int(eqs, n).kernel_basis(n)
    };
    let m = ineqs.len();
    let mut rays: Vec<Ray> = Vec::new();
    // indices already processed, as a mask for rays born from the lineality space
    let mut done = FixedBitSet::with_capacity(m);
    for (k, a) in ineqs.iter().enumerate() {
        if let Some(pos) = lineality.iter().position(|l| !dot_int(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(pos);
            let mut c0 = dot_int(a, &l0);
            if c0.is_negative() {
                for x in l0.iter_mut() {
                    *x = -&*x;
                }
                c0 = -c0;
            }
            for l in lineality.iter_mut() {
                let d = dot_int(a, l);
                if !d.is_zero() {
                    combine(l, &c0, &l0, &d);
                }
            }
            for r in rays.iter_mut() {
                let d = dot_int(a, &r.v);
                if !d.is_zero() {
                    combine(&mut r.v, &c0, &l0, &d);
                }
                r.zero.insert(k);
            }
            rays.push(Ray {
                v: l0,
                zero: done.clone(),
            });
        } else {
            let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(a, &r.v)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
            if neg.is_empty() {
                for (r, v) in rays.iter_mut().zip(&vals) {
                    if v.is_zero() {
                        r.zero.insert(k);
                    }
                }
                done.insert(k);
                continue;
            }
            let mut fresh: Vec<Ray> = Vec::new();
            for &p in &pos {
                for &q in &neg {
                    let mut z = rays[p].zero.clone();
                    z.intersect_with(&rays[q].zero);
                    let adjacent = rays
                        .iter()
                        .enumerate()
                        .all(|(i, r)| i == p || i == q || !z.is_subset(&r.zero));
                    if !adjacent {
                        continue;
                    }
                    // (a.p) q - (a.q) p, both coefficients positive
                    let mut v: IntVec = rays[q]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(x, y)| x * &vals[p] - y * &vals[q])
                        .collect();
                    make_primitive(&mut v);
                    z.insert(k);
                    fresh.push(Ray { v, zero: z });
                }
            }
            let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
            for (mut r, v) in rays.into_iter().zip(&vals) {
                if v.is_negative() {
                    continue;
                }
                if v.is_zero() {
                    r.zero.insert(k);
                }
                kept.push(r);
            }
            kept.extend(fresh);
            rays = kept;
        }
        done.insert(k);
    }
    Generators {
        lineality,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}

/// `v := c0 v - d l0`, made primitive.
fn combine(v: &mut IntVec, c0: &BigInt, l0: &IntVec, d: &BigInt) {
    for (x, y) in v.iter_mut().zip(l0) {
        *x = &*x * c0 - y * d;
    }
    make_primitive(v);
}
