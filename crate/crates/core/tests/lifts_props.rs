mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::rank3_matrix;
use troprank::hyperarrange::kapranov3_certify;
use troprank::lifts::{
    build_rank3_lift, lift_hyperplane, rank_over_k, seeded_rng, val, LaurentPoly, LiftMatrix, RatFunc,
    DEFAULT_RETRIES,
};
use troprank::num::{rank_rat, rat, ratio, Rat};
use troprank::trop::tropical_rank;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((-3i64..=4, -5i64..=5), 1..=3)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (e, rat(c)))))
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (nonzero_poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn random_poly<R: Rng>(rng: &mut R) -> LaurentPoly {
    let n = rng.gen_range(1..=2);
    LaurentPoly::from_terms((0..n).map(|_| (rng.gen_range(0..=2), rat(rng.gen_range(-3..=3)))))
}

/// `d x n` matrix of polynomials, a product `(d x r)(r x n)` when `r` is given.
fn poly_matrix<R: Rng>(rng: &mut R, d: usize, n: usize, r: Option<usize>) -> Vec<Vec<LaurentPoly>> {
    match r {
        None => (0..d).map(|_| (0..n).map(|_| random_poly(rng)).collect()).collect(),
        Some(r) => {
            let a = poly_matrix(rng, d, r, None);
            let b = poly_matrix(rng, r, n, None);
            (0..d)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..r).fold(LaurentPoly::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                        .collect()
                })
                .collect()
        }
    }
}

/// Most frequent rank after substituting random rational values for `t`.
fn substitution_rank<R: Rng>(rng: &mut R, m: &LiftMatrix) -> usize {
    let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
    let mut done = 0;
    while done < 20 {
        let u = ratio(rng.gen_range(1..=97), rng.gen_range(1..=13));
        let rows: Option<Vec<Vec<Rat>>> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m.get(i, j).eval(&u)).collect())
            .collect();
        if let Some(rows) = rows {
            *votes.entry(rank_rat(&rows)).or_default() += 1;
            done += 1;
        }
    }
    votes.into_iter().max_by_key(|&(r, c)| (c, r)).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn val_is_a_valuation(f in ratfunc(), g in ratfunc()) {
        let (vf, vg) = (val(&f).unwrap(), val(&g).unwrap());
        prop_assert_eq!(val(&f.mul(&g)).unwrap(), vf + vg);
        let s = f.add(&g);
        if !s.is_zero() {
            let vs = val(&s).unwrap();
            prop_assert!(vs >= vf.min(vg));
            if vf != vg {
                prop_assert_eq!(vs, vf.min(vg));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn rank_matches_substitution(seed in any::<u64>(), d in 1usize..=5, n in 1usize..=8, r in proptest::option::of(1usize..=4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = poly_matrix(&mut rng, d, n, r);
        let m = LiftMatrix::from_polys(rows).unwrap();
        let k = rank_over_k(&m);
        prop_assert_eq!(k, substitution_rank(&mut rng, &m));
        if let Some(r) = r {
            prop_assert!(k <= r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lifted_columns_lie_on_both_forms(seed in any::<u64>()) {
        let a = rank3_matrix(&mut ChaCha8Rng::seed_from_u64(seed));
        let cert = kapranov3_certify(&a).unwrap();
        let lift = build_rank3_lift(&a, &cert, seed, DEFAULT_RETRIES).unwrap();
        let (i, j) = cert.stable_pair;
        let l1 = lift_hyperplane(&cert.hyperplanes[i], lift.scale(), &mut seeded_rng(seed, 0)).unwrap();
        let l2 = lift_hyperplane(&cert.hyperplanes[j], lift.scale(), &mut seeded_rng(seed, 1)).unwrap();
        for c in 0..lift.ncols() {
            let col: Vec<RatFunc> = (0..5).map(|r| lift.get(r, c).clone()).collect();
            prop_assert!(l1.eval(&col).is_zero());
            prop_assert!(l2.eval(&col).is_zero());
        }
        prop_assert_eq!(lift.valuations().unwrap(), a.clone());
        prop_assert!(tropical_rank(&a).unwrap() <= 3);
        prop_assert!(rank_over_k(&lift) <= 3);
    }

    #[test]
    fn lift_text_round_trips(seed in any::<u64>()) {
        let a = rank3_matrix(&mut ChaCha8Rng::seed_from_u64(seed));
        let cert = kapranov3_certify(&a).unwrap();
        let lift = build_rank3_lift(&a, &cert, seed, DEFAULT_RETRIES).unwrap();
        prop_assert_eq!(LiftMatrix::parse(&lift.to_text()).unwrap(), lift);
    }
}
