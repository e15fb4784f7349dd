mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{det_oracle, product_matrix};
use troprank::num::{ratio, Rat};
use troprank::trop::{
    is_trop_singular, minor, trop_det, trop_det_assignment, trop_det_brute_force, tropical_rank, TropicalMatrix,
};

fn entry(spread: i64) -> impl Strategy<Value = Rat> {
    (-spread..=spread, 1i64..=2).prop_map(|(n, d)| ratio(n, d))
}

fn square(max_k: usize) -> impl Strategy<Value = TropicalMatrix> {
    (1..=max_k, prop_oneof![Just(2i64), Just(20)]).prop_flat_map(|(k, s)| {
        proptest::collection::vec(entry(s), k * k).prop_map(move |v| TropicalMatrix::new(k, k, v).unwrap())
    })
}

fn rect() -> impl Strategy<Value = TropicalMatrix> {
    (1usize..=5, 1usize..=6, prop_oneof![Just(2i64), Just(20)]).prop_flat_map(|(d, n, s)| {
        proptest::collection::vec(entry(s), d * n).prop_map(move |v| TropicalMatrix::new(d, n, v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn det_matches_enumeration(m in square(6)) {
        let got = trop_det(&m).unwrap();
        let (value, count) = det_oracle(&m);
        prop_assert_eq!(&got.value, &value);
        prop_assert_eq!(got.optimal_count(), Some(count));
        prop_assert_eq!(got.optimal_permutations.len(), count);
    }

    #[test]
    fn assignment_agrees_with_brute_force(m in square(6)) {
        let a = trop_det_assignment(&m).unwrap();
        let b = trop_det_brute_force(&m).unwrap();
        prop_assert_eq!(&a.value, &b.value);
        prop_assert_eq!(a.is_unique(), b.is_unique());
    }

    #[test]
    fn singular_iff_initial_form_is_not_a_monomial(m in square(4)) {
        let k = m.nrows();
        let all: Vec<usize> = (0..k).collect();
        let det = minor(k, k, &all, &all).unwrap();
        let init = det.initial_form(m.flatten()).unwrap();
        prop_assert_eq!(is_trop_singular(&m).unwrap(), !init.is_monomial());
    }

    #[test]
    fn rank_is_bounded_and_invariant(m in rect(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let r = tropical_rank(&m).unwrap();
        prop_assert!(r >= 1 && r <= m.nrows().min(m.ncols()));
        prop_assert_eq!(tropical_rank(&m.transpose()).unwrap(), r);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, n) = (m.nrows(), m.ncols());
        let mut rows: Vec<usize> = (0..d).collect();
        let mut cols: Vec<usize> = (0..n).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let permuted = m.submatrix(&rows, &cols);
        prop_assert_eq!(tropical_rank(&permuted).unwrap(), r);

        let mut shifted = m.clone();
        let (i, c) = (rng.gen_range(0..d), ratio(rng.gen_range(-9..=9), 2));
        for j in 0..n {
            shifted.set(i, j, m.get(i, j) + &c);
        }
        let j = rng.gen_range(0..n);
        for i in 0..d {
            let v = shifted.get(i, j) - &c;
            shifted.set(i, j, v);
        }
        prop_assert_eq!(tropical_rank(&shifted).unwrap(), r);
    }

    #[test]
    fn tropical_products_have_rank_at_most_three(seed in any::<u64>(), n in 3usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(tropical_rank(&product_matrix(&mut rng, n)).unwrap() <= 3);
    }
}

#[test]
fn larger_determinants_agree_with_enumeration() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let k = rng.gen_range(7..=8);
        let spread = if rng.gen_bool(0.5) { 1 } else { 30 };
        let m = TropicalMatrix::new(k, k, (0..k * k).map(|_| ratio(rng.gen_range(-spread..=spread), 1)).collect()).unwrap();
        let (value, count) = det_oracle(&m);
        let got = trop_det(&m).unwrap();
        assert_eq!(got.value, value);
        assert_eq!(got.is_unique(), count == 1);
    }
}
