mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{exhaustive_hyperplane_exists, rank3_matrix};
use troprank::hyperarrange::{
    coordinate_hyperplane, hyperplane_through_points, kapranov3_certify, type_of, witnesses, Certificate, Hyperplane,
};
use troprank::num::{rat, ratio, Rat};
use troprank::polyfan::hypersurface_complex;
use troprank::trop::{is_trop_singular, SignedTropPolynomial, TropicalMatrix};

fn vector(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    let narrow = proptest::collection::vec((-1i64..=1).prop_map(rat), n);
    let wide = proptest::collection::vec((-20i64..=20, 1i64..=2).prop_map(|(a, b)| ratio(a, b)), n);
    prop_oneof![narrow, wide]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn type_of_detects_membership((h, w) in (3usize..=5).prop_flat_map(|d| (vector(d), vector(d)))) {
        let hp = Hyperplane::new(h.clone()).unwrap();
        let t = type_of(&w, &hp).unwrap();
        let fan = hypersurface_complex(&SignedTropPolynomial::linear_form(&h)).unwrap();
        let mut ws = w.clone();
        ws.push(rat(1));
        prop_assert_eq!(t.len() >= 2, hp.contains(&w).unwrap());
        prop_assert_eq!(t.len() >= 2, fan.contains(&ws));
    }

    #[test]
    fn hyperplanes_are_projective(h in vector(4), c in -9i64..=9) {
        let shifted: Vec<Rat> = h.iter().map(|x| x + rat(c)).collect();
        prop_assert_eq!(Hyperplane::new(h).unwrap(), Hyperplane::new(shifted).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn coordinate_hyperplanes_avoid_their_sector(seed in any::<u64>()) {
        let a = rank3_matrix(&mut ChaCha8Rng::seed_from_u64(seed));
        let cols = a.columns();
        for i in 0..5 {
            let h = coordinate_hyperplane(i, &cols).unwrap();
            for w in &cols {
                let t = type_of(w, &h).unwrap();
                prop_assert!(t.len() >= 2);
                prop_assert!(!t.contains(i));
            }
        }
    }

    #[test]
    fn witnesses_avoid_their_pair(seed in any::<u64>()) {
        let a = rank3_matrix(&mut ChaCha8Rng::seed_from_u64(seed));
        let cols = a.columns();
        let hs: Vec<Hyperplane> = (0..5).map(|i| coordinate_hyperplane(i, &cols).unwrap()).collect();
        for k in 0..5 {
            for l in k + 1..5 {
                for (_, t) in witnesses(&cols, &hs[k], &hs[l]).unwrap() {
                    prop_assert!(!t.contains(k) && !t.contains(l));
                }
            }
        }
    }

    #[test]
    fn certificates_verify_and_round_trip(seed in any::<u64>()) {
        let a = rank3_matrix(&mut ChaCha8Rng::seed_from_u64(seed));
        let cert = kapranov3_certify(&a).unwrap();
        prop_assert!(cert.verify(&a).is_ok());
        let back = Certificate::parse(&cert.to_text()).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(back.verify(&a).is_ok());
    }

    #[test]
    fn hyperplane_search_matches_exhaustive_cells(pts in proptest::collection::vec(vector(4), 4)) {
        let found = hyperplane_through_points(&pts).unwrap();
        if let Some(h) = &found {
            for p in &pts {
                prop_assert!(h.contains(p).unwrap());
            }
        }
        prop_assert_eq!(found.is_some(), exhaustive_hyperplane_exists(&pts));
        // a square configuration lies on a hyperplane iff it is tropically singular
        let m = TropicalMatrix::from_columns(&pts).unwrap();
        prop_assert_eq!(found.is_some(), is_trop_singular(&m).unwrap());
    }
}
