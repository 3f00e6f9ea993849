mod common;

use conelift::factorization::{
    block_augmentation_bound, nn_search, rectangle_cover_bound, verify_factorization, RankKind, SearchOptions,
};
use conelift::io::{parse_poly_file, write_hrep, write_vrep};
use conelift::lift::{build_lift_from_slack, verify_lift};
use conelift::polar::{barrier_cone, compute_d_sets, polar_set, support_value, Support};
use conelift::polyhedron::polyhedra_equal;
use conelift::slack::build_slack;
use conelift::{Error, Factorization, Matrix, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_polyhedron, Shape};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..12, -20i64..20, 1i64..8).prop_map(|(a, b, c, d)| {
        &Scalar::ratio(a, b) + &(&Scalar::ratio(c, d) * &Scalar::sqrt_of(2))
    })
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![Just(Shape::Bounded), Just(Shape::Unbounded), Just(Shape::Lines)]
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(p, q)| {
        proptest::collection::vec(proptest::collection::vec(0i64..3, q), p).prop_map(move |rows| {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            Matrix::from_i64(&refs)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn order_matches_floats(a in scalar(), b in scalar()) {
        let (x, y) = (a.to_f64(), b.to_f64());
        if (x - y).abs() > 1e-9 {
            prop_assert_eq!(a < b, x < y);
        }
        prop_assert_eq!(a.signum(), a.to_f64().partial_cmp(&0.0).unwrap());
    }

    #[test]
    fn text_round_trip(a in scalar()) {
        let s = a.to_string();
        prop_assert!(!s.contains(char::is_whitespace));
        prop_assert_eq!(s.parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn poly_files_round_trip(seed in any::<u64>(), n in 2usize..4, sh in shape()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, p) = random_polyhedron(&mut rng, n, sh);
        let h = parse_poly_file(&write_hrep(p.hrep(), p.domain())).unwrap().polyhedron().unwrap();
        let v = parse_poly_file(&write_vrep(p.vrep(), p.domain())).unwrap().polyhedron().unwrap();
        prop_assert!(polyhedra_equal(&h, &p).unwrap());
        prop_assert!(polyhedra_equal(&v, &p).unwrap());
    }

    #[test]
    fn barrier_cone_polar_is_recession(seed in any::<u64>(), n in 2usize..4, sh in shape()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, p) = random_polyhedron(&mut rng, n, sh);
        let b = barrier_cone(&p).unwrap();
        prop_assert!(polyhedra_equal(&polar_set(&b).unwrap(), &p.recession_cone().unwrap()).unwrap());
    }

    #[test]
    fn d_sets_have_their_supports(seed in any::<u64>(), n in 2usize..4, sh in shape()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, p) = random_polyhedron(&mut rng, n, sh);
        let pd = compute_d_sets(&p).unwrap();
        for l in &pd.d2 {
            prop_assert_eq!(support_value(&p, l).unwrap(), Support::Finite(Scalar::zero()));
        }
        for l in &pd.d32 {
            prop_assert_eq!(support_value(&p, l).unwrap(), Support::Finite(Scalar::int(-1)));
        }
        for l in &pd.d1 {
            let s = support_value(&p, l).unwrap();
            prop_assert!(s.finite().is_some_and(|s| s <= &Scalar::one()));
        }
        prop_assert_eq!(pd.d1.is_empty(), polyhedra_equal(&pd.polar_set, &pd.polar_recession).unwrap());
    }

    #[test]
    fn trivial_factorization_lifts(seed in any::<u64>(), n in 2usize..4, bounded in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sh = if bounded { Shape::Bounded } else { Shape::Unbounded };
        let (_, p) = random_polyhedron(&mut rng, n, sh);
        prop_assume!(p.is_translated_cone().unwrap().is_none());
        let s = build_slack(p.hrep(), p.vrep()).unwrap();
        let f = Factorization::trivial(&s.matrix);
        match build_lift_from_slack(&s, &f) {
            Ok(lift) => {
                let r = verify_lift(&p, &lift).unwrap();
                prop_assert!(r.passed(), "{}", r);
            }
            Err(Error::DegenerateSystem(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn bounds_respect_known_factorizations(m in small_matrix()) {
        let rect = rectangle_cover_bound(&m).unwrap();
        let bound = block_augmentation_bound(&m, RankKind::Nonnegative);
        let trivial = m.nrows().min(m.ncols());
        prop_assert!(rect <= trivial);
        prop_assert!(bound.value <= trivial);
        prop_assert!(bound.value >= m.rank());
        let opts = SearchOptions { budget_iters: 4_000, restarts: 2, ..Default::default() };
        if let Some(f) = nn_search(&m, bound.value.max(1), &opts) {
            prop_assert!(verify_factorization(&m, &f).unwrap().ok);
        }
    }
}
