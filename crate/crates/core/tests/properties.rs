use ablab::certify::{determinant, eval, nearest_int_dist};
use ablab::convergent::convergents_from;
use ablab::dimension::{box_count, exact_points, upper_box_dim_estimate};
use ablab::orbit::k_sequence;
use ablab::{theorem_bound, BoundParams, CfNumber, CircleArc, Error, Interval, OmegaWord, Tau};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn dist_to_int(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    let g = BigRational::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

proptest! {
    #[test]
    fn determinant_alternates(a in prop::collection::vec(1u32..1_000_000, 1..40)) {
        let cs = convergents_from(&a.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        for n in 1..cs.len() {
            let det = &cs[n].p * &cs[n - 1].q - &cs[n - 1].p * &cs[n].q;
            let expected = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(det, expected);
        }
        let x = CfNumber::literal_u64(&a.iter().map(|&v| v as u64).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(determinant(&x, 1).unwrap(), BigInt::one());
    }

    #[test]
    fn literal_eval_encloses_value(
        a in prop::collection::vec(1u64..1000, 2..30),
        w_den in 1i64..1_000_000_000,
    ) {
        let x = CfNumber::literal_u64(&a).unwrap();
        let last = x.convergent(a.len()).unwrap();
        let value = BigRational::new(last.p, last.q);
        let w = rat(1, w_den);
        let iv = eval(&x, &w).unwrap();
        prop_assert!(iv.contains(&value));
        prop_assert!(iv.width() <= w);
    }

    #[test]
    fn interval_arithmetic_contains_pointwise(
        a in -1000i64..1000, b in 0i64..50, c in -1000i64..1000, d in 0i64..50,
        den in 1i64..97, s in -20i64..20, t1 in 0i64..=10, t2 in 0i64..=10,
    ) {
        let x = Interval::new(rat(a, den), rat(a + b, den));
        let y = Interval::new(rat(c, den), rat(c + d, den));
        let px = rat(a, den) + rat(b * t1, den * 10);
        let py = rat(c, den) + rat(d * t2, den * 10);
        prop_assert!((&x + &y).contains(&(&px + &py)));
        prop_assert!((&x - &y).contains(&(&px - &py)));
        prop_assert!(x.scale(&rat(s, 3)).contains(&(&px * rat(s, 3))));
    }

    #[test]
    fn fold_matches_brute_force(n in -5000i64..5000, den in 1i64..200, w in 0i64..5) {
        let iv = Interval::new(rat(n, den), rat(n, den) + rat(w, 1000));
        match iv.fold_distance() {
            Ok(f) => {
                for k in 0..=10 {
                    let p = rat(n, den) + rat(w * k, 10_000);
                    prop_assert!(f.contains(&dist_to_int(&p)));
                }
            }
            Err(Error::AmbiguousFold) => {
                // some integer or half-integer lies strictly inside
                let lo2 = (iv.lo() * rat(2, 1)).floor() + BigRational::one();
                prop_assert!(lo2 < iv.hi() * rat(2, 1));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn arc_distance_is_symmetric(a in 0i64..1000, b in 0i64..1000) {
        let x = CircleArc::point(rat(a, 1000));
        let y = CircleArc::point(rat(b, 1000));
        let d1 = x.distance(&y).unwrap();
        let d2 = y.distance(&x).unwrap();
        prop_assert_eq!(d1.clone(), d2);
        prop_assert!(d1.hi() <= &rat(1, 2));
    }

    #[test]
    fn k_sequence_is_monotone(word in "[AB]{1,300}") {
        let w = OmegaWord::parse(&word).unwrap();
        let j = w.alpha_count(w.len());
        let ks = k_sequence(&w, j).unwrap();
        prop_assert!(ks.windows(2).all(|p| p[0] <= p[1]));
        prop_assert!(ks.iter().all(|&k| k as usize <= w.len() - j));
    }

    #[test]
    fn nested_grid_counts_do_not_grow_with_r(
        nums in prop::collection::vec(0i64..10_007, 1..200),
        e in 1u32..8,
    ) {
        let pts = exact_points(&nums.iter().map(|&v| rat(v, 10_007)).collect::<Vec<_>>());
        let r_fine = rat(1, 2 * (1 << (e + 2)));
        let r_coarse = rat(1, 2 * (1 << e));
        let fine = box_count(&pts, &r_fine).unwrap();
        let coarse = box_count(&pts, &r_coarse).unwrap();
        prop_assert!(coarse.count <= fine.count);
        let est = upper_box_dim_estimate(&[coarse.clone(), fine.clone()]).unwrap();
        prop_assert!(est.estimate <= 1.0 + 1e-12);
        let max = est.table.iter().map(|t| t.2).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(est.estimate, max);
    }

    #[test]
    fn bound_positive_iff_admissible(t1n in 200i64..2000, t2n in 200i64..4000) {
        let t1 = rat(t1n, 100);
        let t2 = rat(t2n, 100);
        let p = BoundParams::new(t1.clone(), Tau::Finite(t2.clone())).unwrap();
        let admissible = &t1 * rat(2, 1) < &t2 + rat(2, 1);
        prop_assert_eq!(p.is_admissible(), admissible);
        match theorem_bound(&p) {
            Ok(b) => {
                prop_assert!(admissible);
                prop_assert!(b.is_positive());
                prop_assert!(b <= BigRational::one());
            }
            Err(Error::InadmissibleParams { .. }) => prop_assert!(!admissible),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn nearest_int_dist_of_convergent_denominator() {
    // ‖q_n φ‖ ≈ 1/(√5 q_n) for the golden ratio
    let g = CfNumber::golden();
    let q = BigInt::from(10_946);
    let d = nearest_int_dist(&g, &q, &rat(1, 1_000_000_000_000)).unwrap();
    let approx = 1.0 / (5f64.sqrt() * 10_946.0);
    let lo = ablab::scalar::approx(d.lo());
    assert!((lo - approx).abs() < 1e-9, "{lo} vs {approx}");
    assert!(!d.lo().is_zero());
}

proptest! {
    #[test]
    fn field_shortcuts_match_generic_ops(a in -10_000i64..10_000, b in 1i64..10_000, c in -10_000i64..10_000, d in 1i64..10_000) {
        use ablab::scalar::ExactField;
        let (x, y) = (rat(a, b), rat(c, d));
        prop_assert_eq!(x.times(&y), &x * &y);
        prop_assert_eq!(x.dist_to_int(), dist_to_int(&x));
    }
}

proptest! {
    #[test]
    fn nearest_int_dist_matches_folded_enclosure(
        a in prop::collection::vec(1u64..100_000, 2..25),
        q in 1i64..1_000_000,
        w_den in 1i64..1_000_000_000_000,
    ) {
        let x = CfNumber::literal_u64(&a).unwrap();
        let (q, w) = (BigInt::from(q), rat(1, w_den));
        let qr = BigRational::from_integer(q.clone());
        let direct = nearest_int_dist(&x, &q, &w);
        let generic = eval(&x, &(&w / &qr)).unwrap().scale(&qr).fold_distance();
        prop_assert_eq!(direct, generic);
    }
}
