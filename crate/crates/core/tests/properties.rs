use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qindex::angles::{euler_via_angles, is_angle_structure, solve_generalized, solve_vanishing_holonomy};
use qindex::engine::{index_class, index_peripheral};
use qindex::pachner::{apply_move, MoveSpec};
use qindex::qnormal::{boundary, chi, double_arc, double_arc_bilinear, is_qnormal, symplectic};
use qindex::series::{pochhammer_inverse, HalfInt, TruncatedSeries};
use qindex::tri::{decode_isosig, encode_isosig, load_gluing_matrix, GluingData};

const CENSUS: [&str; 10] = [
    "cPcbbbiht", "cMcabbgds", "cMcabbgij", "cMcabbgik", "cPcbbbalm",
    "cPcbbbali", "cPcbbbadh", "cPcbbbadu", "cPcbbbdxm", "cPcbbbdei",
];

const FIXTURES: [&str; 6] = ["fig8.glu", "trefoil.glu", "solidtorus.glu", "t2xi.glu", "cPcbbbdei.glu", "m009.glu"];

fn fixture(name: &str) -> GluingData {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    load_gluing_matrix(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
    (prop::collection::vec((-4i64..20, -5i64..=5), 0..8), 4i64..24).prop_map(|(terms, order)| {
        TruncatedSeries::from_terms(terms.into_iter().map(|(e, c)| (h(e), BigInt::from(c))), h(order))
    })
}

/// A fixture with an integer combination of its edge, tetrahedral and
/// peripheral rows, which is always Q-normal.
fn arb_class() -> impl Strategy<Value = (GluingData, Vec<i64>)> {
    (0..FIXTURES.len(), prop::collection::vec(-3i64..=3, 16)).prop_map(|(i, c)| {
        let g = fixture(FIXTURES[i]);
        let mut gens = g.edge_rows.clone();
        gens.extend((0..g.n).map(|j| g.tet_solution(j)));
        gens.extend(g.cusp_rows.iter().flatten().cloned());
        let mut s = vec![0; 3 * g.n];
        for (gen, k) in gens.iter().zip(c.iter().cycle()) {
            s.iter_mut().zip(gen).for_each(|(x, y)| *x += k * y);
        }
        (g, s)
    })
}

/// Equality below the smaller of the two orders.
fn agree(x: &TruncatedSeries, y: &TruncatedSeries) -> bool {
    let o = x.order().min(y.order());
    x.truncate(o) == y.truncate(o)
}

proptest! {
    #[test]
    fn series_ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert!(agree(&a.mul(&TruncatedSeries::one(a.order())), &a));
    }

    #[test]
    fn sign_power_inverts(a in arb_series(), k in -9i64..9) {
        prop_assert_eq!(a.mul_sign_power(k).mul_sign_power(-k), a);
    }

    #[test]
    fn machine_format_round_trips(a in arb_series()) {
        prop_assert_eq!(TruncatedSeries::parse_machine(&a.to_machine()).unwrap(), a);
    }

    #[test]
    fn pochhammer_inverse_inverts(n in 0u32..8, order in 1i64..30) {
        let order = h(order);
        let mut p = pochhammer_inverse(n, order);
        for i in 1..=n as i64 {
            let factor = TruncatedSeries::from_terms([(h(0), 1.into()), (h(2 * i), (-1).into())], order);
            p = p.mul(&factor);
        }
        prop_assert_eq!(p, TruncatedSeries::one(order));
    }

    #[test]
    fn omega_is_antisymmetric(x in prop::collection::vec(-9i64..9, 9), y in prop::collection::vec(-9i64..9, 9)) {
        prop_assert_eq!(symplectic(&x, &y), -symplectic(&y, &x));
        prop_assert_eq!(symplectic(&x, &x), 0);
    }

    #[test]
    fn double_arc_is_quadratic(s in prop::collection::vec(-9i64..9, 9), t in prop::collection::vec(-9i64..9, 9)) {
        let sum: Vec<i64> = s.iter().zip(&t).map(|(a, b)| a + b).collect();
        let rhs = rat(double_arc(&s) + double_arc(&t)) + rat(2) * double_arc_bilinear(&s, &t);
        prop_assert_eq!(rat(double_arc(&sum)), rhs);
        prop_assert_eq!(double_arc_bilinear(&s, &s), rat(double_arc(&s)));
    }

    #[test]
    fn double_arc_superadditive(s in prop::collection::vec(0i64..9, 9), t in prop::collection::vec(0i64..9, 9)) {
        let sum: Vec<i64> = s.iter().zip(&t).map(|(a, b)| a + b).collect();
        prop_assert!(double_arc(&sum) >= double_arc(&s) + double_arc(&t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_characteristic_independent_of_angles((g, s) in arb_class(), num in -5i64..5, den in 1i64..5) {
        prop_assert!(is_qnormal(&g, &s));
        let a = solve_generalized(&g).unwrap();
        let b = solve_vanishing_holonomy(&g).unwrap();
        let t = BigRational::new(num.into(), den.into());
        let mix: Vec<BigRational> = a.iter().zip(&b).map(|(x, y)| x + &t * (y - x)).collect();
        prop_assert!(is_angle_structure(&g, &mix, false));
        let d = boundary(&g, &s).unwrap();
        let want = chi(&g, &s).unwrap();
        for alpha in [&a, &b, &mix] {
            prop_assert_eq!(euler_via_angles(&g, alpha, &s, &d).unwrap(), want.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn index_ignores_tetrahedral_shift(e in -2i64..=2, m in -2i64..=2, l in -2i64..=2, j in 0usize..2, k in -3i64..=3) {
        let g = fixture("fig8.glu");
        let cusp = g.cusp_rows.clone().unwrap();
        let s: Vec<i64> = (0..6).map(|c| e * g.edge_rows[0][c] + m * cusp[0][c] + l * cusp[1][c]).collect();
        let mut shifted = s.clone();
        shifted.iter_mut().zip(g.tet_solution(j)).for_each(|(x, y)| *x += k * y);
        let order = HalfInt::from_int(5);
        prop_assert_eq!(index_class(&g, &s, order).unwrap().series, index_class(&g, &shifted, order).unwrap().series);
    }

    #[test]
    fn fig8_index_symmetric(x in -4i64..=4, y2 in -3i64..=3) {
        let g = fixture("fig8.glu");
        let order = HalfInt::from_int(6);
        let at = |a: i64, b: i64| index_peripheral(&g, &[h(a), h(b)], order).unwrap().series;
        let base = at(2 * x, y2);
        prop_assert_eq!(&base, &at(-2 * x, -y2));
        prop_assert_eq!(&base, &at(-2 * x, y2));
    }

    #[test]
    fn two_three_then_three_two_returns(sig in prop::sample::select(CENSUS.to_vec()), face in 0usize..4) {
        let t = decode_isosig(sig).unwrap();
        if let Ok(up) = apply_move(&t, MoveSpec::TwoThree { face }) {
            let edges = up.edge_classes().unwrap().degrees().len();
            let back = (0..edges).any(|edge| {
                apply_move(&up, MoveSpec::ThreeTwo { edge }).map(|d| encode_isosig(&d) == sig).unwrap_or(false)
            });
            prop_assert!(back);
        }
    }

    #[test]
    fn zero_two_then_two_zero_returns(sig in prop::sample::select(CENSUS.to_vec()), edge in 0usize..2, i in 0usize..6, j in 0usize..6) {
        let t = decode_isosig(sig).unwrap();
        if let Ok(up) = apply_move(&t, MoveSpec::ZeroTwo { edge, i, j }) {
            let edges = up.edge_classes().unwrap().degrees().len();
            let back = (0..edges).any(|edge| {
                apply_move(&up, MoveSpec::TwoZero { edge }).map(|d| encode_isosig(&d) == sig).unwrap_or(false)
            });
            prop_assert!(back);
        }
    }
}
