use num_traits::Signed;
use qindex::series::{HalfInt, TruncatedSeries};
use qindex::tetindex::{
    generating_sum_zero, i_min_degree, j_min_degree, pentagon_sides, quadratic_identity_lhs, tet_index_I,
    tet_index_J,
};

#[test]
fn quadratic() {
    let order = HalfInt::from_int(8);
    for m in -3..=3 {
        for c in -3..=3 {
            let want = if c == 0 { TruncatedSeries::one(order) } else { TruncatedSeries::zero(order) };
            assert_eq!(quadratic_identity_lhs(m, c, order), want, "m={m} c={c}");
        }
    }
}

#[test]
fn pentagon() {
    let order = HalfInt::from_int(6);
    let r = [-1i64, 0, 1];
    for &m1 in &r {
        for &m2 in &r {
            for &x1 in &r {
                for &x2 in &r {
                    for &x3 in &r {
                        let (l, rhs) = pentagon_sides(m1, m2, x1, x2, x3, order);
                        assert_eq!(l, rhs, "{m1} {m2} {x1} {x2} {x3}");
                    }
                }
            }
        }
    }
}

#[test]
fn generating_function_vanishes() {
    let order = HalfInt::from_int(12);
    assert_eq!(generating_sum_zero(order), TruncatedSeries::zero(order));
}

#[test]
fn shift_rule_and_leading_terms() {
    let order = HalfInt::from_int(5);
    for a in -4..=4 {
        for b in -4..=4 {
            for c in -4..=4 {
                let j = tet_index_J(a, b, c, order);
                let (d, sign) = j_min_degree(a, b, c);
                if d < order {
                    let (e, coeff) = j.leading().unwrap();
                    assert_eq!(e, d, "({a},{b},{c})");
                    assert_eq!(coeff.is_positive(), sign > 0);
                }
                if (a + b + c).rem_euclid(7) == 0 {
                    for s in -3..=3 {
                        // J(a,b,c) = (-q^{1/2})^s J(a+s, b+s, c+s)
                        let shifted = tet_index_J(a + s, b + s, c + s, order - HalfInt::from_twice(s)).mul_sign_power(s);
                        assert_eq!(shifted, j, "({a},{b},{c}) s={s}");
                    }
                }
            }
        }
    }
    for m in -3..=3 {
        for e in -3..=3 {
            let i = tet_index_I(m, e, order);
            if let Some((lead, _)) = i.leading() {
                assert_eq!(lead, i_min_degree(m, e));
            }
        }
    }
}
