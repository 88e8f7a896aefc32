//! The tetrahedral index `I_Δ(m, e)` and its symmetric form `J_Δ(a, b, c)`.
//!
//! `I_Δ(m, e) = Σ_{n ≥ max(0, -e)} (-1)^n q^{n(n+1)/2 - (n + e/2) m} / ((q)_n (q)_{n+e})`
//! and `J_Δ(a, b, c) = (-q^{1/2})^{-b} I_Δ(b - c, a - b)`.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use parking_lot::RwLock;

use crate::series::{pochhammer_inverse, HalfInt, TruncatedSeries};

/// Memoisation key for [`tet_index_I`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TetIndexKey {
    pub m: i64,
    pub e: i64,
    pub order: HalfInt,
}

type Cache = RwLock<HashMap<(i64, i64), TruncatedSeries>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Doubled leading exponent of the `n`-th summand of `I_Δ(m, e)`.
fn summand_twice_exp(m: i64, e: i64, n: i64) -> i64 {
    n * (n + 1) - (2 * n + e) * m
}

fn tet_index_uncached(key: TetIndexKey) -> TruncatedSeries {
    let TetIndexKey { m, e, order } = key;
    let mut acc = TruncatedSeries::zero(order);
    let mut n = 0.max(-e);
    loop {
        let lead = summand_twice_exp(m, e, n);
        // The exponent is convex in n with vertex at m - 1/2; past it, it only grows.
        if lead >= order.twice {
            if n >= m {
                break;
            }
            n += 1;
            continue;
        }
        let lead = HalfInt::from_twice(lead);
        let room = order - lead;
        let p = pochhammer_inverse(n as u32, room).mul(&pochhammer_inverse((n + e) as u32, room));
        let mut term = p.shift(lead);
        if n % 2 == 1 {
            term = -term;
        }
        acc = acc.add(&term);
        n += 1;
    }
    acc.truncate(order)
}

/// `I_Δ(m, e)` truncated below `order`. Results are memoised per `(m, e)`.
#[allow(non_snake_case)]
pub fn tet_index_I(m: i64, e: i64, order: HalfInt) -> TruncatedSeries {
    if let Some(s) = cache().read().get(&(m, e)) {
        if s.order() >= order {
            return s.truncate(order);
        }
    }
    let s = tet_index_uncached(TetIndexKey { m, e, order });
    let mut w = cache().write();
    let slot = w.entry((m, e)).or_insert_with(|| s.clone());
    if slot.order() < order {
        *slot = s.clone();
    }
    s
}

/// `J_Δ(a, b, c) = (-q^{1/2})^{-b} I_Δ(b - c, a - b)`, by the literal formula.
#[allow(non_snake_case)]
pub fn tet_index_J_literal(a: i64, b: i64, c: i64, order: HalfInt) -> TruncatedSeries {
    let inner = tet_index_I(b - c, a - b, order + HalfInt::from_twice(b));
    inner.mul_sign_power(-b)
}

/// `J_Δ(a, b, c)` truncated below `order`.
///
/// Uses the shift rule and permutation symmetry to reduce to
/// `J_Δ(x, y, 0) = I_Δ(-y, x)` with `0 ≤ x ≤ y`, which has no negative
/// exponents and shares cache entries across permuted arguments.
#[allow(non_snake_case)]
pub fn tet_index_J(a: i64, b: i64, c: i64, order: HalfInt) -> TruncatedSeries {
    let m = a.min(b).min(c);
    let mut r = [a - m, b - m, c - m];
    r.sort_unstable();
    let (x, y) = (r[1], r[2]);
    let inner = tet_index_I(-y, x, order + HalfInt::from_twice(m));
    inner.mul_sign_power(-m)
}

/// Lowest exponent (as a q-exponent, stored doubled) and sign of `J_Δ(a, b, c)`.
pub fn j_min_degree(a: i64, b: i64, c: i64) -> (HalfInt, i8) {
    let m = a.min(b).min(c);
    let (x, y, z) = (a - m, b - m, c - m);
    let twice = x * y + y * z + z * x - m;
    let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
    (HalfInt::from_twice(twice), sign)
}

/// `Π_j J_Δ(a_j, b_j, c_j)` over the tetrahedra of a quad vector, valid below `order`.
pub fn j_product(s: &[i64], order: HalfInt) -> TruncatedSeries {
    assert!(s.len().is_multiple_of(3), "quad vector length must be a multiple of 3");
    let triples: Vec<(i64, i64, i64)> = s.chunks(3).map(|t| (t[0], t[1], t[2])).collect();
    let degs: Vec<HalfInt> = triples.iter().map(|&(a, b, c)| j_min_degree(a, b, c).0).collect();
    let total = degs.iter().fold(HalfInt::ZERO, |x, &y| x + y);
    if total >= order {
        return TruncatedSeries::zero(order);
    }
    let mut acc = TruncatedSeries::one(order - total);
    for (&(a, b, c), &d) in triples.iter().zip(&degs) {
        let need = order - (total - d);
        let f = tet_index_J(a, b, c, need);
        // Factor out the known leading power so every factor starts at q^0.
        acc = acc.mul(&f.shift(-d));
    }
    acc.shift(total).truncate(order)
}

/// Leading coefficient sign and doubled exponent of `j_product`, from the
/// degree formula alone.
pub fn j_product_min_degree(s: &[i64]) -> (HalfInt, i8) {
    s.chunks(3).fold((HalfInt::ZERO, 1), |(d, sg), t| {
        let (dd, ss) = j_min_degree(t[0], t[1], t[2]);
        (d + dd, sg * ss)
    })
}

/// Lowest exponent of `I_Δ(m, e) = (-q^{1/2})^m J_Δ(m + e, m, 0)`.
pub fn i_min_degree(m: i64, e: i64) -> HalfInt {
    HalfInt::from_twice(m) + j_min_degree(m + e, m, 0).0
}

/// `q^{shift} Π I_Δ(m_i, e_i)` valid below `order`, each factor computed
/// only as far as the other factors' leading degrees require.
pub fn i_product(factors: &[(i64, i64)], shift: HalfInt, order: HalfInt) -> TruncatedSeries {
    let degs: Vec<HalfInt> = factors.iter().map(|&(m, e)| i_min_degree(m, e)).collect();
    let total = degs.iter().fold(shift, |x, &y| x + y);
    if total >= order {
        return TruncatedSeries::zero(order);
    }
    let mut acc = TruncatedSeries::one(order - total);
    for (&(m, e), &d) in factors.iter().zip(&degs) {
        let f = tet_index_I(m, e, order - (total - d));
        acc = acc.mul(&f.shift(-d));
    }
    acc.shift(total).truncate(order)
}

/// Consecutive out-of-range indices required before a one-sided scan stops.
const SCAN_SLACK: i64 = 3;

/// `Σ_{e ∈ Z} term(e)` below `order`, where `bound(e)` is the exact lowest
/// exponent of `term(e)`. Scans outward from `e = 0` in each direction and
/// stops once `bound` has stayed at or above `order` while non-decreasing for
/// several consecutive indices.
pub fn sum_over_e<B, T>(bound: B, term: T, order: HalfInt) -> TruncatedSeries
where
    B: Fn(i64) -> HalfInt,
    T: Fn(i64) -> TruncatedSeries,
{
    let mut acc = TruncatedSeries::zero(order);
    for dir in [1i64, -1] {
        let mut e = if dir == 1 { 0 } else { -1 };
        let mut quiet = 0;
        let mut prev = bound(e);
        loop {
            let b = bound(e);
            if b < order {
                acc = acc.add(&term(e));
                quiet = 0;
            } else if b >= prev {
                quiet += 1;
            } else {
                quiet = 0;
            }
            prev = b;
            if quiet >= SCAN_SLACK {
                break;
            }
            e += dir;
        }
    }
    acc
}

/// `Σ_e I_Δ(m, e) I_Δ(m, e + c) q^e`; equals `δ_{c,0}`.
pub fn quadratic_identity_lhs(m: i64, c: i64, order: HalfInt) -> TruncatedSeries {
    let bound = |e: i64| i_min_degree(m, e) + i_min_degree(m, e + c) + HalfInt::from_int(e);
    let term = |e: i64| i_product(&[(m, e), (m, e + c)], HalfInt::from_int(e), order);
    sum_over_e(bound, term, order)
}

/// Both sides of the pentagon identity:
/// `Σ_e q^e I_Δ(m₁, x₁+e) I_Δ(m₂, x₂+e) I_Δ(m₁+m₂, x₃+e)` and
/// `q^{-x₃} I_Δ(m₁-x₂+x₃, x₁-x₃) I_Δ(m₂-x₁+x₃, x₂-x₃)`.
pub fn pentagon_sides(
    m1: i64,
    m2: i64,
    x1: i64,
    x2: i64,
    x3: i64,
    order: HalfInt,
) -> (TruncatedSeries, TruncatedSeries) {
    let fs = |e: i64| [(m1, x1 + e), (m2, x2 + e), (m1 + m2, x3 + e)];
    let bound = |e: i64| fs(e).iter().fold(HalfInt::from_int(e), |d, &(m, k)| d + i_min_degree(m, k));
    let lhs = sum_over_e(bound, |e| i_product(&fs(e), HalfInt::from_int(e), order), order);
    let rhs = i_product(&[(m1 - x2 + x3, x1 - x3), (m2 - x1 + x3, x2 - x3)], HalfInt::from_int(-x3), order);
    (lhs, rhs)
}

/// `Σ_e I_Δ(0, e) q^e`, which vanishes.
pub fn generating_sum_zero(order: HalfInt) -> TruncatedSeries {
    let bound = |e: i64| i_min_degree(0, e) + HalfInt::from_int(e);
    sum_over_e(bound, |e| i_product(&[(0, e)], HalfInt::from_int(e), order), order)
}

/// Coefficient helper used by the identity suites.
pub fn coeff_at(s: &TruncatedSeries, twice: i64) -> BigInt {
    s.coeff(HalfInt::from_twice(twice))
}
