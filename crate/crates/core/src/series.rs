//! Truncated Laurent series in `q^{1/2}` with arbitrary-precision integer
//! coefficients.
//!
//! Exponents are stored doubled (`HalfInt::twice`), so `q^{3/2}` has
//! `twice = 3`. A series knows its own truncation order: every exponent at or
//! above `order` is unknown. Binary operations shrink the order to the window
//! in which the result is still exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// An element of `(1/2)Z`, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HalfInt {
    pub twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Smallest integer not below the value.
    pub fn ceil(self) -> i64 {
        self.twice.div_euclid(2) + self.twice.rem_euclid(2)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + o.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - o.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesParseError {
    #[error("bad half-integer `{0}`")]
    BadHalfInt(String),
    #[error("bad series text: {0}")]
    BadSeries(String),
}

impl FromStr for HalfInt {
    type Err = SeriesParseError;

    /// Accepts `7`, `-3`, `21/2`, `-1/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SeriesParseError::BadHalfInt(s.to_string());
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(HalfInt::from_int(num)),
                "2" => Ok(HalfInt::from_twice(num)),
                _ => Err(bad()),
            }
        } else {
            let n: i64 = s.parse().map_err(|_| bad())?;
            Ok(HalfInt::from_int(n))
        }
    }
}

/// A Laurent series `Σ c_e q^e` with `e ∈ (1/2)Z`, known below `order`.
///
/// Terms are kept sorted by exponent with no zero coefficients, so structural
/// equality is series equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    order: HalfInt,
    terms: Vec<(i64, BigInt)>,
}

impl TruncatedSeries {
    pub fn zero(order: HalfInt) -> Self {
        TruncatedSeries { order, terms: Vec::new() }
    }

    pub fn one(order: HalfInt) -> Self {
        Self::monomial(BigInt::one(), HalfInt::ZERO, order)
    }

    pub fn monomial(coeff: BigInt, exp: HalfInt, order: HalfInt) -> Self {
        Self::from_terms([(exp, coeff)], order)
    }

    /// Builds a series from arbitrary (exponent, coefficient) pairs; repeated
    /// exponents are summed and anything at or above `order` is dropped.
    pub fn from_terms<I>(terms: I, order: HalfInt) -> Self
    where
        I: IntoIterator<Item = (HalfInt, BigInt)>,
    {
        let mut v: Vec<(i64, BigInt)> = terms
            .into_iter()
            .filter(|(e, _)| *e < order)
            .map(|(e, c)| (e.twice, c))
            .collect();
        v.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i64, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        TruncatedSeries { order, terms: out }
    }

    /// Integer-exponent series from a dense coefficient list starting at `q^0`.
    pub fn from_coeffs<T: Into<BigInt> + Clone>(coeffs: &[T], order: HalfInt) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (HalfInt::from_int(i as i64), c.clone().into())),
            order,
        )
    }

    pub fn order(&self) -> HalfInt {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (HalfInt::from_twice(*e), c))
    }

    pub fn coeff(&self, exp: HalfInt) -> BigInt {
        match self.terms.binary_search_by_key(&exp.twice, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Smallest stored exponent, `None` for the zero series.
    pub fn min_exp(&self) -> Option<HalfInt> {
        self.terms.first().map(|(e, _)| HalfInt::from_twice(*e))
    }

    pub fn leading(&self) -> Option<(HalfInt, &BigInt)> {
        self.terms.first().map(|(e, c)| (HalfInt::from_twice(*e), c))
    }

    /// Lowers the order to `order` (no-op if already lower).
    pub fn truncate(&self, order: HalfInt) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            order,
            terms: self.terms.iter().filter(|(e, _)| *e < order.twice).cloned().collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.order);
        }
        TruncatedSeries {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Multiplies by `q^shift`; the order moves with it.
    pub fn shift(&self, shift: HalfInt) -> Self {
        TruncatedSeries {
            order: self.order + shift,
            terms: self.terms.iter().map(|(e, c)| (e + shift.twice, c.clone())).collect(),
        }
    }

    /// Multiplies by `(-q^{1/2})^k`.
    pub fn mul_sign_power(&self, k: i64) -> Self {
        let s = self.shift(HalfInt::from_twice(k));
        if k.rem_euclid(2) == 1 {
            -s
        } else {
            s
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        loop {
            let next = match (a.get(i), b.get(j)) {
                (None, None) => break,
                (Some(x), None) => {
                    i += 1;
                    x.clone()
                }
                (None, Some(y)) => {
                    j += 1;
                    y.clone()
                }
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => {
                        i += 1;
                        x.clone()
                    }
                    Ordering::Greater => {
                        j += 1;
                        y.clone()
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (x.0, &x.1 + &y.1)
                    }
                },
            };
            if next.0 >= order.twice {
                continue;
            }
            if !next.1.is_zero() {
                out.push(next);
            }
        }
        TruncatedSeries { order, terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&-other)
    }

    /// Cauchy product. The result is exact below
    /// `min(a.order + minexp(b), b.order + minexp(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        // An empty series is only known to vanish below its order.
        let ma = self.min_exp().unwrap_or(self.order);
        let mb = other.min_exp().unwrap_or(other.order);
        let order = (self.order + mb).min(other.order + ma);
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let lo = ma.twice + mb.twice;
        let width = (order.twice - lo).max(0) as usize;
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); width];
        for (ea, ca) in &self.terms {
            let base = ea - ma.twice;
            if base as usize >= width {
                break;
            }
            for (eb, cb) in &other.terms {
                let idx = (base + eb - mb.twice) as usize;
                if idx >= width {
                    break;
                }
                acc[idx] += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (lo + i as i64, c))
            .collect();
        TruncatedSeries { order, terms }
    }

    /// Human-readable form, e.g. `1 - 2*q + q^(3/2) + O(q^5)`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if e == HalfInt::ZERO {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                    s.push('*');
                }
                s.push_str(&power_text(e));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s.push_str(" + O(");
        s.push_str(&power_text(self.order));
        s.push(')');
        s
    }

    /// Machine form: `{"twice_order": N, "terms": [[twice_exp, coeff], ...]}`.
    pub fn to_machine(&self) -> String {
        let body: Vec<String> = self.terms.iter().map(|(e, c)| format!("[{e}, {c}]")).collect();
        format!("{{\"twice_order\": {}, \"terms\": [{}]}}", self.order.twice, body.join(", "))
    }

    /// Parses the machine form written by [`TruncatedSeries::to_machine`].
    pub fn parse_machine(s: &str) -> Result<Self, SeriesParseError> {
        let bad = |m: &str| SeriesParseError::BadSeries(m.to_string());
        let ints: Vec<BigInt> = s
            .split(|ch: char| !(ch.is_ascii_digit() || ch == '-'))
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigInt>().map_err(|_| bad(t)))
            .collect::<Result<_, _>>()?;
        if !s.contains("twice_order") || !s.contains("terms") || ints.len().is_multiple_of(2) {
            return Err(bad("expected twice_order and terms"));
        }
        let to_i64 = |b: &BigInt| i64::try_from(b).map_err(|_| bad("exponent out of range"));
        let order = HalfInt::from_twice(to_i64(&ints[0])?);
        let mut terms = Vec::new();
        for pair in ints[1..].chunks(2) {
            terms.push((HalfInt::from_twice(to_i64(&pair[0])?), pair[1].clone()));
        }
        Ok(Self::from_terms(terms, order))
    }
}

fn power_text(e: HalfInt) -> String {
    if e == HalfInt::from_int(1) {
        "q".to_string()
    } else if e.is_integer() && e.twice >= 0 {
        format!("q^{e}")
    } else {
        format!("q^({e})")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

/// `1/(q)_n = Π_{i=1}^n 1/(1 - q^i)` expanded below `order`.
pub fn pochhammer_inverse(n: u32, order: HalfInt) -> TruncatedSeries {
    let top = order.ceil();
    if top <= 0 {
        return TruncatedSeries::zero(order);
    }
    let len = top as usize;
    let mut c: Vec<BigInt> = vec![BigInt::zero(); len];
    c[0] = BigInt::one();
    for i in 1..=n as usize {
        for k in i..len {
            let prev = c[k - i].clone();
            c[k] += prev;
        }
    }
    TruncatedSeries::from_coeffs(&c, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    fn poly(c: &[i64], order: i64) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(c, h(order))
    }

    #[test]
    fn add_examples() {
        let a = poly(&[1, -1], 10);
        let b = poly(&[0, 1], 8);
        let s = a.add(&b);
        assert_eq!(s, TruncatedSeries::one(h(8)));
        let z = TruncatedSeries::zero(h(5));
        assert_eq!(z.add(&a), a.truncate(h(5)));
        let r = TruncatedSeries::monomial(1.into(), HalfInt::from_twice(1), h(4));
        assert_eq!(r.add(&r).coeff(HalfInt::from_twice(1)), BigInt::from(2));
    }

    #[test]
    fn mul_examples() {
        let one_minus_q = poly(&[1, -1], 10);
        let geo = poly(&[1; 10], 10);
        assert_eq!(one_minus_q.mul(&geo), TruncatedSeries::one(h(10)));
        assert!(geo.mul(&TruncatedSeries::zero(h(10))).is_zero());
        let p = poly(&[1, -1, -2, -2], 4);
        let sq = p.mul(&p);
        assert_eq!(sq.order(), h(4));
        // schoolbook convolution of the prefix
        let expect: Vec<i64> = (0..4)
            .map(|k| (0..=k).map(|i| [1, -1, -2, -2][i] * [1, -1, -2, -2][k - i]).sum())
            .collect();
        assert_eq!(expect, vec![1, -2, -3, 0]);
        assert_eq!(sq, poly(&expect, 4));
    }

    #[test]
    fn mul_order_tracks_negative_exponents() {
        let a = TruncatedSeries::from_terms([(h(-2), 1.into()), (h(0), 1.into())], h(5));
        let b = poly(&[1, 1], 6);
        assert_eq!(a.mul(&b).order(), h(4));
    }

    #[test]
    fn sign_power_examples() {
        let one = TruncatedSeries::one(h(10));
        assert_eq!(one.mul_sign_power(2).coeff(h(1)), BigInt::from(1));
        let m = one.mul_sign_power(-1);
        assert_eq!(m.leading(), Some((HalfInt::from_twice(-1), &BigInt::from(-1))));
        let r = TruncatedSeries::monomial(1.into(), HalfInt::from_twice(1), h(10));
        assert_eq!(r.mul_sign_power(1).leading(), Some((h(1), &BigInt::from(-1))));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_inverse(0, h(6)), TruncatedSeries::one(h(6)));
        assert_eq!(pochhammer_inverse(1, h(6)), poly(&[1; 6], 6));
        assert_eq!(pochhammer_inverse(2, h(6)), poly(&[1, 1, 2, 2, 3, 3], 6));
    }

    #[test]
    fn text_rendering() {
        let s = TruncatedSeries::from_terms(
            [(h(0), 1.into()), (h(1), (-2).into()), (HalfInt::from_twice(3), 3.into())],
            HalfInt::from_twice(21),
        );
        assert_eq!(s.to_text(), "1 - 2*q + 3*q^(3/2) + O(q^(21/2))");
        assert_eq!(TruncatedSeries::zero(h(9)).to_text(), "0 + O(q^9)");
        let n = TruncatedSeries::monomial((-1).into(), HalfInt::from_twice(-1), h(2));
        assert_eq!(n.to_text(), "-q^(-1/2) + O(q^2)");
    }

    #[test]
    fn machine_round_trip() {
        let s = TruncatedSeries::from_terms(
            [(HalfInt::from_twice(-3), (-7).into()), (h(4), "123456789012345678901234567890".parse().unwrap())],
            h(9),
        );
        let m = s.to_machine();
        assert_eq!(TruncatedSeries::parse_machine(&m).unwrap(), s);
    }

    #[test]
    fn halfint_parse() {
        assert_eq!("21/2".parse::<HalfInt>().unwrap().twice, 21);
        assert_eq!("-3".parse::<HalfInt>().unwrap().twice, -6);
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_twice(21).ceil(), 11);
        assert_eq!(HalfInt::from_twice(-3).ceil(), -1);
    }
}
