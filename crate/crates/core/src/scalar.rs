//! Numeric backends shared by every solver.
//!
//! `f64` runs with explicit tolerances; [`Rational`] is exact and every
//! tolerance is zero.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

/// Absolute tolerance when checking LP feasibility in floating point.
pub const FEASIBILITY_TOL: f64 = 1e-8;
/// Margin `eta` applied to strict inequalities in floating point.
pub const STRICTNESS_TOL: f64 = 1e-9;
/// Entries smaller than this are treated as zero during pivoting.
pub const PIVOT_TOL: f64 = 1e-11;
/// Objective values closer than this are considered tied.
pub const VALUE_TIE_TOL: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True for exact arithmetic.
    const EXACT: bool;
    const NAME: &'static str;

    /// Sign of `self`, treating values within the pivot tolerance as zero.
    fn pivot_sign(&self) -> Ordering;
    fn feasibility_tol() -> Self;
    fn strictness_tol() -> Self;
    fn value_tie_tol() -> Self;

    fn to_f64(&self) -> f64;
    /// Exact conversion for `f64`; for rationals the shortest decimal
    /// representation of the float is used.
    fn from_f64(v: f64) -> Option<Self>;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_usize(v: usize) -> Self {
        Self::from_ratio(v as i64, 1)
    }
    /// Parses `"p/q"`, an integer or a decimal literal.
    fn parse_text(s: &str) -> Option<Self>;
    /// Canonical textual form; `p/q` for rationals.
    fn to_text(&self) -> String;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self -= f * x` without cloning the operands.
    fn sub_mul_assign(&mut self, f: &Self, x: &Self);
    /// `self /= d` without cloning the divisor.
    fn div_assign_ref(&mut self, d: &Self);

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn pivot_sign(&self) -> Ordering {
        if *self > PIVOT_TOL {
            Ordering::Greater
        } else if *self < -PIVOT_TOL {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn feasibility_tol() -> Self {
        FEASIBILITY_TOL
    }
    fn strictness_tol() -> Self {
        STRICTNESS_TOL
    }
    fn value_tie_tol() -> Self {
        VALUE_TIE_TOL
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn parse_text(s: &str) -> Option<Self> {
        parse_rational_text(s).and_then(|r| ToPrimitive::to_f64(&r)).filter(|v| v.is_finite())
    }
    fn to_text(&self) -> String {
        format!("{self}")
    }
    fn sub_mul_assign(&mut self, f: &Self, x: &Self) {
        *self -= f * x;
    }
    fn div_assign_ref(&mut self, d: &Self) {
        *self /= d;
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn pivot_sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn feasibility_tol() -> Self {
        Rational::zero()
    }
    fn strictness_tol() -> Self {
        Rational::zero()
    }
    fn value_tie_tol() -> Self {
        Rational::zero()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        parse_rational_text(&format!("{v}"))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn parse_text(s: &str) -> Option<Self> {
        parse_rational_text(s)
    }
    fn to_text(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn sub_mul_assign(&mut self, f: &Self, x: &Self) {
        if f.is_zero() || x.is_zero() {
            return;
        }
        *self -= f * x;
    }
    fn div_assign_ref(&mut self, d: &Self) {
        *self /= d;
    }
}

/// Parses `"p/q"`, `"-3"`, `"0.125"` or `"1.5e-3"` into a rational.
pub fn parse_rational_text(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational_text(p)?;
        let q = parse_rational_text(q)?;
        if q.is_zero() {
            return None;
        }
        return Some(p / q);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], i64::from_str(&s[pos + 1..]).ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let scale = exp - frac_part.len() as i64;
    if scale.unsigned_abs() > 4000 {
        return None;
    }
    let ten = BigInt::from(10);
    let mut den = BigInt::one();
    if scale >= 0 {
        num *= num_traits::pow(ten, scale as usize);
    } else {
        den = num_traits::pow(ten, (-scale) as usize);
    }
    if neg {
        num = -num;
    }
    Some(Rational::new(num, den))
}

/// Number of significant decimal digits in the shortest representation of `v`.
pub fn significant_digits(v: f64) -> usize {
    let text = format!("{:e}", v.abs());
    let mantissa = text.split('e').next().unwrap_or("");
    mantissa.bytes().filter(|b| b.is_ascii_digit()).count()
}

/// `a > b` with the strictness margin applied in floating point.
pub fn strictly_greater<T: Scalar>(a: &T, b: &T) -> bool {
    a.clone() > b.clone() + T::strictness_tol()
}

/// `|a - b|` within the tie tolerance.
pub fn nearly_equal<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    (a.clone() - b.clone()).abs_val() <= *tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational_text("1/4"), Some(Rational::from_ratio(1, 4)));
        assert_eq!(parse_rational_text("-0.125"), Some(Rational::from_ratio(-1, 8)));
        assert_eq!(parse_rational_text("2.5e-1"), Some(Rational::from_ratio(1, 4)));
        assert_eq!(parse_rational_text("3"), Some(Rational::from_ratio(3, 1)));
        assert_eq!(parse_rational_text("1/0"), None);
        assert_eq!(parse_rational_text("abc"), None);
        assert_eq!(parse_rational_text(""), None);
    }

    #[test]
    fn float_to_rational_uses_shortest_decimal() {
        assert_eq!(Rational::from_f64(0.1), Some(Rational::from_ratio(1, 10)));
        assert_eq!(Rational::from_f64(1e-7), Some(Rational::from_ratio(1, 10_000_000)));
        assert_eq!(Rational::from_f64(f64::NAN), None);
    }

    #[test]
    fn text_round_trip() {
        let r = Rational::from_ratio(-7, 3);
        assert_eq!(r.to_text(), "-7/3");
        assert_eq!(Rational::parse_text(&r.to_text()), Some(r));
        assert_eq!(f64::parse_text("1/4"), Some(0.25));
    }

    #[test]
    fn digit_count() {
        assert_eq!(significant_digits(0.25), 2);
        assert_eq!(significant_digits(1.0 / 3.0), 16);
    }
}
