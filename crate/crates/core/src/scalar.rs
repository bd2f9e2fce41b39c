//! Arithmetic modes.
//!
//! Every numeric routine in the crate is generic over [`Scalar`]. Two
//! implementations exist: [`Rational`] (exact, arbitrary precision) which
//! serves as the reference path, and `f64` for production refinement.

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{NumAssign, One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rational = BigRational;

/// Relative tolerance used for zero tests in floating point mode.
pub const FLOAT_EPS: f64 = 1e-12;

pub trait Scalar:
    NumAssign + Neg<Output = Self> + Clone + Debug + Display + PartialOrd + Send + Sync + 'static
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact in rational mode, rounded in float mode.
    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self;

    /// Square root; `None` in exact mode.
    fn try_sqrt(&self) -> Option<Self>;

    /// Zero test relative to `scale` (exact mode ignores the scale).
    fn is_negligible(&self, scale: f64) -> bool;

    /// `self -= a * b`
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a.clone() * b.clone();
    }

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a.clone() * b.clone();
    }

    /// Equality up to the mode's tolerance.
    fn near(&self, other: &Self, scale: f64) -> bool {
        (self.clone() - other.clone()).is_negligible(scale)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn try_sqrt(&self) -> Option<Self> {
        None
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn try_sqrt(&self) -> Option<Self> {
        Some(self.sqrt())
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_EPS * scale.max(f64::MIN_POSITIVE)
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

/// Parses `"p/q"`, integers and decimal literals (`"-1.25"`, `"3e-2"`) into
/// an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.contains('/') {
        return Rational::from_str(text).ok().filter(|r| !r.denom().is_zero());
    }
    if let Ok(n) = BigInt::from_str(text) {
        return Some(Rational::from_integer(n));
    }
    // decimal with optional exponent
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if sign < 0 { -value } else { value })
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    <Rational as num_traits::FromPrimitive>::from_f64(v)
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Binomial coefficient as a small integer.
pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

pub fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Integer power by repeated multiplication.
pub fn powi<S: Scalar>(base: &S, exp: usize) -> S {
    let mut acc = S::one();
    for _ in 0..exp {
        acc *= base.clone();
    }
    acc
}

/// Signum in `{-1, 0, 1}`.
pub fn sign_of<S: Scalar>(v: &S) -> i32 {
    if v.is_zero() {
        0
    } else if *v > S::zero() {
        1
    } else {
        -1
    }
}
