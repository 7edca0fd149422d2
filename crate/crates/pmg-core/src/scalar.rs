//! Scalar arithmetic backends.
//!
//! Every numeric routine in this crate is generic over [`Scalar`], with three
//! backends: exact rationals, decimal floats of configurable precision, and
//! machine floats. Edge lengths are always held exactly as [`BigRational`]
//! inside the graph model; a backend only enters when matrices are built.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic backend selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    /// Arbitrary-precision rational arithmetic; error-free.
    Exact,
    /// Decimal arithmetic rounded to `digits` significant figures after
    /// every operation; `digits` must be at least 18.
    BigFloat { digits: u32 },
    /// Native binary floating point.
    Machine,
}

impl ScalarMode {
    pub fn big_float(digits: u32) -> Result<Self> {
        if digits < 18 {
            return Err(Error::PrecisionTooLow(digits));
        }
        Ok(ScalarMode::BigFloat { digits })
    }

    /// Working precision threaded through generic code; 0 for the backends
    /// that ignore it.
    pub fn digits(&self) -> u32 {
        match self {
            ScalarMode::BigFloat { digits } => *digits,
            _ => 0,
        }
    }
}

/// One value of the selected arithmetic backend.
///
/// The `Div` implementation may panic on division by zero (as `f64` does
/// not; rationals do), so callers guard pivots and denominators explicitly.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic is error-free and exact equality is meaningful.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;

    /// Convert an exact rational input. `digits` is the working precision
    /// for the decimal backend and ignored by the other two.
    fn from_rational(r: &BigRational, digits: u32) -> Self;

    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;

    /// Compare absolute values; used for pivot selection.
    fn abs_cmp(&self, other: &Self) -> Ordering;

    fn to_f64(&self) -> f64;

    /// Exact rational view, when the backend has one.
    fn as_rational(&self) -> Option<BigRational>;

    /// Render for reports: exact values as `num/den`, floats with `digits`
    /// significant figures.
    fn display(&self, digits: u32) -> String;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &BigRational, _digits: u32) -> Self {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.abs().cmp(&other.abs())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn display(&self, _digits: u32) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rational(r: &BigRational, _digits: u32) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.abs()
            .partial_cmp(&other.abs())
            .unwrap_or(Ordering::Equal)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn as_rational(&self) -> Option<BigRational> {
        None
    }

    fn display(&self, digits: u32) -> String {
        format_f64_sig(*self, digits.max(1))
    }
}

/// Decimal float: a rational rounded to a fixed number of significant
/// decimal digits after every arithmetic operation.
///
/// Precision is a per-value property. Integer constants carry precision 0
/// ("not yet rounded") and inherit the precision of whatever they combine
/// with, so seeding the edge lengths at N digits keeps the whole
/// computation at N digits. Equality compares values only.
#[derive(Clone, Debug)]
pub struct BigFloat {
    value: BigRational,
    prec: u32,
}

impl BigFloat {
    pub fn with_precision(r: &BigRational, digits: u32) -> Self {
        BigFloat {
            value: round_sig(r, digits),
            prec: digits,
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    fn combine(value: BigRational, a: u32, b: u32) -> Self {
        let prec = a.max(b);
        let value = if prec == 0 {
            value
        } else {
            round_sig(&value, prec)
        };
        BigFloat { value, prec }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: Self) -> Self {
        BigFloat::combine(self.value + rhs.value, self.prec, rhs.prec)
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: Self) -> Self {
        BigFloat::combine(self.value - rhs.value, self.prec, rhs.prec)
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: Self) -> Self {
        BigFloat::combine(self.value * rhs.value, self.prec, rhs.prec)
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: Self) -> Self {
        BigFloat::combine(self.value / rhs.value, self.prec, rhs.prec)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> Self {
        BigFloat {
            value: -self.value,
            prec: self.prec,
        }
    }
}

impl Scalar for BigFloat {
    const EXACT: bool = false;

    fn zero() -> Self {
        BigFloat {
            value: Zero::zero(),
            prec: 0,
        }
    }

    fn one() -> Self {
        BigFloat {
            value: One::one(),
            prec: 0,
        }
    }

    fn from_i64(n: i64) -> Self {
        BigFloat {
            value: BigRational::from_integer(BigInt::from(n)),
            prec: 0,
        }
    }

    fn from_rational(r: &BigRational, digits: u32) -> Self {
        BigFloat::with_precision(r, digits.max(18))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.value)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(&self.value)
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.value.abs().cmp(&other.value.abs())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.value).unwrap_or(f64::NAN)
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.value.clone())
    }

    fn display(&self, digits: u32) -> String {
        decimal_string(&self.value, digits.max(1))
    }
}

fn pow10(k: u64) -> BigInt {
    BigInt::from(10u32).pow(k as u32)
}

/// Largest e with 10^e <= n/d, for positive n, d.
fn ilog10_quotient(n: &BigInt, d: &BigInt) -> i64 {
    let dn = n.to_string().len() as i64;
    let dd = d.to_string().len() as i64;
    // n/d lies in (10^(dn-dd-1), 10^(dn-dd+1)), so e is dn-dd or dn-dd-1.
    let k = dn - dd;
    let ge = if k >= 0 {
        *n >= d * pow10(k as u64)
    } else {
        n * pow10((-k) as u64) >= *d
    };
    if ge {
        k
    } else {
        k - 1
    }
}

/// Round a rational to `digits` significant decimal figures, half away
/// from zero.
pub fn round_sig(r: &BigRational, digits: u32) -> BigRational {
    if Zero::is_zero(r) || digits == 0 {
        return r.clone();
    }
    let neg = Signed::is_negative(r);
    let n = r.numer().abs();
    let d = r.denom().clone();
    let e = ilog10_quotient(&n, &d);
    let shift = digits as i64 - 1 - e;
    let (num, den) = if shift >= 0 {
        (n * pow10(shift as u64), d)
    } else {
        (n, d * pow10((-shift) as u64))
    };
    let q = (num * 2u32 + &den) / (den * 2u32);
    let rounded = if shift >= 0 {
        BigRational::new(q, pow10(shift as u64))
    } else {
        BigRational::from_integer(q * pow10((-shift) as u64))
    };
    if neg {
        -rounded
    } else {
        rounded
    }
}

/// Exact decimal rendering of a rational whose denominator divides a power
/// of ten, padded or rounded to `digits` significant figures.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    if Zero::is_zero(r) {
        return "0".to_string();
    }
    let r = round_sig(r, digits);
    // Write r as m / 10^s with s >= 0.
    let mut den = r.denom().clone();
    let mut s: u64 = 0;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u64;
    let mut fives = 0u64;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    debug_assert!(den.is_one(), "rounded value must be a decimal fraction");
    s = s.max(twos).max(fives);
    let scale = pow10(s) / (two.pow(twos as u32) * five.pow(fives as u32));
    let m = r.numer() * scale;
    let neg = Signed::is_negative(&m);
    let mut digits_str = m.abs().to_string();

    // Pad to exactly `digits` significant figures.
    let sig = digits_str.trim_start_matches('0').len();
    if sig > 0 && sig < digits as usize {
        let pad = digits as usize - sig;
        digits_str.push_str(&"0".repeat(pad));
        s += pad as u64;
    }

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let s = s as usize;
    if s == 0 {
        out.push_str(&digits_str);
    } else if digits_str.len() > s {
        let split = digits_str.len() - s;
        out.push_str(&digits_str[..split]);
        out.push('.');
        out.push_str(&digits_str[split..]);
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat(s - digits_str.len()));
        out.push_str(&digits_str);
    }
    out
}

/// Positional formatting of a machine float at `digits` significant figures.
pub fn format_f64_sig(x: f64, digits: u32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mut e = x.abs().log10().floor() as i32;
    // log10 near a power of ten can land one off.
    if x.abs() / 10f64.powi(e) >= 10.0 {
        e += 1;
    } else if x.abs() / 10f64.powi(e) < 1.0 {
        e -= 1;
    }
    if !(-10..=17).contains(&e) {
        return format!("{:.*e}", digits.saturating_sub(1) as usize, x);
    }
    let decimals = digits as i32 - 1 - e;
    if decimals >= 0 {
        format!("{:.*}", decimals as usize, x)
    } else {
        let p = 10f64.powi(-decimals);
        format!("{:.0}", (x / p).round() * p)
    }
}

/// Parse a scalar literal: `p/q`, an integer, or a decimal such as `3.25`
/// (taken exactly, so `0.1` is one tenth).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let bad = |_| Error::Parse(format!("invalid number `{s}`"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(bad)?;
        let d: BigInt = den.trim().parse().map_err(bad)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.trim().strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (
                1,
                int_part.trim().strip_prefix('+').unwrap_or(int_part.trim()),
            ),
        };
        if !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.is_empty() {
            return Err(Error::Parse(format!("invalid decimal `{s}`")));
        }
        let int_val: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().map_err(bad)?
        };
        let frac_val: BigInt = frac_part.parse().map_err(bad)?;
        let scale = pow10(frac_part.len() as u64);
        let mag = int_val * &scale + frac_val;
        return Ok(BigRational::new(mag * BigInt::from(sign), scale));
    }
    let n: BigInt = s.parse().map_err(bad)?;
    Ok(BigRational::from_integer(n))
}

/// Shorthand used throughout tests: parse or panic.
pub fn rat(text: &str) -> BigRational {
    parse_rational(text).expect("valid rational literal")
}
