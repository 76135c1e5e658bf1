//! Scalar abstraction for edge lengths.
//!
//! Graph algorithms run over two scalar types: `f64` for everyday numeric
//! work and arbitrary-precision rationals where exact length equality is
//! the decision criterion (connectivization, cyclic equivalence, exact
//! period matrices). [`Length`] is the small common interface both satisfy.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Rat = BigRational;

/// Edge-length scalar: `f64` or [`Rat`].
pub trait Length:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Total order used for deterministic sorting (ties in `f64` resolved
    /// by the IEEE total order; lengths are finite and nonnegative here).
    fn cmp_total(&self, other: &Self) -> Ordering;
}

impl Length for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
}

impl Length for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn from_int(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

/// Parses a scalar from text: an integer, a fraction `p/q`, or a decimal
/// string such as `0.35`. Decimal strings convert exactly.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("cannot parse `{s}` as a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = frac.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rat::new(num, den);
        let int_part = Rat::from_integer(int);
        return Ok(if neg { int_part - frac_part } else { int_part + frac_part });
    }
    let v: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(v))
}

/// Exact conversion of a finite `f64` into a rational.
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Invalid(format!("non-finite length {x}")))
}

/// Renders a rational as `p/q` (or just `p` for integers).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats a float with 15 significant digits, trimming trailing zeros,
/// switching to scientific notation only for extreme magnitudes.
/// This is the canonical numeric rendering used in all emitted JSON.
pub fn fmt15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".to_owned()
        } else if x > 0.0 {
            "1e400".to_owned() // out-of-range marker, never produced by healthy paths
        } else {
            "-1e400".to_owned()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-4..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let t = format!("{:.*}", decimals, x);
        trim_trailing(&t)
    } else {
        let t = format!("{:.*e}", 14, x);
        // normalize "1.20000000000000e-7" -> "1.2e-7"
        let (mant, e) = t.split_once('e').expect("exponent present");
        format!("{}e{}", trim_trailing(mant), e)
    };
    s
}

fn trim_trailing(t: &str) -> String {
    if t.contains('.') {
        t.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        t.to_owned()
    }
}
