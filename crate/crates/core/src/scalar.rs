//! Scalar backends: exact rationals and double-precision floats.
//!
//! Every sequence operation is generic over [`Scalar`]. The rational backend
//! compares exactly; the float backend compares with the relative tolerance
//! [`FLOAT_REL_TOL`].

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by the float backend in predicate comparisons.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Differences below this are ignored by the float backend.
pub const FLOAT_ABS_FLOOR: f64 = 1e-300;

/// Which arithmetic a sequence is stored in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Rational => f.write_str("rational"),
            Backend::Float => f.write_str("float"),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    const BACKEND: Backend;

    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    /// Exact conversion for the rational backend (binary expansion of `x`).
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;

    /// `a >= b`, up to the backend tolerance.
    fn approx_ge(a: &Self, b: &Self) -> bool;

    /// `a == b`, up to the backend tolerance.
    fn approx_eq(a: &Self, b: &Self) -> bool {
        Self::approx_ge(a, b) && Self::approx_ge(b, a)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    /// Integer power; negative exponents invert.
    fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }

    /// Canonical text form used by the JSON format.
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Result<Self>;
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_ge(a: &Self, b: &Self) -> bool {
        // the floor keeps subnormal products from deciding a comparison
        let scale = a.abs().max(b.abs());
        *a >= *b - (FLOAT_REL_TOL * scale).max(FLOAT_ABS_FLOOR)
    }

    fn powi(&self, n: i64) -> Self {
        match i32::try_from(n) {
            Ok(n) => f64::powi(*self, n),
            Err(_) => self.powf(n as f64),
        }
    }

    fn to_text(&self) -> String {
        // shortest representation that round-trips
        format!("{self:?}")
    }

    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
            return Ok(n / d);
        }
        s.parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))
    }
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Rational;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn approx_ge(a: &Self, b: &Self) -> bool {
        a >= b
    }

    fn to_text(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

/// Converts a rational to the nearest-ish `f64`, staying finite for huge
/// numerators and denominators where the naive conversion overflows.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = ToPrimitive::to_f64(r) {
        if x.is_finite() && (x != 0.0 || r.is_zero()) {
            return x;
        }
    }
    let n_bits = r.numer().bits() as i64;
    let d_bits = r.denom().bits() as i64;
    let shift_n = (n_bits - 60).max(0);
    let shift_d = (d_bits - 60).max(0);
    let n = (r.numer().abs() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let x = n / d * 2f64.powi((shift_n - shift_d) as i32);
    if Signed::is_negative(r) {
        -x
    } else {
        x
    }
}

/// Parses `"a/b"`, `"a"`, or a decimal literal such as `"0.25"` / `"1e-3"`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(BigRational::from_integer(n));
    }
    // decimal / scientific literal
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    value = value * Scalar::powi(&ten, scale as i64);
    Ok(if neg { -value } else { value })
}

/// Exact rational from a small fraction.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
