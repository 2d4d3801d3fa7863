//! Dual-backend numbers.
//!
//! Every coordinate in the crate (points, breakpoints, slopes, intercepts,
//! rotation parameters) is a [`Scalar`]. Two backends exist:
//!
//! * [`Rational`]: arbitrary precision rationals. Arithmetic is closed and
//!   comparisons are decidable, so every equality test is exact and the
//!   configured tolerance is ignored.
//! * `f64`: binary floating point. Equality tests go through a tolerance
//!   `tol > 0` supplied by the caller.
//!
//! Algorithms are written once, generically over `S: Scalar`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact backend.
pub type Rational = BigRational;

/// Default tolerance of the float backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Which arithmetic produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse(format!("unknown backend `{other}`"))),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact image of a binary float (the exact backend keeps every bit).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn floor(&self) -> Self;
    /// Parses `p/q`, integers and decimals (with optional exponent).
    fn parse(s: &str) -> Result<Self, Error>;

    /// Width of an equality window: zero for the exact backend, `tol` for floats.
    fn slack(tol: f64) -> Self;

    /// Equality test; `tol` is ignored by the exact backend.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).abs() <= Self::slack(tol)
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Fractional part `{x} = x - floor(x)` in `[0, 1)`.
    fn fract_part(&self) -> Self {
        self.clone() - self.floor()
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Huge numerators and denominators overflow the direct conversion.
            let shift = self.numer().bits().max(self.denom().bits()).saturating_sub(1000);
            let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn floor(&self) -> Self {
        BigRational::floor(self)
    }

    fn parse(s: &str) -> Result<Self, Error> {
        parse_rational(s)
    }

    fn slack(_tol: f64) -> Self {
        Zero::zero()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn floor(&self) -> Self {
        f64::floor(*self)
    }

    fn parse(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: f64 = Scalar::to_f64(&parse_rational(p)?);
            let q: f64 = Scalar::to_f64(&parse_rational(q)?);
            if q == 0.0 {
                return Err(Error::Parse(s.to_string()));
            }
            return Ok(p / q);
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Parse(s.to_string())),
        }
    }

    fn slack(tol: f64) -> Self {
        tol
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn fract_part(&self) -> Self {
        let r = self - self.floor();
        // -1e-18 rounds up to exactly 1.0.
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    }
}

/// Parses `p/q`, signed integers and decimals such as `-1.25e-3` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if Zero::is_zero(&q) {
            return Err(bad());
        }
        return Ok(p / q);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Sorts a slice of scalars in increasing order.
pub(crate) fn sort_scalars<S: Scalar>(v: &mut [S]) {
    v.sort_by(|a, b| a.partial_cmp(b).expect("scalars are totally ordered"));
}

/// Removes neighbours that compare equal under `tol` from a sorted vector.
pub(crate) fn dedup_sorted<S: Scalar>(v: &mut Vec<S>, tol: f64) {
    v.dedup_by(|b, a| b.approx_eq(a, tol));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("7/8").unwrap(), Rational::from_ratio(7, 8));
        assert_eq!(parse_rational("0.3").unwrap(), Rational::from_ratio(3, 10));
        assert_eq!(parse_rational("-1.25e-1").unwrap(), Rational::from_ratio(-1, 8));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_i64(3));
        assert_eq!(parse_rational(" -2/6 ").unwrap(), Rational::from_ratio(-1, 3));
        assert_eq!(parse_rational("1e2").unwrap(), Rational::from_i64(100));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn float_parse_accepts_fractions() {
        assert_eq!(<f64 as Scalar>::parse("1/4").unwrap(), 0.25);
        assert_eq!(<f64 as Scalar>::parse("0.5").unwrap(), 0.5);
        assert!(<f64 as Scalar>::parse("nan").is_err());
    }

    #[test]
    fn exact_equality_ignores_tolerance() {
        let a = Rational::from_ratio(1, 3);
        let b = a.clone() + Rational::from_ratio(1, 1_000_000_000_000_000);
        assert!(!a.approx_eq(&b, 1.0));
        assert!(0.1_f64.approx_eq(&(0.1 + 1e-14), 1e-12));
        assert!(!0.1_f64.approx_eq(&(0.1 + 1e-10), 1e-12));
    }

    #[test]
    fn fractional_part_in_unit_interval() {
        assert_eq!(Rational::from_ratio(-1, 4).fract_part(), Rational::from_ratio(3, 4));
        assert_eq!((-0.25f64).fract_part(), 0.75);
        assert_eq!((-1e-20f64).fract_part(), 0.0);
    }

    #[test]
    fn display_round_trips() {
        for s in ["7/8", "-3/5", "12"] {
            let v = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&v.to_string()).unwrap(), v);
        }
        let x = 0.1f64 + 0.2;
        assert_eq!(<f64 as Scalar>::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn huge_rationals_convert_to_float() {
        let big = Rational::from_ratio(1, 3).powi(2000) * Rational::from_i64(2).powi(3000);
        let expected = (2f64.ln() * 3000.0 - 3f64.ln() * 2000.0).exp();
        let got = Scalar::to_f64(&big);
        assert!((got / expected - 1.0).abs() < 1e-9, "{got} vs {expected}");
    }
}
