//! Exact Gaussian-rational arithmetic.
//!
//! All numbers in this crate are complex numbers `a + bi` with
//! arbitrary-precision rational parts. No floating point is used anywhere in
//! the arithmetic: equality, ordering, hashing and deduplication are all
//! bit-stable consequences of the reduced-fraction representation that
//! [`num_rational::BigRational`] maintains (gcd 1, positive denominator).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer pair. Panics on zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A complex number with exact rational real and imaginary parts.
///
/// Ordering is lexicographic on `(re, im)`, which fixes a deterministic
/// iteration order for every set in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        GaussianRational::new(rat_int(re), rat_int(im))
    }

    pub fn zero() -> Self {
        GaussianRational::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::new(Rational::one(), Rational::zero())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2 = re^2 + im^2`, exact.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact complex division. Division by zero is an error, never a value.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let den = rhs.norm_sq();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &den;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &den;
        Ok(GaussianRational::new(re, im))
    }

    /// Scale by a real rational factor.
    pub fn scale(&self, c: &Rational) -> Self {
        GaussianRational::new(&self.re * c, &self.im * c)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// Panicking division, mirroring `BigRational`'s own behaviour. Fallible
/// call sites go through [`GaussianRational::checked_div`].
impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: Self) -> GaussianRational {
        self.checked_div(rhs).expect("complex division by zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

/// Renders a rational without the `/1` suffix for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `numer/denom` or a bare integer.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let (numer_str, denom_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer =
        BigInt::from_str(numer_str).map_err(|e| format!("invalid numerator {numer_str:?}: {e}"))?;
    let denom =
        BigInt::from_str(denom_str).map_err(|e| format!("invalid denominator {denom_str:?}: {e}"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(numer, denom))
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", format_rational(&self.im));
        }
        if self.im.is_negative() {
            write!(
                f,
                "{}-{}i",
                format_rational(&self.re),
                format_rational(&-self.im.clone())
            )
        } else {
            write!(
                f,
                "{}+{}i",
                format_rational(&self.re),
                format_rational(&self.im)
            )
        }
    }
}

// Debug delegates to Display so test failure output stays readable.
impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
