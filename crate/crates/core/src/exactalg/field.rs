use std::fmt;
use std::ops::{Div, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficient field for [`Polynomial`](super::Polynomial) and
/// [`RationalFunction`](super::RationalFunction).
///
/// Elements must know how to embed themselves into the complex numbers so
/// that exact objects can be evaluated numerically.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + From<BigRational>
{
    fn try_inv(&self) -> Option<Self>;

    fn to_complex(&self) -> Complex64;

    /// `Some(q)` when the element is the rational number `q`.
    fn as_rational(&self) -> Option<BigRational>;
}

impl Field for BigRational {
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Shorthand for building a rational `n/d` from machine integers.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Nearest `f64`, robust for numerators and denominators beyond `f64` range.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        x.numer().abs() / (x.denom() << shift as usize)
    } else {
        (x.numer().abs() << (-shift) as usize) / x.denom()
    };
    let mant = scaled.to_f64().unwrap_or(f64::INFINITY);
    let v = mant * 2f64.powi(shift as i32);
    if x.is_negative() {
        -v
    } else {
        v
    }
}

/// Exact conversion of a finite `f64` to a rational.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// `Some(r)` with `r >= 0` and `r*r == x` when `x` is the square of a rational.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub fn is_integer(x: &BigRational) -> bool {
    x.denom().is_one()
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Format a rational as `p` or `p/q`.
pub fn fmt_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
