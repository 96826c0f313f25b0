//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Curvature, isoperimetric ratios and eigenfunction certificates are
//! computed over any [`ExactScalar`] (rationals); spectra and the harmonic
//! solver run over nalgebra's `RealField` floats. [`Scalar`] is the common
//! ground both sides can use for simple bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive};

/// A signed number type that can represent small integer ratios.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Converts a cell count.
    fn from_count(n: usize) -> Self;

    /// Builds `num / den`. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lossy conversion used for reporting.
    fn to_f64(&self) -> f64;
}

/// Scalars whose arithmetic is exact; required wherever a sign decides a
/// branch (curvature classification, Cheeger witnesses).
pub trait ExactScalar: Scalar + Ord + Eq + std::hash::Hash {
    /// Numerator and denominator in lowest terms, denominator positive.
    fn parts(&self) -> (String, String);
}

impl Scalar for f32 {
    fn from_count(n: usize) -> Self {
        n as f32
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Ratio<i64> {
    fn from_count(n: usize) -> Self {
        Ratio::from_integer(n as i64)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl ExactScalar for Ratio<i64> {
    fn parts(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }
}

impl Scalar for BigRational {
    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl ExactScalar for BigRational {
    fn parts(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }
}

/// `1 / n` as a scalar.
pub(crate) fn reciprocal<T: Scalar>(n: usize) -> T {
    T::from_ratio(1, n as i64)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// accepted only when it lies within `tol` of `x`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Ratio<i64>> {
    if !x.is_finite() {
        return None;
    }
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = y - a as f64;
        if frac.abs() < 1e-15 || ((h1 as f64 / k1 as f64) - x).abs() < tol * 1e-3 {
            break;
        }
        y = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let r = Ratio::new(h1, k1);
    ((Scalar::to_f64(&r) - x).abs() <= tol).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(
            rationalize(-1.0 / 42.0, 100, 1e-12),
            Some(Ratio::new(-1, 42))
        );
        assert_eq!(
            rationalize(6.0 + 1e-13, 100, 1e-9),
            Some(Ratio::from_integer(6))
        );
        assert_eq!(rationalize(0.5, 10, 1e-12), Some(Ratio::new(1, 2)));
        assert_eq!(rationalize(std::f64::consts::PI, 10, 1e-9), None);
    }

    #[test]
    fn exact_parts_are_reduced() {
        let r = <Ratio<i64> as Scalar>::from_ratio(4, -8);
        assert_eq!(r.parts(), ("-1".to_string(), "2".to_string()));
        let b = <BigRational as Scalar>::from_ratio(3, 9);
        assert_eq!(b.parts(), ("1".to_string(), "3".to_string()));
    }
}
