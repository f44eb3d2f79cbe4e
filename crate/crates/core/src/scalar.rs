//! Numeric abstraction shared by every module.
//!
//! Game mechanics only need field arithmetic, ordering and `floor`, so the
//! same code runs on binary floats and on exact rationals. With [`Rational64`]
//! the productivity threshold `M = 1` is hit exactly, which makes the tie
//! case of the threshold rule unambiguous.

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Scalar type for money amounts, productivities and switch stages.
pub trait Scalar:
    Copy
    + Debug
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance used for equality tests (`0` for exact types).
    fn tolerance() -> Self;

    /// Largest integer not greater than `self`.
    fn floor(self) -> Self;

    /// `num / den`, exact where the type allows it.
    fn ratio(num: i64, den: i64) -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as scalar")
    }

    /// Lossy conversion used for I/O and reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Lossy conversion from `f64`, used when reading config files.
    fn from_f64_lossy(v: f64) -> Option<Self> {
        Self::from_f64(v)
    }

    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= Self::tolerance()
    }

    fn is_whole(self) -> bool {
        (self - self.floor()).abs() <= Self::tolerance()
            || (self.floor() + Self::one() - self).abs() <= Self::tolerance()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Clamp into `[lo, hi]`; callers guarantee `lo <= hi`.
    fn clamp_to(self, lo: Self, hi: Self) -> Self {
        self.max_of(lo).min_of(hi)
    }

    /// Hashable key identifying a value up to [`Scalar::tolerance`] scale.
    fn state_key(self) -> i64 {
        (self.to_f64_lossy() * 1e9).round() as i64
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }

    fn floor(self) -> Self {
        f64::floor(self)
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }

    fn floor(self) -> Self {
        f32::floor(self)
    }

    fn ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Scalar for Rational64 {
    fn tolerance() -> Self {
        Rational64::from_integer(0)
    }

    fn floor(self) -> Self {
        Rational64::floor(&self)
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn from_f64_lossy(v: f64) -> Option<Self> {
        // Continued-fraction approximation so 0.3 becomes 3/10, not the
        // binary expansion of the double.
        Rational64::approximate_float(v)
    }

    fn state_key(self) -> i64 {
        // Exact values: hash numerator and denominator together.
        let (n, d) = (*self.numer(), *self.denom());
        n.wrapping_mul(1_000_003).wrapping_add(d)
    }
}

/// Format a number with 12 significant digits, then print the shortest
/// representation that reads back as that rounded value.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    // Avoid "-0" in reports.
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    let mag = rounded.abs();
    if mag != 0.0 && !(1e-6..1e16).contains(&mag) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parses_decimal_literals_exactly() {
        assert_eq!(
            Rational64::from_f64_lossy(0.3).unwrap(),
            Rational64::new(3, 10)
        );
        assert_eq!(
            Rational64::from_f64_lossy(0.01).unwrap(),
            Rational64::new(1, 100)
        );
    }

    #[test]
    fn whole_numbers() {
        assert!(3.0f64.is_whole());
        assert!(2.9999999999999996f64.is_whole());
        assert!(!3.5f64.is_whole());
        assert!(Rational64::new(6, 2).is_whole());
        assert!(!Rational64::new(7, 2).is_whole());
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(168.99999999999997), "169");
        assert_eq!(format_sig12(0.30000000000000004), "0.3");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(4.95), "4.95");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(2.205276437761e-22), "2.20527643776e-22");
        assert_eq!(format_sig12(1e20), "1e20");
    }
}
