//! Arbitrary-precision real numbers.
//!
//! [`BigReal`] is a thin newtype over an MPFR float. It carries its binary
//! working precision, renders in the decimal scientific style used by the
//! tables, and exposes the underlying [`rug::Float`] for arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use rug::float::Round;
use rug::ops::CompleteRound;
use rug::{Float, Integer, Rational};

/// Smallest working precision accepted by the numeric operations.
pub const MIN_PREC: u32 = 64;

#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn new(value: Float) -> Self {
        BigReal(value)
    }

    pub fn from_f64(value: f64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, value))
    }

    pub fn from_integer(value: &Integer, prec: u32) -> Self {
        BigReal(Float::with_val(prec, value))
    }

    pub fn from_rational(value: &Rational, prec: u32) -> Self {
        BigReal(Float::with_val(prec, value))
    }

    pub fn zero(prec: u32) -> Self {
        BigReal(Float::new(prec))
    }

    /// Parses a decimal string such as `1.25e-3`, rounding to nearest.
    pub fn parse_decimal(text: &str, prec: u32) -> Option<Self> {
        let parsed = Float::parse(text).ok()?;
        Some(BigReal(parsed.complete(prec)))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Exact conversion to a rational. Panics on non-finite values.
    pub fn to_rational(&self) -> Rational {
        self.0
            .to_rational()
            .expect("non-finite BigReal has no rational value")
    }

    /// Rounds to a new precision (to nearest).
    pub fn with_prec(&self, prec: u32) -> Self {
        BigReal(Float::with_val(prec, &self.0))
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }

    /// `|self / other - 1|`, evaluated at the larger of the two precisions.
    pub fn rel_diff(&self, other: &BigReal) -> Float {
        let prec = self.prec().max(other.prec());
        let ratio = Float::with_val(prec, &self.0 / &other.0);
        (ratio - 1u32).abs()
    }

    /// Base-2 logarithm of `|self / other - 1|` as an `f64`; `-inf` on exact
    /// agreement.
    pub fn rel_diff_log2(&self, other: &BigReal) -> f64 {
        let diff = self.rel_diff(other);
        if diff.is_zero() {
            f64::NEG_INFINITY
        } else {
            diff.log2().to_f64()
        }
    }

    /// Decimal scientific notation with `digits` significant digits, e.g.
    /// `1.6323380490e-17`.
    pub fn to_sci(&self, digits: usize) -> String {
        format_sci(&self.0, digits, Round::Nearest)
    }

    /// Fixed-point rendering with `decimals` digits after the point.
    pub fn to_fixed(&self, decimals: usize) -> String {
        format_fixed(&self.0, decimals, Round::Nearest)
    }

    /// [`to_sci`](Self::to_sci) with the digits cut off instead of rounded.
    pub fn to_sci_truncated(&self, digits: usize) -> String {
        format_sci(&self.0, digits, Round::Zero)
    }

    /// [`to_fixed`](Self::to_fixed) with the digits cut off instead of rounded.
    pub fn to_fixed_truncated(&self, decimals: usize) -> String {
        format_fixed(&self.0, decimals, Round::Zero)
    }
}

impl Deref for BigReal {
    type Target = Float;

    fn deref(&self) -> &Float {
        &self.0
    }
}

impl From<Float> for BigReal {
    fn from(value: Float) -> Self {
        BigReal(value)
    }
}

impl PartialEq<f64> for BigReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for BigReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(f.precision().unwrap_or(12)))
    }
}

pub(crate) fn format_sci(value: &Float, digits: usize, round: Round) -> String {
    if value.is_zero() {
        return format!("{:.*}e0", digits.saturating_sub(1), 0.0);
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let digits = digits.max(1);
    let (negative, mantissa, exp) = value.to_sign_string_exp_round(10, Some(digits), round);
    // value = 0.mantissa × 10^exp
    let exp = exp.expect("finite nonzero value has an exponent") - 1;
    let sign = if negative { "-" } else { "" };
    let (head, tail) = mantissa.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

/// `round` is `Nearest` (ties away from zero) or `Zero`.
pub(crate) fn format_fixed(value: &Float, decimals: usize, round: Round) -> String {
    let scale = Integer::from(Integer::u_pow_u(10, decimals as u32));
    let scaled = Float::with_val(value.prec() + 64, value * &scale);
    let rounded = match round {
        Round::Zero => scaled.trunc(),
        _ => scaled.round(),
    };
    let rounded = rounded
        .to_integer()
        .expect("fixed-point rendering of a non-finite value");
    let negative = rounded < 0;
    let digits = rounded.abs().to_string();
    let digits = if digits.len() <= decimals {
        format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - decimals);
    let sign = if negative { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_rendering_matches_table_style() {
        let x = BigReal::parse_decimal("1.63233804903014e-17", 128).unwrap();
        assert_eq!(x.to_sci(11), "1.6323380490e-17");
        let y = BigReal::from_f64(-2.5, 64);
        assert_eq!(y.to_sci(3), "-2.50e0");
        assert_eq!(BigReal::from_f64(1.0, 64).to_sci(1), "1e0");
    }

    #[test]
    fn truncated_rendering_cuts_toward_zero() {
        let g = BigReal::parse_decimal("6.577726378582071e-205", 128).unwrap();
        assert_eq!(g.to_sci(11), "6.5777263786e-205");
        assert_eq!(g.to_sci_truncated(11), "6.5777263785e-205");
        let c = BigReal::parse_decimal("-1.956876", 128).unwrap();
        assert_eq!(c.to_fixed(4), "-1.9569");
        assert_eq!(c.to_fixed_truncated(4), "-1.9568");
        assert_eq!(
            BigReal::parse_decimal("-0.00004", 128)
                .unwrap()
                .to_fixed_truncated(4),
            "0.0000"
        );
    }

    #[test]
    fn fixed_rendering_rounds_half_away() {
        let x = BigReal::parse_decimal("-2.019915", 128).unwrap();
        assert_eq!(x.to_fixed(4), "-2.0199");
        assert_eq!(BigReal::from_f64(0.07311, 64).to_fixed(4), "0.0731");
        assert_eq!(BigReal::from_f64(133.10916, 64).to_fixed(3), "133.109");
        assert_eq!(BigReal::from_f64(-0.00004, 64).to_fixed(4), "0.0000");
    }

    #[test]
    fn rel_diff_is_symmetric_enough() {
        let a = BigReal::from_f64(1.0, 128);
        let b = BigReal::from_f64(1.0 + 1e-10, 128);
        let d = a.rel_diff(&b).to_f64();
        assert!((d - 1e-10).abs() < 1e-15);
    }
}
