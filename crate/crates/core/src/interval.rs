//! Closed intervals with outward-rounded MPFR endpoints.
//!
//! Every operation rounds the lower endpoint toward −∞ and the upper one
//! toward +∞, so the true result of the exact operation on any points of
//! the operands lies inside the returned interval.

use std::fmt;

use rug::float::Round;
use rug::Float;

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl Interval {
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The degenerate interval containing exactly `x` (stored at `prec`
    /// bits, widened outward if `x` does not fit).
    pub fn point(x: &Float, prec: u32) -> Self {
        let (lo, _) = Float::with_val_round(prec, x, Round::Down);
        let (hi, _) = Float::with_val_round(prec, x, Round::Up);
        Interval { lo, hi }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let (lo, _) = Float::with_val_round(prec, v, Round::Down);
        let (hi, _) = Float::with_val_round(prec, v, Round::Up);
        Interval { lo, hi }
    }

    pub fn from_integer(v: &rug::Integer, prec: u32) -> Self {
        let (lo, _) = Float::with_val_round(prec, v, Round::Down);
        let (hi, _) = Float::with_val_round(prec, v, Round::Up);
        Interval { lo, hi }
    }

    /// `x · [1 − rel, 1 + rel]` for a nonnegative relative radius `rel`.
    pub fn with_rel_radius(x: &Float, rel: &Float, prec: u32) -> Self {
        let center = Interval::point(x, prec);
        let one_minus = {
            let (v, _) = Float::with_val_round(prec, 1u32 - rel, Round::Down);
            v
        };
        let one_plus = {
            let (v, _) = Float::with_val_round(prec, 1u32 + rel, Round::Up);
            v
        };
        center.mul(&Interval::new(one_minus, one_plus))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn mid(&self) -> Float {
        let prec = self.prec() + 1;
        Float::with_val(prec, &self.lo + &self.hi) / 2u32
    }

    pub fn width(&self) -> Float {
        let (w, _) = Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up);
        w
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_sign_positive() && !self.lo.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_sign_negative() && !self.hi.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Float::with_val(self.hi.prec(), -&self.hi),
            hi: Float::with_val(self.lo.prec(), -&self.lo),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let prec = self.prec().max(other.prec());
        let (lo, _) = Float::with_val_round(prec, &self.lo + &other.lo, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &self.hi + &other.hi, Round::Up);
        Interval { lo, hi }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let prec = self.prec().max(other.prec());
        let (lo, _) = Float::with_val_round(prec, &self.lo - &other.hi, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &self.hi - &other.lo, Round::Up);
        Interval { lo, hi }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let prec = self.prec().max(other.prec());
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let (down, _) = Float::with_val_round(prec, a * b, Round::Down);
            let (up, _) = Float::with_val_round(prec, a * b, Round::Up);
            if lo.as_ref().is_none_or(|l| down < *l) {
                lo = Some(down);
            }
            if hi.as_ref().is_none_or(|h| up > *h) {
                hi = Some(up);
            }
        }
        Interval {
            lo: lo.expect("four products"),
            hi: hi.expect("four products"),
        }
    }

    pub fn mul_i64(&self, k: i64) -> Interval {
        self.mul(&Interval::from_i64(k, self.prec()))
    }

    /// Division; `None` when the divisor contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let prec = self.prec().max(other.prec());
        let (rlo, _) = Float::with_val_round(prec, 1u32 / &other.hi, Round::Down);
        let (rhi, _) = Float::with_val_round(prec, 1u32 / &other.lo, Round::Up);
        Some(self.mul(&Interval { lo: rlo, hi: rhi }))
    }

    /// Smallest absolute value over the interval.
    pub fn mag_lower(&self) -> Float {
        if self.contains_zero() {
            Float::new(self.prec())
        } else if self.is_positive() {
            self.lo.clone()
        } else {
            Float::with_val(self.prec(), -&self.hi)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            crate::bigreal::format_sci(&self.lo, 12, rug::float::Round::Nearest),
            crate::bigreal::format_sci(&self.hi, 12, rug::float::Round::Nearest)
        )
    }
}
