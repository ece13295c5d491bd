//! Modified Bessel function of the first kind `I_κ(x)` for real order and
//! positive argument.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::bigreal::{BigReal, MIN_PREC};
use crate::error::{Error, Result};

/// Argument above which the large-`x` expansion is tried first.
pub const X_SWITCH: f64 = 30.0;

const SERIES_CAP: usize = 1_000_000;

fn check(x: &BigReal, prec: u32, op: &'static str) -> Result<()> {
    if prec < MIN_PREC {
        return Err(Error::domain(op, format!("precision {prec} < {MIN_PREC}")));
    }
    if !x.is_positive() {
        return Err(Error::domain(op, "argument must be positive"));
    }
    Ok(())
}

/// `I_κ(x)`, choosing between the ascending series and the large-argument
/// expansion. The expansion is only used when its truncation error and the
/// neglected `e^{-x}` branch are both below `2^{-prec}`.
pub fn bessel_i(kappa: f64, x: &BigReal, prec: u32) -> Result<BigReal> {
    check(x, prec, "bessel_I")?;
    if x.to_f64() >= X_SWITCH {
        if let Some(value) = bessel_i_asymptotic(kappa, x, prec)? {
            return Ok(value);
        }
    }
    bessel_i_series(kappa, x, prec)
}

/// Ascending series `Σ (x/2)^{2k+κ} / (k! Γ(k+κ+1))`.
pub fn bessel_i_series(kappa: f64, x: &BigReal, prec: u32) -> Result<BigReal> {
    check(x, prec, "bessel_I")?;
    // I_{-m} = I_m for integer m
    let kappa = if kappa < 0.0 && kappa.fract() == 0.0 {
        -kappa
    } else {
        kappa
    };
    let xf = x.to_f64();
    // the largest term is about e^x; reserve bits for the partial-sum growth
    let work = prec + 32 + (xf.max(1.0).log2().ceil() as u32);
    let half = Float::with_val(work, &**x) / 2u32;
    let quarter_sq = Float::with_val(work, half.square_ref());
    let kappa_f = Float::with_val(work, kappa);
    let k0 = Float::with_val(work, &kappa_f + 1u32).gamma();
    let mut term = Float::with_val(work, (&half).pow(kappa)) / k0;
    let mut sum = term.clone();
    let mut k = 0usize;
    loop {
        k += 1;
        if k > SERIES_CAP {
            return Err(Error::NonConvergence {
                op: "bessel_I",
                iterations: SERIES_CAP,
            });
        }
        term *= &quarter_sq;
        term /= Float::with_val(work, &kappa_f + k as u32) * k as u32;
        sum += &term;
        let past_peak = (k as f64) > xf / 2.0 + kappa.abs() + 1.0;
        if past_peak && term.clone().abs() < Float::with_val(work, sum.abs_ref()) >> (prec + 16) {
            break;
        }
    }
    Ok(BigReal::new(Float::with_val(prec, &sum)))
}

/// `e^x/√(2πx) · Σ (−1)^k a_k(κ) x^{-k}` with
/// `a_k = Π_{j≤k} (4κ² − (2j−1)²) / (k! 8^k)`.
///
/// Returns `None` when the expansion cannot reach `2^{-prec}` relative
/// accuracy at this `x`.
pub fn bessel_i_asymptotic(kappa: f64, x: &BigReal, prec: u32) -> Result<Option<BigReal>> {
    check(x, prec, "bessel_I")?;
    let work = prec + 32;
    let xw = Float::with_val(work, &**x);
    // the reflected branch is of relative size e^{-2x}
    let reflected_bits = 2.0 * x.to_f64() / std::f64::consts::LN_2;
    if reflected_bits < f64::from(prec) + 2.0 {
        return Ok(None);
    }
    let four_k2 = Float::with_val(work, 4.0 * kappa * kappa);
    let mut term = Float::with_val(work, 1u32);
    let mut sum = term.clone();
    let mut prev_mag = Float::with_val(work, f64::INFINITY);
    let tol_shift = prec + 2;
    let mut k = 0u32;
    let certified = loop {
        k += 1;
        let odd = Float::with_val(work, 2 * k - 1);
        let factor = Float::with_val(work, &four_k2 - Float::with_val(work, odd.square_ref()));
        if factor.is_zero() {
            // half-integer order: the expansion terminates exactly
            break true;
        }
        term *= factor;
        term /= Float::with_val(work, &xw * (8 * k));
        term = -term;
        let mag = Float::with_val(work, term.abs_ref());
        if mag >= prev_mag {
            // terms started growing before reaching tolerance
            break false;
        }
        if mag < Float::with_val(work, sum.abs_ref()) >> tol_shift {
            break true;
        }
        sum += &term;
        prev_mag = mag;
        if k > 10_000 {
            break false;
        }
    };
    if !certified {
        return Ok(None);
    }
    let two_pi_x = Float::with_val(work, Constant::Pi) * 2u32 * &xw;
    let value = Float::with_val(work, xw.exp_ref()) / two_pi_x.sqrt() * sum;
    Ok(Some(BigReal::new(Float::with_val(prec, &value))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: &BigReal, b: &Float) -> f64 {
        (Float::with_val(128, &**a - b) / b).abs().to_f64()
    }

    #[test]
    fn half_integer_closed_forms() {
        // I_{-3/2}(x) = √(2/(πx)) (sinh x − cosh x / x)
        for xv in [0.5, 3.0, 12.0, 40.0] {
            let prec = 160;
            let x = BigReal::from_f64(xv, prec);
            let xf = Float::with_val(prec, xv);
            let pref =
                (Float::with_val(prec, 2u32) / (Float::with_val(prec, Constant::Pi) * &xf)).sqrt();
            let closed = pref
                * (Float::with_val(prec, xf.sinh_ref())
                    - Float::with_val(prec, xf.cosh_ref()) / &xf);
            let got = bessel_i(-1.5, &x, prec).unwrap();
            assert!(rel(&got, &closed) < 1e-40, "x = {xv}");
        }
    }

    #[test]
    fn integer_order_reflection() {
        let x = BigReal::from_f64(7.25, 128);
        let a = bessel_i_series(-3.0, &x, 128).unwrap();
        let b = bessel_i_series(3.0, &x, 128).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn branches_agree_above_switch() {
        for (kappa, xv) in [(-1.5, 30.0), (-2.5, 45.0), (-0.25, 60.0), (1.0 / 3.0, 80.0)] {
            let x = BigReal::from_f64(xv, 96);
            let series = bessel_i_series(kappa, &x, 96).unwrap();
            if let Some(asym) = bessel_i_asymptotic(kappa, &x, 64).unwrap() {
                assert!(rel(&asym, &series) < 1e-18, "κ = {kappa}, x = {xv}");
            }
        }
        // at 30 the half-integer expansion is exact up to e^{-60}
        let x = BigReal::from_f64(30.0, 96);
        let asym = bessel_i_asymptotic(-1.5, &x, 80)
            .unwrap()
            .expect("certified");
        let series = bessel_i_series(-1.5, &x, 96).unwrap();
        assert!(rel(&asym, &series) < 1e-20);
    }

    #[test]
    fn uncertifiable_expansion_is_refused() {
        let x = BigReal::from_f64(31.0, 256);
        assert!(bessel_i_asymptotic(-0.3, &x, 256).unwrap().is_none());
        assert!(bessel_i(-0.3, &x, 256).unwrap().is_positive());
    }
}
