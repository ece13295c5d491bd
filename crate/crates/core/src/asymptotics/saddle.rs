//! Saddle point of the F(n) integrand and the two-term approximation
//!
//! ```text
//! F̂(n) = √(2π) L^{n+1} e^{L/4 − n/L + 3/4} (1 + b₁/n) / √((1+L)n − ¾L²),
//! ```
//!
//! where `L = L(n)` is the positive root of `n = L(πe^L + 3/4)`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};

use super::series;
use crate::bigreal::{BigReal, MIN_PREC};
use crate::error::{Error, Result};
use crate::zeta::{factorial_ratio, GammaSource, GammaValue};

const NEWTON_CAP: usize = 200;

/// Everything the saddle-point expansion needs at one `n`.
#[derive(Clone, Debug)]
pub struct SaddleData {
    pub n: f64,
    /// Root of `n = L(πe^L + 3/4)`.
    pub l: BigReal,
    /// Saddle location `a = e^L`.
    pub a: BigReal,
    /// `ε = 1/L`.
    pub eps: BigReal,
    /// `C = (ε + ε²)n − 3/4`, minus twice the quadratic log-coefficient.
    pub c: BigReal,
    /// `A₃, A₄, …` of `f((1+λ)a)/f(a) = e^{−Cλ²/2}(1 + A₃λ³ + A₄λ⁴ + …)`.
    pub a_coeffs: Vec<BigReal>,
    pub b1: BigReal,
}

impl SaddleData {
    pub fn new(n: f64, i_max: usize, prec: u32) -> Result<Self> {
        let l = solve_l(n, prec)?;
        let work = prec + 32;
        let lw = Float::with_val(work, &*l);
        let a = Float::with_val(work, lw.exp_ref());
        let eps = Float::with_val(work, 1u32 / &lw);
        let eps2 = Float::with_val(work, eps.square_ref());
        let c = Float::with_val(work, &eps + &eps2) * n - 0.75f64;
        let a_coeffs = saddle_coeffs(n, i_max, prec)?;
        let b1 = b1_of(&l);
        Ok(SaddleData {
            n,
            a: BigReal::new(Float::with_val(prec, &a)),
            eps: BigReal::new(Float::with_val(prec, &eps)),
            c: BigReal::new(Float::with_val(prec, &c)),
            l,
            a_coeffs,
            b1,
        })
    }

    /// `|n − L(πe^L + 3/4)|`.
    pub fn residual(&self) -> Float {
        defining_residual(self.n, self.l.as_float())
    }
}

fn defining_residual(n: f64, l: &Float) -> Float {
    let prec = l.prec() + 32;
    let pi = Float::with_val(prec, Constant::Pi);
    let inner = pi * Float::with_val(prec, l.exp_ref()) + 0.75f64;
    let value = Float::with_val(prec, l * &inner);
    (value - n).abs()
}

/// `φ(L) = L(πe^L + 3/4) − n` and `φ'(L)` in `f64`.
fn phi_f64(n: f64, l: f64) -> (f64, f64) {
    let e = l.exp();
    let pi = std::f64::consts::PI;
    (l * (pi * e + 0.75) - n, pi * e + 0.75 + pi * l * e)
}

/// Positive root of `n = L(πe^L + 3/4)`.
///
/// Newton from `L₀ = log(n / log n)` inside the bracket
/// `[10⁻³, max(20, log n)]`, falling back to bisection whenever a step
/// leaves the bracket; then Newton in MPFR at doubling precision.
pub fn solve_l(n: f64, prec: u32) -> Result<BigReal> {
    if prec < MIN_PREC {
        return Err(Error::domain(
            "solve_L",
            format!("precision {prec} < {MIN_PREC}"),
        ));
    }
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::domain(
            "solve_L",
            format!("n = {n} must be positive"),
        ));
    }
    let (mut lo, mut hi) = (1e-3f64, 20f64.max(n.ln()));
    while phi_f64(n, lo).0 > 0.0 {
        lo *= 0.5;
    }
    let mut l = if n > std::f64::consts::E {
        (n / n.ln()).ln().clamp(lo, hi)
    } else {
        0.5 * (lo + hi)
    };
    let mut converged = false;
    for _ in 0..NEWTON_CAP {
        let (value, slope) = phi_f64(n, l);
        if value > 0.0 {
            hi = hi.min(l);
        } else {
            lo = lo.max(l);
        }
        let mut next = l - value / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - l).abs() <= 4.0 * f64::EPSILON * l {
            l = next;
            converged = true;
            break;
        }
        l = next;
    }
    if !converged {
        return Err(Error::NonConvergence {
            op: "solve_L",
            iterations: NEWTON_CAP,
        });
    }

    // Newton doubles the number of correct bits per step.
    let target = prec + 32;
    let mut bits = 50u32;
    let mut root = Float::with_val(target, l);
    let mut steps = 0;
    while bits < target + 8 {
        bits = (2 * bits).min(target + 8);
        let work = bits.min(target) + 16;
        let x = Float::with_val(work, &root);
        let pi = Float::with_val(work, Constant::Pi);
        let e = Float::with_val(work, x.exp_ref());
        let pe = Float::with_val(work, &pi * &e);
        let value = Float::with_val(work, &pe + 0.75f64) * &x - n;
        let slope = Float::with_val(work, &pe + 0.75f64) + Float::with_val(work, &pe * &x);
        root = Float::with_val(target, &x - value / slope);
        steps += 1;
        if steps > NEWTON_CAP {
            return Err(Error::NonConvergence {
                op: "solve_L",
                iterations: NEWTON_CAP,
            });
        }
    }
    // one more full-precision step
    let pi = Float::with_val(target, Constant::Pi);
    let pe = Float::with_val(target, &pi * Float::with_val(target, root.exp_ref()));
    let value = Float::with_val(target, &pe + 0.75f64) * &root - n;
    let slope = Float::with_val(target, &pe + 0.75f64) + Float::with_val(target, &pe * &root);
    root -= value / slope;

    let l = Float::with_val(prec, &root);
    let tol = Float::with_val(prec, n) >> (prec - 8);
    let residual = defining_residual(n, &l);
    if residual >= tol {
        return Err(Error::NonConvergence {
            op: "solve_L",
            iterations: steps,
        });
    }
    Ok(BigReal::new(l))
}

/// `b₁ = (2L⁴ + 9L³ + 16L² + 6L + 2) / (24(L+1)³)`.
pub fn b1_of(l: &BigReal) -> BigReal {
    let prec = l.prec();
    let work = prec + 16;
    let x = Float::with_val(work, &**l);
    // Horner
    let mut num = Float::with_val(work, 2u32);
    for c in [9u32, 16, 6, 2] {
        num = num * &x + c;
    }
    let den = Float::with_val(work, &x + 1u32).pow(3u32) * 24u32;
    BigReal::new(Float::with_val(prec, num / den))
}

/// Two-term saddle-point approximation F̂(n) of F(n).
pub fn f_hat(n: f64, prec: u32) -> Result<BigReal> {
    let work = prec + 32;
    let l = solve_l(n, work)?;
    let l = l.as_float();
    let b1 = b1_of(&BigReal::new(l.clone()));
    let two_pi = Float::with_val(work, Constant::Pi) * 2u32;
    let exponent = Float::with_val(work, l / 4u32) - Float::with_val(work, n / l) + 0.75f64;
    let power = Float::with_val(work, l.ln_ref()) * (n + 1.0);
    let correction = Float::with_val(work, &*b1 / n) + 1u32;
    let radicand =
        Float::with_val(work, l + 1u32) * n - Float::with_val(work, l.square_ref()) * 0.75f64;
    if radicand <= 0u32 {
        return Err(Error::domain(
            "F_hat",
            format!("(1+L)n − ¾L² ≤ 0 at n = {n}"),
        ));
    }
    let value = two_pi.sqrt() * (power + exponent).exp() * correction / radicand.sqrt();
    Ok(BigReal::new(Float::with_val(prec, &value)))
}

/// `γ̂(n) = n!/(2n)! · 2^{6−2n} · C(2n,2) · F̂(2n−2)`.
pub fn gamma_hat(n: u64, prec: u32) -> Result<GammaValue> {
    if n < 2 {
        return Err(Error::domain("gamma_hat", format!("n = {n} < 2")));
    }
    let work = prec + 32;
    let fh = f_hat((2 * n - 2) as f64, work)?;
    let binom = Integer::from(n) * (2 * n - 1); // C(2n,2) = n(2n−1)
    let value =
        (Float::with_val(work, &*fh * &binom) * factorial_ratio(n, work)) << 6u32 >> (2 * n as u32);
    Ok(GammaValue {
        n,
        value: BigReal::new(Float::with_val(prec, &value)),
        source: GammaSource::Asymptotic,
        cancellation_bits: 0.0,
    })
}

/// Coefficients `φ₀ … φ_order` of `log f((1+λ)a) − log f(a)` in powers of
/// `λ`, where `f(t) = (log t)^n t^{-3/4} e^{-πt}` and `a = e^{L(n)}`.
///
/// `φ₀ = 0`, `φ₁` vanishes up to rounding, `φ₂ = −C/2`.
pub fn log_expansion(n: f64, order: usize, prec: u32) -> Result<Vec<BigReal>> {
    let work = prec + 32;
    let l = solve_l(n, work)?;
    let l = l.as_float();
    let len = order + 1;
    // log(1+λ)
    let mut log_lambda = vec![Float::new(work); len];
    for (k, c) in log_lambda.iter_mut().enumerate().skip(1) {
        *c = Float::with_val(work, if k % 2 == 1 { 1i32 } else { -1 }) / k as u32;
    }
    // n·log(1 + log(1+λ)/L)
    let scaled: Vec<Float> = log_lambda
        .iter()
        .map(|c| Float::with_val(work, c / l))
        .collect();
    let mut phi: Vec<Float> = series::log1p(&scaled, len, work)
        .into_iter()
        .map(|c| c * n)
        .collect();
    // − (3/4)·log(1+λ) − πaλ
    for (p, c) in phi.iter_mut().zip(&log_lambda) {
        *p -= Float::with_val(work, c * 0.75f64);
    }
    if len > 1 {
        let pi_a = Float::with_val(work, Constant::Pi) * Float::with_val(work, l.exp_ref());
        phi[1] -= pi_a;
    }
    Ok(phi
        .into_iter()
        .map(|c| BigReal::new(Float::with_val(prec, &c)))
        .collect())
}

/// `A₃ … A_{i_max}` from `exp(Σ_{k≥3} φ_k λ^k) = 1 + Σ A_i λ^i`.
pub fn saddle_coeffs(n: f64, i_max: usize, prec: u32) -> Result<Vec<BigReal>> {
    if i_max < 3 {
        return Ok(Vec::new());
    }
    let work = prec + 32;
    let phi = log_expansion(n, i_max, work)?;
    let mut tail: Vec<Float> = phi.iter().map(|c| Float::with_val(work, &**c)).collect();
    for c in tail.iter_mut().take(3) {
        *c = Float::new(work);
    }
    let expanded = series::exp(&tail, i_max + 1, work);
    // the λ¹ and λ² coefficients of the exponential vanish identically
    Ok(expanded[3..]
        .iter()
        .map(|c| BigReal::new(Float::with_val(prec, c)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn residual_small_at_twenty() {
        let l = solve_l(20.0, 128).unwrap();
        let residual = defining_residual(20.0, l.as_float());
        assert!(
            residual < Float::with_val(64, 20u32) >> 120u32,
            "{residual}"
        );
    }

    #[test]
    fn matches_bisection_oracle_at_hundred() {
        let prec = 160;
        let l = solve_l(100.0, prec).unwrap();
        // plain bisection on [0.1, 20]
        let pi = Float::with_val(prec, Constant::Pi);
        let phi = |x: &Float| {
            let e = Float::with_val(prec, x.exp_ref());
            (Float::with_val(prec, &pi * &e) + 0.75f64) * x - 100u32
        };
        let mut lo = Float::with_val(prec, 0.1);
        let mut hi = Float::with_val(prec, 20);
        for _ in 0..prec {
            let mid = Float::with_val(prec, &lo + &hi) / 2u32;
            if phi(&mid) > 0u32 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let rel = (Float::with_val(prec, &*l - &lo) / &lo).abs();
        assert!(rel < 1e-30, "{rel}");
    }

    #[test]
    fn l_tracks_log_n_over_log_n() {
        let ratios: Vec<f64> = [1e2, 1e4, 1e6]
            .iter()
            .map(|&n: &f64| solve_l(n, 64).unwrap().to_f64() / (n / n.ln()).ln())
            .collect();
        assert!(
            ratios
                .windows(2)
                .all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()),
            "{ratios:?}"
        );
    }

    #[test]
    fn b1_closed_values() {
        let one = BigReal::from_f64(1.0, 128);
        let expected = Float::with_val(128, 35) / 192u32;
        assert_eq!(*b1_of(&one), expected);
        let big = BigReal::from_f64(1e12, 128);
        let ratio = b1_of(&big).to_f64() / 1e12;
        assert!((ratio - 1.0 / 12.0).abs() < 1e-10);
    }

    #[test]
    fn b1_agrees_with_rational_evaluation() {
        let l = solve_l(18.0, 200).unwrap();
        let q = l.to_rational();
        let num = Rational::from(2) * q.clone().pow(4u32)
            + Rational::from(9) * q.clone().pow(3u32)
            + Rational::from(16) * q.clone().pow(2u32)
            + Rational::from(6) * q.clone()
            + 2u32;
        let den = Rational::from(24) * (q + 1u32).pow(3u32);
        let exact = Float::with_val(200, &(num / den));
        let rel = (Float::with_val(200, &*b1_of(&l) - &exact) / &exact).abs();
        assert!(rel < Float::with_val(64, 1u32) >> 190u32, "{rel}");
    }

    #[test]
    fn f_hat_increases() {
        let values: Vec<BigReal> = [10.0, 18.0, 40.0, 100.0, 400.0]
            .iter()
            .map(|&n| f_hat(n, 128).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn gamma_hat_matches_table() {
        assert_eq!(
            gamma_hat(10, 128).unwrap().value.to_sci(11),
            "1.6313374394e-17"
        );
        assert_eq!(
            gamma_hat(100, 128).unwrap().value.to_sci(11),
            "6.5776471904e-205"
        );
        assert!(matches!(gamma_hat(1, 128), Err(Error::Domain { .. })));
    }

    #[test]
    fn quadratic_coefficient_is_minus_half_c() {
        let data = SaddleData::new(50.0, 6, 160).unwrap();
        let phi = log_expansion(50.0, 4, 160).unwrap();
        let expected = Float::with_val(160, &*data.c) / -2i32;
        let rel = (Float::with_val(160, &*phi[2] - &expected) / &expected).abs();
        assert!(rel < 1e-40, "{rel}");
        assert!(Float::with_val(160, phi[1].abs_ref()) < 1e-35);
        assert!(data.c.is_positive() && data.l.is_positive());
    }
}
