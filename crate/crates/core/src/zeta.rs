//! The completed zeta function at its point of symmetry.
//!
//! Everything here reduces to the integral
//!
//! ```text
//! F(n) = ∫_1^∞ (log t)^n t^{-3/4} θ₀(t) dt,    θ₀(t) = Σ_{k≥1} e^{-πk²t},
//! ```
//!
//! which is evaluated after the substitution `u = log t` with tanh-sinh
//! quadrature on the window where the integrand is not negligible. From it,
//!
//! ```text
//! Λ^{(n)}(1/2) = -2^{n+2} n! + F(n) / 2^{n-1}            (n even)
//! γ(n) = n!/(2n)! · (32·C(2n,2)·F(2n-2) − F(2n)) / 2^{2n-1}.
//! ```

use std::f64::consts::{LN_2, PI};

use rug::float::Constant;
use rug::{Float, Integer};

use crate::bigreal::{BigReal, MIN_PREC};
use crate::error::{Error, Result};
use crate::quadrature::TanhSinh;

/// Where a γ value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaSource {
    ExactIntegral,
    Asymptotic,
}

impl GammaSource {
    pub fn tag(self) -> &'static str {
        match self {
            GammaSource::ExactIntegral => "exact",
            GammaSource::Asymptotic => "asym",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "exact" => Some(GammaSource::ExactIntegral),
            "asym" => Some(GammaSource::Asymptotic),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GammaValue {
    pub n: u64,
    pub value: BigReal,
    pub source: GammaSource,
    /// `log2 |t₁ / (t₁ − t₂)|` for the two terms of the F-combination; zero
    /// for asymptotic values.
    pub cancellation_bits: f64,
}

/// Knobs for [`f_integral_with`].
#[derive(Clone, Debug)]
pub struct FConfig {
    /// Bits carried beyond the requested precision inside the quadrature.
    pub guard_bits: u32,
    /// Additional halvings of the quadrature step after convergence.
    pub extra_levels: u32,
}

impl Default for FConfig {
    fn default() -> Self {
        FConfig {
            guard_bits: 32,
            extra_levels: 0,
        }
    }
}

fn check_prec(op: &'static str, prec: u32) -> Result<()> {
    if prec < MIN_PREC {
        return Err(Error::domain(
            op,
            format!("precision {prec} is below the minimum of {MIN_PREC} bits"),
        ));
    }
    Ok(())
}

/// Number of θ₀ terms needed at `t` so that the omitted tail is below
/// `2^-bits` relative to the first term.
fn theta_terms(t: f64, bits: u32) -> u64 {
    // stop at the first k with π(k² − 1)t > bits·ln 2
    let bound = bits as f64 * LN_2 / (PI * t);
    let mut k = 1u64;
    while ((k * k - 1) as f64) <= bound {
        k += 1;
    }
    k - 1
}

/// `θ₀(t) = Σ_{k≥1} e^{-πk²t}` for `t ≥ 1`.
///
/// Terms are summed until `π(k²−1)t > (prec+16)·ln 2`; for `t ≥ 1` the
/// remaining tail is below `2·e^{-πK²t}`, far under `2^-prec` relative.
pub fn theta0(t: &BigReal, prec: u32) -> Result<BigReal> {
    check_prec("theta0", prec)?;
    if **t < 1u32 {
        return Err(Error::domain("theta0", format!("t = {t} < 1")));
    }
    let work = prec + 16;
    let t = Float::with_val(work, &**t);
    let pi_t = Float::with_val(work, Constant::Pi) * &t;
    let terms = theta_terms(t.to_f64(), prec + 16);
    let mut sum = Float::new(work);
    for k in 1..=terms {
        let exponent = Float::with_val(work, &pi_t * (k * k));
        sum += (-exponent).exp();
    }
    Ok(BigReal::new(Float::with_val(prec, &sum)))
}

/// `log θ₀(e^u)` in `f64`, accurate enough to locate the integration window.
fn log_theta_e_u(u: f64) -> f64 {
    let t = u.exp();
    let mut rest = 0.0;
    for k in 2..6u32 {
        rest += (-PI * ((k * k - 1) as f64) * t).exp();
    }
    -PI * t + rest.ln_1p()
}

/// `log` of the integrand `u^n e^{u/4} θ₀(e^u)` in `f64`.
fn log_integrand(n: f64, u: f64) -> f64 {
    let power = if n == 0.0 { 0.0 } else { n * u.ln() };
    power + u / 4.0 + log_theta_e_u(u)
}

/// Location of the maximum of the integrand on `u ≥ 0`.
fn integrand_peak(n: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    // h'(u) = n/u + 1/4 − π e^u (θ₀ corrections move the peak negligibly)
    let slope = |u: f64| n / u + 0.25 - PI * u.exp();
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0);
    while slope(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Integration window `[u_lo, u_hi]` outside of which the integrand is
/// below `e^{-drop}` times its peak, plus the log-peak value.
fn integration_window(n: f64, drop: f64) -> (f64, f64, f64) {
    let peak = integrand_peak(n);
    let h_peak = log_integrand(n, peak);
    let below = |u: f64| h_peak - log_integrand(n, u) > drop;

    let mut step = 1.0;
    while !below(peak + step) {
        step *= 2.0;
    }
    let (mut lo, mut hi) = (peak, peak + step);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let u_hi = hi;

    let u_lo = if n == 0.0 || peak == 0.0 {
        0.0
    } else {
        let mut probe = peak;
        let mut found = None;
        for _ in 0..60 {
            probe *= 0.5;
            if below(probe) {
                found = Some(probe);
                break;
            }
        }
        match found {
            None => 0.0,
            Some(far) => {
                let (mut lo, mut hi) = (far, 2.0 * far);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if below(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        }
    };
    (u_lo, u_hi, h_peak)
}

/// `F(n) = ∫_1^∞ (log t)^n t^{-3/4} θ₀(t) dt` for real `n ≥ 0`, with
/// relative error below `2^(16 − prec)`.
pub fn f_integral(n: f64, prec: u32) -> Result<BigReal> {
    f_integral_with(n, prec, &FConfig::default())
}

pub fn f_integral_with(n: f64, prec: u32, config: &FConfig) -> Result<BigReal> {
    check_prec("F_exact", prec)?;
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::domain(
            "F_exact",
            format!("n = {n} must be a finite real ≥ 0"),
        ));
    }
    let work = prec + config.guard_bits;
    let drop = (work as f64 + 16.0) * LN_2;
    let (u_lo, u_hi, h_peak) = integration_window(n, drop);

    let n_f = Float::with_val(work, n);
    let shift = Float::with_val(work, h_peak);
    let pi = Float::with_val(work, Constant::Pi);
    // beyond this t the k ≥ 2 terms of θ₀ are invisible at `work` bits
    let correction_cutoff = work as f64 * LN_2 / (3.0 * PI) + 1.0;

    let integrand = |u: &Float| -> Float {
        if u.is_zero() {
            return if n == 0.0 {
                // u^0 e^0 θ₀(1) e^{-shift}
                let theta = theta_sum(&Float::with_val(work, 1u32), &pi, work);
                Float::with_val(work, theta.ln() - &shift).exp()
            } else {
                Float::new(work)
            };
        }
        let t = Float::with_val(work, u.exp_ref());
        let pi_t = Float::with_val(work, &pi * &t);
        let mut log_value = Float::with_val(work, u / 4u32) - &pi_t - &shift;
        if n != 0.0 {
            log_value += Float::with_val(work, u.ln_ref()) * &n_f;
        }
        let mut value = log_value.exp();
        if t.to_f64() < correction_cutoff {
            value *= theta_correction(&pi_t, work);
        }
        value
    };

    let quad = TanhSinh {
        prec: work,
        tol_bits: prec + 8,
        min_level: 3,
        max_level: 14,
        extra_levels: config.extra_levels,
    };
    let a = Float::with_val(work, u_lo);
    let b = Float::with_val(work, u_hi);
    let result = quad
        .integrate(integrand, &a, &b)
        .map_err(|e| Error::precision("F_exact", format!("n = {n}: {e}")))?;
    let value = result.value * shift.exp();
    Ok(BigReal::new(Float::with_val(prec, &value)))
}

/// `θ₀(t) / e^{-πt} = 1 + Σ_{k≥2} e^{-π(k²−1)t}` given `πt`.
fn theta_correction(pi_t: &Float, prec: u32) -> Float {
    let q = Float::with_val(prec, -pi_t).exp();
    let q2 = Float::with_val(prec, q.square_ref());
    let tiny = Float::with_val(prec, 1u32) >> (prec + 8);
    // q^{k²−1} = q^{(k−1)²−1} · q^{2k−1}
    let mut odd = Float::with_val(prec, &q2 * &q); // q^{2k−1} for k = 2
    let mut term = odd.clone(); // q^3
    let mut sum = Float::with_val(prec, 1u32);
    while term > tiny {
        sum += &term;
        odd *= &q2;
        term *= &odd;
    }
    sum
}

fn theta_sum(t: &Float, pi: &Float, prec: u32) -> Float {
    let pi_t = Float::with_val(prec, pi * t);
    Float::with_val(prec, -&pi_t).exp() * theta_correction(&pi_t, prec)
}

/// `Λ^{(n)}(1/2) = −2^{n+2}·n! + F(n)/2^{n−1}` for even `n`.
///
/// Odd orders vanish identically and are refused here. `n = 0` is accepted
/// and yields `Λ(1/2)`.
pub fn lambda_deriv(n: u64, prec: u32) -> Result<BigReal> {
    check_prec("lambda_deriv", prec)?;
    if n % 2 == 1 {
        return Err(Error::domain(
            "lambda_deriv",
            format!("odd order {n}: Λ^(n)(1/2) = 0 for odd n"),
        ));
    }
    let work = prec + 64;
    let f = f_integral(n as f64, work)?;
    let pole_part = Integer::from(Integer::factorial(n as u32)) << (n as u32 + 2);
    // F(n)/2^{n-1} = F(n)·2^{1-n}
    let scaled = Float::with_val(work, &*f) << 1u32 >> (n as u32);
    let value = scaled - pole_part;
    Ok(BigReal::new(Float::with_val(prec, &value)))
}

/// `n!/(2n)!` as a float.
pub(crate) fn factorial_ratio(n: u64, prec: u32) -> Float {
    let num = Integer::from(Integer::factorial(n as u32));
    let den = Integer::from(Integer::factorial(2 * n as u32));
    Float::with_val(prec, &num) / Float::with_val(prec, &den)
}

/// Escalation ladder of guard bits for the F-combination in γ(n).
pub const GAMMA_GUARD_LADDER: [u32; 4] = [64, 128, 256, 512];

/// γ(n) with `F` supplied by the caller, typically a memoizing wrapper
/// around [`f_integral`]. `f(m, w)` must return `F(m)` at `w` bits.
pub fn gamma_exact_with<Fq>(n: u64, prec: u32, mut f: Fq) -> Result<GammaValue>
where
    Fq: FnMut(u64, u32) -> Result<BigReal>,
{
    check_prec("gamma_exact", prec)?;
    if n == 0 {
        return Err(Error::domain("gamma_exact", "n must be ≥ 1"));
    }
    for guard in GAMMA_GUARD_LADDER {
        let work = prec + guard;
        let f_lower = f(2 * n - 2, work)?;
        let f_upper = f(2 * n, work)?;
        // 32·C(2n,2) = 16·2n(2n−1)
        let weight = Integer::from(16u32) * (2 * n) * (2 * n - 1);
        let t1 = Float::with_val(work, &*f_lower * &weight);
        let t2 = Float::with_val(work, &*f_upper);
        let diff = Float::with_val(work, &t1 - &t2);
        if diff.is_zero() {
            continue;
        }
        let gap = Float::with_val(64, &t1 / &diff)
            .abs()
            .log2()
            .to_f64()
            .max(0.0);
        if !diff.is_sign_positive() || gap + 16.0 > guard as f64 {
            continue;
        }
        let value = (diff * factorial_ratio(n, work)) >> (2 * n as u32 - 1);
        return Ok(GammaValue {
            n,
            value: BigReal::new(Float::with_val(prec, &value)),
            source: GammaSource::ExactIntegral,
            cancellation_bits: gap,
        });
    }
    Err(Error::precision(
        "gamma_exact",
        format!("n = {n}: cancellation not covered by the guard-bit ladder"),
    ))
}

/// γ(n) from two quadratures for `F(2n−2)` and `F(2n)`.
pub fn gamma_exact(n: u64, prec: u32) -> Result<GammaValue> {
    gamma_exact_with(n, prec, |m, w| f_integral(m as f64, w))
}
