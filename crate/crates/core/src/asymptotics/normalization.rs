//! Normalizing sequences `A(n)`, `δ(n)` with
//! `log(α(n+j)/α(n)) = A(n)j − δ(n)²j² + o(δ(n)^d)`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use super::saddle::solve_l;
use crate::bigreal::{BigReal, MIN_PREC};
use crate::error::{Error, Result};
use crate::zeta::gamma_exact;

/// Which closed form supplies `A(n)` and `δ(n)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Taylor coefficients of Λ at 1/2.
    Zeta,
    /// Partition numbers `p(n)`, second-order formulas.
    Partition,
    /// Coefficients of a weakly holomorphic modular form with a pole of
    /// order `m` at infinity and weight `k`.
    Modular { m: Rational, k: Rational, order: u8 },
    /// Fitted from three consecutive terms of the sequence itself.
    Empirical,
}

/// A family together with the first shift where its formulas are valid.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymParams {
    pub family: Family,
    pub n_min: u64,
}

impl AsymParams {
    pub fn zeta() -> Self {
        AsymParams {
            family: Family::Zeta,
            n_min: 7,
        }
    }

    pub fn partition() -> Self {
        AsymParams {
            family: Family::Partition,
            n_min: 3,
        }
    }

    pub fn empirical() -> Self {
        AsymParams {
            family: Family::Empirical,
            n_min: 0,
        }
    }

    /// Modular family; `n_min` is the first `n ≥ 1` with `δ(n)² > 0`.
    pub fn modular(m: Rational, k: Rational, order: u8) -> Result<Self> {
        if m <= 0 {
            return Err(Error::domain(
                "modular_A_delta",
                format!("need m > 0, got m = {m}"),
            ));
        }
        if !(1..=2).contains(&order) {
            return Err(Error::domain(
                "modular_A_delta",
                format!("order {order} not in 1..=2"),
            ));
        }
        let mut n = 1u64;
        while modular_a_delta(n, &m, &k, order, MIN_PREC).is_err() {
            n += 1;
            if n > 1_000_000 {
                return Err(Error::domain(
                    "modular_A_delta",
                    "δ(n)² never becomes positive",
                ));
            }
        }
        Ok(AsymParams {
            family: Family::Modular { m, k, order },
            n_min: n,
        })
    }

    /// `(A(n), δ(n))` from the family's closed form.
    pub fn a_delta(&self, n: u64, prec: u32) -> Result<(BigReal, BigReal)> {
        match &self.family {
            Family::Zeta => zeta_a_delta(n, prec),
            Family::Partition => modular_a_delta(
                n,
                &Rational::from((1, 24)),
                &Rational::from((-1, 2)),
                2,
                prec,
            ),
            Family::Modular { m, k, order } => modular_a_delta(n, m, k, *order, prec),
            Family::Empirical => Err(Error::domain(
                "A_delta",
                "empirical normalization needs sequence values; use empirical_a_delta",
            )),
        }
    }

    pub fn label(&self) -> String {
        match &self.family {
            Family::Zeta => "zeta".into(),
            Family::Partition => "partition".into(),
            Family::Modular { m, k, order } => format!("modular(m={m}, k={k}, order={order})"),
            Family::Empirical => "empirical".into(),
        }
    }
}

/// `A(n)`, `δ(n)` for γ(n), with `n̂ = 2n−2`, `L = L(n̂)` and
/// `K = (1/L + 1/L²)n̂ − 3/4`:
///
/// ```text
/// δ(n)² = 1/n̂ − 2/(L²K)
/// A(n)  = log(nL²/(4n̂²)) + (L−1)/(L²K) + n̂(L+2)/(L⁴K²)
/// ```
pub fn zeta_a_delta(n: u64, prec: u32) -> Result<(BigReal, BigReal)> {
    if n < 7 {
        return Err(Error::domain(
            "zeta_A_delta",
            format!("δ({n}) is not real; need n ≥ 7"),
        ));
    }
    let work = prec + 32;
    let nh = 2 * n - 2;
    let l = Float::with_val(work, &*solve_l(nh as f64, work)?);
    let l2 = Float::with_val(work, l.square_ref());
    let inv_l = Float::with_val(work, 1u32 / &l);
    let inv_l2 = Float::with_val(work, 1u32 / &l2);
    let k = Float::with_val(work, &inv_l + &inv_l2) * nh - 0.75f64;
    let l2k = Float::with_val(work, &l2 * &k);
    let delta2 = Float::with_val(work, 1u32 / Float::with_val(work, nh))
        - Float::with_val(work, 2u32 / &l2k);
    if delta2 <= 0u32 {
        return Err(Error::domain("zeta_A_delta", format!("δ({n})² ≤ 0")));
    }
    let nhf = Float::with_val(work, nh);
    let log_arg = Float::with_val(work, &l2 * n) / (Float::with_val(work, nhf.square_ref()) * 4u32);
    let l4k2 = Float::with_val(work, l2k.square_ref());
    let a = log_arg.ln()
        + Float::with_val(work, &l - 1u32) / &l2k
        + Float::with_val(work, &l + 2u32) * &nhf / l4k2;
    Ok((
        BigReal::new(Float::with_val(prec, &a)),
        BigReal::new(Float::with_val(prec, delta2.sqrt())),
    ))
}

/// `A(n)`, `δ(n)` for the coefficients of a modular form with pole order `m`
/// and weight `k`.
///
/// Order 1 keeps the leading terms `A = 2π√(m/n)`,
/// `δ = (π/2)^{1/2} m^{1/4} n^{−3/4}`. Order 2 adds the `1/N` corrections
/// coming from the Bessel asymptotics, with `N = n − m`:
///
/// ```text
/// A  = 2π√(m/N) + (2k−3)/(4N)
/// δ² = (π/2)√m N^{−3/2} + (2k−3)/(8N²)
/// ```
///
/// For `m = 1/24`, `k = −1/2` this is `A = 2π/√(24n−1) − 24/(24n−1)`,
/// `δ² = 12π/(24n−1)^{3/2} − 288/(24n−1)²`.
pub fn modular_a_delta(
    n: u64,
    m: &Rational,
    k: &Rational,
    order: u8,
    prec: u32,
) -> Result<(BigReal, BigReal)> {
    if prec < MIN_PREC {
        return Err(Error::domain(
            "modular_A_delta",
            format!("precision {prec} < {MIN_PREC}"),
        ));
    }
    let work = prec + 32;
    let pi = Float::with_val(work, Constant::Pi);
    let mf = Float::with_val(work, m);
    let (a, delta2) = match order {
        1 => {
            let nf = Float::with_val(work, n);
            if n == 0 {
                return Err(Error::domain("modular_A_delta", "n must be positive"));
            }
            let a = Float::with_val(work, &pi * 2u32) * Float::with_val(work, &mf / &nf).sqrt();
            let delta2 = Float::with_val(work, &pi / 2u32)
                * Float::with_val(work, mf.sqrt_ref())
                * Float::with_val(work, nf.pow(-1.5f64));
            (a, delta2)
        }
        2 => {
            let big_n = Float::with_val(work, &(Rational::from(n) - m));
            if big_n <= 0u32 {
                return Err(Error::domain("modular_A_delta", format!("n = {n} ≤ m")));
            }
            let shift = Float::with_val(work, &(Rational::from(2) * k - 3u32));
            let a = Float::with_val(work, &pi * 2u32) * Float::with_val(work, &mf / &big_n).sqrt()
                + Float::with_val(work, &shift / &big_n) / 4u32;
            let delta2 = Float::with_val(work, &pi / 2u32)
                * Float::with_val(work, mf.sqrt_ref())
                * Float::with_val(work, (&big_n).pow(-1.5f64))
                + Float::with_val(work, &shift / Float::with_val(work, big_n.square_ref())) / 8u32;
            (a, delta2)
        }
        _ => {
            return Err(Error::domain(
                "modular_A_delta",
                format!("order {order} not in 1..=2"),
            ));
        }
    };
    if delta2 <= 0u32 {
        return Err(Error::domain("modular_A_delta", format!("δ({n})² ≤ 0")));
    }
    Ok((
        BigReal::new(Float::with_val(prec, &a)),
        BigReal::new(Float::with_val(prec, delta2.sqrt())),
    ))
}

/// Fit `A`, `δ` from `α(n)`, `α(n+1)`, `α(n+2)` by matching
/// `log(α(n+j)/α(n)) = Aj − δ²j²` at `j = 1, 2`.
pub fn empirical_a_delta(values: [&BigReal; 3], prec: u32) -> Result<(BigReal, BigReal)> {
    let work = prec + 32;
    if values.iter().any(|v| !v.is_positive()) {
        return Err(Error::domain(
            "empirical_A_delta",
            "sequence values must be positive",
        ));
    }
    let log = |v: &BigReal| Float::with_val(work, v.ln_ref());
    let (l0, l1, l2) = (log(values[0]), log(values[1]), log(values[2]));
    let r1 = Float::with_val(work, &l1 - &l0);
    let r2 = Float::with_val(work, &l2 - &l0);
    let delta2 = (Float::with_val(work, &r1 * 2u32) - r2) / 2u32;
    if delta2 <= 0u32 {
        return Err(Error::domain(
            "empirical_A_delta",
            "sequence is not strictly log-concave here; δ² ≤ 0",
        ));
    }
    let a = r1 + &delta2;
    Ok((
        BigReal::new(Float::with_val(prec, &a)),
        BigReal::new(Float::with_val(prec, delta2.sqrt())),
    ))
}

/// `C(n,j) = n^{3/2} (γ(n+j)/(γ(n)e^{A(n)j}) · e^{δ(n)²j²} − 1)` with γ taken
/// from `gamma(m, prec)`.
pub fn c_of_with<G>(n: u64, j: u64, prec: u32, mut gamma: G) -> Result<BigReal>
where
    G: FnMut(u64, u32) -> Result<BigReal>,
{
    if n < 7 {
        return Err(Error::domain("C_of", format!("n = {n} < 7")));
    }
    if !(1..=8).contains(&j) {
        return Err(Error::domain("C_of", format!("j = {j} not in 1..=8")));
    }
    // n^{3/2} amplifies the cancellation in ratio − 1
    let work = prec + 32 + (1.5 * (n as f64).log2()).ceil() as u32;
    let (a, delta) = zeta_a_delta(n, work)?;
    let g0 = gamma(n, work)?;
    let gj = gamma(n + j, work)?;
    let exponent =
        Float::with_val(work, delta.square_ref()) * (j * j) - Float::with_val(work, &*a * j);
    let ratio = Float::with_val(work, &*gj / &*g0) * exponent.exp();
    let scale = Float::with_val(work, n).pow(1.5f64);
    let c = (ratio - 1u32) * scale;
    Ok(BigReal::new(Float::with_val(prec, &c)))
}

/// [`c_of_with`] using freshly computed exact γ values.
pub fn c_of(n: u64, j: u64, prec: u32) -> Result<BigReal> {
    c_of_with(n, j, prec, |m, p| gamma_exact(m, p).map(|g| g.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::from((num, den))
    }

    #[test]
    fn zeta_small_n_refused() {
        assert!(matches!(zeta_a_delta(6, 128), Err(Error::Domain { .. })));
        assert!(zeta_a_delta(7, 128).is_ok());
    }

    #[test]
    fn zeta_delta_crosses_effective_threshold_at_104() {
        let threshold = 1.384 / 28.0;
        assert!(zeta_a_delta(103, 128).unwrap().1.to_f64() > threshold);
        assert!(zeta_a_delta(104, 128).unwrap().1.to_f64() < threshold);
    }

    #[test]
    fn partition_order_two_closed_form() {
        let prec = 160;
        let (a, delta) = AsymParams::partition().a_delta(100, prec).unwrap();
        let pi = Float::with_val(prec, Constant::Pi);
        let q = Float::with_val(prec, 2399u32);
        let a_ref = Float::with_val(prec, &pi * 2u32) / Float::with_val(prec, q.sqrt_ref())
            - Float::with_val(prec, 24u32) / &q;
        let d2_ref = Float::with_val(prec, &pi * 12u32) / Float::with_val(prec, (&q).pow(1.5f64))
            - Float::with_val(prec, 288u32) / Float::with_val(prec, q.square_ref());
        assert!(a.rel_diff(&BigReal::new(a_ref)) < 1e-40);
        assert!(delta.rel_diff(&BigReal::new(d2_ref.sqrt())) < 1e-40);
    }

    #[test]
    fn orders_share_leading_term() {
        let gaps: Vec<f64> = [100u64, 1000, 10000]
            .iter()
            .map(|&n| {
                let a1 = modular_a_delta(n, &r(1, 24), &r(-1, 2), 1, 64)
                    .unwrap()
                    .0
                    .to_f64();
                let a2 = modular_a_delta(n, &r(1, 24), &r(-1, 2), 2, 64)
                    .unwrap()
                    .0
                    .to_f64();
                (a1 - a2).abs() * n as f64
            })
            .collect();
        // |A₁ − A₂|·n stays bounded
        assert!(gaps.iter().all(|g| *g < 2.0), "{gaps:?}");
    }

    #[test]
    fn modular_n_min() {
        // δ(n)² = 12π/(24n−1)^{3/2} − 288/(24n−1)² is negative at n = 1, 2
        let p = AsymParams::modular(r(1, 24), r(-1, 2), 2).unwrap();
        assert_eq!(p.n_min, 3);
        assert_eq!(p.n_min, AsymParams::partition().n_min);
        assert!(modular_a_delta(2, &r(1, 24), &r(-1, 2), 2, 64).is_err());
        for n in 3..=10_000 {
            assert!(
                modular_a_delta(n, &r(1, 24), &r(-1, 2), 2, 64).is_ok(),
                "n = {n}"
            );
        }
        let p = AsymParams::modular(r(1, 1), r(-12, 1), 2).unwrap();
        assert!(p.n_min > 2);
        assert!(modular_a_delta(p.n_min - 1, &r(1, 1), &r(-12, 1), 2, 64).is_err());
        assert!(AsymParams::modular(r(0, 1), r(1, 1), 2).is_err());
        assert!(AsymParams::modular(r(1, 1), r(1, 1), 3).is_err());
    }

    #[test]
    fn empirical_fit_recovers_gaussian_model() {
        // α(n+j) = e^{Aj − δ²j²} exactly
        let prec = 128;
        let vals: Vec<BigReal> = (0..3)
            .map(|j: i32| BigReal::from_f64((0.7 * j as f64 - 0.01 * (j * j) as f64).exp(), prec))
            .collect();
        let (a, d) = empirical_a_delta([&vals[0], &vals[1], &vals[2]], prec).unwrap();
        assert!((a.to_f64() - 0.7).abs() < 1e-12);
        assert!((d.to_f64() - 0.1).abs() < 1e-12);
    }
}
