//! Jensen polynomials and their renormalization
//!
//! ```text
//! Ĵ(X) = δ^{−d}/α(n) · J_α^{d,n}((δX − 1)/e^A)
//! ```
//!
//! Expanding the affine argument binomially, the coefficient of `X^k` is
//! `δ^{k−d} C(d,k) Σ_{j≥k} (−1)^{j−k} C(d−k,j−k) r_j` with
//! `r_j = α(n+j)/(α(n)e^{Aj})`.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::poly::{Poly, RationalPoly};
use crate::asymptotics::normalization::empirical_a_delta;
use crate::asymptotics::Family;
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::sequences::SequenceProvider;

fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

fn check_degree(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("jensen_poly", "degree must be at least 1"));
    }
    Ok(())
}

/// `Σ_j C(d,j) α(n+j) X^j` with coefficients rounded to `prec` bits.
pub fn jensen_poly(seq: &SequenceProvider, d: usize, n: u64, prec: u32) -> Result<Poly> {
    check_degree(d)?;
    let coeffs = (0..=d)
        .map(|j| {
            let v = seq.value_at(n + j as u64, prec)?;
            Ok(BigReal::new(Float::with_val(prec, &*v * &binomial(d, j))))
        })
        .collect::<Result<Vec<_>>>()?;
    Poly::new(coeffs)
}

/// [`jensen_poly`] with exact integer coefficients; needs `exact_at`.
pub fn jensen_poly_exact(seq: &SequenceProvider, d: usize, n: u64) -> Result<RationalPoly> {
    check_degree(d)?;
    let coeffs = (0..=d)
        .map(|j| {
            let v = seq.exact_at(n + j as u64)?.ok_or_else(|| {
                Error::domain(
                    "jensen_poly",
                    format!("`{}` has no exact values", seq.label()),
                )
            })?;
            Ok(Rational::from(v * binomial(d, j)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalPoly::new(coeffs))
}

/// `(A(n), δ(n))` for `seq`: the family's closed form, or a fit to
/// `α(n), α(n+1), α(n+2)` for empirical sequences.
pub fn normalization_at(seq: &SequenceProvider, n: u64, prec: u32) -> Result<(BigReal, BigReal)> {
    let params = seq.params();
    if n < params.n_min {
        return Err(Error::domain(
            "renormalize",
            format!(
                "n = {n} is below n_min = {} for {}",
                params.n_min,
                params.label()
            ),
        ));
    }
    match params.family {
        Family::Empirical => {
            let v: Vec<BigReal> = (0..3)
                .map(|j| seq.value_at(n + j, prec))
                .collect::<Result<_>>()?;
            empirical_a_delta([&v[0], &v[1], &v[2]], prec)
        }
        _ => params.a_delta(n, prec),
    }
}

/// Renormalized coefficients from `α(n), …, α(n+d)`, computed at the
/// precision of the inputs and rounded to `prec`.
pub fn renormalize_values(
    values: &[BigReal],
    a: &BigReal,
    delta: &BigReal,
    prec: u32,
) -> Result<Poly> {
    if values.len() < 2 {
        return Err(Error::domain("renormalize", "need at least two values"));
    }
    let d = values.len() - 1;
    let work = values
        .iter()
        .map(BigReal::prec)
        .max()
        .unwrap_or(prec)
        .max(prec);
    let inv_e = Float::with_val(work, -&**a).exp();
    // r_j = α(n+j) / (α(n) e^{Aj})
    let mut r = Vec::with_capacity(d + 1);
    let mut scale = Float::with_val(work, values[0].recip_ref());
    for v in values {
        r.push(Float::with_val(work, &**v * &scale));
        scale *= &inv_e;
    }
    let inv_delta = Float::with_val(work, delta.recip_ref());
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut sum = Float::new(work);
        for j in k..=d {
            let term = Float::with_val(work, &r[j] * &binomial(d - k, j - k));
            if (j - k) % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let factor = Float::with_val(work, (&inv_delta).pow((d - k) as u32)) * &binomial(d, k);
        coeffs.push(BigReal::new(Float::with_val(prec, sum * factor)));
    }
    Poly::new(coeffs)
}

/// Bits lost to cancellation in the alternating sums, about `d·log₂(1/δ)`.
fn cancellation_bits(d: usize, delta: &BigReal) -> u32 {
    let lost = -(d as f64) * delta.to_f64().log2();
    lost.max(0.0).ceil() as u32
}

/// `Ĵ_α^{d,n}` with coefficients correct to about `prec` bits.
pub fn renormalize(seq: &SequenceProvider, d: usize, n: u64, prec: u32) -> Result<Poly> {
    check_degree(d)?;
    let (_, rough) = normalization_at(seq, n, 64)?;
    let work = prec + 32 + cancellation_bits(d, &rough);
    let (a, delta) = normalization_at(seq, n, work)?;
    let values: Vec<BigReal> = (0..=d as u64)
        .map(|j| seq.value_at(n + j, work))
        .collect::<Result<_>>()?;
    renormalize_values(&values, &a, &delta, prec)
}

fn exp_interval(a: &Float, sign: i32, prec: u32) -> Interval {
    let x = Float::with_val(prec, a * sign);
    let lo = Float::with_val_round(prec, x.exp_ref(), Round::Down).0;
    let hi = Float::with_val_round(prec, x.exp_ref(), Round::Up).0;
    Interval::new(lo, hi)
}

/// Interval version of [`renormalize_values`] for enclosures of
/// `α(n), …, α(n+d)`. `A` and `δ` are exact points: any positive `δ` and
/// `e^A` give a polynomial with the same real-rootedness. Returns `None`
/// if an enclosure of `α(n)` contains zero.
pub fn renormalize_intervals(
    values: &[Interval],
    a: &Float,
    delta: &Float,
) -> Option<Vec<Interval>> {
    let d = values.len().checked_sub(1)?;
    let prec = values.iter().map(Interval::prec).max()?;
    let inv_e = exp_interval(a, -1, prec);
    let inv_delta = Interval::from_i64(1, prec).div(&Interval::point(delta, prec))?;
    let mut r = Vec::with_capacity(d + 1);
    let mut scale = Interval::from_i64(1, prec).div(&values[0])?;
    for v in values {
        r.push(v.mul(&scale));
        scale = scale.mul(&inv_e);
    }
    let mut inv_delta_pow = vec![Interval::from_i64(1, prec)];
    for k in 1..=d {
        inv_delta_pow.push(inv_delta_pow[k - 1].mul(&inv_delta));
    }
    let out = (0..=d)
        .map(|k| {
            let mut sum = Interval::from_i64(0, prec);
            for j in k..=d {
                let term = r[j].mul(&Interval::from_integer(&binomial(d - k, j - k), prec));
                sum = if (j - k) % 2 == 0 {
                    sum.add(&term)
                } else {
                    sum.sub(&term)
                };
            }
            sum.mul(&inv_delta_pow[d - k])
                .mul(&Interval::from_integer(&binomial(d, k), prec))
        })
        .collect();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jensen::hermite::hermite;

    #[test]
    fn partition_jensen_quadratic() {
        let p = SequenceProvider::partition();
        let j = jensen_poly_exact(&p, 2, 24).unwrap();
        let expected = RationalPoly::from_integers([1575i64, 2 * 1958, 2436]);
        assert_eq!(j, expected);
        let f = jensen_poly(&p, 2, 24, 64).unwrap();
        assert_eq!(f.to_rational(), expected);
    }

    #[test]
    fn gaussian_sequence_renormalizes_to_hermite() {
        // α(n+j) = e^{Aj − δ²j²} has Ĵ = H_d + O(δ)
        let prec = 256;
        let a = BigReal::from_f64(0.3, prec);
        let delta = BigReal::from_f64(1e-4, prec);
        for d in 2..=5 {
            let values: Vec<BigReal> = (0..=d as u32)
                .map(|j| {
                    let x = Float::with_val(prec, &*a * j)
                        - Float::with_val(prec, &*delta * j).square();
                    BigReal::new(x.exp())
                })
                .collect();
            let p = renormalize_values(&values, &a, &delta, prec).unwrap();
            let dev = p.max_coeff_distance(&hermite(d)).to_f64();
            assert!(dev < 1e3 * 1e-4, "d = {d}: {}", p.format_fixed(6));
        }
    }

    #[test]
    fn interval_enclosure_contains_point_result() {
        let prec = 128;
        let values: Vec<BigReal> = [1.0, 2.7, 7.2, 18.9]
            .iter()
            .map(|&v| BigReal::from_f64(v, prec))
            .collect();
        let (a, delta) = (BigReal::from_f64(1.0, prec), BigReal::from_f64(0.125, prec));
        let wide: Vec<BigReal> = values.iter().map(|v| v.with_prec(512)).collect();
        let point =
            renormalize_values(&wide, &a.with_prec(512), &delta.with_prec(512), 512).unwrap();
        let iv: Vec<Interval> = values.iter().map(|v| Interval::point(v, prec)).collect();
        let enclosed = renormalize_intervals(&iv, &a, &delta).unwrap();
        for (c, i) in point.coeffs().iter().zip(&enclosed) {
            assert!(i.contains(c), "{c} not in {i}");
        }
    }
}
