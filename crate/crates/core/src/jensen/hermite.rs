//! Hermite polynomials generated by `e^{−t²+Xt} = Σ H_d(X) t^d / d!` and
//! their generalization `H_{F,m}` for `F(t) = Σ c_i t^i`, generated by
//! `F(−t)e^{Xt}`.

use rug::{Integer, Rational};

use super::poly::RationalPoly;
use crate::error::{Error, Result};

/// `H_d` via `H_{d+1} = X·H_d − 2d·H_{d−1}`, `H_0 = 1`, `H_1 = X`.
pub fn hermite(d: usize) -> RationalPoly {
    let mut prev = RationalPoly::monomial(0);
    if d == 0 {
        return prev;
    }
    let mut cur = RationalPoly::monomial(1);
    for k in 1..d {
        let next = RationalPoly::monomial(1)
            .mul(&cur)
            .sub(&prev.scale(&Rational::from(2 * k as u64)));
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_{F,m}(X) = m! Σ_{k=0}^m (−1)^{m−k} c_{m−k} X^k / k!`.
pub fn generalized_hermite(c: &[Rational], m: usize) -> Result<RationalPoly> {
    if c.len() <= m {
        return Err(Error::domain(
            "generalized_hermite",
            format!("need {} coefficients of F, got {}", m + 1, c.len()),
        ));
    }
    let m_fact = Integer::from(Integer::factorial(m as u32));
    let coeffs = (0..=m)
        .map(|k| {
            let k_fact = Integer::from(Integer::factorial(k as u32));
            let mut term = &c[m - k] * Rational::from((m_fact.clone(), k_fact));
            if (m - k) % 2 == 1 {
                term = -term;
            }
            term
        })
        .collect();
    Ok(RationalPoly::new(coeffs))
}

/// Taylor coefficients of `e^{−t²}` up to `t^{len−1}`.
pub fn exp_neg_square_coeffs(len: usize) -> Vec<Rational> {
    (0..len)
        .map(|i| {
            if i % 2 == 1 {
                return Rational::new();
            }
            let k = i / 2;
            let r = Rational::from((
                Integer::from(1),
                Integer::from(Integer::factorial(k as u32)),
            ));
            if k % 2 == 1 {
                -r
            } else {
                r
            }
        })
        .collect()
}
