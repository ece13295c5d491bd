//! Sturm sequences over the rationals: exact counts of distinct real roots.

use rug::Rational;

use super::hyperbolic::{HyperbolicityCertificate, Method, Verdict};
use super::poly::{Poly, RationalPoly};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};

/// `p, p', −rem(p, p'), …` down to a nonzero constant. Each remainder is
/// divided by the absolute value of its leading coefficient, which leaves
/// every sign pattern unchanged.
pub fn sturm_chain(p: &RationalPoly) -> Result<Vec<RationalPoly>> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    let mut chain = vec![p.clone()];
    if degree == 0 {
        return Ok(chain);
    }
    chain.push(p.derivative());
    loop {
        let k = chain.len();
        let (_, rem) = chain[k - 2].div_rem(&chain[k - 1])?;
        if rem.is_zero() {
            let last = chain[k - 1].degree().expect("nonzero");
            if last > 0 {
                return Err(Error::DegenerateChain { gcd_degree: last });
            }
            return Ok(chain);
        }
        let lead = rem.leading().expect("nonzero").clone().abs();
        chain.push(rem.scale(&-lead.recip()));
    }
}

fn sign_changes(chain: &[RationalPoly], x: &Rational) -> usize {
    let signs: Vec<std::cmp::Ordering> = chain
        .iter()
        .map(|q| q.eval(x).cmp0())
        .filter(|s| *s != std::cmp::Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of a squarefree `p` in `(lo, hi]`.
/// Neither endpoint may be a root.
pub fn sturm_count(p: &RationalPoly, lo: &Rational, hi: &Rational) -> Result<usize> {
    if lo >= hi {
        return Err(Error::domain("sturm_count", "need lo < hi"));
    }
    if p.eval(lo) == 0 || p.eval(hi) == 0 {
        return Err(Error::domain("sturm_count", "an endpoint is a root"));
    }
    let chain = sturm_chain(p)?;
    Ok(sign_changes(&chain, lo) - sign_changes(&chain, hi))
}

/// [`sturm_count`] for a binary-coefficient polynomial, read exactly.
pub fn sturm_count_poly(p: &Poly, lo: &Rational, hi: &Rational) -> Result<usize> {
    sturm_count(&p.to_rational(), lo, hi)
}

/// Distinct real roots of any nonzero `p`: deflate by `gcd(p, p')`, then
/// count on `(−B, B]` with `B` the Cauchy bound.
pub fn count_real_roots(p: &RationalPoly) -> Result<usize> {
    let sf = p.squarefree_part()?;
    if sf.degree() == Some(0) {
        return Ok(0);
    }
    let bound = sf.cauchy_bound()?;
    sturm_count(&sf, &Rational::from(-&bound), &bound)
}

/// Hyperbolicity by counting: all roots are real iff the squarefree part
/// has as many real roots as its degree.
pub fn is_hyperbolic_sturm(p: &RationalPoly) -> Result<HyperbolicityCertificate> {
    let sf = p.squarefree_part()?;
    let distinct = sf.degree().expect("nonzero");
    let real = count_real_roots(p)?;
    let verdict = if real == distinct {
        Verdict::Hyperbolic
    } else {
        Verdict::NotHyperbolic
    };
    Ok(HyperbolicityCertificate {
        verdict,
        method: Method::Sturm,
        // number of non-real roots, negated, as the witness
        margin: BigReal::from_f64(-((distinct - real) as f64), 64),
        degree: p.degree().expect("nonzero"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jensen::hermite::hermite;

    fn rp(c: &[i64]) -> RationalPoly {
        RationalPoly::from_integers(c.iter().copied())
    }

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn counts() {
        assert_eq!(sturm_count(&rp(&[-2, 0, 1]), &q(-2), &q(2)).unwrap(), 2);
        assert_eq!(sturm_count(&rp(&[-2, 0, 1]), &q(0), &q(2)).unwrap(), 1);
        assert_eq!(sturm_count(&rp(&[1, 0, 1]), &q(-5), &q(5)).unwrap(), 0);
        assert_eq!(sturm_count(&hermite(6), &q(-10), &q(10)).unwrap(), 6);
    }

    #[test]
    fn degenerate_and_endpoint_errors() {
        let square = rp(&[1, -2, 1]);
        assert!(matches!(
            sturm_count(&square, &q(-5), &q(5)),
            Err(Error::DegenerateChain { gcd_degree: 1 })
        ));
        assert!(sturm_count(&rp(&[-4, 0, 1]), &q(-2), &q(3)).is_err());
        assert_eq!(count_real_roots(&square).unwrap(), 1);
        assert!(is_hyperbolic_sturm(&square).unwrap().is_hyperbolic());
    }
}
