//! Dense polynomials in power order: `coeffs[i]` multiplies `X^i`.

use rug::{Float, Integer, Rational};

use crate::bigreal::{format_fixed, BigReal};
use crate::error::{Error, Result};

/// Real polynomial with a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<BigReal>,
}

impl Poly {
    /// Drops trailing zero coefficients; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<BigReal>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Poly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&BigReal> {
        self.coeffs.get(i)
    }

    pub fn leading(&self) -> &BigReal {
        self.coeffs.last().expect("nonempty")
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(BigReal::prec).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &Float) -> Float {
        let prec = self.prec().max(x.prec());
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += &**c;
        }
        acc
    }

    /// Exact rational image of the binary coefficients.
    pub fn to_rational(&self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(BigReal::to_rational).collect())
    }

    /// Largest `|a_i − b_i|` over all coefficients, padding with zeros.
    pub fn max_coeff_distance(&self, other: &RationalPoly) -> BigReal {
        let prec = self.prec().max(64);
        let len = self.coeffs.len().max(other.coeffs().len());
        let mut worst = Float::new(prec);
        for i in 0..len {
            let a = self
                .coeffs
                .get(i)
                .map_or_else(|| Float::new(prec), |c| Float::with_val(prec, &**c));
            let b = other
                .coeffs()
                .get(i)
                .map_or_else(|| Float::new(prec), |c| Float::with_val(prec, c));
            let diff = (a - b).abs();
            if diff > worst {
                worst = diff;
            }
        }
        BigReal::new(worst)
    }

    /// Descending-power rendering such as `0.9896X^2+0.3083X-2.0199`.
    pub fn format_fixed(&self, decimals: usize) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let text = format_fixed(c, decimals, rug::float::Round::Nearest);
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, text.as_str()),
            };
            if negative {
                out.push('-');
            } else if i != self.degree() {
                out.push('+');
            }
            out.push_str(magnitude);
            match i {
                0 => {}
                1 => out.push('X'),
                _ => {
                    out.push_str("X^");
                    out.push_str(&i.to_string());
                }
            }
        }
        out
    }
}

/// Polynomial with exact rational coefficients. The zero polynomial is
/// allowed and has no degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        Integer: From<T>,
    {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| Rational::from(Integer::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    /// `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::new(); k + 1];
        coeffs[k] = Rational::from(1);
        RationalPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u64))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| Rational::from(c * factor))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| {
                    let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
                    if let Some(o) = other.coeffs.get(i) {
                        c += o;
                    }
                    c
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::new(out)
    }

    /// Euclidean division `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = divisor.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::new(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = Rational::from(&rem[k + dd] / lead);
            if q != 0 {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= Rational::from(&q * c);
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) => self.scale(&Rational::from(lead.recip_ref())),
            None => Self::zero(),
        }
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        if g.is_zero() || g.degree() == Some(0) {
            return Ok(self.clone());
        }
        Ok(self.div_rem(&g)?.0)
    }

    /// `1 + max |a_i / a_d|`; every root has absolute value below it.
    pub fn cauchy_bound(&self) -> Result<Rational> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        let mut best = Rational::new();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let ratio = Rational::from(c / lead).abs();
            if ratio > best {
                best = ratio;
            }
        }
        Ok(best + 1u32)
    }

    /// Multiply through by the least common denominator.
    pub fn to_integers(&self) -> Vec<Integer> {
        let mut lcm = Integer::from(1);
        for c in &self.coeffs {
            lcm.lcm_mut(c.denom());
        }
        self.coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&lcm / c.denom()))
            .collect()
    }

    pub fn to_poly(&self, prec: u32) -> Result<Poly> {
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| BigReal::from_rational(c, prec))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(c: &[i64]) -> RationalPoly {
        RationalPoly::from_integers(c.iter().copied())
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            Poly::new(vec![BigReal::zero(64)]),
            Err(Error::ZeroPolynomial)
        ));
        let p = Poly::new(vec![BigReal::from_f64(1.0, 64), BigReal::zero(64)]).unwrap();
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn fixed_rendering() {
        let c = [-2.01994, 0.30831, 0.98962].map(|v| BigReal::from_f64(v, 64));
        let p = Poly::new(c.to_vec()).unwrap();
        assert_eq!(p.format_fixed(4), "0.9896X^2+0.3083X-2.0199");
    }

    #[test]
    fn division_and_gcd() {
        // (X−1)²(X+2)
        let p = rp(&[2, -3, 0, 1]);
        let (q, r) = p.div_rem(&rp(&[-1, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, rp(&[-2, 1, 1]));
        assert_eq!(p.gcd(&p.derivative()), rp(&[-1, 1]));
        assert_eq!(p.squarefree_part().unwrap().monic(), rp(&[-2, 1, 1]));
        assert_eq!(rp(&[1, 0, 1]).squarefree_part().unwrap(), rp(&[1, 0, 1]));
    }

    #[test]
    fn integer_clearing() {
        let p = RationalPoly::new(vec![Rational::from((1, 2)), Rational::from((-2, 3))]);
        assert_eq!(p.to_integers(), vec![Integer::from(3), Integer::from(-4)]);
    }

    #[test]
    fn cauchy_bound_dominates_roots() {
        // roots 3, −4
        let p = rp(&[-12, 1, 1]);
        assert_eq!(p.cauchy_bound().unwrap(), 13);
    }
}
