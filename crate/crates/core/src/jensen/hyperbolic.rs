//! Hermite's criterion: a real polynomial of degree `d` has only real roots
//! iff the Hankel matrix `(s_{i+j})_{0≤i,j<d}` of its Newton power sums is
//! positive semidefinite. With `r` its rank, this holds iff the leading
//! principal minors `Δ₁ … Δ_r` are all positive.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::poly::{Poly, RationalPoly};
use crate::bigreal::BigReal;
use crate::interval::Interval;

const MARGIN_PREC: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Hyperbolic,
    NotHyperbolic,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    HermiteHankelExact,
    HermiteHankelInterval,
    Sturm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicityCertificate {
    pub verdict: Verdict,
    pub method: Method,
    /// Smallest leading principal minor (a lower bound on the interval
    /// path) when hyperbolic; otherwise the first non-positive minor.
    pub margin: BigReal,
    pub degree: usize,
}

impl HyperbolicityCertificate {
    pub fn is_hyperbolic(&self) -> bool {
        self.verdict == Verdict::Hyperbolic
    }
}

/// Anything Hermite's criterion can be run on.
pub trait CertifyHyperbolic {
    fn certify(&self) -> HyperbolicityCertificate;
}

impl CertifyHyperbolic for RationalPoly {
    fn certify(&self) -> HyperbolicityCertificate {
        is_hyperbolic_exact(self)
    }
}

impl CertifyHyperbolic for Poly {
    /// Coefficients are taken as exact binary values.
    fn certify(&self) -> HyperbolicityCertificate {
        let prec = self.prec().max(MARGIN_PREC);
        let coeffs: Vec<Interval> = self
            .coeffs()
            .iter()
            .map(|c| Interval::point(c, prec))
            .collect();
        is_hyperbolic_interval(&coeffs)
    }
}

impl CertifyHyperbolic for [Interval] {
    fn certify(&self) -> HyperbolicityCertificate {
        is_hyperbolic_interval(self)
    }
}

pub fn is_hyperbolic<P: CertifyHyperbolic + ?Sized>(p: &P) -> HyperbolicityCertificate {
    p.certify()
}

fn one() -> BigReal {
    BigReal::from_f64(1.0, MARGIN_PREC)
}

/// Power sums scaled to integers, `t_k = a_d^k s_k` for `k < 2d − 1`. Newton's
/// identities become `t_k = −Σ_{i=1}^{min(k−1,d)} a_{d−i} a_d^{i−1} t_{k−i}
/// − k a_{d−k} a_d^{k−1}`, the last term only for `k ≤ d`.
fn scaled_power_sums(a: &[Integer]) -> Vec<Integer> {
    let d = a.len() - 1;
    let lead = &a[d];
    let count = 2 * d - 1;
    let mut lead_pow = vec![Integer::from(1)];
    for k in 1..=count {
        lead_pow.push(Integer::from(&lead_pow[k - 1] * lead));
    }
    let mut t = Vec::with_capacity(count);
    t.push(Integer::from(d));
    for k in 1..count {
        let mut acc = Integer::new();
        for i in 1..=(k - 1).min(d) {
            acc += Integer::from(&a[d - i] * &lead_pow[i - 1]) * &t[k - i];
        }
        if k <= d {
            acc += Integer::from(&a[d - k] * &lead_pow[k - 1]) * k as u64;
        }
        t.push(-acc);
    }
    t
}

/// Determinant of an integer matrix by fraction-free elimination with row
/// pivoting.
fn bareiss_det(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&m[i][j] * &m[k][k]) - Integer::from(&m[i][k] * &m[k][j]);
                m[i][j] = v.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Rank of an integer matrix by fraction-free elimination with full pivot
/// search.
fn rank(mut m: Vec<Vec<Integer>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = Integer::from(1);
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = Integer::from(&m[i][j] * &m[r][c]) - Integer::from(&m[i][c] * &m[r][j]);
                m[i][j] = v.div_exact(&prev);
            }
            m[i][c] = Integer::new();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Leading principal minors `Δ₁ … Δ_d` of an integer matrix.
fn leading_minors(m: &[Vec<Integer>]) -> Vec<Integer> {
    let n = m.len();
    let mut out = Vec::with_capacity(n);
    let mut work: Vec<Vec<Integer>> = m.to_vec();
    let mut prev = Integer::from(1);
    // pivot-free elimination yields Δ_{k+1} on the diagonal until a zero pivot
    for k in 0..n {
        let pivot = work[k][k].clone();
        out.push(pivot.clone());
        if pivot == 0 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v =
                    Integer::from(&work[i][j] * &pivot) - Integer::from(&work[i][k] * &work[k][j]);
                work[i][j] = v.div_exact(&prev);
            }
        }
        prev = pivot;
    }
    for k in out.len()..n {
        out.push(bareiss_det(
            m[..=k].iter().map(|row| row[..=k].to_vec()).collect(),
        ));
    }
    out
}

/// Exact Hermite criterion on rational coefficients.
pub fn is_hyperbolic_exact(p: &RationalPoly) -> HyperbolicityCertificate {
    let degree = p.degree().unwrap_or(0);
    if degree <= 1 {
        // constants and linear polynomials: nothing to check
        return HyperbolicityCertificate {
            verdict: Verdict::Hyperbolic,
            method: Method::HermiteHankelExact,
            margin: one(),
            degree,
        };
    }
    let a = p.to_integers();
    let d = degree;
    let t = scaled_power_sums(&a);
    let matrix: Vec<Vec<Integer>> = (0..d)
        .map(|i| (0..d).map(|j| t[i + j].clone()).collect())
        .collect();
    // T = D H D with D = diag(a_d^i), so det T_k = a_d^{k(k−1)} det H_k
    let minors = leading_minors(&matrix);
    let r = rank(matrix);
    let lead = &a[d];
    let to_h = |k: usize, m: &Integer| {
        let scale = Integer::from(lead.pow((k * (k - 1)) as u32));
        BigReal::from_rational(&Rational::from((m.clone(), scale)), MARGIN_PREC)
    };
    match minors[..r].iter().position(|m| *m <= 0) {
        None => {
            let margin = minors[..r]
                .iter()
                .enumerate()
                .map(|(i, m)| to_h(i + 1, m))
                .min_by(|x, y| x.partial_cmp(y).expect("finite"))
                .unwrap_or_else(one);
            HyperbolicityCertificate {
                verdict: Verdict::Hyperbolic,
                method: Method::HermiteHankelExact,
                margin,
                degree,
            }
        }
        Some(i) => HyperbolicityCertificate {
            verdict: Verdict::NotHyperbolic,
            method: Method::HermiteHankelExact,
            margin: to_h(i + 1, &minors[i]),
            degree,
        },
    }
}

/// Hermite criterion with outward-rounded interval arithmetic. Any pivot
/// whose interval contains zero makes the verdict indeterminate.
pub fn is_hyperbolic_interval(c: &[Interval]) -> HyperbolicityCertificate {
    let prec = c.iter().map(Interval::prec).max().unwrap_or(MARGIN_PREC);
    let mut d = c.len().saturating_sub(1);
    // trailing coefficients that are exactly zero lower the degree
    while d > 0 && c[d].lo().is_zero() && c[d].hi().is_zero() {
        d -= 1;
    }
    let indeterminate = |degree| HyperbolicityCertificate {
        verdict: Verdict::Indeterminate,
        method: Method::HermiteHankelInterval,
        margin: BigReal::zero(MARGIN_PREC),
        degree,
    };
    if c.is_empty() || c[d].contains_zero() {
        return indeterminate(d);
    }
    if d <= 1 {
        return HyperbolicityCertificate {
            verdict: Verdict::Hyperbolic,
            method: Method::HermiteHankelInterval,
            margin: one(),
            degree: d,
        };
    }
    // s_k = −(Σ_{i=1}^{min(k−1,d)} c_{d−i} s_{k−i} + k c_{d−k}) / c_d
    let mut s: Vec<Interval> = vec![Interval::from_i64(d as i64, prec)];
    for k in 1..2 * d - 1 {
        let mut acc = Interval::from_i64(0, prec);
        for i in 1..=(k - 1).min(d) {
            acc = acc.add(&c[d - i].mul(&s[k - i]));
        }
        if k <= d {
            acc = acc.add(&c[d - k].mul_i64(k as i64));
        }
        match acc.neg().div(&c[d]) {
            Some(v) => s.push(v),
            None => return indeterminate(d),
        }
    }
    let mut h: Vec<Vec<Interval>> = (0..d)
        .map(|i| (0..d).map(|j| s[i + j].clone()).collect())
        .collect();
    // Gaussian elimination: pivot k is Δ_{k+1}/Δ_k
    let mut minor = Interval::from_i64(1, prec);
    let mut margin: Option<Float> = None;
    for k in 0..d {
        let pivot = h[k][k].clone();
        minor = minor.mul(&pivot);
        if pivot.is_negative() {
            return HyperbolicityCertificate {
                verdict: Verdict::NotHyperbolic,
                method: Method::HermiteHankelInterval,
                margin: BigReal::new(Float::with_val(MARGIN_PREC, minor.hi())),
                degree: d,
            };
        }
        if !pivot.is_positive() {
            return indeterminate(d);
        }
        let lower = minor.lo().clone();
        if margin.as_ref().is_none_or(|m| lower < *m) {
            margin = Some(lower);
        }
        for i in k + 1..d {
            let factor = h[i][k].div(&pivot).expect("pivot is positive");
            for j in k + 1..d {
                h[i][j] = h[i][j].sub(&factor.mul(&h[k][j]));
            }
        }
    }
    HyperbolicityCertificate {
        verdict: Verdict::Hyperbolic,
        method: Method::HermiteHankelInterval,
        margin: BigReal::new(Float::with_val(MARGIN_PREC, margin.expect("d ≥ 2"))),
        degree: d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(c: &[i64]) -> RationalPoly {
        RationalPoly::from_integers(c.iter().copied())
    }

    #[test]
    fn quadratics() {
        assert!(is_hyperbolic_exact(&rp(&[-2, 0, 1])).is_hyperbolic());
        let c = is_hyperbolic_exact(&rp(&[1, 0, 1]));
        assert_eq!(c.verdict, Verdict::NotHyperbolic);
        assert!(!c.margin.is_positive());
    }

    #[test]
    fn margin_is_smallest_minor() {
        // X² − 2: s = (2, 0, 4), Δ₁ = 2, Δ₂ = 8
        let c = is_hyperbolic_exact(&rp(&[-2, 0, 1]));
        assert_eq!(c.margin.to_f64(), 2.0);
        // scaling by 3 leaves the power sums unchanged
        assert_eq!(is_hyperbolic_exact(&rp(&[-6, 0, 3])).margin.to_f64(), 2.0);
    }

    #[test]
    fn repeated_roots() {
        // (X−1)²(X+2): real with a double root
        let c = is_hyperbolic_exact(&rp(&[2, -3, 0, 1]));
        assert_eq!(c.verdict, Verdict::Hyperbolic);
        // (X²+1)²: rank 2, Δ₂ < 0
        assert_eq!(
            is_hyperbolic_exact(&rp(&[1, 0, 2, 0, 1])).verdict,
            Verdict::NotHyperbolic
        );
        // X⁴: rank 1
        assert!(is_hyperbolic_exact(&rp(&[0, 0, 0, 0, 1])).is_hyperbolic());
        // X²(X²+1): complex pair next to a double root
        assert_eq!(
            is_hyperbolic_exact(&rp(&[0, 0, 1, 0, 1])).verdict,
            Verdict::NotHyperbolic
        );
    }

    #[test]
    fn interval_agrees_on_simple_roots() {
        for (c, expected) in [
            (&[-2i64, 0, 1][..], Verdict::Hyperbolic),
            (&[1, 0, 1], Verdict::NotHyperbolic),
        ] {
            let iv: Vec<Interval> = c.iter().map(|&v| Interval::from_i64(v, 128)).collect();
            assert_eq!(is_hyperbolic_interval(&iv).verdict, expected);
        }
        // a double root cannot be separated by intervals
        let iv: Vec<Interval> = [1i64, -2, 1]
            .iter()
            .map(|&v| Interval::from_i64(v, 128))
            .collect();
        assert_eq!(is_hyperbolic_interval(&iv).verdict, Verdict::Indeterminate);
    }

    #[test]
    fn linear_is_always_hyperbolic() {
        assert!(is_hyperbolic_exact(&rp(&[5, 3])).is_hyperbolic());
    }
}
