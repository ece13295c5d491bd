//! Truncated power series with MPFR coefficients.

use rug::Float;

/// Product of two series truncated to `len` terms.
pub(crate) fn mul(a: &[Float], b: &[Float], len: usize, prec: u32) -> Vec<Float> {
    let mut out = vec![Float::new(prec); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += Float::with_val(prec, ai * bj);
        }
    }
    out
}

/// `log(1 + s)` for a series with `s[0] = 0`.
pub(crate) fn log1p(s: &[Float], len: usize, prec: u32) -> Vec<Float> {
    debug_assert!(s.first().is_none_or(|c| c.is_zero()));
    let mut out = vec![Float::new(prec); len];
    let mut power = s[..len.min(s.len())].to_vec();
    power.resize(len, Float::new(prec));
    for m in 1..len {
        // power = s^m, which starts at λ^m
        let sign_m = if m % 2 == 1 { 1i32 } else { -1 };
        for (o, p) in out.iter_mut().zip(&power) {
            *o += Float::with_val(prec, p * sign_m) / m as u32;
        }
        power = mul(&power, s, len, prec);
    }
    out
}

/// `exp(s)` for a series with `s[0] = 0`, via `e' = s'·e`.
pub(crate) fn exp(s: &[Float], len: usize, prec: u32) -> Vec<Float> {
    debug_assert!(s.first().is_none_or(|c| c.is_zero()));
    let mut out = vec![Float::new(prec); len];
    out[0] = Float::with_val(prec, 1u32);
    for k in 1..len {
        let mut acc = Float::new(prec);
        for j in 1..=k.min(s.len() - 1) {
            acc += Float::with_val(prec, &s[j] * &out[k - j]) * j as u32;
        }
        out[k] = acc / k as u32;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_log1p_is_identity() {
        let prec = 128;
        let len = 8;
        let mut s = vec![Float::new(prec); len];
        s[1] = Float::with_val(prec, 1);
        s[2] = Float::with_val(prec, 0.5);
        let back = exp(&log1p(&s, len, prec), len, prec);
        // 1 + s
        assert!((back[0].clone() - 1u32).abs() < 1e-35);
        assert!((back[1].clone() - 1u32).abs() < 1e-35);
        assert!((back[2].clone() - 0.5f64).abs() < 1e-35);
        for c in &back[3..] {
            assert!(c.clone().abs() < 1e-35, "{c}");
        }
    }
}
