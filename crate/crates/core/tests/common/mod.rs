//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the routines it is used to check.

#![allow(dead_code)]

use std::f64::consts::PI;

use rug::ops::Pow;
use rug::{Float, Integer};

/// θ₀(t) = Σ_{k≥1} e^{−πk²t} in double precision.
pub fn theta0_f64(t: f64) -> f64 {
    (1..=20).map(|k| (-PI * (k * k) as f64 * t).exp()).sum()
}

/// F(n) = ∫_0^∞ uⁿ e^{u/4} θ₀(eᵘ) du by composite Simpson on [0, 8] with
/// 2¹⁶ panels.
pub fn f_simpson(n: i32) -> f64 {
    let panels = 1 << 16;
    let h = 8.0 / panels as f64;
    let g = |u: f64| u.powi(n) * (u / 4.0).exp() * theta0_f64(u.exp());
    let mut sum = g(0.0) + g(8.0);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g(i as f64 * h);
    }
    sum * h / 3.0
}

/// p(0..=n_max) by the coin-change recurrence over parts 1..=n_max.
pub fn partitions_by_parts(n_max: usize) -> Vec<Integer> {
    let mut p = vec![Integer::new(); n_max + 1];
    p[0] = Integer::from(1);
    for part in 1..=n_max {
        for n in part..=n_max {
            let prev = p[n - part].clone();
            p[n] += prev;
        }
    }
    p
}

/// First Rademacher term 2π(24n−1)^{−3/4} I_{3/2}(π√(24n−1)/6), with
/// I_{3/2}(x) = √(2/(πx))·(cosh x − sinh x / x).
pub fn rademacher_first(n: u64, prec: u32) -> Float {
    let m = Float::with_val(prec, 24 * n - 1);
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let x = Float::with_val(prec, m.sqrt_ref()) * &pi / 6u32;
    let bessel = Float::with_val(prec, 2u32) / Float::with_val(prec, &pi * &x);
    let bessel = bessel.sqrt()
        * (Float::with_val(prec, x.cosh_ref()) - Float::with_val(prec, x.sinh_ref()) / &x);
    let scale = Float::with_val(prec, m.pow(-0.75f64));
    bessel * scale * pi * 2u32
}

/// |a/b − 1|.
pub fn rel_err(a: &Float, b: &Float) -> f64 {
    let prec = a.prec().max(b.prec());
    (Float::with_val(prec, a / b) - 1u32).abs().to_f64()
}
