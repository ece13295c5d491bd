//! Double-exponential (tanh-sinh) quadrature on MPFR floats.
//!
//! The rule maps `[a, b]` onto the real line through
//! `x = tanh(π/2 · sinh t)` and applies the trapezoid rule in `t`. Each
//! level halves the step, reusing the previous sum, and integration stops
//! once two successive levels agree to the requested number of bits.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct TanhSinh {
    /// Working precision of nodes, weights and partial sums.
    pub prec: u32,
    /// Stop once successive levels agree to `2^-tol_bits` relative.
    pub tol_bits: u32,
    /// Never accept a result before this level (step `2^-min_level`).
    pub min_level: u32,
    pub max_level: u32,
    /// Levels to keep refining after the agreement test first passes.
    pub extra_levels: u32,
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Float,
    pub level: u32,
    pub evaluations: usize,
    /// `|S_k − S_{k−1}| / |S_k|` at the accepted level.
    pub last_rel_diff: Float,
}

/// Abscissa complement `1 − x_t` and weight `w_t` for one `t ≥ 0`.
struct Node {
    t_is_zero: bool,
    complement: Float,
    weight: Float,
}

type NodeTable = Arc<Vec<Node>>;

fn node_cache() -> &'static Mutex<HashMap<(u32, u32), NodeTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), NodeTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn t_max(prec: u32) -> f64 {
    ((prec as f64 + 40.0) * std::f64::consts::LN_2 / std::f64::consts::PI).asinh()
}

/// Nodes added at `level`: every `t = j·2^-level ≤ t_max` with `j` odd
/// (all `j` at level 0).
fn nodes_for_level(prec: u32, level: u32) -> NodeTable {
    let key = (prec, level);
    if let Some(table) = node_cache().lock().expect("node cache poisoned").get(&key) {
        return Arc::clone(table);
    }
    let h = (0.5f64).powi(level as i32);
    let limit = t_max(prec);
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let mut nodes = Vec::new();
    let (start, stride) = if level == 0 { (0u64, 1u64) } else { (1, 2) };
    let mut j = start;
    loop {
        let t_f64 = j as f64 * h;
        if t_f64 > limit {
            break;
        }
        // t = j · 2^-level exactly
        let t = Float::with_val(prec, j) >> level;
        let et = t.clone().exp();
        let emt = Float::with_val(prec, 1u32 / &et);
        let sinh = Float::with_val(prec, &et - &emt) / 2u32;
        let cosh = Float::with_val(prec, &et + &emt) / 2u32;
        // q = exp(-π sinh t); 1 - x = 2q/(1+q); w = (π/2) cosh t · 4q/(1+q)²
        let q = Float::with_val(prec, -(Float::with_val(prec, &half_pi * &sinh) * 2u32)).exp();
        let one_plus_q = Float::with_val(prec, 1u32 + &q);
        let complement = Float::with_val(prec, &q * 2u32) / &one_plus_q;
        let weight = Float::with_val(prec, &half_pi * &cosh) * 4u32 * &q
            / Float::with_val(prec, one_plus_q.square_ref());
        nodes.push(Node {
            t_is_zero: j == 0,
            complement,
            weight,
        });
        j += stride;
    }
    let table = Arc::new(nodes);
    node_cache()
        .lock()
        .expect("node cache poisoned")
        .insert(key, Arc::clone(&table));
    table
}

impl TanhSinh {
    pub fn new(prec: u32, tol_bits: u32) -> Self {
        TanhSinh {
            prec,
            tol_bits,
            min_level: 3,
            max_level: 12,
            extra_levels: 0,
        }
    }

    /// Integrates `f` over `[a, b]`. The closure receives points at the
    /// integrator's working precision.
    pub fn integrate<F>(&self, mut f: F, a: &Float, b: &Float) -> Result<QuadResult>
    where
        F: FnMut(&Float) -> Float,
    {
        let prec = self.prec;
        let half_len = Float::with_val(prec, b - a) / 2u32;
        let mut evaluations = 0usize;
        // Sum of w_t · [f(a + L(1-x_t)) + f(b - L(1-x_t))] over the nodes of
        // one level, without the step factor.
        let mut level_sum = |level: u32, evaluations: &mut usize| -> Float {
            let mut acc = Float::new(prec);
            for node in nodes_for_level(prec, level).iter() {
                let offset = Float::with_val(prec, &half_len * &node.complement);
                let left = Float::with_val(prec, a + &offset);
                if node.t_is_zero {
                    // 1 - x_0 = 1: the midpoint.
                    acc += &node.weight * f(&left);
                    *evaluations += 1;
                } else {
                    let right = Float::with_val(prec, b - &offset);
                    let pair = f(&left) + f(&right);
                    acc += &node.weight * pair;
                    *evaluations += 2;
                }
            }
            acc
        };

        // raw = Σ over all nodes so far; S_k = h_k · raw_k · half_len
        let mut raw = level_sum(0, &mut evaluations);
        let mut previous = Float::with_val(prec, &raw * &half_len);
        let tol = Float::with_val(prec, 1u32) >> self.tol_bits;
        let mut accept_at: Option<u32> = None;
        for level in 1..=self.max_level {
            raw += level_sum(level, &mut evaluations);
            let current = Float::with_val(prec, &raw * &half_len) >> level;
            let diff = Float::with_val(prec, &current - &previous).abs();
            let scale = Float::with_val(prec, current.abs_ref());
            let rel = if scale.is_zero() {
                diff.clone()
            } else {
                Float::with_val(prec, &diff / &scale)
            };
            if accept_at.is_none() && level >= self.min_level && rel <= tol {
                accept_at = Some(level + self.extra_levels);
            }
            if accept_at.is_some_and(|target| level >= target) {
                return Ok(QuadResult {
                    value: current,
                    level,
                    evaluations,
                    last_rel_diff: rel,
                });
            }
            previous = current;
        }
        Err(Error::precision(
            "tanh-sinh quadrature",
            format!(
                "no agreement to 2^-{} after level {}",
                self.tol_bits, self.max_level
            ),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_exactly_enough() {
        let quad = TanhSinh::new(128, 100);
        let a = Float::with_val(128, 0);
        let b = Float::with_val(128, 2);
        let r = quad
            .integrate(|x| Float::with_val(128, x * x) * 3u32, &a, &b)
            .unwrap();
        let err = (r.value - 8u32).abs();
        assert!(err < 1e-28, "{err}");
    }

    #[test]
    fn handles_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let quad = TanhSinh::new(128, 90);
        let a = Float::with_val(128, 0);
        let b = Float::with_val(128, 1);
        let r = quad
            .integrate(|x| Float::with_val(128, x.recip_sqrt_ref()), &a, &b)
            .unwrap();
        let err = (r.value - 2u32).abs();
        assert!(err < 1e-20, "{err}");
    }

    #[test]
    fn gaussian_on_a_wide_window() {
        // ∫_{-10}^{10} e^{-x²} dx = √π up to e^{-100}
        let prec = 192;
        let quad = TanhSinh::new(prec, 140);
        let a = Float::with_val(prec, -10);
        let b = Float::with_val(prec, 10);
        let r = quad
            .integrate(|x| (-Float::with_val(prec, x.square_ref())).exp(), &a, &b)
            .unwrap();
        let sqrt_pi = Float::with_val(prec, Constant::Pi).sqrt();
        let err = (r.value - sqrt_pi).abs();
        assert!(err < 1e-42, "{err}");
    }
}
