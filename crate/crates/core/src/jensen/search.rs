//! Sweeps over shifts and degrees: certification with precision
//! escalation, the threshold search for `N(d)`, convergence diagnostics and
//! the effective `d = 4` inequality check.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use rug::{Float, Integer};

use super::construct::{jensen_poly_exact, normalization_at, renormalize, renormalize_intervals};
use super::hermite::hermite;
use super::hyperbolic::{
    is_hyperbolic_exact, is_hyperbolic_interval, HyperbolicityCertificate, Method, Verdict,
};
use super::poly::Poly;
use crate::asymptotics::Family;
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::sequences::provider::VALUE_SLACK_BITS;
use crate::sequences::SequenceProvider;

/// Working precisions tried in turn while a certificate is indeterminate.
pub const PREC_LADDER: [u32; 4] = [128, 256, 512, 1024];

#[derive(Clone, Debug)]
pub struct InstanceResult {
    pub d: usize,
    pub n: u64,
    pub certificate: HyperbolicityCertificate,
    /// Precision of the deciding rung; `None` on the exact path.
    pub prec_bits: Option<u32>,
}

fn ladder(base_prec: u32) -> Vec<u32> {
    let rungs: Vec<u32> = PREC_LADDER
        .iter()
        .copied()
        .filter(|&p| p >= base_prec)
        .collect();
    if rungs.is_empty() {
        vec![base_prec]
    } else {
        rungs
    }
}

fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// Enclosures of `α(n), …, α(n+d)` at `prec` bits.
fn value_intervals(seq: &SequenceProvider, d: usize, n: u64, prec: u32) -> Result<Vec<Interval>> {
    let rel = Float::with_val(64, 1u32) >> (prec - VALUE_SLACK_BITS);
    (0..=d as u64)
        .map(|j| {
            Ok(Interval::with_rel_radius(
                &*seq.value_at(n + j, prec)?,
                &rel,
                prec,
            ))
        })
        .collect()
}

/// Shift by the mean root and scale by the root spread, for shifts where
/// the family's `A`, `δ` are unavailable. Returns the transformed
/// coefficients or a certificate when the spread is provably imaginary.
fn center_and_scale(
    j: &[Interval],
) -> std::result::Result<Vec<Interval>, HyperbolicityCertificate> {
    let d = j.len() - 1;
    let prec = j[d].prec();
    let indeterminate = HyperbolicityCertificate {
        verdict: Verdict::Indeterminate,
        method: Method::HermiteHankelInterval,
        margin: BigReal::zero(64),
        degree: d,
    };
    // e1 = Σ roots, s2 = Σ roots², variance = s2/d − (e1/d)²
    let (Some(e1), Some(e2)) = (j[d - 1].neg().div(&j[d]), j[d - 2].div(&j[d])) else {
        return Err(indeterminate);
    };
    let s2 = e1.mul(&e1).sub(&e2.mul_i64(2));
    let dd = Interval::from_i64(d as i64, prec);
    let mean = e1.div(&dd).expect("d > 0");
    let var = s2.div(&dd).expect("d > 0").sub(&mean.mul(&mean));
    if var.is_negative() {
        return Err(HyperbolicityCertificate {
            verdict: Verdict::NotHyperbolic,
            method: Method::HermiteHankelInterval,
            margin: BigReal::new(Float::with_val(64, var.hi())),
            degree: d,
        });
    }
    let mu = mean.mid();
    let mid_var = var.mid();
    let sigma = if mid_var > 0u32 {
        mid_var.sqrt()
    } else {
        Float::with_val(prec, 1u32)
    };
    // q_k = σ^k Σ_{i≥k} C(i,k) j_i μ^{i−k}
    let mu_i = Interval::point(&mu, prec);
    let sigma_i = Interval::point(&sigma, prec);
    let mut mu_pow = vec![Interval::from_i64(1, prec)];
    for k in 1..=d {
        mu_pow.push(mu_pow[k - 1].mul(&mu_i));
    }
    let mut sigma_pow = Interval::from_i64(1, prec);
    let mut out = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut sum = Interval::from_i64(0, prec);
        for i in k..=d {
            let c = Interval::from_integer(&binomial(i, k), prec);
            sum = sum.add(&j[i].mul(&c).mul(&mu_pow[i - k]));
        }
        out.push(sum.mul(&sigma_pow));
        sigma_pow = sigma_pow.mul(&sigma_i);
    }
    Ok(out)
}

fn certify_at(
    seq: &SequenceProvider,
    d: usize,
    n: u64,
    prec: u32,
) -> Result<HyperbolicityCertificate> {
    let values = value_intervals(seq, d, n, prec)?;
    let params = seq.params();
    let closed_form = !matches!(params.family, Family::Empirical) && n >= params.n_min;
    if closed_form {
        if let Ok((a, delta)) = params.a_delta(n, prec) {
            return Ok(match renormalize_intervals(&values, &a, &delta) {
                Some(c) => is_hyperbolic_interval(&c),
                None => HyperbolicityCertificate {
                    verdict: Verdict::Indeterminate,
                    method: Method::HermiteHankelInterval,
                    margin: BigReal::zero(64),
                    degree: d,
                },
            });
        }
    }
    let jensen: Vec<Interval> = values
        .iter()
        .enumerate()
        .map(|(i, v)| v.mul(&Interval::from_integer(&binomial(d, i), prec)))
        .collect();
    if d < 2 {
        return Ok(is_hyperbolic_interval(&jensen));
    }
    Ok(match center_and_scale(&jensen) {
        Ok(c) => is_hyperbolic_interval(&c),
        Err(cert) => cert,
    })
}

/// Certify `J_α^{d,n}`: exactly when the sequence has exact values,
/// otherwise with interval arithmetic on the renormalized polynomial,
/// escalating through [`PREC_LADDER`] from `base_prec`.
pub fn certify_instance(
    seq: &SequenceProvider,
    d: usize,
    n: u64,
    base_prec: u32,
) -> Result<InstanceResult> {
    if d == 0 {
        return Err(Error::domain("is_hyperbolic", "degree must be at least 1"));
    }
    if seq.has_exact() {
        let j = jensen_poly_exact(seq, d, n)?;
        return Ok(InstanceResult {
            d,
            n,
            certificate: is_hyperbolic_exact(&j),
            prec_bits: None,
        });
    }
    let mut last = None;
    for prec in ladder(base_prec) {
        let certificate = certify_at(seq, d, n, prec)?;
        if certificate.verdict != Verdict::Indeterminate {
            return Ok(InstanceResult {
                d,
                n,
                certificate,
                prec_bits: Some(prec),
            });
        }
        last = Some((certificate, prec));
    }
    let (certificate, prec) = last.expect("ladder is nonempty");
    Ok(InstanceResult {
        d,
        n,
        certificate,
        prec_bits: Some(prec),
    })
}

/// Warm caches in index order so the parallel phase mostly reads.
fn prefetch(seq: &SequenceProvider, ns: RangeInclusive<u64>, prec: u32) -> Result<()> {
    if seq.has_exact() {
        seq.exact_at(*ns.end())?;
        return Ok(());
    }
    for n in ns {
        seq.value_at(n, prec)?;
    }
    Ok(())
}

/// Certify every `(d, n)` in the grid. Results are ordered by `(d, n)`
/// independently of the thread count.
pub fn sweep(
    seq: &SequenceProvider,
    degrees: RangeInclusive<usize>,
    shifts: RangeInclusive<u64>,
    base_prec: u32,
) -> Result<Vec<InstanceResult>> {
    if degrees.is_empty() || shifts.is_empty() {
        return Ok(Vec::new());
    }
    prefetch(
        seq,
        *shifts.start()..=shifts.end() + *degrees.end() as u64,
        base_prec,
    )?;
    let grid: Vec<(usize, u64)> = degrees
        .flat_map(|d| shifts.clone().map(move |n| (d, n)))
        .collect();
    grid.par_iter()
        .map(|&(d, n)| certify_instance(seq, d, n, base_prec))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FindNReport {
    pub d: usize,
    pub n_start: u64,
    pub n_max: u64,
    /// Smallest `N` with `J^{d,n}` hyperbolic for every `n ∈ [N, n_max]`.
    pub threshold: u64,
    pub last_failure: Option<u64>,
    pub failures: usize,
}

/// Scan `n_start ..= n_max` for the hyperbolicity threshold. An
/// indeterminate instance after escalation is an error.
pub fn find_n(
    seq: &SequenceProvider,
    d: usize,
    n_start: u64,
    n_max: u64,
    base_prec: u32,
) -> Result<FindNReport> {
    if n_start > n_max {
        return Err(Error::domain("find_N", "empty range"));
    }
    let results = sweep(seq, d..=d, n_start..=n_max, base_prec)?;
    let mut last_failure = None;
    let mut failures = 0;
    for r in &results {
        match r.certificate.verdict {
            Verdict::Hyperbolic => {}
            Verdict::NotHyperbolic => {
                last_failure = Some(r.n);
                failures += 1;
            }
            Verdict::Indeterminate => {
                return Err(Error::precision(
                    "find_N",
                    format!(
                        "J^{{{d},{}}} undecided after escalating to {:?} bits",
                        r.n, r.prec_bits
                    ),
                ));
            }
        }
    }
    Ok(FindNReport {
        d,
        n_start,
        n_max,
        threshold: last_failure.map_or(n_start, |n| n + 1),
        last_failure,
        failures,
    })
}

#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub n: u64,
    pub poly: Poly,
    /// Largest coefficient deviation from `H_d`.
    pub deviation: BigReal,
}

/// Renormalized polynomials along `n_list` and their distance to `H_d`.
pub fn convergence_report(
    seq: &SequenceProvider,
    d: usize,
    n_list: &[u64],
    prec: u32,
) -> Result<Vec<ConvergenceRow>> {
    let target = hermite(d);
    n_list
        .par_iter()
        .map(|&n| {
            let poly = renormalize(seq, d, n, prec)?;
            let deviation = poly.max_coeff_distance(&target);
            Ok(ConvergenceRow { n, poly, deviation })
        })
        .collect()
}

/// `ε₄(k)` for `k = 0..=4`.
pub const EPS4: [f64; 5] = [0.804, 7.313, 0.813, 1.384, 0.041];
/// `s_k` for `k = 0..=4`: the side of `h_k` on which `β_k` lies.
pub const SIGNS4: [i32; 5] = [-1, -1, 1, 1, -1];
/// Coefficients of `H₄ = X⁴ − 12X² + 12`.
pub const H4: [f64; 5] = [12.0, 0.0, -12.0, 0.0, 1.0];

#[derive(Clone, Debug)]
pub struct EffectiveRow {
    pub n: u64,
    pub delta: BigReal,
    /// `β₀ … β₄`.
    pub beta: Vec<BigReal>,
    /// The five displayed bounds on `β_k`, indexed by `k`.
    pub bounds_hold: [bool; 5],
    /// Whether the width of each displayed bound is below `ε₄(k)`.
    pub bounds_in_box: [bool; 5],
    /// `0 ≤ s_k(β_k − h_k) < ε₄(k)` checked directly.
    pub in_box: [bool; 5],
}

impl EffectiveRow {
    pub fn passes(&self) -> bool {
        self.bounds_hold
            .iter()
            .chain(&self.bounds_in_box)
            .all(|&b| b)
    }
}

#[derive(Clone, Debug)]
pub struct EffectiveReport {
    pub rows: Vec<EffectiveRow>,
    /// First `n` in the list at which every bound holds and fits in the box.
    pub first_pass: Option<u64>,
}

impl EffectiveReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(EffectiveRow::passes)
    }
}

/// The `d = 4` inequality template for `n ≥ 100`:
///
/// ```text
/// 0 < β₃ < 28δ,  −145.70δ < β₁ < 0,  1 − 16.05δ² < β₄ < 1,
/// −12 < β₂ < −12 + 16.20δ,  12 − 16.01δ < β₀ < 12
/// ```
pub fn effective_check_d4(
    seq: &SequenceProvider,
    n_list: &[u64],
    prec: u32,
) -> Result<EffectiveReport> {
    if let Some(&n) = n_list.iter().find(|&&n| n < 100) {
        return Err(Error::domain(
            "effective_check_d4",
            format!("n = {n} < 100"),
        ));
    }
    let rows: Vec<EffectiveRow> = n_list
        .par_iter()
        .map(|&n| {
            let poly = renormalize(seq, 4, n, prec)?;
            let (_, delta) = normalization_at(seq, n, prec)?;
            let b: Vec<f64> = poly.coeffs().iter().map(BigReal::to_f64).collect();
            let dl = delta.to_f64();
            let bounds_hold = [
                12.0 - 16.01 * dl < b[0] && b[0] < 12.0,
                -145.70 * dl < b[1] && b[1] < 0.0,
                -12.0 < b[2] && b[2] < -12.0 + 16.20 * dl,
                0.0 < b[3] && b[3] < 28.0 * dl,
                1.0 - 16.05 * dl * dl < b[4] && b[4] < 1.0,
            ];
            let widths = [
                16.01 * dl,
                145.70 * dl,
                16.20 * dl,
                28.0 * dl,
                16.05 * dl * dl,
            ];
            let bounds_in_box = std::array::from_fn(|k| widths[k] < EPS4[k]);
            let in_box = std::array::from_fn(|k| {
                let side = f64::from(SIGNS4[k]) * (b[k] - H4[k]);
                (0.0..EPS4[k]).contains(&side)
            });
            Ok(EffectiveRow {
                n,
                delta,
                beta: poly.coeffs().to_vec(),
                bounds_hold,
                bounds_in_box,
                in_box,
            })
        })
        .collect::<Result<_>>()?;
    let first_pass = rows.iter().find(|r| r.passes()).map(|r| r.n);
    Ok(EffectiveReport { rows, first_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_quadratic_threshold() {
        let p = SequenceProvider::partition();
        let report = find_n(&p, 2, 1, 200, 128).unwrap();
        assert_eq!(report.threshold, 25);
        assert_eq!(report.last_failure, Some(24));
    }

    #[test]
    fn degree_one_threshold_is_start() {
        let p = SequenceProvider::partition();
        assert_eq!(find_n(&p, 1, 1, 50, 128).unwrap().threshold, 1);
    }

    #[test]
    fn interval_path_matches_exact_on_partitions() {
        // strip exactness by going through decimal strings
        let exact = SequenceProvider::partition();
        let table: Vec<rug::Integer> = (0..=60)
            .map(|n| exact.exact_at(n).unwrap().unwrap())
            .collect();
        let text: Vec<String> = table.iter().map(|v| format!("{v}.0")).collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let mut csv = String::from("n,value\n");
        for (n, v) in text.iter().enumerate() {
            csv.push_str(&format!("{n},{v}\n"));
        }
        std::fs::write(&path, csv).unwrap();
        let floaty =
            crate::sequences::load_sequence(&path, crate::sequences::SequenceFileFormat::Csv)
                .unwrap()
                .with_params(crate::asymptotics::AsymParams::partition());
        assert!(!floaty.has_exact());
        for d in 2..=3 {
            for n in 3..=55 {
                let a = certify_instance(&exact, d, n, 128)
                    .unwrap()
                    .certificate
                    .verdict;
                let b = certify_instance(&floaty, d, n, 128)
                    .unwrap()
                    .certificate
                    .verdict;
                assert_eq!(a, b, "d = {d}, n = {n}");
            }
        }
    }
}
