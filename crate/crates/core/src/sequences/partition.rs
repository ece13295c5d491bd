//! Partition numbers by Euler's pentagonal-number recurrence
//! `p(n) = Σ_{k≥1} (−1)^{k+1} (p(n − k(3k−1)/2) + p(n − k(3k+1)/2))`.

use rug::Integer;

/// `p(0), …, p(n_max)`.
pub fn partition_table(n_max: usize) -> Vec<Integer> {
    let mut p = Vec::with_capacity(n_max + 1);
    extend_table(&mut p, n_max);
    p
}

/// Grow a prefix `p(0), …, p(k)` of the table through `p(n_max)`.
pub(crate) fn extend_table(p: &mut Vec<Integer>, n_max: usize) {
    if p.is_empty() {
        p.push(Integer::from(1));
    }
    for n in p.len()..=n_max {
        let mut acc = Integer::new();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let plus = k % 2 == 1;
            let mut add = |m: usize| {
                if plus {
                    acc += &p[m];
                } else {
                    acc -= &p[m];
                }
            };
            add(n - g1);
            if g2 <= n {
                add(n - g2);
            }
        }
        p.push(acc);
    }
}

/// `p(n)`.
pub fn partition(n: u64) -> Integer {
    partition_table(n as usize)
        .pop()
        .expect("table has n + 1 entries")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Partitions of `n` with parts at most `max`, by direct recursion.
    fn count(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|part| count(n - part, part)).sum()
    }

    #[test]
    fn small_values() {
        assert_eq!(partition(0), 1);
        assert_eq!(partition(1), 1);
        assert_eq!(partition(5), 7);
        assert_eq!(partition(25), 1958);
    }

    #[test]
    fn recurrence_matches_enumeration() {
        let table = partition_table(30);
        for n in 0..=30u32 {
            assert_eq!(table[n as usize], count(n, n), "n = {n}");
        }
    }

    #[test]
    fn hardy_ramanujan_growth() {
        // p(n) ~ e^{π√(2n/3)} / (4n√3)
        let n = 1000.0f64;
        let log_p = rug::Float::with_val(256, &partition(1000)).ln().to_f64();
        let exponent = std::f64::consts::PI * (2.0 * n / 3.0).sqrt();
        let log_hr = exponent - (4.0 * n * 3f64.sqrt()).ln();
        assert!((log_p - log_hr).exp() - 1.0 < 0.02 && (log_p - log_hr).exp() > 0.98);
        // the exponent alone undershoots by the log(4n√3) term
        assert!(log_p / exponent < 0.9);
    }
}
