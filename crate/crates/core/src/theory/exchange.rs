//! Per-partition cost coefficients of Exchange_k; all depend on
//! `m = ⌈(k+1)/2⌉` and the parity of `k`.

use super::{harmonic_f64, ratio, Rational};
use crate::rearrange::split_group;

fn parts(k: usize) -> (i64, bool) {
    (split_group(k) as i64, k % 2 == 1)
}

/// Scanned elements per element.
pub fn partition_se(k: usize) -> Rational {
    let (m, odd) = parts(k);
    if odd {
        ratio(m + 1, 2)
    } else {
        ratio(m * m, 2 * m - 1)
    }
}

/// Write accesses per element.
pub fn partition_wa(k: usize) -> Rational {
    let (m, odd) = parts(k);
    if odd {
        ratio(2 * m * m * m + 3 * m * m - m - 2, 2 * m * (2 * m + 1))
    } else {
        ratio(2 * m * m * m - 2 * m - 1, 2 * m * (2 * m - 1))
    }
}

/// Assignments per element.
pub fn partition_as(k: usize) -> Rational {
    let (m, odd) = parts(k);
    if odd {
        ratio(2 * m * m * m + 6 * m * m - m - 4, 2 * m * (2 * m + 1))
    } else {
        ratio(2 * m * m * m + 3 * m * m - 5 * m - 2, 2 * m * (2 * m - 1))
    }
}

/// Rotations per element.
pub fn rotate_coefficient(k: usize) -> Rational {
    let (m, odd) = parts(k);
    if odd {
        ratio(3 * m * m - 2, 2 * m * (2 * m + 1))
    } else {
        ratio(3 * m * m - 3 * m - 1, 2 * m * (2 * m - 1))
    }
}

/// Scanned cells left in place per element (`A_{m-1}` found by `i`, `A_m`
/// found by `j`).
pub fn saved_writes_coefficient(k: usize) -> Rational {
    let (m, odd) = parts(k);
    if odd {
        ratio(m + 1, m * (2 * m + 1))
    } else {
        ratio(2 * m + 1, 2 * m * (2 * m - 1))
    }
}

/// Cache misses of one partitioning step per element for block size `b`.
pub fn misses_per_partition(a: f64, b: f64) -> f64 {
    a / b
}

/// Predicted cache misses of a full sort: every scanned cell costs `1/B`
/// misses per level, except on levels whose subarrays fit into `M` cells.
pub fn cache_miss_estimate(k: usize, a: f64, b: f64, m: f64, n: f64) -> f64 {
    let div = harmonic_f64(k + 1) - 1.0;
    a / (b * div) * n * n.ln() - a / (b * div) * n * m.ln()
}
