//! Closed-form costs, the sorting recurrence, entropy-ratio optimizers and
//! brute-force oracles.
//!
//! Ratios are exact [`BigRational`]s; only roots and logarithms use `f64`.

mod brute;
mod entropy;
mod exchange;
mod recurrence;
mod sampling;

pub use brute::{binomial, brute_force_optimal_partition_cost, compositions, for_each_composition};
pub use entropy::{
    a_tau, c_tau, c_tau_extremal, entropy_tau, extremal_total_alpha, minimize_linear_over_entropy,
    opt_tau_comparisons, opt_tau_scanned, opt_tau_scanned_limit, opt_tau_total_extremal,
    opt_tau_total_extremal_limit, TauOptimum,
};
pub use exchange::{
    cache_miss_estimate, misses_per_partition, partition_as, partition_se, partition_wa,
    rotate_coefficient, saved_writes_coefficient,
};
pub use recurrence::recurrence_solve_exact;
pub use sampling::{
    best_sampling_table, sampling_comparison_coeff, sampling_entropy, sampling_leading,
    sampling_scanned_coeff, BestSampling, CostKind,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::trees::TreeError;

/// Exact rational number used throughout.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("k must be at least 1")]
    NoPivots,
    #[error("n_max {0} exceeds the supported 5000")]
    TooLarge(usize),
    #[error("brute force supports k <= 3 and n <= 60, got k = {k}, n = {n}")]
    BruteForceRange { k: usize, n: usize },
    #[error("n = {n} is below k = {k}")]
    NBelowK { n: usize, k: usize },
    #[error("weights must be positive and finite")]
    BadWeights,
    #[error("at least two weights are needed")]
    TooFewWeights,
    #[error("vector has {got} entries, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("cost kind {0:?} does not use a tree")]
    NoTree(CostKind),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// `n/d` as an exact fraction.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `H_n = Σ_{i=1}^n 1/i`.
pub fn harmonic(n: u64) -> Rational {
    let mut h = Rational::zero();
    for i in 1..=n {
        h += ratio(1, i as i64);
    }
    h
}

pub(crate) fn harmonic_f64(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// `a / (H_{k+1} - 1)` exactly.
pub fn leading_coefficient_exact(k: usize, a: &Rational) -> Rational {
    a / (harmonic(k as u64 + 1) - int(1))
}

/// `a / (H_{k+1} - 1)`.
pub fn leading_coefficient(k: usize, a: f64) -> f64 {
    a / (harmonic_f64(k + 1) - 1.0)
}

/// Per-partition cost `a` (of `a·n + o(n)`) and the induced sorting
/// coefficient `c` (of `c·n ln n`).
#[derive(Debug, Clone, PartialEq)]
pub struct CostCoefficient {
    pub per_partition: Rational,
    pub leading: f64,
}

impl CostCoefficient {
    /// Without sampling: divisor `H_{k+1} - 1`.
    pub fn unsampled(k: usize, a: Rational) -> Self {
        let leading = to_f64(&leading_coefficient_exact(k, &a));
        CostCoefficient {
            per_partition: a,
            leading,
        }
    }

    /// With sampling vector `t`: divisor `H(t)`.
    pub fn sampled(t: &[usize], a: Rational) -> Self {
        let leading = to_f64(&(&a / sampling_entropy(t)));
        CostCoefficient {
            per_partition: a,
            leading,
        }
    }
}
