//! Idealized group proportions `τ` and minimization of linear cost over
//! entropy.

use super::TheoryError;
use crate::rearrange::{scan_multiplicity, split_group};
use crate::trees::ComparisonTree;

const ROOT_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

/// `-Σ τ_i ln τ_i`, with `0 ln 0 = 0`.
pub fn entropy_tau(tau: &[f64]) -> f64 {
    -tau.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// Minimizer of `Σ α_i τ_i / H(τ)` over the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct TauOptimum {
    /// Root of `Σ x^{α_i} = 1` in `(0, 1)`.
    pub x: f64,
    pub tau: Vec<f64>,
    /// The minimum, `-1 / ln x`.
    pub value: f64,
}

/// Largest `x` in `(0,1)` found by bisection with `Σ x^{α_i} - 1` within
/// tolerance.
fn bisect<F: Fn(f64) -> f64>(f: F) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut mid = 0.5;
    for _ in 0..MAX_ITER {
        mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v.abs() <= ROOT_TOL {
            break;
        }
        if v > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    mid
}

/// The minimum of `Σ α_i τ_i / H(τ)` is attained at `τ_i = x^{α_i}` where
/// `Σ x^{α_i} = 1`, and equals `-1/ln x`.
pub fn minimize_linear_over_entropy(alpha: &[f64]) -> Result<TauOptimum, TheoryError> {
    if alpha.len() < 2 {
        return Err(TheoryError::TooFewWeights);
    }
    if alpha.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(TheoryError::BadWeights);
    }
    let x = bisect(|x| alpha.iter().map(|&a| x.powf(a)).sum::<f64>() - 1.0);
    Ok(TauOptimum {
        x,
        tau: alpha.iter().map(|&a| x.powf(a)).collect(),
        value: -1.0 / x.ln(),
    })
}

fn check_len(tau: &[f64], k: usize) -> Result<(), TheoryError> {
    if tau.len() != k + 1 {
        return Err(TheoryError::Dimension {
            got: tau.len(),
            expected: k + 1,
        });
    }
    Ok(())
}

/// Comparisons per element: `Σ depth_i τ_i`.
pub fn c_tau(tree: &ComparisonTree, tau: &[f64]) -> Result<f64, TheoryError> {
    check_len(tau, tree.k())?;
    Ok(tree
        .depth_profile()
        .iter()
        .zip(tau)
        .map(|(&d, &t)| d as f64 * t)
        .sum())
}

/// Scanned elements per element: `Σ α_i τ_i` with the cursor multiplicities.
pub fn a_tau(k: usize, tau: &[f64]) -> Result<f64, TheoryError> {
    check_len(tau, k)?;
    Ok(scan_multiplicity(k)
        .iter()
        .zip(tau)
        .map(|(&a, &t)| a as f64 * t)
        .sum())
}

/// `c_tau` of the extremal tree written out by depth classes.
pub fn c_tau_extremal(k: usize, tau: &[f64]) -> Result<f64, TheoryError> {
    check_len(tau, k)?;
    let m = split_group(k);
    let mf = m as f64;
    let pair = |i: usize| (i as f64 + 1.0) * (tau[m - i] + tau[m + i - 1]);
    if k == 1 {
        return Ok(tau[0] + tau[1]);
    }
    Ok(if k % 2 == 1 {
        mf * (tau[0] + tau[k]) + (1..m).map(pair).sum::<f64>()
    } else {
        mf * (tau[0] + tau[1]) + (mf - 1.0) * tau[k] + (1..m - 1).map(pair).sum::<f64>()
    })
}

/// Best `τ` for comparisons under `tree`. Always `1/ln 2` because the leaf
/// depths satisfy Kraft's equality.
pub fn opt_tau_comparisons(tree: &ComparisonTree) -> TauOptimum {
    let alpha: Vec<f64> = tree.depth_profile().iter().map(|&d| d as f64).collect();
    minimize_linear_over_entropy(&alpha).expect("k >= 1 gives two positive depths")
}

/// Best `τ` for scanned elements; `τ_i = x^{α_i}` with the cursor
/// multiplicities `(m, …, 1, 1, …, m)` (odd `k`) or `(m, …, 1, 1, …, m-1)`
/// (even `k`).
pub fn opt_tau_scanned(k: usize) -> Result<TauOptimum, TheoryError> {
    if k == 0 {
        return Err(TheoryError::NoPivots);
    }
    let alpha: Vec<f64> = scan_multiplicity(k).iter().map(|&a| a as f64).collect();
    minimize_linear_over_entropy(&alpha)
}

/// Limit `k → ∞` of [`opt_tau_scanned`]: `1 = 2x/(1-x)`, so `x = 1/3`.
pub fn opt_tau_scanned_limit() -> TauOptimum {
    let x = bisect(|x| 2.0 * x / (1.0 - x) - 1.0);
    TauOptimum {
        x,
        tau: Vec::new(),
        value: -1.0 / x.ln(),
    }
}

/// Per-group weights `depth + scan multiplicity` of the extremal tree.
pub fn extremal_total_alpha(k: usize) -> Result<Vec<u32>, TheoryError> {
    let tree = ComparisonTree::extremal(k)?;
    Ok(tree
        .depth_profile()
        .iter()
        .zip(scan_multiplicity(k))
        .map(|(&d, a)| d + a)
        .collect())
}

/// Best `τ` for comparisons plus scanned elements with the extremal tree.
pub fn opt_tau_total_extremal(k: usize) -> Result<TauOptimum, TheoryError> {
    let alpha: Vec<f64> = extremal_total_alpha(k)?.iter().map(|&a| a as f64).collect();
    minimize_linear_over_entropy(&alpha)
}

/// Limit of [`opt_tau_total_extremal`]: root of `2x³ + x² = 1`.
pub fn opt_tau_total_extremal_limit() -> TauOptimum {
    let x = bisect(|x| 2.0 * x * x * x + x * x - 1.0);
    TauOptimum {
        x,
        tau: Vec::new(),
        value: -1.0 / x.ln(),
    }
}
