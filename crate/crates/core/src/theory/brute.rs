use num_bigint::BigInt;
use num_traits::Zero;

use super::{int, Rational, TheoryError};
use crate::trees::OptimalDp;

/// `C(n, r)` exactly.
pub fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::from(1u32);
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Calls `f` on every composition of `total` into `parts` entries, in
/// lexicographic order, without materializing them.
pub fn for_each_composition<F: FnMut(&[usize])>(total: usize, parts: usize, mut f: F) {
    fn go<F: FnMut(&[usize])>(pos: usize, left: usize, cur: &mut [usize], f: &mut F) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            f(cur);
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            go(pos + 1, left - v, cur, f);
        }
    }
    if parts == 0 {
        return;
    }
    let mut cur = vec![0; parts];
    go(0, total, &mut cur, &mut f);
}

/// All ways to write `total` as an ordered sum of `parts` non-negative
/// integers, in lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; parts];
    fn go(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            go(pos + 1, left - v, cur, out);
        }
    }
    if parts > 0 {
        go(0, total, &mut cur, &mut out);
    }
    out
}

/// Mean over all pivot sets of the cost of the best tree for the resulting
/// group sizes: `(1/C(n,k)) Σ_{a_0+…+a_k = n-k} min_λ cost^λ(a)`.
pub fn brute_force_optimal_partition_cost(k: usize, n: usize) -> Result<Rational, TheoryError> {
    if k == 0 {
        return Err(TheoryError::NoPivots);
    }
    if k > 3 || n > 60 {
        return Err(TheoryError::BruteForceRange { k, n });
    }
    if n < k {
        return Err(TheoryError::NBelowK { n, k });
    }
    let mut sum = 0u64;
    let mut dp = OptimalDp::new(k + 1);
    let mut gv = vec![0u64; k + 1];
    for_each_composition(n - k, k + 1, |c| {
        for (g, &x) in gv.iter_mut().zip(c) {
            *g = x as u64;
        }
        sum += dp.run(&gv);
    });
    Ok(int(sum) / Rational::from_integer(binomial(n as u64, k as u64)))
}
