use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Rational, TheoryError};

/// Exact `E(C_0..=C_{n_max})` for
/// `E(C_n) = P_n + (k+1)/C(n,k) · Σ_{ℓ=0}^{n-k} C(n-ℓ-1, k-1) E(C_ℓ)`,
/// with `E(C_n) = 0` for `n < k`.
///
/// The sums `S_j(n) = Σ_{ℓ<n} C(n-1-ℓ, j) E(C_ℓ)` obey
/// `S_j(n+1) = S_j(n) + S_{j-1}(n) + [j = 0] E(C_n)`, so each step costs
/// `O(k)` additions. The sums are kept as integers over one shared
/// denominator, which leaves two gcds per step.
pub fn recurrence_solve_exact<F>(
    k: usize,
    partition_cost: F,
    n_max: usize,
) -> Result<Vec<Rational>, TheoryError>
where
    F: Fn(usize) -> Rational,
{
    if k == 0 {
        return Err(TheoryError::NoPivots);
    }
    if n_max > 5000 {
        return Err(TheoryError::TooLarge(n_max));
    }
    let mut e = Vec::with_capacity(n_max + 1);
    // S_j = s[j] / den
    let mut s = vec![BigInt::zero(); k];
    let mut den = BigInt::one();
    let kp1 = BigInt::from(k as u64 + 1);
    // C(n, k) maintained incrementally: C(n+1, k) = C(n, k)·(n+1)/(n+1-k).
    let mut binom = BigInt::one();
    for n in 0..=n_max {
        let value = if n < k {
            Rational::zero()
        } else {
            if n > k {
                binom = binom * BigInt::from(n) / BigInt::from(n - k);
            }
            let p = partition_cost(n);
            let base = &den * &binom;
            // P + (k+1) S_{k-1} / (den · C(n,k))
            Rational::new(
                p.numer() * &base + &kp1 * &s[k - 1] * p.denom(),
                p.denom() * base,
            )
        };
        for j in (1..k).rev() {
            let (lo, hi) = s.split_at_mut(j);
            hi[0] += &lo[j - 1];
        }
        if !value.is_zero() {
            let g = den.gcd(value.denom());
            let scale = value.denom() / &g;
            if !scale.is_one() {
                for x in &mut s {
                    *x *= &scale;
                }
                den *= &scale;
            }
            s[0] += value.numer() * (&den / value.denom());
        }
        e.push(value);
    }
    Ok(e)
}
