use mpqs_core::classify::{classify_sequence, Strategy};
use mpqs_core::theory::*;
use mpqs_core::trees::{balanced_tree, enumerate_trees, extremal_tree, parse, ComparisonTree};
use mpqs_core::Key;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Direct evaluation of the recurrence with binomials, for cross-checking
/// the prefix-sum solver.
fn recurrence_direct(k: usize, p: impl Fn(usize) -> Rational, n_max: usize) -> Vec<Rational> {
    let mut e: Vec<Rational> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n < k {
            e.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        for (l, el) in e.iter().enumerate().take(n - k + 1) {
            let c = binomial((n - l - 1) as u64, (k - 1) as u64);
            acc += Rational::from_integer(c) * el;
        }
        let norm = Rational::from_integer(binomial(n as u64, k as u64));
        e.push(p(n) + Rational::from_integer((k as u64 + 1).into()) * acc / norm);
    }
    e
}

#[test]
fn harmonic_numbers() {
    assert_eq!(harmonic(1), q(1, 1));
    assert_eq!(harmonic(4), q(25, 12));
    assert_eq!(harmonic(8), q(761, 280));
}

#[test]
fn leading_coefficients() {
    assert_eq!(leading_coefficient_exact(3, &q(2, 1)), q(24, 13));
    assert_eq!(leading_coefficient_exact(1, &q(1, 1)), q(2, 1));
    assert_eq!(leading_coefficient_exact(3, &q(133, 72)), q(133, 78));
    assert!(close(leading_coefficient(3, 2.0), 24.0 / 13.0, 1e-12));
    let c = CostCoefficient::sampled(&[0, 0, 0, 0], q(2, 1));
    assert!(close(c.leading, 24.0 / 13.0, 1e-12));
}

#[test]
fn recurrence_classic_closed_form() {
    let e = recurrence_solve_exact(1, |n| int(n.saturating_sub(1) as u64), 2000).unwrap();
    assert_eq!(e[1], Rational::zero());
    assert_eq!(e[3], q(8, 3));
    let mut h = Rational::zero();
    for (n, v) in e.iter().enumerate() {
        if n > 0 {
            h += q(1, n as i64);
        }
        let closed = int(2 * (n as u64 + 1)) * &h - int(4 * n as u64);
        assert_eq!(*v, closed, "n = {n}");
    }
}

#[test]
fn recurrence_matches_direct_evaluation() {
    for k in 1..=5 {
        let p = |n: usize| int((n * n) as u64) / int(7) + int(n as u64);
        let fast = recurrence_solve_exact(k, p, 70).unwrap();
        let slow = recurrence_direct(k, p, 70);
        assert_eq!(fast, slow, "k = {k}");
    }
    assert!(recurrence_solve_exact(2, |_| int(0), 5001).is_err());
}

#[test]
fn recurrence_three_pivot_leading_term() {
    // E(C_n) = c n ln n + d n + o(n) with a sizeable negative d, so the raw
    // ratio is still far below c at n = 4000. E(2n) - 2E(n) removes d.
    let n = 4000;
    let e = recurrence_solve_exact(3, |m| int(2 * m.saturating_sub(3) as u64), n).unwrap();
    let c = 24.0 / 13.0;
    let raw = |m: usize| f(&e[m]) / (m as f64 * (m as f64).ln());
    assert!(raw(1000) < raw(2000) && raw(2000) < raw(4000) && raw(4000) < c);
    let doubling = f(&(e[n].clone() - int(2) * &e[n / 2])) / (n as f64 * 2f64.ln());
    assert!((doubling - c).abs() / c < 0.01, "{doubling}");
}

#[test]
fn exchange_coefficients() {
    assert_eq!(partition_se(5), q(2, 1));
    assert_eq!(partition_wa(1), q(1, 3));
    assert_eq!(partition_as(9), q(391, 110));
    assert!(close(
        leading_coefficient(9, f(&partition_as(9))),
        1.843,
        5e-4
    ));
    assert!(close(
        leading_coefficient(1, f(&partition_wa(1))),
        0.667,
        5e-4
    ));
    assert_eq!(rotate_coefficient(1), q(1, 6));
    assert_eq!(rotate_coefficient(2), q(5, 12));
    for (k, se) in [
        (1, q(1, 1)),
        (2, q(4, 3)),
        (3, q(3, 2)),
        (5, q(2, 1)),
        (7, q(5, 2)),
    ] {
        assert_eq!(partition_se(k), se, "k = {k}");
    }
    assert_eq!(partition_wa(2), q(11, 12));
    assert_eq!(partition_as(1), q(1, 2));
}

#[test]
fn exchange_identities() {
    for k in 1..=15 {
        assert_eq!(
            partition_as(k),
            partition_wa(k) + rotate_coefficient(k),
            "k = {k}"
        );
        assert_eq!(
            partition_wa(k),
            partition_se(k) - saved_writes_coefficient(k),
            "k = {k}"
        );
    }
}

#[test]
fn scanned_coefficient_from_mean_group_size() {
    // Each group holds (n-k)/(k+1) elements on average; cursor b_h covers
    // h groups on the left, k-h on the right.
    for k in 1..=15 {
        let m = (k + 2) / 2;
        let mut acc = q(1, 1);
        for h in 1..k {
            let groups = if h < m { h } else { k - h };
            acc += q(groups as i64, k as i64 + 1);
        }
        assert_eq!(partition_se(k), acc, "k = {k}");
    }
}

#[test]
fn cache_misses() {
    assert!(close(misses_per_partition(1.0, 8.0), 0.125, 1e-15));
    assert!(close(misses_per_partition(2.0, 8.0), 0.25, 1e-15));
    let n = 1e6;
    let full = cache_miss_estimate(5, 2.0, 8.0, 1.0, n);
    assert!(close(
        full,
        leading_coefficient(5, 2.0) / 8.0 * n * n.ln(),
        1e-6
    ));
    let with_m = cache_miss_estimate(5, 2.0, 8.0, 3751.0, n);
    let d = 2.0 / (8.0 * (f(&harmonic(6)) - 1.0)) * n * 3751f64.ln();
    assert!(close(full - with_m, d, 1e-6));
}

#[test]
fn sampling_entropy_values() {
    for k in 1..=12 {
        assert_eq!(
            sampling_entropy(&vec![0; k + 1]),
            harmonic(k as u64 + 1) - q(1, 1)
        );
    }
    assert_eq!(sampling_entropy(&[1, 1, 1, 1]), q(341, 280));
    assert!(close(f(&sampling_entropy(&[0, 2, 2, 0])), 1.092857, 1e-6));
}

#[test]
fn sampling_coefficients() {
    let l2 = parse("[2,1,3]").unwrap();
    let c = sampling_comparison_coeff(&l2, &[1, 1, 1, 1]).unwrap();
    assert_eq!(c, q(2, 1));
    assert!(close(sampling_leading(&c, &[1, 1, 1, 1]), 1.642, 5e-4));
    let s = sampling_scanned_coeff(3, &[0, 2, 2, 0]).unwrap();
    assert_eq!(s, q(5, 4));
    assert!(close(sampling_leading(&s, &[0, 2, 2, 0]), 1.144, 5e-4));
    for k in 1..=15 {
        let t = vec![0; k + 1];
        assert_eq!(sampling_scanned_coeff(k, &t).unwrap(), partition_se(k));
        let a = q(3, 2);
        assert!(close(
            sampling_leading(&a, &t),
            leading_coefficient(k, 1.5),
            1e-12
        ));
    }
    let t = [0, 1, 2, 2, 1, 0];
    let ex = extremal_tree(5).unwrap();
    let sum = sampling_comparison_coeff(&ex, &t).unwrap() + sampling_scanned_coeff(5, &t).unwrap();
    assert!(close(sampling_leading(&sum, &t), 2.741, 5e-4));
    assert!(matches!(
        sampling_scanned_coeff(3, &[0, 0]),
        Err(TheoryError::Dimension { .. })
    ));
}

#[test]
fn best_sampling_examples() {
    let b = best_sampling_table(3, 0, CostKind::Comparisons).unwrap();
    assert_eq!(b.t, [0, 0, 0, 0]);
    assert_eq!(b.tree.unwrap().to_string(), "[2,1,3]");
    assert!(close(b.leading, 1.846, 5e-4));
    let b = best_sampling_table(3, 8, CostKind::Scanned).unwrap();
    assert_eq!(b.t, [1, 3, 3, 1]);
    assert!(b.tree.is_none());
    assert!(close(b.leading, 1.098, 5e-4));
    let b = best_sampling_table(7, 8, CostKind::Sum).unwrap();
    assert_eq!(b.t, [0, 0, 1, 3, 3, 1, 0, 0]);
    assert_eq!(b.tree.unwrap().to_string(), "[4,3,2,1,5,6,7]");
    assert!(close(b.leading, 2.698, 5e-4));
}

/// Exhaustive over compositions and enumerated trees, exact arithmetic.
fn best_sampling_reference(
    k: usize,
    budget: usize,
    kind: CostKind,
) -> (Vec<usize>, Option<ComparisonTree>, Rational) {
    let trees = enumerate_trees(k).unwrap();
    let mut best: Option<(Vec<usize>, Option<ComparisonTree>, Rational)> = None;
    for t in compositions(budget, k + 1) {
        let ent = sampling_entropy(&t);
        let scan = sampling_scanned_coeff(k, &t).unwrap();
        let options: Vec<(Option<ComparisonTree>, Rational)> = match kind {
            CostKind::Scanned => vec![(None, scan.clone())],
            _ => trees
                .iter()
                .map(|tree| {
                    let c = sampling_comparison_coeff(tree, &t).unwrap();
                    let v = if kind == CostKind::Sum { c + &scan } else { c };
                    (Some(tree.clone()), v)
                })
                .collect(),
        };
        for (tree, a) in options {
            let v = a / &ent;
            if best.as_ref().is_none_or(|b| v < b.2) {
                best = Some((t.clone(), tree, v));
            }
        }
    }
    best.unwrap()
}

#[test]
fn best_sampling_matches_reference_search() {
    for k in 1..=5 {
        for budget in [0, 1, 3, 5] {
            for kind in CostKind::ALL {
                let got = best_sampling_table(k, budget, kind).unwrap();
                let (t, tree, v) = best_sampling_reference(k, budget, kind);
                assert_eq!(got.exact, v, "k={k} b={budget} {kind}");
                assert_eq!(got.t, t, "k={k} b={budget} {kind}");
                assert_eq!(got.tree, tree, "k={k} b={budget} {kind}");
            }
        }
    }
}

#[test]
fn entropy_values() {
    assert!(close(entropy_tau(&[0.25; 4]), 4f64.ln(), 1e-15));
    assert_eq!(entropy_tau(&[1.0]), 0.0);
    let x = (3f64.sqrt() - 1.0) / 2.0;
    let tau = [x * x, x, x, x * x];
    let a = a_tau(3, &tau).unwrap();
    let opt = minimize_linear_over_entropy(&[2.0, 1.0, 1.0, 2.0]).unwrap();
    assert!(close(a / entropy_tau(&tau), opt.value, 1e-9));
    assert!(close(entropy_tau(&tau) / a, 1.00505, 1e-5));
}

#[test]
fn minimizer_examples() {
    let o = minimize_linear_over_entropy(&[1.0, 1.0]).unwrap();
    assert!(close(o.x, 0.5, 1e-12));
    assert!(close(o.value, 1.0 / 2f64.ln(), 1e-10));
    let o = minimize_linear_over_entropy(&[2.0; 4]).unwrap();
    assert!(o.tau.iter().all(|&t| close(t, 0.25, 1e-10)));
    assert!(close(o.value, 1.0 / 2f64.ln(), 1e-10));
    let o = minimize_linear_over_entropy(&[2.0, 1.0, 1.0, 2.0]).unwrap();
    assert!(close(o.x, (3f64.sqrt() - 1.0) / 2.0, 1e-11));
    assert!(close(o.value, 0.99498, 1e-5));
    assert_eq!(
        minimize_linear_over_entropy(&[1.0]),
        Err(TheoryError::TooFewWeights)
    );
    assert_eq!(
        minimize_linear_over_entropy(&[1.0, 0.0]),
        Err(TheoryError::BadWeights)
    );
    for tree in enumerate_trees(6).unwrap() {
        assert!(close(
            opt_tau_comparisons(&tree).value,
            1.0 / 2f64.ln(),
            1e-10
        ));
    }
}

/// Deterministic uniform points on the simplex via sorted uniforms.
fn simplex_points(dim: usize, count: usize, mut s: u64) -> Vec<Vec<f64>> {
    let mut next = move || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| {
            let mut cuts: Vec<f64> = (0..dim - 1).map(|_| next()).collect();
            cuts.push(0.0);
            cuts.push(1.0);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.windows(2).map(|w| (w[1] - w[0]).max(1e-300)).collect()
        })
        .collect()
}

#[test]
fn minimizer_beats_random_simplex_points() {
    let alphas: Vec<Vec<f64>> = vec![
        vec![1.0, 1.0],
        vec![2.0, 1.0, 1.0, 2.0],
        vec![3.0, 2.0, 1.0, 1.0, 2.0, 3.0],
        vec![4.0, 3.0, 3.0, 4.0],
        vec![1.5, 0.2, 7.0],
        extremal_total_alpha(7)
            .unwrap()
            .iter()
            .map(|&a| a as f64)
            .collect(),
    ];
    for (i, alpha) in alphas.iter().enumerate() {
        let opt = minimize_linear_over_entropy(alpha).unwrap();
        let obj =
            |tau: &[f64]| alpha.iter().zip(tau).map(|(a, t)| a * t).sum::<f64>() / entropy_tau(tau);
        assert!(close(obj(&opt.tau), opt.value, 1e-9));
        assert!(close(opt.tau.iter().sum::<f64>(), 1.0, 1e-12));
        for sigma in simplex_points(alpha.len(), 1000, 0x9e37_79b9 + i as u64) {
            assert!(opt.value <= obj(&sigma) + 1e-12);
        }
    }
}

#[test]
fn linear_forms() {
    let u4 = [0.25; 4];
    assert!(close(a_tau(3, &u4).unwrap(), 1.5, 1e-15));
    assert!(close(
        c_tau(&balanced_tree(3).unwrap(), &u4).unwrap(),
        2.0,
        1e-15
    ));
    let qv = 2f64.sqrt() - 1.0;
    let tau = [qv * qv, qv, qv];
    let v = a_tau(2, &tau).unwrap() / entropy_tau(&tau);
    assert!(close(v, -1.0 / qv.ln(), 1e-12));
    assert!(close(v, 1.13, 0.005));
}

proptest! {
    #[test]
    fn extremal_closed_form(k in 1usize..=11, raw in proptest::collection::vec(0.001f64..1.0, 12)) {
        let s: f64 = raw[..=k].iter().sum();
        let tau: Vec<f64> = raw[..=k].iter().map(|x| x / s).collect();
        let ex = extremal_tree(k).unwrap();
        prop_assert!(close(c_tau_extremal(k, &tau).unwrap(), c_tau(&ex, &tau).unwrap(), 1e-12));
    }
}

#[test]
fn scanned_optimum() {
    assert!(close(opt_tau_scanned(3).unwrap().value, 0.995, 5e-4));
    assert!(close(opt_tau_scanned(5).unwrap().value, 0.933, 5e-4));
    // The printed values are truncated, not rounded.
    assert!(close(opt_tau_scanned(7).unwrap().value, 0.917, 1e-3));
    assert!(close(opt_tau_scanned(9).unwrap().value, 0.912, 1e-3));
    let lim = opt_tau_scanned_limit();
    assert!(close(lim.x, 1.0 / 3.0, 1e-12));
    assert!(close(lim.value, 1.0 / 3f64.ln(), 1e-11));
    let far = opt_tau_scanned(41).unwrap();
    assert!(close(far.value, lim.value, 1e-6));
    // odd k: 1 = 2(x + ... + x^m)
    let o = opt_tau_scanned(7).unwrap();
    let poly: f64 = 2.0 * (1..=4).map(|e| o.x.powi(e)).sum::<f64>();
    assert!(close(poly, 1.0, 1e-11));
    // even k: 1 = 2(x + ... + x^{m-1}) + x^m
    let o = opt_tau_scanned(6).unwrap();
    let poly: f64 = 2.0 * (1..=3).map(|e| o.x.powi(e)).sum::<f64>() + o.x.powi(4);
    assert!(close(poly, 1.0, 1e-11));
}

#[test]
fn total_cost_optimum() {
    let lim = opt_tau_total_extremal_limit();
    assert!(close(lim.x, 0.6573, 5e-5));
    assert!(close(lim.value, 2.38, 5e-3));
    let v3 = opt_tau_total_extremal(3).unwrap().value;
    assert!(v3 >= lim.value && v3 <= 2.489 + 5e-4, "{v3}");
    assert!(close(v3, 2.489, 5e-4));
}

#[test]
fn extremal_tree_best_for_total_cost_k9() {
    let scan = mpqs_core::rearrange::scan_multiplicity(9);
    let ex = opt_tau_total_extremal(9).unwrap().value;
    let trees = enumerate_trees(9).unwrap();
    assert_eq!(trees.len(), 4862);
    for tree in trees {
        let alpha: Vec<f64> = tree
            .depth_profile()
            .iter()
            .zip(&scan)
            .map(|(&d, &a)| (d + a) as f64)
            .collect();
        let v = minimize_linear_over_entropy(&alpha).unwrap().value;
        assert!(ex <= v + 1e-12, "{tree}: {v} < {ex}");
    }
}

#[test]
fn brute_force_small_cases() {
    for n in 1..=20 {
        assert_eq!(
            brute_force_optimal_partition_cost(1, n).unwrap(),
            int(n as u64 - 1)
        );
    }
    // Independent enumeration over pivot pairs.
    let n = 10i64;
    let mut acc = 0i64;
    let mut pairs = 0i64;
    for p1 in 1..=n {
        for p2 in p1 + 1..=n {
            let (a0, a1, a2) = (p1 - 1, p2 - p1 - 1, n - p2);
            acc += (a0 + 2 * a1 + 2 * a2).min(2 * a0 + 2 * a1 + a2);
            pairs += 1;
        }
    }
    assert_eq!(
        brute_force_optimal_partition_cost(2, 10).unwrap(),
        q(acc, pairs)
    );
    assert!(brute_force_optimal_partition_cost(4, 10).is_err());
    assert!(brute_force_optimal_partition_cost(3, 61).is_err());
}

#[test]
fn brute_force_three_pivot_slope() {
    let a = brute_force_optimal_partition_cost(3, 59).unwrap();
    let b = brute_force_optimal_partition_cost(3, 60).unwrap();
    let slope = f(&(b - a));
    assert!(
        (slope - 133.0 / 72.0).abs() / (133.0 / 72.0) < 0.03,
        "{slope}"
    );
}

fn all_perms(n: usize) -> Vec<Vec<Key>> {
    let mut out = vec![vec![]];
    for v in 1..=n as Key {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn exhaustive_mean(k: usize, n: usize, s: &Strategy) -> Rational {
    let perms = all_perms(n);
    let mut total = 0u64;
    for p in &perms {
        let mut pivots = p[..k].to_vec();
        pivots.sort_unstable();
        total += classify_sequence(&p[k..], &pivots, s).unwrap().comparisons;
    }
    int(total) / int(perms.len() as u64)
}

#[test]
fn brute_force_is_the_oracle_fixed_mean() {
    for k in 1..=3 {
        for n in k..=7 {
            let brute = brute_force_optimal_partition_cost(k, n).unwrap();
            assert_eq!(
                exhaustive_mean(k, n, &Strategy::oracle_fixed()),
                brute,
                "k={k} n={n}"
            );
            assert!(
                exhaustive_mean(k, n, &Strategy::oracle_optimal()) <= brute,
                "k={k} n={n}"
            );
        }
    }
    // The per-element rechoice of O_k can beat the best single tree.
    assert_eq!(exhaustive_mean(2, 4, &Strategy::oracle_optimal()), q(11, 4));
    assert_eq!(brute_force_optimal_partition_cost(2, 4).unwrap(), q(17, 6));
}

#[test]
fn compositions_enumeration() {
    for parts in 1..=5 {
        for total in 0..=7 {
            let c = compositions(total, parts);
            let expect = binomial((total + parts - 1) as u64, (parts - 1) as u64);
            assert_eq!(num_bigint::BigInt::from(c.len()), expect);
            assert!(c
                .iter()
                .all(|v| v.iter().sum::<usize>() == total && v.len() == parts));
            assert!(c.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn cost_kind_parsing() {
    assert_eq!("cmp".parse::<CostKind>().unwrap(), CostKind::Comparisons);
    assert_eq!("scanned".parse::<CostKind>().unwrap(), CostKind::Scanned);
    assert_eq!("sum".parse::<CostKind>().unwrap(), CostKind::Sum);
    assert!("bogus".parse::<CostKind>().is_err());
}
