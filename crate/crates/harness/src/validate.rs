//! The acceptance criteria, each run at its stated scale and tolerance.

use std::fmt;
use std::time::Instant;

use anyhow::Result;
use mpqs_core::classify::classify_sequence;
use mpqs_core::rearrange::scan_multiplicity;
use mpqs_core::theory::{
    best_sampling_table, brute_force_optimal_partition_cost, int, leading_coefficient,
    minimize_linear_over_entropy, opt_tau_comparisons, opt_tau_scanned, opt_tau_scanned_limit,
    opt_tau_total_extremal, opt_tau_total_extremal_limit, partition_se, ratio,
    recurrence_solve_exact, sampling_comparison_coeff, sampling_entropy, sampling_scanned_coeff,
    to_f64, CostKind, Rational,
};
use mpqs_core::trees::{enumerate_trees, parse, ComparisonTree};
use mpqs_core::{multipivot_sort, Key, SamplingVector, SortConfig, Strategy};
use num_traits::Zero;

use crate::exec::{run_trials, Mode};
use crate::experiments::{
    partition_trial, run_partition_experiment, run_sort_experiment, run_table1, sort_trial,
    ExperimentSpec,
};
use crate::reference::{OPT_TAU_SCANNED, SAMPLING_TABLE, SORT_CURVES, TABLE1_REFERENCE};
use crate::rng::{gen_permutation, Rng};

pub const CRITERIA: [(usize, &str); 11] = [
    (1, "exact recurrence for classic quicksort"),
    (2, "three-pivot classification coefficients"),
    (3, "optimal-strategy leading coefficients, k = 2..7"),
    (4, "Exchange_k counters against closed forms"),
    (5, "ledger identities on every run"),
    (6, "sorting-cost curves at n = 2^20"),
    (7, "best sampling table"),
    (8, "optimal tau values"),
    (9, "extremal tree minimizes total cost, k <= 9"),
    (10, "exhaustive oracle and recurrence equivalence"),
    (11, "randomized sorting property suite"),
];

/// Trials per `k` for the sorting curves.
pub const SORT_CURVE_TRIALS: usize = 20;
/// Randomized cases of the property suite.
pub const PROPERTY_CASES: usize = 10_000;
const SEED: u64 = 20_240_501;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct Report {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl Report {
    pub fn headline(&self) -> String {
        format!(
            "{} criterion {:>2}: {} ({:.1} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.headline())?;
        for d in &self.details {
            writeln!(f, "    {d}")?;
        }
        Ok(())
    }
}

/// Collects checks; the criterion passes when all of them do.
struct Checks {
    pass: bool,
    details: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        self.pass &= ok;
        self.details.push(format!(
            "{} {}",
            if ok { "ok  " } else { "FAIL" },
            msg.into()
        ));
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.details.push(format!("note {}", msg.into()));
    }

    fn within(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.check(
            (got - want).abs() <= tol,
            format!("{what}: {got:.6} vs {want} (tol {tol})"),
        );
    }

    fn within_rel(&mut self, what: &str, got: f64, want: f64, rel: f64) {
        let d = (got - want).abs() / want.abs();
        self.check(
            d <= rel,
            format!("{what}: {got:.6} vs {want:.6}, rel {d:.2e} (tol {rel})"),
        );
    }

    fn time_limit(&mut self, start: Instant, limit: f64) {
        let s = start.elapsed().as_secs_f64();
        self.check(s < limit, format!("runtime {s:.1} s (limit {limit} s)"));
    }
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize) -> Result<Report> {
    let start = Instant::now();
    let mut c = Checks::new();
    match id {
        1 => exact_recurrence(&mut c)?,
        2 => three_pivot(&mut c)?,
        3 => table1(&mut c)?,
        4 => exchange_counters(&mut c)?,
        5 => ledger_identities(&mut c)?,
        6 => sort_curves(&mut c)?,
        7 => sampling_table(&mut c)?,
        8 => opt_tau(&mut c)?,
        9 => extremal_conjecture(&mut c)?,
        10 => oracle_equivalence(&mut c)?,
        11 => property_suite(&mut c)?,
        _ => anyhow::bail!("no criterion {id}"),
    }
    let title = CRITERIA[id - 1].1;
    Ok(Report {
        id,
        title,
        pass: c.pass,
        details: c.details,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn exact_recurrence(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let n_max = 2000;
    let e = recurrence_solve_exact(1, |n| int(n.saturating_sub(1) as u64), n_max)?;
    let mut h = Rational::zero();
    let mut bad = Vec::new();
    for (n, en) in e.iter().enumerate() {
        if n > 0 {
            h += ratio(1, n as i64);
        }
        let want = int(2 * (n as u64 + 1)) * &h - int(4 * n as u64);
        if *en != want {
            bad.push(n);
        }
    }
    c.check(
        bad.is_empty(),
        format!(
            "2(n+1)H_n - 4n for n <= {n_max}: {} mismatches {bad:?}",
            bad.len()
        ),
    );
    c.time_limit(start, 10.0);
    Ok(())
}

fn three_pivot(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let (n, trials) = (1_000_000usize, 200);
    let sym = parse("[2,1,3]")?;
    let three = vec![parse("[1,3,2]")?, sym.clone(), parse("[3,1,2]")?];
    let s_sym = Strategy::fixed(sym);
    let s_three = Strategy::oracle_optimal().with_candidates(three);
    let s_all = Strategy::oracle_optimal();
    let res = run_trials(trials, SEED, Mode::default_mode(), |_, seed| {
        let perm = gen_permutation(n, seed);
        let mut pivots = perm[..3].to_vec();
        pivots.sort_unstable();
        let run = |s: &Strategy| {
            classify_sequence(&perm[3..], &pivots, s)
                .expect("valid")
                .comparisons
        };
        (run(&s_sym), run(&s_three), run(&s_all))
    });
    let exact = res.iter().filter(|r| r.0 == 2 * (n as u64 - 3)).count();
    c.check(
        exact == trials,
        format!("symmetric tree used 2(n-3) comparisons in {exact}/{trials} runs"),
    );
    let mean = |f: &dyn Fn(&(u64, u64, u64)) -> u64| {
        res.iter().map(|r| f(r) as f64 / n as f64).sum::<f64>() / trials as f64
    };
    c.within_rel(
        "oracle over {λ1,λ2,λ3}, comparisons/n",
        mean(&|r| r.1),
        17.0 / 9.0,
        0.01,
    );
    c.within_rel(
        "oracle over all five trees, comparisons/n",
        mean(&|r| r.2),
        133.0 / 72.0,
        0.01,
    );
    c.time_limit(start, 120.0);
    Ok(())
}

fn table1(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let ks: Vec<usize> = (2..=7).collect();
    let rows = run_table1(&ks, 1_000_000, 200, SEED, Mode::default_mode())?;
    for k in ks {
        let want = TABLE1_REFERENCE
            .iter()
            .find(|r| r.0 == k)
            .expect("reference")
            .1;
        let got = rows
            .iter()
            .find(|r| r.k == k && r.statistic == "leading")
            .expect("row")
            .mean;
        c.within(&format!("k = {k} leading"), got, want, 0.02);
    }
    c.time_limit(start, 600.0);
    Ok(())
}

fn exchange_counters(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    for k in [1, 2, 3, 5, 7, 9] {
        let spec = ExperimentSpec::new(k, 1_000_000, 100, SEED)?;
        let rows = run_partition_experiment(&spec)?;
        for (stat, tol) in [
            ("scanned/n", 0.005),
            ("writes/n", 0.005),
            ("assignments/n", 0.005),
            ("rotations/n", 0.01),
        ] {
            let r = rows.iter().find(|r| r.statistic == stat).expect("row");
            let theory = r.theory.expect("closed form");
            let sem = r.stddev / (r.trials as f64).sqrt();
            let d = r.rel_dev.expect("nonzero theory");
            c.check(
                d <= tol,
                format!(
                    "k = {k} {stat}: {:.6} vs {theory:.6}, rel {d:.2e} (tol {tol}); standard error {:.2e} relative",
                    r.mean,
                    sem / theory
                ),
            );
        }
    }
    c.time_limit(start, 300.0);
    Ok(())
}

fn strategies(k: usize) -> Result<Vec<Strategy>> {
    Ok(vec![
        Strategy::fixed(ComparisonTree::balanced(k)?),
        Strategy::fixed(ComparisonTree::extremal(k)?),
        Strategy::oracle_optimal(),
        Strategy::online(),
        Strategy::oracle_fixed(),
        Strategy::sampled_balanced(k)?,
    ])
}

fn ledger_identities(c: &mut Checks) -> Result<()> {
    let mut runs = 0usize;
    let mut bad = 0usize;
    for k in 1..=9 {
        for s in strategies(k)? {
            let res = run_trials(8, SEED + k as u64, Mode::default_mode(), |i, seed| {
                partition_trial(k, 1000 + 31_337 * i, seed, &s).consistent
            });
            runs += res.len();
            bad += res.iter().filter(|ok| !**ok).count();
            for t in [
                SamplingVector::zeros(k),
                SamplingVector::new(vec![1; k + 1])?,
            ] {
                let cfg = SortConfig::new(k)?
                    .with_strategy(s.clone())
                    .with_cutoff(t.kappa().max(k))
                    .with_sampling(t);
                let res = run_trials(4, SEED, Mode::default_mode(), |_, seed| {
                    let r = sort_trial(1 << 15, seed, &cfg);
                    r.sorted && r.ledger.identities_hold()
                });
                runs += res.len();
                bad += res.iter().filter(|ok| !**ok).count();
            }
        }
    }
    c.check(
        bad == 0,
        format!(
            "{runs} runs over k = 1..9 and six strategies: {bad} violate assignments = writes + rotations, \
             scanned = per-cursor travel, or (single steps) the group-size scan formula"
        ),
    );
    Ok(())
}

fn sort_curves(c: &mut Checks) -> Result<()> {
    let n = 1usize << 20;
    c.note(format!(
        "{SORT_CURVE_TRIALS} trials per k, balanced tree, no sampling, cutoff k"
    ));
    for (k, scanned, assignments) in SORT_CURVES {
        let spec = ExperimentSpec::new(k, n, SORT_CURVE_TRIALS, SEED)?;
        let rows = run_sort_experiment(&spec)?;
        let get = |s: &str| rows.iter().find(|r| r.statistic == s).expect("row").mean;
        c.within_rel(
            &format!("k = {k} scanned/(n ln n)"),
            get("scanned/nlnn"),
            scanned,
            0.05,
        );
        c.note(format!(
            "k = {k} scanned: exact expectation gives {:.4} at n = 2^20 (linear term from n = {FINITE_N})",
            finite_scanned(k, n)?
        ));
        c.within_rel(
            &format!("k = {k} assignments/(n ln n)"),
            get("assignments/nlnn"),
            assignments,
            0.05,
        );
    }
    Ok(())
}

const FINITE_N: usize = 2000;

/// Expected total scanned elements over `n ln n` for cutoff `k`: exact up to
/// `FINITE_N`, then `c + d / ln n` with `d` read off the exact value there.
fn finite_scanned(k: usize, n: usize) -> Result<f64> {
    let se = partition_se(k);
    let e = recurrence_solve_exact(k, |m| int(m.saturating_sub(k) as u64) * &se, FINITE_N)?;
    let c = leading_coefficient(k, to_f64(&se));
    let m = FINITE_N as f64;
    let d = to_f64(&e[FINITE_N]) / m - c * m.ln();
    Ok(c + d / (n as f64).ln())
}

/// Exact leading coefficient of `(t, tree)` under `kind`.
fn sampling_cost(kind: CostKind, t: &[usize], tree: Option<&ComparisonTree>) -> Result<Rational> {
    let k = t.len() - 1;
    let cmp = || -> Result<Rational> { Ok(sampling_comparison_coeff(tree.expect("tree"), t)?) };
    let a = match kind {
        CostKind::Comparisons => cmp()?,
        CostKind::Scanned => sampling_scanned_coeff(k, t)?,
        CostKind::Sum => cmp()? + sampling_scanned_coeff(k, t)?,
    };
    Ok(a / sampling_entropy(t))
}

fn sampling_table(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    for cell in SAMPLING_TABLE {
        let best = best_sampling_table(cell.k, cell.budget, cell.kind)?;
        let want_tree = cell.tree.map(parse).transpose()?;
        let label = format!("k = {} budget {} {}", cell.k, cell.budget, cell.kind);
        let same = best.t == cell.t && best.tree == want_tree;
        let shown = |t: &[usize], tr: &Option<ComparisonTree>| match tr {
            Some(tr) => format!("t = {t:?} {tr}"),
            None => format!("t = {t:?}"),
        };
        if same {
            c.check(true, format!("{label}: {}", shown(&best.t, &best.tree)));
        } else {
            let theirs = sampling_cost(cell.kind, cell.t, want_tree.as_ref())?;
            let verdict = match theirs.cmp(&best.exact) {
                std::cmp::Ordering::Equal => "co-optimal, tie broken differently".to_string(),
                std::cmp::Ordering::Greater => {
                    format!("listed choice costs {:.6}, not optimal", to_f64(&theirs))
                }
                std::cmp::Ordering::Less => format!(
                    "listed choice costs {:.6}, search missed it",
                    to_f64(&theirs)
                ),
            };
            c.check(
                theirs == best.exact,
                format!(
                    "{label}: found {}, listed {}: {verdict}",
                    shown(&best.t, &best.tree),
                    shown(cell.t, &want_tree),
                ),
            );
        }
        c.within(
            &format!("{label} leading"),
            best.leading,
            cell.leading,
            5e-4,
        );
    }
    c.time_limit(start, 60.0);
    Ok(())
}

fn opt_tau(c: &mut Checks) -> Result<()> {
    let target = 1.0 / 2f64.ln();
    let mut worst = 0.0f64;
    let mut count = 0;
    for k in 1..=9 {
        for tree in enumerate_trees(k)? {
            worst = worst.max((opt_tau_comparisons(&tree).value - target).abs());
            count += 1;
        }
    }
    c.check(
        worst <= 1e-9,
        format!("comparisons: 1/ln 2 for all {count} trees with k <= 9, max error {worst:.1e}"),
    );
    for (k, want) in OPT_TAU_SCANNED {
        c.within(
            &format!("scanned k = {k}"),
            opt_tau_scanned(k)?.value,
            want,
            1e-3,
        );
    }
    c.within(
        "scanned limit",
        opt_tau_scanned_limit().value,
        1.0 / 3f64.ln(),
        1e-9,
    );
    let lim = opt_tau_total_extremal_limit();
    let x = lim.x;
    c.within(
        "total limit root residual 2x^3 + x^2 - 1",
        2.0 * x * x * x + x * x - 1.0,
        0.0,
        1e-9,
    );
    c.within("total limit root", x, 0.6573, 1e-4);
    c.within("total limit value", lim.value, 2.38, 0.01);
    Ok(())
}

fn extremal_conjecture(c: &mut Checks) -> Result<()> {
    for k in 1..=9 {
        let scan = scan_multiplicity(k);
        let ex = opt_tau_total_extremal(k)?.value;
        let mut best = f64::INFINITY;
        let mut best_tree = None;
        let trees = enumerate_trees(k)?;
        for tree in &trees {
            let alpha: Vec<f64> = tree
                .depth_profile()
                .iter()
                .zip(&scan)
                .map(|(&d, &a)| (d + a) as f64)
                .collect();
            let v = minimize_linear_over_entropy(&alpha)?.value;
            if v < best {
                best = v;
                best_tree = Some(tree.clone());
            }
        }
        let best_tree = best_tree.expect("non-empty");
        c.check(
            ex <= best + 1e-12,
            format!(
                "k = {k}: extremal {ex:.6}, minimum over {} trees {best:.6} at {best_tree}",
                trees.len()
            ),
        );
    }
    Ok(())
}

/// Heap's algorithm over all orderings of `v`.
fn each_permutation(v: &mut [Key], f: &mut impl FnMut(&[Key])) {
    fn rec(v: &mut [Key], n: usize, f: &mut impl FnMut(&[Key])) {
        if n <= 1 {
            f(v);
            return;
        }
        for i in 0..n - 1 {
            rec(v, n - 1, f);
            if n.is_multiple_of(2) {
                v.swap(i, n - 1);
            } else {
                v.swap(0, n - 1);
            }
        }
        rec(v, n - 1, f);
    }
    let n = v.len();
    rec(v, n, f);
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn exhaustive_partition_mean(k: usize, n: usize, s: &Strategy) -> Rational {
    if n < k {
        return Rational::zero();
    }
    let mut perm: Vec<Key> = (1..=n as Key).collect();
    let mut total = 0u64;
    each_permutation(&mut perm, &mut |p| {
        let mut pivots = p[..k].to_vec();
        pivots.sort_unstable();
        total += classify_sequence(&p[k..], &pivots, s)
            .expect("valid")
            .comparisons;
    });
    int(total) / int(factorial(n))
}

fn exhaustive_sort_mean(n: usize, cfg: &SortConfig) -> Rational {
    let mut perm: Vec<Key> = (1..=n as Key).collect();
    let mut total = 0u64;
    each_permutation(&mut perm, &mut |p| {
        let mut a = p.to_vec();
        total += multipivot_sort(&mut a, cfg).expect("valid").comparisons;
    });
    int(total) / int(factorial(n))
}

fn fmt_q(r: &Rational) -> String {
    format!("{r} ({:.6})", to_f64(r))
}

fn oracle_equivalence(c: &mut Checks) -> Result<()> {
    let n_max = 8;
    for k in 1..=3 {
        let brute: Vec<Rational> = (0..=n_max)
            .map(|n| {
                if n < k {
                    Ok(Rational::zero())
                } else {
                    brute_force_optimal_partition_cost(k, n)
                }
            })
            .collect::<Result<_, _>>()?;
        let oracle = Strategy::oracle_optimal();
        let fixed = Strategy::oracle_fixed();
        let p_opt: Vec<Rational> = (0..=n_max)
            .map(|n| exhaustive_partition_mean(k, n, &oracle))
            .collect();
        let p_fix: Vec<Rational> = (0..=n_max)
            .map(|n| exhaustive_partition_mean(k, n, &fixed))
            .collect();
        let differ: Vec<String> = (k..=n_max)
            .filter(|&n| p_opt[n] != brute[n])
            .map(|n| {
                format!(
                    "n = {n}: oracle {} vs brute force {}",
                    fmt_q(&p_opt[n]),
                    fmt_q(&brute[n])
                )
            })
            .collect();
        c.check(
            differ.is_empty(),
            format!(
                "k = {k}: optimal-oracle partition mean equals brute force for n = {k}..{n_max}"
            ),
        );
        for d in differ {
            c.note(format!("k = {k} {d}"));
        }
        let fixed_ok = (k..=n_max).all(|n| p_fix[n] == brute[n]);
        c.note(format!(
            "k = {k}: best-fixed-tree oracle mean equals brute force for all n: {fixed_ok}"
        ));

        for (s, p, name) in [
            (&oracle, &p_opt, "optimal oracle"),
            (&fixed, &brute, "fixed oracle"),
        ] {
            let table = recurrence_solve_exact(k, |m| p[m].clone(), n_max)?;
            let cfg = SortConfig::new(k)?.with_cutoff(k).with_strategy(s.clone());
            let bad: Vec<usize> = (0..=n_max)
                .filter(|&n| exhaustive_sort_mean(n, &cfg) != table[n])
                .collect();
            c.check(
                bad.is_empty(),
                format!("k = {k} {name}: full-sort means equal the recurrence for n <= {n_max}, mismatches {bad:?}"),
            );
        }
    }
    Ok(())
}

fn property_suite(c: &mut Checks) -> Result<()> {
    let cases = PROPERTY_CASES;
    let results = run_trials(
        cases,
        SEED,
        Mode::default_mode(),
        |_, seed| -> Result<bool> {
            let mut r = Rng::new(seed);
            let k = 1 + r.below(9) as usize;
            let t: Vec<usize> = (0..=k).map(|_| r.below(3) as usize).collect();
            let t = SamplingVector::new(t)?;
            let cutoff = t.kappa().max(k) + r.below(24) as usize;
            let s = strategies(k)?.swap_remove(r.below(6) as usize);
            let n = r.below(1200) as usize;
            let cfg = SortConfig::new(k)?
                .with_sampling(t)
                .with_cutoff(cutoff)
                .with_strategy(s);
            let res = sort_trial(n, r.next_u64(), &cfg);
            Ok(res.sorted && res.ledger.identities_hold())
        },
    );
    let mut failed = 0;
    for r in results {
        if !r? {
            failed += 1;
        }
    }
    c.check(
        failed == 0,
        format!("{cases} random (k, strategy, t, cutoff, n, seed) cases sorted with ledger identities: {failed} failures"),
    );
    Ok(())
}
