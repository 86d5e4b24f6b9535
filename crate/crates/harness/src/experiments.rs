//! Randomized experiments over permutations of `1..=n`.

use anyhow::{bail, ensure, Result};
use mpqs_core::classify::{classify_sequence, sizes_from_pivot_ranks, Session};
use mpqs_core::rearrange::{exchange_partition, scanned_elements_of_layout, CostLedger};
use mpqs_core::theory::{
    harmonic, int, leading_coefficient, partition_as, partition_se, partition_wa,
    rotate_coefficient, sampling_comparison_coeff, sampling_entropy, sampling_scanned_coeff,
    saved_writes_coefficient, to_f64, Rational,
};
use mpqs_core::{multipivot_sort, SamplingVector, SortConfig, Strategy, StrategyKind};

use crate::exec::{run_trials, Mode};
use crate::reference::TABLE1_REFERENCE;
use crate::report::ResultRow;
use crate::rng::gen_permutation;
use crate::stats::Summary;

/// Block size used for the predicted L1 misses.
pub const L1_BLOCK: f64 = 8.0;

/// Settings shared by all experiments.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub k: usize,
    /// Input sizes; most experiments use one, sort curves use several.
    pub ns: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub sampling: SamplingVector,
    /// Small-subarray threshold for sorting; `None` means `κ`.
    pub cutoff: Option<usize>,
    pub mode: Mode,
}

impl ExperimentSpec {
    /// Balanced tree, no sampling, cutoff `k`.
    pub fn new(k: usize, n: usize, trials: usize, seed: u64) -> Result<Self> {
        let cfg = SortConfig::new(k)?;
        Ok(ExperimentSpec {
            k,
            ns: vec![n],
            trials,
            seed,
            strategy: cfg.strategy,
            sampling: cfg.sampling,
            cutoff: None,
            mode: Mode::default_mode(),
        })
    }

    pub fn with_strategy(mut self, s: Strategy) -> Self {
        self.strategy = s;
        self
    }

    pub fn with_ns(mut self, ns: Vec<usize>) -> Self {
        self.ns = ns;
        self
    }

    pub fn with_sampling(mut self, t: SamplingVector) -> Self {
        self.sampling = t;
        self
    }

    pub fn with_cutoff(mut self, c: usize) -> Self {
        self.cutoff = Some(c);
        self
    }

    pub fn with_mode(mut self, m: Mode) -> Self {
        self.mode = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.k >= 1, "k must be at least 1");
        ensure!(self.trials >= 1, "trials must be at least 1");
        ensure!(!self.ns.is_empty(), "no input size given");
        ensure!(
            self.sampling.k() == self.k,
            "sampling vector has {} entries, expected {}",
            self.sampling.k() + 1,
            self.k + 1
        );
        let kappa = self.sampling.kappa();
        for &n in &self.ns {
            ensure!(n >= kappa, "n = {n} is below the sample size {kappa}");
        }
        self.strategy.validate(self.k)?;
        Ok(())
    }

    fn single_n(&self) -> Result<usize> {
        match self.ns.as_slice() {
            [n] => Ok(*n),
            _ => bail!("this experiment takes exactly one n"),
        }
    }

    fn sort_config(&self) -> Result<SortConfig> {
        let cfg = SortConfig::new(self.k)?
            .with_strategy(self.strategy.clone())
            .with_sampling(self.sampling.clone())
            .with_cutoff(self.cutoff.unwrap_or(self.k).max(self.sampling.kappa()));
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Expected comparisons per element when the strategy is a fixed tree.
fn fixed_tree_coefficient(spec: &ExperimentSpec) -> Option<Rational> {
    match &spec.strategy.kind {
        StrategyKind::FixedTree(t) => sampling_comparison_coeff(t, spec.sampling.as_slice()).ok(),
        _ => None,
    }
}

fn row(
    spec: &ExperimentSpec,
    exp: &str,
    n: usize,
    stat: &str,
    xs: &[f64],
    theory: Option<f64>,
) -> ResultRow {
    ResultRow::new(
        exp,
        spec.k,
        n,
        spec.trials,
        spec.seed,
        stat,
        Summary::of(xs),
        theory,
    )
}

/// Pivots are the first `k` keys; the rest are classified, nothing moves.
///
/// Rows: `comparisons/n` and the implied `leading`.
pub fn run_classification_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let (k, n) = (spec.k, spec.single_n()?);
    ensure!(n >= k, "n must be at least k");
    let per_n = run_trials(spec.trials, spec.seed, spec.mode, |_, seed| {
        let perm = gen_permutation(n, seed);
        let mut pivots = perm[..k].to_vec();
        pivots.sort_unstable();
        let r = classify_sequence(&perm[k..], &pivots, &spec.strategy).expect("valid input");
        r.comparisons as f64 / n as f64
    });
    let leading: Vec<f64> = per_n.iter().map(|&a| leading_coefficient(k, a)).collect();
    let a = fixed_tree_coefficient(spec).map(|a| to_f64(&a));
    Ok(vec![
        row(spec, "classify", n, "comparisons/n", &per_n, a),
        row(
            spec,
            "classify",
            n,
            "leading",
            &leading,
            a.map(|a| leading_coefficient(k, a)),
        ),
    ])
}

/// Per-trial measurements of one partitioning step.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionTrial {
    pub ledger: CostLedger,
    pub sizes: Vec<u64>,
    /// Ledger identities and the closed-form scan count both hold.
    pub consistent: bool,
}

/// One Exchange_k step on a random permutation, first `k` keys as pivots.
pub fn partition_trial(k: usize, n: usize, seed: u64, strategy: &Strategy) -> PartitionTrial {
    let mut a = gen_permutation(n, seed);
    a[..k].sort_unstable();
    let pivots = a[..k].to_vec();
    let sizes = sizes_from_pivot_ranks(&pivots, n as u64);
    let mut session = Session::new(&pivots, strategy, Some(&sizes), n).expect("valid strategy");
    let mut ledger = CostLedger::new(k);
    exchange_partition(&mut a, k, &mut session, &mut ledger).expect("valid layout");
    ledger.comparisons += session.comparisons();
    let consistent = ledger.identities_hold()
        && ledger.scanned_elements == scanned_elements_of_layout(&sizes, k);
    PartitionTrial {
        ledger,
        sizes,
        consistent,
    }
}

/// Ledger means per element against the Exchange_k coefficients.
pub fn run_partition_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    ensure!(
        spec.sampling.is_zero(),
        "partition experiments take the first k keys as pivots"
    );
    let (k, n) = (spec.k, spec.single_n()?);
    let trials = run_trials(spec.trials, spec.seed, spec.mode, |_, seed| {
        partition_trial(k, n, seed, &spec.strategy)
    });
    let per = |f: &dyn Fn(&CostLedger) -> u64| -> Vec<f64> {
        trials
            .iter()
            .map(|t| f(&t.ledger) as f64 / n as f64)
            .collect()
    };
    let se = to_f64(&partition_se(k));
    let exp = "partition";
    let scanned = per(&|l| l.scanned_elements);
    let misses: Vec<f64> = scanned.iter().map(|s| s / L1_BLOCK).collect();
    let bad: Vec<f64> = trials
        .iter()
        .map(|t| if t.consistent { 0.0 } else { 1.0 })
        .collect();
    Ok(vec![
        row(
            spec,
            exp,
            n,
            "comparisons/n",
            &per(&|l| l.comparisons),
            fixed_tree_coefficient(spec).map(|a| to_f64(&a)),
        ),
        row(spec, exp, n, "scanned/n", &scanned, Some(se)),
        row(
            spec,
            exp,
            n,
            "writes/n",
            &per(&|l| l.write_accesses),
            Some(to_f64(&partition_wa(k))),
        ),
        row(
            spec,
            exp,
            n,
            "assignments/n",
            &per(&|l| l.assignments),
            Some(to_f64(&partition_as(k))),
        ),
        row(
            spec,
            exp,
            n,
            "rotations/n",
            &per(&|l| l.rotations),
            Some(to_f64(&rotate_coefficient(k))),
        ),
        row(
            spec,
            exp,
            n,
            "unmoved/n",
            &per(&|l| l.unmoved()),
            Some(to_f64(&saved_writes_coefficient(k))),
        ),
        row(spec, exp, n, "l1_misses/n", &misses, Some(se / L1_BLOCK)),
        row(spec, exp, n, "inconsistent", &bad, Some(0.0)),
    ])
}

/// Leading coefficients `c` of `c·n ln n` for the sort statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SortTheory {
    pub comparisons: Option<f64>,
    pub scanned: f64,
    /// The write/assignment/rotation forms hold without sampling only.
    pub writes: Option<f64>,
    pub assignments: Option<f64>,
    pub rotations: Option<f64>,
}

pub fn sort_theory(spec: &ExperimentSpec) -> SortTheory {
    let t = spec.sampling.as_slice();
    let k = spec.k;
    let h = if spec.sampling.is_zero() {
        harmonic(k as u64 + 1) - int(1)
    } else {
        sampling_entropy(t)
    };
    let lead = |a: Rational| to_f64(&(a / &h));
    let unsampled = |a: Rational| spec.sampling.is_zero().then(|| lead(a));
    SortTheory {
        comparisons: fixed_tree_coefficient(spec).map(lead),
        scanned: lead(sampling_scanned_coeff(k, t).expect("dimension checked")),
        writes: unsampled(partition_wa(k)),
        assignments: unsampled(partition_as(k)),
        rotations: unsampled(rotate_coefficient(k)),
    }
}

/// Per-trial sort outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SortTrial {
    pub ledger: CostLedger,
    pub sorted: bool,
}

pub fn sort_trial(n: usize, seed: u64, cfg: &SortConfig) -> SortTrial {
    let mut a = gen_permutation(n, seed);
    let ledger = multipivot_sort(&mut a, cfg).expect("valid configuration");
    let sorted = a.iter().enumerate().all(|(i, &x)| x as usize == i + 1);
    SortTrial { ledger, sorted }
}

/// Full sorts; every counter scaled by `n ln n`, one row per statistic and n.
pub fn run_sort_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let cfg = spec.sort_config()?;
    let th = sort_theory(spec);
    let mut rows = Vec::new();
    for &n in &spec.ns {
        ensure!(n >= 2, "sort curves need n >= 2");
        let trials = run_trials(spec.trials, spec.seed, spec.mode, |_, seed| {
            sort_trial(n, seed, &cfg)
        });
        let scale = n as f64 * (n as f64).ln();
        let per = |f: &dyn Fn(&CostLedger) -> u64| -> Vec<f64> {
            trials.iter().map(|t| f(&t.ledger) as f64 / scale).collect()
        };
        let bad: Vec<f64> = trials
            .iter()
            .map(|t| {
                if t.sorted && t.ledger.identities_hold() {
                    0.0
                } else {
                    1.0
                }
            })
            .collect();
        let exp = "sort";
        rows.extend([
            row(
                spec,
                exp,
                n,
                "comparisons/nlnn",
                &per(&|l| l.comparisons),
                th.comparisons,
            ),
            row(
                spec,
                exp,
                n,
                "total_comparisons/nlnn",
                &per(&|l| l.total_comparisons()),
                th.comparisons,
            ),
            row(
                spec,
                exp,
                n,
                "scanned/nlnn",
                &per(&|l| l.scanned_elements),
                Some(th.scanned),
            ),
            row(
                spec,
                exp,
                n,
                "writes/nlnn",
                &per(&|l| l.write_accesses),
                th.writes,
            ),
            row(
                spec,
                exp,
                n,
                "assignments/nlnn",
                &per(&|l| l.assignments),
                th.assignments,
            ),
            row(
                spec,
                exp,
                n,
                "total_assignments/nlnn",
                &per(&|l| l.total_assignments()),
                th.assignments,
            ),
            row(
                spec,
                exp,
                n,
                "rotations/nlnn",
                &per(&|l| l.rotations),
                th.rotations,
            ),
            row(spec, exp, n, "inconsistent", &bad, Some(0.0)),
        ]);
    }
    Ok(rows)
}

/// Classification-only experiment with the optimal strategy for each `k`.
pub fn run_table1(
    ks: &[usize],
    n: usize,
    trials: usize,
    seed: u64,
    mode: Mode,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for &k in ks {
        let spec = ExperimentSpec::new(k, n, trials, seed)?
            .with_strategy(Strategy::oracle_optimal())
            .with_mode(mode);
        let mut r = run_classification_experiment(&spec)?;
        let reference = TABLE1_REFERENCE
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|p| p.1);
        for x in &mut r {
            x.experiment = "table1".to_string();
            if x.statistic == "leading" {
                *x = ResultRow::new(
                    "table1",
                    k,
                    n,
                    trials,
                    seed,
                    "leading",
                    Summary {
                        count: trials,
                        mean: x.mean,
                        stddev: x.stddev,
                    },
                    reference,
                );
            }
        }
        rows.extend(r);
    }
    Ok(rows)
}
