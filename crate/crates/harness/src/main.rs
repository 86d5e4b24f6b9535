use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mpqs_core::theory::{
    best_sampling_table, harmonic, int, opt_tau_comparisons, opt_tau_scanned,
    opt_tau_total_extremal, partition_as, partition_wa, rotate_coefficient,
    sampling_comparison_coeff, sampling_entropy, sampling_scanned_coeff, to_f64, CostKind,
    Rational,
};
use mpqs_core::trees::{parse, ComparisonTree};
use mpqs_core::{SamplingVector, Strategy};
use mpqs_harness::exec::Mode;
use mpqs_harness::experiments::{
    run_classification_experiment, run_partition_experiment, run_sort_experiment, run_table1,
    ExperimentSpec,
};
use mpqs_harness::report::{emit_csv, write_csv, ResultRow};
use mpqs_harness::validate::{run_criterion, CRITERIA};

#[derive(Parser)]
#[command(
    name = "mpqs",
    version,
    about = "Experiments for the instrumented k-pivot quicksort"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full sorts; counters scaled by n ln n.
    Sort(RunArgs),
    /// Classification only; comparisons per element and leading coefficient.
    Classify(RunArgs),
    /// One Exchange_k step; counters per element.
    Partition(RunArgs),
    /// Analytic per-element costs and leading coefficients.
    Theory {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        tree: Option<String>,
        #[arg(long)]
        t: Option<String>,
    },
    /// Best group proportions for a cost.
    OptTau {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "comparisons")]
        cost: CostKind,
        /// Tree for comparisons (default: balanced).
        #[arg(long)]
        tree: Option<String>,
    },
    /// Best sampling vector and tree for a sample budget.
    Table4 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        budget: usize,
        /// One cost only (default: all three).
        #[arg(long)]
        cost: Option<CostKind>,
    },
    /// Leading coefficients of the optimal classification strategy.
    Table1 {
        /// Comma-separated pivot counts.
        #[arg(long, default_value = "2,3,4,5,6,7,8,9")]
        k: String,
        #[arg(long, default_value = "2^20")]
        n: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Runs the acceptance criteria; exit status 1 if any fails.
    Validate {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    k: usize,
    /// Input sizes, comma-separated; `2^20` and `1e6` forms are accepted.
    #[arg(long, default_value = "2^20")]
    n: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// fixed, balanced, extremal, oracle, online, oracle-fixed or sampled.
    #[arg(long, default_value = "fixed")]
    strategy: String,
    /// Sampling vector, e.g. `1,1,1,1`.
    #[arg(long)]
    t: Option<String>,
    /// Tree preorder for fixed and sampled strategies, e.g. `[2,1,3]`.
    #[arg(long)]
    tree: Option<String>,
    /// Restricts adaptive strategies to these trees, separated by `;`.
    #[arg(long)]
    candidates: Option<String>,
    /// Small-subarray threshold for sorting (default: sample size).
    #[arg(long)]
    cutoff: Option<usize>,
    /// Run trials on the calling thread only.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_size(s: &str) -> Result<usize> {
    let s = s.trim();
    let bad = || anyhow!("invalid size {s:?}");
    if let Some((b, e)) = s.split_once('^') {
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(bad);
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        return 10usize
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(bad);
    }
    s.parse().map_err(|_| bad())
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(f)
        .collect()
}

fn parse_t(k: usize, t: Option<&str>) -> Result<SamplingVector> {
    match t {
        None => Ok(SamplingVector::zeros(k)),
        Some(s) => {
            let v = parse_list(s.trim_matches(['[', ']']), |x| {
                Ok(x.trim().parse::<usize>()?)
            })?;
            let t = SamplingVector::new(v)?;
            if t.k() != k {
                bail!("--t needs {} entries for k = {k}", k + 1);
            }
            Ok(t)
        }
    }
}

fn tree_or_balanced(k: usize, tree: Option<&str>) -> Result<ComparisonTree> {
    let t = match tree {
        Some(s) => parse(s)?,
        None => ComparisonTree::balanced(k)?,
    };
    if t.k() != k {
        bail!("tree {t} has {} pivots, expected {k}", t.k());
    }
    Ok(t)
}

fn parse_strategy(a: &RunArgs) -> Result<Strategy> {
    let k = a.k;
    let tree = || tree_or_balanced(k, a.tree.as_deref());
    let mut s = match a.strategy.as_str() {
        "fixed" => Strategy::fixed(tree()?),
        "balanced" => Strategy::fixed(ComparisonTree::balanced(k)?),
        "extremal" => Strategy::fixed(ComparisonTree::extremal(k)?),
        "oracle" | "optimal" | "O" => Strategy::oracle_optimal(),
        "online" | "C" => Strategy::online(),
        "oracle-fixed" | "N" => Strategy::oracle_fixed(),
        "sampled" | "SP" => Strategy::sampled(tree()?),
        other => bail!("unknown strategy {other:?}"),
    };
    if let Some(c) = &a.candidates {
        let set = c
            .split(';')
            .map(|x| parse(x.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        s = s.with_candidates(set);
    }
    Ok(s)
}

fn spec_of(a: &RunArgs) -> Result<ExperimentSpec> {
    let ns = parse_list(&a.n, parse_size)?;
    let mut spec = ExperimentSpec::new(a.k, ns[0], a.trials, a.seed)?
        .with_ns(ns)
        .with_strategy(parse_strategy(a)?)
        .with_sampling(parse_t(a.k, a.t.as_deref())?);
    if let Some(c) = a.cutoff {
        spec = spec.with_cutoff(c);
    }
    if a.sequential {
        spec = spec.with_mode(Mode::Sequential);
    }
    Ok(spec)
}

fn output(rows: &[ResultRow], out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => emit_csv(rows, p).with_context(|| format!("writing {}", p.display())),
        None => Ok(write_csv(rows, std::io::stdout().lock())?),
    }
}

fn show(r: &Rational) -> String {
    if r.is_integer() {
        format!("{r}")
    } else {
        format!("{r} = {:.6}", to_f64(r))
    }
}

fn theory(k: usize, tree: Option<&str>, t: Option<&str>) -> Result<()> {
    let tree = tree_or_balanced(k, tree)?;
    let t = parse_t(k, t)?;
    let ts = t.as_slice();
    let div = if t.is_zero() {
        harmonic(k as u64 + 1) - int(1)
    } else {
        sampling_entropy(ts)
    };
    println!("k = {k}, tree {tree}, t = {ts:?}");
    println!("divisor {}", show(&div));
    let mut rows = vec![
        ("comparisons", sampling_comparison_coeff(&tree, ts)?),
        ("scanned", sampling_scanned_coeff(k, ts)?),
    ];
    if t.is_zero() {
        rows.push(("writes", partition_wa(k)));
        rows.push(("assignments", partition_as(k)));
        rows.push(("rotations", rotate_coefficient(k)));
    }
    println!("{:<12} {:<28} leading (of c n ln n)", "cost", "per element");
    for (name, a) in rows {
        println!("{name:<12} {:<28} {}", show(&a), show(&(&a / &div)));
    }
    Ok(())
}

fn opt_tau(k: usize, cost: CostKind, tree: Option<&str>) -> Result<()> {
    let opt = match cost {
        CostKind::Comparisons => opt_tau_comparisons(&tree_or_balanced(k, tree)?),
        CostKind::Scanned => opt_tau_scanned(k)?,
        CostKind::Sum => opt_tau_total_extremal(k)?,
    };
    println!(
        "k = {k} cost {cost}: {:.3} ({}), x = {}",
        opt.value, opt.value, opt.x
    );
    let tau: Vec<String> = opt.tau.iter().map(|x| format!("{x:.6}")).collect();
    println!("tau = [{}]", tau.join(", "));
    Ok(())
}

fn table4(k: usize, budget: usize, cost: Option<CostKind>) -> Result<()> {
    let kinds: Vec<CostKind> = cost.map_or(CostKind::ALL.to_vec(), |c| vec![c]);
    println!("k = {k}, budget {budget}");
    println!("{:<12} {:<34} {:<22} leading", "cost", "t", "tree");
    for kind in kinds {
        let b = best_sampling_table(k, budget, kind)?;
        let tree = b.tree.map_or("-".to_string(), |t| t.to_string());
        println!(
            "{:<12} {:<34} {:<22} {:.3}",
            kind.to_string(),
            format!("{:?}", b.t),
            tree,
            b.leading
        );
    }
    Ok(())
}

fn validate(only: Option<&str>) -> Result<bool> {
    let ids: Vec<usize> = match only {
        Some(s) => parse_list(s, |x| Ok(x.trim().parse::<usize>()?))?,
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut all = true;
    let mut out = std::io::stdout().lock();
    for id in ids {
        let r = run_criterion(id)?;
        all &= r.pass;
        write!(out, "{r}")?;
        out.flush()?;
    }
    Ok(all)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Sort(a) => output(&run_sort_experiment(&spec_of(&a)?)?, a.out.as_ref())?,
        Cmd::Classify(a) => output(
            &run_classification_experiment(&spec_of(&a)?)?,
            a.out.as_ref(),
        )?,
        Cmd::Partition(a) => output(&run_partition_experiment(&spec_of(&a)?)?, a.out.as_ref())?,
        Cmd::Theory { k, tree, t } => theory(k, tree.as_deref(), t.as_deref())?,
        Cmd::OptTau { k, cost, tree } => opt_tau(k, cost, tree.as_deref())?,
        Cmd::Table4 { k, budget, cost } => table4(k, budget, cost)?,
        Cmd::Table1 {
            k,
            n,
            trials,
            seed,
            out,
            sequential,
        } => {
            let ks = parse_list(&k, |x| Ok(x.trim().parse::<usize>()?))?;
            let mode = if sequential {
                Mode::Sequential
            } else {
                Mode::default_mode()
            };
            let rows = run_table1(&ks, parse_size(&n)?, trials, seed, mode)?;
            output(&rows, out.as_ref())?;
        }
        Cmd::Validate { only } => return validate(only.as_deref()),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
