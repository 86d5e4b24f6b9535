//! Classification of elements against `k` pivots.
//!
//! A [`Session`] classifies the elements of one partitioning step, one at a
//! time, choosing the comparison tree per element according to a
//! [`Strategy`]. It counts comparisons exactly and records how often each
//! tree was used.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::trees::{self, catalan, enumerate_trees, ComparisonTree, RunnerUpDp, TreeError};
use crate::Key;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("key {0} equals a pivot")]
    KeyIsPivot(Key),
    #[error("pivots are not strictly ascending")]
    UnsortedPivots,
    #[error("strategy tree has {tree} pivots, classification uses {k}")]
    TreeMismatch { tree: usize, k: usize },
    #[error("oracle strategy needs true group sizes, which are not derivable from this input")]
    NoRankInformation,
    #[error("true group sizes have {got} entries, expected {expected}")]
    SizeDimension { got: usize, expected: usize },
}

/// How the comparison tree is chosen for each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyKind {
    /// One tree for every element.
    FixedTree(ComparisonTree),
    /// Best tree for the elements not yet classified (needs true sizes).
    OracleOptimal,
    /// Best tree for the elements classified so far.
    OnlineCounting,
    /// Best tree for the whole input (needs true sizes).
    OracleFixed,
    /// Classify a prefix of `n^{3/4}` elements with the given tree, then
    /// switch to the best tree for the prefix counts.
    SampledFixed(ComparisonTree),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub kind: StrategyKind,
    /// Restricts tree choices of the adaptive strategies; `None` means all trees.
    pub candidates: Option<Vec<ComparisonTree>>,
}

impl Strategy {
    pub fn new(kind: StrategyKind) -> Self {
        Strategy {
            kind,
            candidates: None,
        }
    }

    pub fn fixed(tree: ComparisonTree) -> Self {
        Self::new(StrategyKind::FixedTree(tree))
    }

    pub fn oracle_optimal() -> Self {
        Self::new(StrategyKind::OracleOptimal)
    }

    pub fn online() -> Self {
        Self::new(StrategyKind::OnlineCounting)
    }

    pub fn oracle_fixed() -> Self {
        Self::new(StrategyKind::OracleFixed)
    }

    pub fn sampled(initial: ComparisonTree) -> Self {
        Self::new(StrategyKind::SampledFixed(initial))
    }

    /// SP_k starting from the balanced tree.
    pub fn sampled_balanced(k: usize) -> Result<Self, TreeError> {
        Ok(Self::sampled(ComparisonTree::balanced(k)?))
    }

    pub fn with_candidates(mut self, mut set: Vec<ComparisonTree>) -> Self {
        set.sort();
        set.dedup();
        self.candidates = Some(set);
        self
    }

    pub fn needs_true_sizes(&self) -> bool {
        matches!(
            self.kind,
            StrategyKind::OracleOptimal | StrategyKind::OracleFixed
        )
    }

    /// Checks that every tree in the strategy is over `k` pivots.
    pub fn validate(&self, k: usize) -> Result<(), ClassifyError> {
        let check = |t: &ComparisonTree| {
            if t.k() == k {
                Ok(())
            } else {
                Err(ClassifyError::TreeMismatch { tree: t.k(), k })
            }
        };
        match &self.kind {
            StrategyKind::FixedTree(t) | StrategyKind::SampledFixed(t) => check(t)?,
            _ => {}
        }
        if let Some(set) = &self.candidates {
            if set.is_empty() {
                return Err(TreeError::NoCandidates.into());
            }
            set.iter().try_for_each(check)?;
        }
        Ok(())
    }

    /// Short name used in reports.
    pub fn label(&self) -> String {
        let base = match &self.kind {
            StrategyKind::FixedTree(t) => format!("fixed{t}"),
            StrategyKind::OracleOptimal => "oracle-optimal".to_string(),
            StrategyKind::OnlineCounting => "online".to_string(),
            StrategyKind::OracleFixed => "oracle-fixed".to_string(),
            StrategyKind::SampledFixed(t) => format!("sampled{t}"),
        };
        match &self.candidates {
            None => base,
            Some(set) => {
                let names: Vec<String> = set.iter().map(|t| t.to_string()).collect();
                format!("{base}{{{}}}", names.join(";"))
            }
        }
    }
}

/// Anything that can tell the group of a key during rearrangement.
pub trait Classifier {
    fn classify(&mut self, x: Key) -> usize;
}

/// Adapts a closure; useful when labels are known in advance.
pub struct ByLabel<F>(pub F);

impl<F: FnMut(Key) -> usize> Classifier for ByLabel<F> {
    #[inline]
    fn classify(&mut self, x: Key) -> usize {
        (self.0)(x)
    }
}

/// Outcome of [`classify_sequence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationResult {
    pub labels: Vec<usize>,
    pub comparisons: u64,
    /// Trees in order of first use, with the number of elements each classified.
    pub tree_usage: Vec<(ComparisonTree, u64)>,
    /// For each element, the index into `tree_usage` of the tree used.
    pub element_tree: Vec<u32>,
}

impl ClassificationResult {
    pub fn usage_of(&self, tree: &ComparisonTree) -> u64 {
        self.tree_usage
            .iter()
            .find(|(t, _)| t == tree)
            .map_or(0, |(_, c)| *c)
    }
}

/// Group and comparison count of `x` under `tree`.
pub fn classify_element(
    tree: &ComparisonTree,
    pivots: &[Key],
    x: Key,
) -> Result<(usize, u32), ClassifyError> {
    check_pivots(tree.k(), pivots)?;
    if pivots.binary_search(&x).is_ok() {
        return Err(ClassifyError::KeyIsPivot(x));
    }
    Ok(tree.locate(pivots, &x))
}

fn check_pivots(k: usize, pivots: &[Key]) -> Result<(), ClassifyError> {
    if pivots.len() != k {
        return Err(ClassifyError::TreeMismatch {
            tree: k,
            k: pivots.len(),
        });
    }
    if pivots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ClassifyError::UnsortedPivots);
    }
    Ok(())
}

/// Group sizes implied by the pivots when `keys ∪ pivots` is `1..=n`.
pub fn sizes_from_pivot_ranks(pivots: &[Key], n: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(pivots.len() + 1);
    let mut prev = 0u64;
    for &p in pivots {
        out.push(p as u64 - prev - 1);
        prev = p as u64;
    }
    out.push(n + 1 - prev - 1);
    out
}

/// Classifies `keys` first to last.
///
/// Oracle strategies assume `keys` together with `pivots` form a permutation
/// of `1..=n`; inputs where that cannot hold are rejected.
pub fn classify_sequence(
    keys: &[Key],
    pivots: &[Key],
    strategy: &Strategy,
) -> Result<ClassificationResult, ClassifyError> {
    let k = pivots.len();
    let sizes = if strategy.needs_true_sizes() {
        let n = (keys.len() + k) as u64;
        let in_range = |x: &Key| *x >= 1 && (*x as u64) <= n;
        if !pivots.iter().all(in_range) || !keys.iter().all(in_range) {
            return Err(ClassifyError::NoRankInformation);
        }
        Some(sizes_from_pivot_ranks(pivots, n))
    } else {
        None
    };
    classify_sequence_with_sizes(keys, pivots, strategy, sizes.as_deref())
}

/// As [`classify_sequence`], with the true group sizes given explicitly.
pub fn classify_sequence_with_sizes(
    keys: &[Key],
    pivots: &[Key],
    strategy: &Strategy,
    true_sizes: Option<&[u64]>,
) -> Result<ClassificationResult, ClassifyError> {
    let k = pivots.len();
    check_pivots(k, pivots)?;
    let mut session = Session::new(pivots, strategy, true_sizes, keys.len() + k)?;
    let mut labels = Vec::with_capacity(keys.len());
    let mut element_tree = Vec::with_capacity(keys.len());
    for &x in keys {
        labels.push(session.classify(x));
        element_tree.push(session.slot as u32);
    }
    let comparisons = session.comparisons();
    Ok(ClassificationResult {
        labels,
        comparisons,
        tree_usage: session.into_usage(),
        element_tree,
    })
}

/// Best tree for the not-yet-classified counts.
pub fn select_tree_oracle_optimal(
    remaining: &[u64],
    candidates: Option<&[ComparisonTree]>,
) -> Result<ComparisonTree, TreeError> {
    trees::optimal_tree(remaining, candidates).map(|(t, _)| t)
}

/// Best tree for the counts seen so far.
pub fn select_tree_online(
    seen: &[u64],
    candidates: Option<&[ComparisonTree]>,
) -> Result<ComparisonTree, TreeError> {
    trees::optimal_tree(seen, candidates).map(|(t, _)| t)
}

/// `⌊n^{3/4}⌋`, exact.
pub fn sample_size(n: u64) -> u64 {
    let cube = BigUint::from(n).pow(3u32);
    let r = cube.nth_root(4);
    u64::try_from(r).expect("fits")
}

/// `Σ_λ usage(λ)·avg_cost(λ, gv)`.
pub fn usage_weighted_cost(
    result: &ClassificationResult,
    gv: &[u64],
) -> Result<BigRational, TreeError> {
    let mut acc = BigRational::zero();
    for (tree, uses) in &result.tree_usage {
        if *uses == 0 {
            continue;
        }
        acc += tree.avg_cost(gv)? * BigRational::from_integer(BigInt::from(*uses));
    }
    Ok(acc)
}

/// Incrementally maintained minimum-cost tree for a changing count vector.
enum Tracker {
    /// Explicit tree list, ascending preorder; costs kept up to date.
    List {
        trees: Vec<ComparisonTree>,
        depths: Vec<u32>,
        costs: Vec<u64>,
        best: usize,
    },
    /// Whole tree space by DP. The current tree stays the unique optimum while
    /// the runner-up gap exceeds the drift bound of the updates since the last
    /// solve.
    Dp {
        dp: RunnerUpDp,
        tree: ComparisonTree,
        gap: u64,
        drift: u64,
        max_step: u64,
    },
}

impl Tracker {
    fn new(counts: &[u64], candidates: Option<&[ComparisonTree]>) -> Result<Self, TreeError> {
        let k = counts.len() - 1;
        let list = match candidates {
            Some(set) => {
                let mut v = set.to_vec();
                v.sort();
                v.dedup();
                Some(v)
            }
            None if catalan(k) <= 14 => Some(enumerate_trees(k)?),
            None => None,
        };
        match list {
            Some(trees) => {
                let width = k + 1;
                let mut depths = Vec::with_capacity(trees.len() * width);
                for t in &trees {
                    depths.extend_from_slice(t.depth_profile());
                }
                let costs: Vec<u64> = trees.iter().map(|t| t.cost_unchecked(counts)).collect();
                let mut tr = Tracker::List {
                    trees,
                    depths,
                    costs,
                    best: 0,
                };
                tr.refresh_list();
                Ok(tr)
            }
            None => {
                let mut dp = RunnerUpDp::new(k + 1);
                let (b, s) = dp.solve(counts);
                let mut pre = Vec::new();
                dp.preorder_into(&mut pre);
                let tree = ComparisonTree::from_preorder(&pre)?;
                Ok(Tracker::Dp {
                    dp,
                    tree,
                    gap: s.saturating_sub(b),
                    drift: 0,
                    max_step: (k - 1) as u64,
                })
            }
        }
    }

    fn refresh_list(&mut self) {
        if let Tracker::List { costs, best, .. } = self {
            let mut b = 0;
            for (i, &c) in costs.iter().enumerate() {
                if c < costs[b] {
                    b = i;
                }
            }
            *best = b;
        }
    }

    /// Tree to use given `counts`, which must reflect all updates so far.
    #[inline]
    fn current(&mut self, counts: &[u64]) -> &ComparisonTree {
        match self {
            Tracker::List { trees, best, .. } => &trees[*best],
            Tracker::Dp {
                dp,
                tree,
                gap,
                drift,
                ..
            } => {
                if *drift >= *gap {
                    let (b, s) = dp.solve(counts);
                    if !dp.same_as(tree) {
                        let mut pre = Vec::new();
                        dp.preorder_into(&mut pre);
                        *tree = ComparisonTree::from_preorder(&pre).expect("valid dp tree");
                    }
                    *gap = s.saturating_sub(b);
                    *drift = 0;
                }
                tree
            }
        }
    }

    #[inline]
    fn add(&mut self, group: usize, up: bool) {
        match self {
            Tracker::List {
                depths,
                costs,
                trees,
                ..
            } => {
                let width = depths.len() / trees.len();
                for (i, c) in costs.iter_mut().enumerate() {
                    let d = depths[i * width + group] as u64;
                    if up {
                        *c += d;
                    } else {
                        *c -= d;
                    }
                }
                self.refresh_list();
            }
            Tracker::Dp {
                drift, max_step, ..
            } => {
                *drift += *max_step;
            }
        }
    }
}

enum Chooser {
    Static(ComparisonTree),
    /// O_k (`decrement`, counts are remaining) or C_k (counts are seen).
    Adaptive {
        counts: Vec<u64>,
        decrement: bool,
        tracker: Tracker,
    },
    Sampled {
        initial: ComparisonTree,
        left: u64,
        seen: Vec<u64>,
        candidates: Option<Vec<ComparisonTree>>,
        chosen: Option<ComparisonTree>,
    },
}

/// Classification state for one partitioning step.
pub struct Session<'p> {
    pivots: &'p [Key],
    chooser: Chooser,
    comparisons: u64,
    usage: Vec<(ComparisonTree, u64)>,
    slot: usize,
}

impl<'p> Session<'p> {
    /// `total` is the size of the subarray being partitioned, pivots included;
    /// it drives the prefix length of the sampled strategy.
    pub fn new(
        pivots: &'p [Key],
        strategy: &Strategy,
        true_sizes: Option<&[u64]>,
        total: usize,
    ) -> Result<Self, ClassifyError> {
        let k = pivots.len();
        strategy.validate(k)?;
        let cands = strategy.candidates.as_deref();
        let sizes = || -> Result<&[u64], ClassifyError> {
            let s = true_sizes.ok_or(ClassifyError::NoRankInformation)?;
            if s.len() != k + 1 {
                return Err(ClassifyError::SizeDimension {
                    got: s.len(),
                    expected: k + 1,
                });
            }
            Ok(s)
        };
        let chooser = match &strategy.kind {
            StrategyKind::FixedTree(t) => Chooser::Static(t.clone()),
            StrategyKind::OracleFixed => Chooser::Static(trees::optimal_tree(sizes()?, cands)?.0),
            StrategyKind::OracleOptimal => {
                let counts = sizes()?.to_vec();
                let tracker = Tracker::new(&counts, cands)?;
                Chooser::Adaptive {
                    counts,
                    decrement: true,
                    tracker,
                }
            }
            StrategyKind::OnlineCounting => {
                let counts = vec![0; k + 1];
                let tracker = Tracker::new(&counts, cands)?;
                Chooser::Adaptive {
                    counts,
                    decrement: false,
                    tracker,
                }
            }
            StrategyKind::SampledFixed(t) => Chooser::Sampled {
                initial: t.clone(),
                left: sample_size(total as u64),
                seen: vec![0; k + 1],
                candidates: strategy.candidates.clone(),
                chosen: None,
            },
        };
        Ok(Session {
            pivots,
            chooser,
            comparisons: 0,
            usage: Vec::new(),
            slot: usize::MAX,
        })
    }

    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    pub fn into_usage(self) -> Vec<(ComparisonTree, u64)> {
        self.usage
    }

    #[inline]
    fn note_use(usage: &mut Vec<(ComparisonTree, u64)>, slot: &mut usize, tree: &ComparisonTree) {
        if *slot < usage.len() && usage[*slot].0 == *tree {
            usage[*slot].1 += 1;
            return;
        }
        match usage.iter().position(|(t, _)| t == tree) {
            Some(i) => *slot = i,
            None => {
                usage.push((tree.clone(), 0));
                *slot = usage.len() - 1;
            }
        }
        usage[*slot].1 += 1;
    }
}

impl Classifier for Session<'_> {
    #[inline]
    fn classify(&mut self, x: Key) -> usize {
        let pivots = self.pivots;
        let (group, cmps) = match &mut self.chooser {
            Chooser::Static(tree) => {
                Self::note_use(&mut self.usage, &mut self.slot, tree);
                tree.locate(pivots, &x)
            }
            Chooser::Adaptive {
                counts,
                decrement,
                tracker,
            } => {
                let tree = tracker.current(counts);
                Self::note_use(&mut self.usage, &mut self.slot, tree);
                let (g, c) = tree.locate(pivots, &x);
                if *decrement {
                    counts[g] -= 1;
                } else {
                    counts[g] += 1;
                }
                tracker.add(g, !*decrement);
                (g, c)
            }
            Chooser::Sampled {
                initial,
                left,
                seen,
                candidates,
                chosen,
            } => {
                if *left > 0 {
                    *left -= 1;
                    Self::note_use(&mut self.usage, &mut self.slot, initial);
                    let (g, c) = initial.locate(pivots, &x);
                    seen[g] += 1;
                    (g, c)
                } else {
                    if chosen.is_none() {
                        let t = trees::optimal_tree(seen, candidates.as_deref())
                            .expect("validated strategy")
                            .0;
                        *chosen = Some(t);
                    }
                    let tree = chosen.as_ref().expect("set above");
                    Self::note_use(&mut self.usage, &mut self.slot, tree);
                    tree.locate(pivots, &x)
                }
            }
        };
        self.comparisons += cmps as u64;
        group
    }
}
