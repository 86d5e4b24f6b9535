//! Recursive k-pivot quicksort on top of [`crate::rearrange`].

use thiserror::Error;

use crate::classify::{ClassifyError, Session, Strategy};
use crate::rearrange::{exchange_region, settle_prefix, CostLedger, PrefixItem};
use crate::trees::{ComparisonTree, TreeError};
use crate::Key;

/// Subarrays of at most this many elements go to insertion sort by default.
pub const DEFAULT_CUTOFF: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("k must be at least 1")]
    NoPivots,
    #[error("sampling vector has {got} entries, expected k+1 = {expected}")]
    SamplingDimension { got: usize, expected: usize },
    #[error("cutoff {cutoff} is below the sample size {kappa}")]
    CutoffBelowSample { cutoff: usize, kappa: usize },
    #[error("sample of {kappa} keys does not fit into {len} cells")]
    SampleTooLarge { kappa: usize, len: usize },
    #[error("oracle strategies need the input to be a permutation of a contiguous key range")]
    NotARange,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Pivot selection vector `t`; the sample has `κ = k + Σ t_i` keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SamplingVector {
    t: Vec<usize>,
}

impl SamplingVector {
    pub fn new(t: Vec<usize>) -> Result<Self, SortError> {
        if t.len() < 2 {
            return Err(SortError::NoPivots);
        }
        Ok(SamplingVector { t })
    }

    /// `t = (0, …, 0)`: the first `k` keys are the pivots.
    pub fn zeros(k: usize) -> Self {
        SamplingVector { t: vec![0; k + 1] }
    }

    pub fn k(&self) -> usize {
        self.t.len() - 1
    }

    pub fn kappa(&self) -> usize {
        self.k() + self.t.iter().sum::<usize>()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.t
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(|&x| x == 0)
    }

    /// Index of pivot `p_h` (1-based `h`) within the sorted sample.
    pub fn pivot_index(&self, h: usize) -> usize {
        h - 1 + self.t[..h].iter().sum::<usize>()
    }

    /// Cell contents of the sorted sample.
    pub fn prefix_items(&self) -> Vec<PrefixItem> {
        let mut out = Vec::with_capacity(self.kappa());
        for (g, &tg) in self.t.iter().enumerate() {
            if g > 0 {
                out.push(PrefixItem::Pivot(g));
            }
            out.extend(std::iter::repeat_n(PrefixItem::Group(g), tg));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmallSorter {
    #[default]
    Insertion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortConfig {
    pub k: usize,
    pub sampling: SamplingVector,
    pub strategy: Strategy,
    /// Subarrays with at most this many elements are sorted directly.
    pub cutoff: usize,
    pub small_sorter: SmallSorter,
}

impl SortConfig {
    /// Balanced tree, no sampling, default cutoff.
    pub fn new(k: usize) -> Result<Self, SortError> {
        if k == 0 {
            return Err(SortError::NoPivots);
        }
        Ok(SortConfig {
            k,
            sampling: SamplingVector::zeros(k),
            strategy: Strategy::fixed(ComparisonTree::balanced(k)?),
            cutoff: DEFAULT_CUTOFF.max(k),
            small_sorter: SmallSorter::Insertion,
        })
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_sampling(mut self, sampling: SamplingVector) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<(), SortError> {
        if self.k == 0 {
            return Err(SortError::NoPivots);
        }
        if self.sampling.t.len() != self.k + 1 {
            return Err(SortError::SamplingDimension {
                got: self.sampling.t.len(),
                expected: self.k + 1,
            });
        }
        let kappa = self.sampling.kappa();
        if self.cutoff < kappa {
            return Err(SortError::CutoffBelowSample {
                cutoff: self.cutoff,
                kappa,
            });
        }
        self.strategy.validate(self.k)?;
        Ok(())
    }
}

/// Sorts the first `κ` cells and returns the pivots `p_h = A[h + Σ_{j<h} t_j]`.
pub fn choose_pivots_from_sample(a: &mut [Key], t: &SamplingVector) -> Result<Vec<Key>, SortError> {
    let kappa = t.kappa();
    if kappa > a.len() {
        return Err(SortError::SampleTooLarge {
            kappa,
            len: a.len(),
        });
    }
    let mut scratch = CostLedger::default();
    insertion_sort(&mut a[..kappa], &mut scratch);
    Ok((1..=t.k()).map(|h| a[t.pivot_index(h)]).collect())
}

/// Counting insertion sort; costs go to the base-case fields.
pub fn insertion_sort(a: &mut [Key], ledger: &mut CostLedger) {
    let (c, w) = insertion_sort_counted(a);
    ledger.base_comparisons += c;
    ledger.base_assignments += w;
}

fn insertion_sort_counted(a: &mut [Key]) -> (u64, u64) {
    let mut cmps = 0u64;
    let mut asg = 0u64;
    for i in 1..a.len() {
        let x = a[i];
        asg += 1;
        let mut j = i;
        while j > 0 {
            cmps += 1;
            if a[j - 1] > x {
                a[j] = a[j - 1];
                asg += 1;
                j -= 1;
            } else {
                break;
            }
        }
        a[j] = x;
        asg += 1;
    }
    (cmps, asg)
}

/// Sorts `a` ascending and returns the summed costs.
///
/// Keys must be distinct. Oracle strategies additionally need `a` to be a
/// permutation of a contiguous range, so that group sizes follow from the
/// pivot values.
pub fn multipivot_sort(a: &mut [Key], config: &SortConfig) -> Result<CostLedger, SortError> {
    config.validate()?;
    let mut ledger = CostLedger::new(config.k);
    if a.is_empty() {
        return Ok(ledger);
    }
    let lo = if config.strategy.needs_true_sizes() {
        let min = *a.iter().min().expect("non-empty");
        let max = *a.iter().max().expect("non-empty");
        if (max - min) as usize + 1 != a.len() {
            return Err(SortError::NotARange);
        }
        min as u64
    } else {
        0
    };
    let ctx = Context {
        config,
        prefix: config.sampling.prefix_items(),
        oracle: config.strategy.needs_true_sizes(),
    };
    sort_rec(a, lo, &ctx, &mut ledger)?;
    Ok(ledger)
}

struct Context<'c> {
    config: &'c SortConfig,
    prefix: Vec<PrefixItem>,
    oracle: bool,
}

fn sort_rec(
    a: &mut [Key],
    lo: u64,
    ctx: &Context,
    ledger: &mut CostLedger,
) -> Result<(), SortError> {
    let cfg = ctx.config;
    let n = a.len();
    if n <= cfg.cutoff {
        match cfg.small_sorter {
            SmallSorter::Insertion => insertion_sort(a, ledger),
        }
        return Ok(());
    }
    let k = cfg.k;
    let t = &cfg.sampling;
    let kappa = t.kappa();
    let (c, w) = insertion_sort_counted(&mut a[..kappa]);
    ledger.sample_comparisons += c;
    ledger.base_assignments += w;
    let pivots: Vec<Key> = (1..=k).map(|h| a[t.pivot_index(h)]).collect();

    let sizes = if ctx.oracle {
        // Keys here are exactly lo..lo+n; unused sample keys are not classified.
        let ts = t.as_slice();
        let mut s = Vec::with_capacity(k + 1);
        let mut prev = lo as i64 - 1;
        for (h, &p) in pivots.iter().enumerate() {
            s.push((p as i64 - prev - 1) as u64 - ts[h] as u64);
            prev = p as i64;
        }
        s.push((lo as i64 + n as i64 - prev - 1) as u64 - ts[k] as u64);
        Some(s)
    } else {
        None
    };

    let mut session = Session::new(&pivots, &cfg.strategy, sizes.as_deref(), n)?;
    let groups = exchange_region(&mut a[kappa..], k, &mut session, ledger);
    ledger.comparisons += session.comparisons();
    ledger.partitions += 1;
    let layout = settle_prefix(a, &ctx.prefix, &groups, ledger);

    for h in 0..=k {
        let seg = layout.segment(h);
        let seg_lo = if h == 0 { lo } else { pivots[h - 1] as u64 + 1 };
        sort_rec(&mut a[seg], seg_lo, ctx, ledger)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insertion_sort_counts() {
        let mut l = CostLedger::default();
        let mut a = vec![2, 1];
        insertion_sort(&mut a, &mut l);
        assert_eq!((a, l.base_comparisons), (vec![1, 2], 1));
        let mut l = CostLedger::default();
        let mut a = vec![5, 4, 3, 2, 1];
        insertion_sort(&mut a, &mut l);
        assert_eq!((a, l.base_comparisons), (vec![1, 2, 3, 4, 5], 10));
        let mut empty: Vec<Key> = vec![];
        insertion_sort(&mut empty, &mut l);
    }

    #[test]
    fn prefix_layout() {
        let t = SamplingVector::new(vec![1, 0, 2]).unwrap();
        assert_eq!(t.kappa(), 5);
        assert_eq!(t.pivot_index(1), 1);
        assert_eq!(t.pivot_index(2), 2);
        use PrefixItem::*;
        assert_eq!(
            t.prefix_items(),
            vec![Group(0), Pivot(1), Pivot(2), Group(2), Group(2)]
        );
    }
}
