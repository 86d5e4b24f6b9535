//! Costs of pivot sampling with a vector `t`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::brute::for_each_composition;
use super::{harmonic, int, ratio, to_f64, Rational, TheoryError};
use crate::rearrange::scan_multiplicity;
use crate::trees::{ComparisonTree, OptimalDp};

/// Which per-element cost a sampling choice is judged by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostKind {
    Comparisons,
    Scanned,
    /// Comparisons plus scanned elements.
    Sum,
}

impl CostKind {
    pub const ALL: [CostKind; 3] = [CostKind::Comparisons, CostKind::Scanned, CostKind::Sum];

    pub fn uses_tree(self) -> bool {
        !matches!(self, CostKind::Scanned)
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostKind::Comparisons => "comparisons",
            CostKind::Scanned => "scanned",
            CostKind::Sum => "sum",
        })
    }
}

impl FromStr for CostKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "comparisons" | "cmp" => Ok(CostKind::Comparisons),
            "scanned" | "se" => Ok(CostKind::Scanned),
            "sum" | "total" => Ok(CostKind::Sum),
            other => Err(format!(
                "unknown cost kind {other:?} (expected comparisons, scanned or sum)"
            )),
        }
    }
}

fn kappa(t: &[usize]) -> usize {
    t.len() - 1 + t.iter().sum::<usize>()
}

/// `H(t) = Σ_i (t_i+1)/(κ+1) · (H_{κ+1} - H_{t_i+1})`.
pub fn sampling_entropy(t: &[usize]) -> Rational {
    let kp = kappa(t) as u64;
    let hk = harmonic(kp + 1);
    let mut acc = Rational::zero();
    for &ti in t {
        acc += ratio(ti as i64 + 1, kp as i64 + 1) * (&hk - harmonic(ti as u64 + 1));
    }
    acc
}

/// Comparisons per element: `Σ depth_h · (t_h+1)/(κ+1)`.
pub fn sampling_comparison_coeff(
    tree: &ComparisonTree,
    t: &[usize],
) -> Result<Rational, TheoryError> {
    if t.len() != tree.k() + 1 {
        return Err(TheoryError::Dimension {
            got: t.len(),
            expected: tree.k() + 1,
        });
    }
    Ok(weighted(tree.depth_profile(), t))
}

/// Scanned elements per element: `Σ α_h · (t_h+1)/(κ+1)`, with `α_h` the
/// number of cursors passing an `A_h` element.
pub fn sampling_scanned_coeff(k: usize, t: &[usize]) -> Result<Rational, TheoryError> {
    if t.len() != k + 1 {
        return Err(TheoryError::Dimension {
            got: t.len(),
            expected: k + 1,
        });
    }
    Ok(weighted(&scan_multiplicity(k), t))
}

fn weighted(coef: &[u32], t: &[usize]) -> Rational {
    let num: u64 = coef
        .iter()
        .zip(t)
        .map(|(&c, &x)| c as u64 * (x as u64 + 1))
        .sum();
    int(num) / int(kappa(t) as u64 + 1)
}

/// `a / H(t)`.
pub fn sampling_leading(a: &Rational, t: &[usize]) -> f64 {
    to_f64(&(a / sampling_entropy(t)))
}

/// Winner of [`best_sampling_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct BestSampling {
    pub k: usize,
    pub budget: usize,
    pub kind: CostKind,
    pub t: Vec<usize>,
    /// Best tree for `t`; `None` for [`CostKind::Scanned`].
    pub tree: Option<ComparisonTree>,
    /// Leading coefficient, exact.
    pub exact: Rational,
    pub leading: f64,
}

/// Scores one `t` with reusable buffers.
struct Scorer {
    k: usize,
    kind: CostKind,
    alpha: Vec<u32>,
    /// `H_1..=H_{κ+1}` in floating point, index = n.
    h: Vec<f64>,
    kappa: usize,
    dp: OptimalDp,
    w: Vec<u64>,
}

struct Scored {
    t: Vec<usize>,
    /// Cost numerator: cost per element times `κ+1`.
    num: u64,
    value: f64,
    preorder: Vec<usize>,
}

impl Scorer {
    fn new(k: usize, budget: usize, kind: CostKind) -> Self {
        let kappa = k + budget;
        let mut h = vec![0.0; kappa + 2];
        for n in 1..=kappa + 1 {
            h[n] = h[n - 1] + 1.0 / n as f64;
        }
        Scorer {
            k,
            kind,
            alpha: scan_multiplicity(k),
            h,
            kappa,
            dp: OptimalDp::new(k + 1),
            w: vec![0; k + 1],
        }
    }

    fn score(&mut self, t: &[usize]) -> (u64, f64) {
        for (w, &x) in self.w.iter_mut().zip(t) {
            *w = x as u64 + 1;
        }
        let mut num = 0u64;
        if self.kind.uses_tree() {
            num += self.dp.run(&self.w);
        }
        if self.kind != CostKind::Comparisons {
            num += self
                .alpha
                .iter()
                .zip(&self.w)
                .map(|(&a, &w)| a as u64 * w)
                .sum::<u64>();
        }
        let kp1 = (self.kappa + 1) as f64;
        let hk = self.h[self.kappa + 1];
        let ent: f64 = self
            .w
            .iter()
            .map(|&w| w as f64 / kp1 * (hk - self.h[w as usize]))
            .sum();
        (num, num as f64 / kp1 / ent)
    }

    fn exact(&self, t: &[usize], num: u64) -> Rational {
        int(num) / int(self.kappa as u64 + 1) / sampling_entropy(t)
    }

    /// Ordering of two candidates by value; near-equal floats are settled
    /// exactly.
    fn compare(&self, a: &Scored, b: &Scored) -> Ordering {
        let scale = a.value.abs().max(b.value.abs());
        if (a.value - b.value).abs() > 1e-9 * scale {
            return a.value.partial_cmp(&b.value).expect("finite");
        }
        self.exact(&a.t, a.num).cmp(&self.exact(&b.t, b.num))
    }

    /// Best over all `t` with the given first entry; lexicographically first
    /// on ties.
    fn best_with_head(&mut self, head: usize, budget: usize) -> Option<Scored> {
        let parts = self.k;
        let mut best: Option<Scored> = None;
        let mut t = vec![0; self.k + 1];
        t[0] = head;
        for_each_composition(budget - head, parts, |rest| {
            t[1..].copy_from_slice(rest);
            let (num, value) = self.score(&t);
            let cand = Scored {
                t: t.clone(),
                num,
                value,
                preorder: Vec::new(),
            };
            let better = match &best {
                None => true,
                Some(b) => self.compare(&cand, b) == Ordering::Less,
            };
            if better {
                let mut cand = cand;
                if self.kind.uses_tree() {
                    self.dp.preorder_into(&mut cand.preorder);
                }
                best = Some(cand);
            }
        });
        best
    }
}

/// Exhaustive search over all `t` with `Σ t_i = budget` (and, for tree-based
/// costs, over all trees) for the smallest leading coefficient.
///
/// Ties go to the lexicographically smallest `t`, then the smallest preorder.
pub fn best_sampling_table(
    k: usize,
    budget: usize,
    kind: CostKind,
) -> Result<BestSampling, TheoryError> {
    if k == 0 {
        return Err(TheoryError::NoPivots);
    }
    let chunks = crate::par::map_range(budget + 1, |head| {
        let mut s = Scorer::new(k, budget, kind);
        s.best_with_head(head, budget)
    });
    let judge = Scorer::new(k, budget, kind);
    let mut best: Option<Scored> = None;
    for cand in chunks.into_iter().flatten() {
        let better = match &best {
            None => true,
            Some(b) => judge.compare(&cand, b) == Ordering::Less,
        };
        if better {
            best = Some(cand);
        }
    }
    let best = best.expect("at least one composition");
    let tree = if kind.uses_tree() {
        Some(ComparisonTree::from_preorder(&best.preorder)?)
    } else {
        None
    };
    let exact = judge.exact(&best.t, best.num);
    Ok(BestSampling {
        k,
        budget,
        kind,
        leading: to_f64(&exact),
        exact,
        t: best.t,
        tree,
    })
}
