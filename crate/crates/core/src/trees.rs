//! Comparison trees over `k` pivots.
//!
//! A tree is stored by its preorder of pivot indices (`1..=k`), which is also
//! the canonical text form, e.g. `[2,1,3]`. Leaves are the groups `A_0..A_k`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Largest `k` accepted by [`enumerate_trees`].
pub const MAX_ENUMERATE_K: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a comparison tree needs at least one pivot")]
    NoPivots,
    #[error("preorder {0:?} is not a permutation of 1..=k")]
    NotPermutation(Vec<usize>),
    #[error("preorder {0:?} is not a binary search tree preorder")]
    NotBstPreorder(Vec<usize>),
    #[error("cannot parse tree from {0:?}")]
    Syntax(String),
    #[error("group vector has {got} entries, tree over {k} pivots needs {}", k + 1)]
    Dimension { k: usize, got: usize },
    #[error("average cost of an empty group vector")]
    EmptyGroups,
    #[error("enumeration is limited to k <= {MAX_ENUMERATE_K}, got {0}")]
    KOutOfRange(usize),
    #[error("empty candidate set")]
    NoCandidates,
    #[error("candidate trees use different pivot counts")]
    MixedCandidates,
}

/// Group sizes `(a_0, ..., a_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupVector(pub Vec<u64>);

impl GroupVector {
    pub fn new(counts: Vec<u64>) -> Self {
        GroupVector(counts)
    }

    pub fn zeros(k: usize) -> Self {
        GroupVector(vec![0; k + 1])
    }

    /// Number of pivots this vector belongs to.
    pub fn k(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl std::ops::Deref for GroupVector {
    type Target = [u64];
    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl std::ops::DerefMut for GroupVector {
    fn deref_mut(&mut self) -> &mut [u64] {
        &mut self.0
    }
}

impl From<Vec<u64>> for GroupVector {
    fn from(v: Vec<u64>) -> Self {
        GroupVector(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Child {
    Node(u16),
    Leaf(u16),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Node {
    pivot: u16,
    left: Child,
    right: Child,
}

/// A binary search tree over pivots `p_1 < ... < p_k`.
#[derive(Clone)]
pub struct ComparisonTree {
    preorder: Vec<usize>,
    nodes: Vec<Node>,
    depths: Vec<u32>,
}

impl ComparisonTree {
    /// Builds a tree from its preorder sequence of pivot indices.
    pub fn from_preorder(preorder: &[usize]) -> Result<Self, TreeError> {
        let k = preorder.len();
        if k == 0 {
            return Err(TreeError::NoPivots);
        }
        let mut seen = vec![false; k + 1];
        for &p in preorder {
            if p == 0 || p > k || seen[p] {
                return Err(TreeError::NotPermutation(preorder.to_vec()));
            }
            seen[p] = true;
        }
        let mut nodes = Vec::with_capacity(k);
        let mut depths = vec![0u32; k + 1];
        let mut pos = 0;
        let root = build(preorder, &mut pos, 1, k, 1, &mut nodes, &mut depths);
        if pos != k {
            return Err(TreeError::NotBstPreorder(preorder.to_vec()));
        }
        debug_assert_eq!(root, Child::Node(0));
        Ok(ComparisonTree {
            preorder: preorder.to_vec(),
            nodes,
            depths,
        })
    }

    /// Number of pivots.
    pub fn k(&self) -> usize {
        self.preorder.len()
    }

    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    /// Depth of each leaf, i.e. the comparisons an element of that group costs.
    pub fn depth_profile(&self) -> &[u32] {
        &self.depths
    }

    /// Total comparisons for classifying `gv`.
    pub fn cost(&self, gv: &[u64]) -> Result<u64, TreeError> {
        self.check_dim(gv)?;
        Ok(self.cost_unchecked(gv))
    }

    pub(crate) fn cost_unchecked(&self, gv: &[u64]) -> u64 {
        self.depths
            .iter()
            .zip(gv)
            .map(|(&d, &a)| d as u64 * a)
            .sum()
    }

    /// `cost / Σ a_h` as an exact fraction.
    pub fn avg_cost(&self, gv: &[u64]) -> Result<BigRational, TreeError> {
        let c = self.cost(gv)?;
        let total: u64 = gv.iter().sum();
        if total == 0 {
            return Err(TreeError::EmptyGroups);
        }
        Ok(BigRational::new(BigInt::from(c), BigInt::from(total)))
    }

    /// Searches `x` among `pivots`. Returns the group and the comparisons made.
    ///
    /// `pivots` must be ascending and have length `k`; an `x` equal to a pivot
    /// lands in the group right of it.
    #[inline]
    pub fn locate<K: Ord>(&self, pivots: &[K], x: &K) -> (usize, u32) {
        let mut child = Child::Node(0);
        let mut cmps = 0;
        loop {
            match child {
                Child::Leaf(g) => return (g as usize, cmps),
                Child::Node(i) => {
                    let node = &self.nodes[i as usize];
                    cmps += 1;
                    child = if *x < pivots[node.pivot as usize - 1] {
                        node.left
                    } else {
                        node.right
                    };
                }
            }
        }
    }

    fn check_dim(&self, gv: &[u64]) -> Result<(), TreeError> {
        if gv.len() != self.k() + 1 {
            return Err(TreeError::Dimension {
                k: self.k(),
                got: gv.len(),
            });
        }
        Ok(())
    }

    /// The tree rooted at the middle pivot with pure spines on both sides.
    pub fn extremal(k: usize) -> Result<Self, TreeError> {
        if k == 0 {
            return Err(TreeError::NoPivots);
        }
        let m = (k + 2) / 2;
        let pre: Vec<usize> = std::iter::once(m)
            .chain((1..m).rev())
            .chain(m + 1..=k)
            .collect();
        Self::from_preorder(&pre)
    }

    /// Leaf depths differ by at most one; the left side gets the extra node.
    pub fn balanced(k: usize) -> Result<Self, TreeError> {
        if k == 0 {
            return Err(TreeError::NoPivots);
        }
        fn go(lo: usize, hi: usize, out: &mut Vec<usize>) {
            if lo > hi {
                return;
            }
            let rest = hi - lo;
            let root = lo + rest.div_ceil(2);
            out.push(root);
            go(lo, root - 1, out);
            go(root + 1, hi, out);
        }
        let mut pre = Vec::with_capacity(k);
        go(1, k, &mut pre);
        Self::from_preorder(&pre)
    }
}

/// Recursive preorder consumer for pivots in `lo..=hi`; leaves `lo-1..=hi`.
fn build(
    pre: &[usize],
    pos: &mut usize,
    lo: usize,
    hi: usize,
    depth: u32,
    nodes: &mut Vec<Node>,
    depths: &mut [u32],
) -> Child {
    if lo > hi || *pos >= pre.len() || pre[*pos] < lo || pre[*pos] > hi {
        // Leaf for group lo-1. An unexpected pivot here is caught by the
        // final `pos == k` check.
        depths[lo - 1] = depth - 1;
        return Child::Leaf((lo - 1) as u16);
    }
    let p = pre[*pos];
    *pos += 1;
    let idx = nodes.len();
    nodes.push(Node {
        pivot: p as u16,
        left: Child::Leaf(0),
        right: Child::Leaf(0),
    });
    let left = build(pre, pos, lo, p - 1, depth + 1, nodes, depths);
    let right = build(pre, pos, p + 1, hi, depth + 1, nodes, depths);
    nodes[idx].left = left;
    nodes[idx].right = right;
    Child::Node(idx as u16)
}

impl PartialEq for ComparisonTree {
    fn eq(&self, other: &Self) -> bool {
        self.preorder == other.preorder
    }
}

impl Eq for ComparisonTree {}

impl std::hash::Hash for ComparisonTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.preorder.hash(state);
    }
}

impl PartialOrd for ComparisonTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order of preorders, the tie-break order used everywhere.
impl Ord for ComparisonTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.preorder.cmp(&other.preorder)
    }
}

impl fmt::Display for ComparisonTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.preorder.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for ComparisonTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComparisonTree{self}")
    }
}

impl FromStr for ComparisonTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, TreeError> {
        parse(s)
    }
}

/// Parses `"[i1,i2,...,ik]"`; whitespace is tolerated.
pub fn parse(s: &str) -> Result<ComparisonTree, TreeError> {
    let syntax = || TreeError::Syntax(s.to_string());
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(syntax)?;
    let pre = inner
        .split(',')
        .map(|tok| tok.trim().parse::<usize>().map_err(|_| syntax()))
        .collect::<Result<Vec<_>, _>>()?;
    ComparisonTree::from_preorder(&pre)
}

pub fn format(tree: &ComparisonTree) -> String {
    tree.to_string()
}

pub fn depth_profile(tree: &ComparisonTree) -> &[u32] {
    tree.depth_profile()
}

pub fn cost(tree: &ComparisonTree, gv: &[u64]) -> Result<u64, TreeError> {
    tree.cost(gv)
}

pub fn avg_cost(tree: &ComparisonTree, gv: &[u64]) -> Result<BigRational, TreeError> {
    tree.avg_cost(gv)
}

pub fn balanced_tree(k: usize) -> Result<ComparisonTree, TreeError> {
    ComparisonTree::balanced(k)
}

pub fn extremal_tree(k: usize) -> Result<ComparisonTree, TreeError> {
    ComparisonTree::extremal(k)
}

/// Catalan number `C_k`.
pub fn catalan(k: usize) -> u64 {
    let mut c = vec![0u64; k + 1];
    c[0] = 1;
    for n in 1..=k {
        c[n] = (0..n).map(|i| c[i] * c[n - 1 - i]).sum();
    }
    c[k]
}

/// All trees over `k` pivots in ascending preorder order.
pub fn enumerate_trees(k: usize) -> Result<Vec<ComparisonTree>, TreeError> {
    if k == 0 {
        return Err(TreeError::NoPivots);
    }
    if k > MAX_ENUMERATE_K {
        return Err(TreeError::KOutOfRange(k));
    }
    let mut out = Vec::with_capacity(catalan(k) as usize);
    for pre in preorders(1, k) {
        out.push(ComparisonTree::from_preorder(&pre)?);
    }
    // Roots ascend, and within a root left parts ascend before right parts,
    // so the list is already sorted; keep the guarantee explicit anyway.
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

fn preorders(lo: usize, hi: usize) -> Vec<Vec<usize>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for r in lo..=hi {
        let lefts = preorders(lo, r - 1);
        let rights = preorders(r + 1, hi);
        for l in &lefts {
            for rt in &rights {
                let mut v = Vec::with_capacity(hi - lo + 1);
                v.push(r);
                v.extend_from_slice(l);
                v.extend_from_slice(rt);
                out.push(v);
            }
        }
    }
    out
}

/// Minimum-cost tree for `gv`, ties broken by smallest preorder.
///
/// With `candidates` the minimum is taken over that set; otherwise over all
/// shapes by dynamic programming.
pub fn optimal_tree(
    gv: &[u64],
    candidates: Option<&[ComparisonTree]>,
) -> Result<(ComparisonTree, u64), TreeError> {
    match candidates {
        Some(set) => {
            let first = set.first().ok_or(TreeError::NoCandidates)?;
            first.check_dim(gv)?;
            let mut best: Option<(&ComparisonTree, u64)> = None;
            for t in set {
                t.check_dim(gv).map_err(|_| TreeError::MixedCandidates)?;
                let c = t.cost_unchecked(gv);
                best = match best {
                    Some((bt, bc)) if bc < c || (bc == c && bt <= t) => Some((bt, bc)),
                    _ => Some((t, c)),
                };
            }
            let (t, c) = best.expect("non-empty");
            Ok((t.clone(), c))
        }
        None => {
            if gv.len() < 2 {
                return Err(TreeError::NoPivots);
            }
            let dp = OptimalDp::solve(gv);
            Ok((dp.tree(), dp.cost()))
        }
    }
}

/// Interval DP over leaf ranges.
///
/// `cost[i][j]` is the cheapest tree on leaves `i..=j`; the chosen root is the
/// smallest optimal one. Since a preorder is `[root, left.., right..]`, taking
/// the smallest optimal root and then the smallest optimal subtrees yields the
/// lexicographically smallest optimal preorder.
///
/// Split candidates are restricted by Knuth's monotonicity of the smallest
/// optimal root, giving O(k²) total work.
pub(crate) struct OptimalDp {
    n: usize,
    prefix: Vec<u64>,
    cost: Vec<u64>,
    root: Vec<u16>,
}

impl OptimalDp {
    pub(crate) fn new(leaves: usize) -> Self {
        OptimalDp {
            n: leaves,
            prefix: vec![0; leaves + 1],
            cost: vec![0; leaves * leaves],
            root: vec![0; leaves * leaves],
        }
    }

    pub(crate) fn solve(gv: &[u64]) -> Self {
        let mut dp = Self::new(gv.len());
        dp.run(gv);
        dp
    }

    /// Recomputes for `gv`, which must have as many entries as `new` was given.
    pub(crate) fn run(&mut self, gv: &[u64]) -> u64 {
        let n = self.n;
        debug_assert_eq!(gv.len(), n);
        for (i, &a) in gv.iter().enumerate() {
            self.prefix[i + 1] = self.prefix[i] + a;
        }
        let (cost, root, prefix) = (&mut self.cost, &mut self.root, &self.prefix);
        for len in 2..=n {
            for i in 0..=n - len {
                let j = i + len - 1;
                let w = prefix[j + 1] - prefix[i];
                // Root r (pivot index) splits leaves i..r-1 and r..j.
                let (lo, hi) = if len == 2 {
                    (i + 1, j)
                } else {
                    (root[i * n + j - 1] as usize, root[(i + 1) * n + j] as usize)
                };
                let mut best = u64::MAX;
                let mut arg = lo;
                for r in lo..=hi {
                    let c = cost[i * n + r - 1] + cost[r * n + j];
                    if c < best {
                        best = c;
                        arg = r;
                    }
                }
                cost[i * n + j] = best + w;
                root[i * n + j] = arg as u16;
            }
        }
        self.cost()
    }

    pub(crate) fn cost(&self) -> u64 {
        self.cost[self.n - 1]
    }

    pub(crate) fn preorder_into(&self, out: &mut Vec<usize>) {
        out.clear();
        let mut stack = vec![(0usize, self.n - 1)];
        while let Some((i, j)) = stack.pop() {
            if i == j {
                continue;
            }
            let r = self.root[i * self.n + j] as usize;
            out.push(r);
            stack.push((r, j));
            stack.push((i, r - 1));
        }
    }

    pub(crate) fn tree(&self) -> ComparisonTree {
        let mut pre = Vec::with_capacity(self.n - 1);
        self.preorder_into(&mut pre);
        ComparisonTree::from_preorder(&pre).expect("dp yields a valid preorder")
    }
}

/// Cubic interval DP that also reports the cheapest cost among all other
/// trees. Used to decide how long a chosen tree stays optimal.
pub(crate) struct RunnerUpDp {
    n: usize,
    best: Vec<u64>,
    second: Vec<u64>,
    root: Vec<u16>,
}

impl RunnerUpDp {
    pub(crate) fn new(leaves: usize) -> Self {
        RunnerUpDp {
            n: leaves,
            best: vec![0; leaves * leaves],
            second: vec![u64::MAX; leaves * leaves],
            root: vec![0; leaves * leaves],
        }
    }

    /// Returns `(best cost, runner-up cost)`; runner-up is `u64::MAX` if the
    /// tree is unique (k = 1).
    pub(crate) fn solve(&mut self, gv: &[u64]) -> (u64, u64) {
        let n = self.n;
        debug_assert_eq!(gv.len(), n);
        for i in 0..n {
            self.best[i * n + i] = 0;
            self.second[i * n + i] = u64::MAX;
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let j = i + len - 1;
                let w: u64 = gv[i..=j].iter().sum();
                let mut b = u64::MAX;
                let mut arg = i + 1;
                for r in i + 1..=j {
                    let c = self.best[i * n + r - 1] + self.best[r * n + j];
                    if c < b {
                        b = c;
                        arg = r;
                    }
                }
                // Runner-up: any other root with its best subtrees, or the
                // chosen root with one side replaced by its runner-up.
                let mut s = u64::MAX;
                for r in i + 1..=j {
                    let l = r * n + j;
                    let left = (i * n) + r - 1;
                    if r != arg {
                        s = s.min(self.best[left] + self.best[l]);
                    } else {
                        s = s.min(self.second[left].saturating_add(self.best[l]));
                        s = s.min(self.best[left].saturating_add(self.second[l]));
                    }
                }
                self.best[i * n + j] = b + w;
                self.second[i * n + j] = s.saturating_add(w);
                self.root[i * n + j] = arg as u16;
            }
        }
        (self.best[n - 1], self.second[n - 1])
    }

    pub(crate) fn same_as(&self, tree: &ComparisonTree) -> bool {
        let mut pre = Vec::with_capacity(self.n - 1);
        self.preorder_into(&mut pre);
        pre == tree.preorder
    }

    pub(crate) fn preorder_into(&self, out: &mut Vec<usize>) {
        out.clear();
        let mut stack = vec![(0usize, self.n - 1)];
        while let Some((i, j)) = stack.pop() {
            if i == j {
                continue;
            }
            let r = self.root[i * self.n + j] as usize;
            out.push(r);
            stack.push((r, j));
            stack.push((i, r - 1));
        }
    }
}
