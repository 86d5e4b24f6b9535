//! The Exchange_k rearrangement with exact cost counters.
//!
//! Cursors `i` and `j` move towards each other; border cursors `b_1..b_{m-1}`
//! follow `i` and mark the group boundaries on the left, `b_m..b_{k-1}` follow
//! `j` on the right, with `m = ⌈(k+1)/2⌉`. Elements are moved by rotations
//! only.

use std::ops::{AddAssign, Range};

use thiserror::Error;

use crate::classify::Classifier;
use crate::Key;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RearrangeError {
    #[error("rotation index {index} out of bounds for length {len}")]
    OutOfBounds { index: usize, len: usize },
    #[error("leading pivots are not strictly ascending")]
    UnsortedPivots,
    #[error("array of length {len} cannot hold {k} pivots")]
    TooShort { len: usize, k: usize },
}

/// Exact operation counts.
///
/// Partition counters (`comparisons` through `per_cursor_scans`) cover
/// classification, Exchange_k and pivot placement. Insertion sorts of small
/// subarrays and sample sorting are counted separately.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostLedger {
    pub comparisons: u64,
    pub scanned_elements: u64,
    pub write_accesses: u64,
    pub assignments: u64,
    pub rotations: u64,
    /// Travel of cursors `i`, `j`, `b_1..b_{k-1}`, in that order.
    pub per_cursor_scans: Vec<u64>,
    /// Number of partitioning steps.
    pub partitions: u64,
    pub base_comparisons: u64,
    pub base_assignments: u64,
    pub sample_comparisons: u64,
}

impl CostLedger {
    pub fn new(k: usize) -> Self {
        CostLedger {
            per_cursor_scans: vec![0; k + 1],
            ..Default::default()
        }
    }

    /// Scanned cells that did not need a write: the contents of groups `A_{m-1}`
    /// found by `i` and `A_m` found by `j`.
    pub fn unmoved(&self) -> u64 {
        self.scanned_elements - self.write_accesses
    }

    /// Comparisons of classification plus small-case sorting.
    pub fn total_comparisons(&self) -> u64 {
        self.comparisons + self.base_comparisons + self.sample_comparisons
    }

    pub fn total_assignments(&self) -> u64 {
        self.assignments + self.base_assignments
    }

    /// `assignments == writes + rotations` and `scanned == Σ per_cursor_scans`.
    pub fn identities_hold(&self) -> bool {
        self.assignments == self.write_accesses + self.rotations
            && self.scanned_elements == self.per_cursor_scans.iter().sum::<u64>()
    }
}

impl AddAssign<&CostLedger> for CostLedger {
    fn add_assign(&mut self, o: &CostLedger) {
        self.comparisons += o.comparisons;
        self.scanned_elements += o.scanned_elements;
        self.write_accesses += o.write_accesses;
        self.assignments += o.assignments;
        self.rotations += o.rotations;
        if self.per_cursor_scans.len() < o.per_cursor_scans.len() {
            self.per_cursor_scans.resize(o.per_cursor_scans.len(), 0);
        }
        for (a, b) in self.per_cursor_scans.iter_mut().zip(&o.per_cursor_scans) {
            *a += b;
        }
        self.partitions += o.partitions;
        self.base_comparisons += o.base_comparisons;
        self.base_assignments += o.base_assignments;
        self.sample_comparisons += o.sample_comparisons;
    }
}

/// Positions after a complete partitioning step.
///
/// `boundaries[0]` and `boundaries[k+1]` are the ends of the array,
/// `boundaries[h]` for `1 <= h <= k` is the cell of pivot `p_h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionLayout {
    pub boundaries: Vec<usize>,
}

impl PartitionLayout {
    pub fn k(&self) -> usize {
        self.boundaries.len() - 2
    }

    /// Cells of group `A_h`.
    pub fn segment(&self, h: usize) -> Range<usize> {
        let start = if h == 0 {
            self.boundaries[0]
        } else {
            self.boundaries[h] + 1
        };
        start..self.boundaries[h + 1]
    }

    pub fn pivot_position(&self, h: usize) -> usize {
        self.boundaries[h]
    }

    pub fn group_sizes(&self) -> Vec<u64> {
        (0..=self.k())
            .map(|h| self.segment(h).len() as u64)
            .collect()
    }
}

/// `A[i_1] ← A[i_2] ← … ← A[i_ℓ] ← old A[i_1]`.
pub fn rotate(
    a: &mut [Key],
    indices: &[usize],
    ledger: &mut CostLedger,
) -> Result<(), RearrangeError> {
    if let Some(&index) = indices.iter().find(|&&i| i >= a.len()) {
        return Err(RearrangeError::OutOfBounds {
            index,
            len: a.len(),
        });
    }
    if !indices.is_empty() {
        rotate_unchecked(a, indices, ledger);
    }
    Ok(())
}

#[inline]
fn rotate_unchecked(a: &mut [Key], idx: &[usize], ledger: &mut CostLedger) {
    let l = idx.len();
    let tmp = a[idx[0]];
    for w in 0..l - 1 {
        a[idx[w]] = a[idx[w + 1]];
    }
    a[idx[l - 1]] = tmp;
    ledger.write_accesses += l as u64;
    ledger.assignments += l as u64 + 1;
    ledger.rotations += 1;
}

/// `⌈(k+1)/2⌉`.
#[inline]
pub fn split_group(k: usize) -> usize {
    (k + 2) / 2
}

/// Runs Exchange_k on a region holding only non-pivot elements.
///
/// Afterwards the region holds `A_0, …, A_k` left to right; the group sizes
/// are returned. Every cell is classified exactly once. Counters for cursor
/// travel, writes, assignments and rotations go to `ledger`.
pub fn exchange_region<C: Classifier + ?Sized>(
    a: &mut [Key],
    k: usize,
    cls: &mut C,
    ledger: &mut CostLedger,
) -> Vec<u64> {
    assert!(k >= 1);
    if ledger.per_cursor_scans.len() < k + 1 {
        ledger.per_cursor_scans.resize(k + 1, 0);
    }
    let len = a.len() as isize;
    let m = split_group(k);
    // b[h] for h in 1..k; b[0] unused.
    let mut b = vec![0isize; k];
    for (h, slot) in b.iter_mut().enumerate().skip(1) {
        *slot = if h < m { 0 } else { len - 1 };
    }
    let b_start = b.clone();
    let mut i: isize = 0;
    let mut j: isize = len - 1;
    let mut idx: Vec<usize> = Vec::with_capacity(k + 2);

    while i <= j {
        let mut p = usize::MAX;
        while i <= j {
            let g = cls.classify(a[i as usize]);
            if g >= m {
                p = g;
                break;
            }
            if g + 1 < m {
                idx.clear();
                idx.push(i as usize);
                for h in (g + 1..m).rev() {
                    idx.push(b[h] as usize);
                }
                rotate_unchecked(a, &idx, ledger);
                for slot in &mut b[g + 1..m] {
                    *slot += 1;
                }
            }
            i += 1;
        }
        let mut q = usize::MAX;
        while j >= i {
            // The only cell j can reach that was already classified is the
            // one where i stopped.
            let g = if j == i {
                p
            } else {
                cls.classify(a[j as usize])
            };
            if g < m {
                q = g;
                break;
            }
            if g > m {
                idx.clear();
                idx.push(j as usize);
                idx.extend(b[m..g].iter().map(|&x| x as usize));
                rotate_unchecked(a, &idx, ledger);
                for slot in &mut b[m..g] {
                    *slot -= 1;
                }
            }
            j -= 1;
        }
        if i < j {
            idx.clear();
            idx.push(i as usize);
            for h in (q + 1..m).rev() {
                idx.push(b[h] as usize);
            }
            idx.push(j as usize);
            idx.extend(b[m..p].iter().map(|&x| x as usize));
            rotate_unchecked(a, &idx, ledger);
            i += 1;
            for slot in &mut b[q + 1..m] {
                *slot += 1;
            }
            j -= 1;
            for slot in &mut b[m..p] {
                *slot -= 1;
            }
        }
    }

    let i_travel = i as u64;
    let j_travel = (len - 1 - j) as u64;
    ledger.per_cursor_scans[0] += i_travel;
    ledger.per_cursor_scans[1] += j_travel;
    let mut scanned = i_travel + j_travel;
    for h in 1..k {
        let t = (b[h] - b_start[h]).unsigned_abs() as u64;
        ledger.per_cursor_scans[h + 1] += t;
        scanned += t;
    }
    ledger.scanned_elements += scanned;

    let mut sizes = vec![0u64; k + 1];
    let left = |h: usize| -> isize {
        match h {
            0 => 0,
            h if h == m => i,
            h => b[h],
        }
    };
    for (h, s) in sizes.iter_mut().enumerate().take(m) {
        *s = (left(h + 1) - left(h)) as u64;
    }
    let right = |h: usize| -> isize {
        match h {
            h if h + 1 == m => j,
            h if h == k => len - 1,
            h => b[h],
        }
    };
    for (h, s) in sizes.iter_mut().enumerate().skip(m) {
        *s = (right(h) - right(h - 1)) as u64;
    }
    sizes
}

/// What a cell in front of the partitioned region holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixItem {
    /// Pivot `p_h`, `1 <= h <= k`.
    Pivot(usize),
    /// An element of group `A_g` that was not classified (unused sample).
    Group(usize),
}

/// Moves the prefix cells of `a` into place once `a[prefix.len()..]` holds
/// the groups with the given sizes.
///
/// Cells are handled right to left. Each one costs a single rotation through
/// the last cell of every non-empty group it has to pass, which shifts those
/// groups one cell to the left.
pub fn settle_prefix(
    a: &mut [Key],
    prefix: &[PrefixItem],
    sizes: &[u64],
    ledger: &mut CostLedger,
) -> PartitionLayout {
    let k = sizes.len() - 1;
    let kappa = prefix.len();
    let mut start = vec![0usize; k + 1];
    let mut len: Vec<usize> = sizes.iter().map(|&s| s as usize).collect();
    let mut pos = kappa;
    for h in 0..=k {
        start[h] = pos;
        pos += len[h];
    }
    debug_assert_eq!(pos, a.len());
    let mut pivot_at = vec![0usize; k + 1];
    let mut idx = Vec::with_capacity(k + 1);
    for c in (0..kappa).rev() {
        let item = prefix[c];
        let pass = match item {
            PrefixItem::Pivot(h) => h,
            PrefixItem::Group(g) => g,
        };
        idx.clear();
        idx.push(c);
        let mut hole = c;
        for s in 0..pass {
            debug_assert_eq!(start[s], hole + 1);
            if len[s] > 0 {
                let last = start[s] + len[s] - 1;
                idx.push(last);
                hole = last;
            }
            start[s] -= 1;
        }
        rotate_unchecked(a, &idx, ledger);
        match item {
            PrefixItem::Pivot(h) => pivot_at[h] = hole,
            PrefixItem::Group(g) => {
                start[g] = hole;
                len[g] += 1;
            }
        }
    }
    let mut boundaries = Vec::with_capacity(k + 2);
    boundaries.push(0);
    boundaries.extend_from_slice(&pivot_at[1..]);
    boundaries.push(a.len());
    PartitionLayout { boundaries }
}

/// Moves the `k` leading pivots between their groups.
pub fn place_pivots(a: &mut [Key], sizes: &[u64], ledger: &mut CostLedger) -> PartitionLayout {
    let k = sizes.len() - 1;
    let prefix: Vec<PrefixItem> = (1..=k).map(PrefixItem::Pivot).collect();
    settle_prefix(a, &prefix, sizes, ledger)
}

/// Full partitioning step for an array whose first `k` cells are the sorted
/// pivots.
pub fn exchange_partition<C: Classifier + ?Sized>(
    a: &mut [Key],
    k: usize,
    cls: &mut C,
    ledger: &mut CostLedger,
) -> Result<PartitionLayout, RearrangeError> {
    if a.len() < k || k == 0 {
        return Err(RearrangeError::TooShort { len: a.len(), k });
    }
    if a[..k].windows(2).any(|w| w[0] >= w[1]) {
        return Err(RearrangeError::UnsortedPivots);
    }
    let sizes = exchange_region(&mut a[k..], k, cls, ledger);
    ledger.partitions += 1;
    Ok(place_pivots(a, &sizes, ledger))
}

/// Cursor travel of Exchange_k for the given group sizes,
/// `(n-k) + Σ_{h<m} Σ_{i<h} a_i + Σ_{h>=m} Σ_{i>h} a_i`.
pub fn scanned_elements_of_layout(gv: &[u64], k: usize) -> u64 {
    assert_eq!(gv.len(), k + 1);
    let m = split_group(k);
    let total: u64 = gv.iter().sum();
    let mut borders = 0;
    for h in 1..k {
        borders += if h < m {
            gv[..h].iter().sum::<u64>()
        } else {
            gv[h + 1..].iter().sum::<u64>()
        };
    }
    total + borders
}

/// How many cursors pass an element of each group: `m - i` left, `1 + i - m`
/// right.
pub fn scan_multiplicity(k: usize) -> Vec<u32> {
    let m = split_group(k);
    (0..=k)
        .map(|i| {
            if i < m {
                (m - i) as u32
            } else {
                (1 + i - m) as u32
            }
        })
        .collect()
}
