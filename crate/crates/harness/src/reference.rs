//! Published reference values the acceptance checks compare against.

use mpqs_core::theory::CostKind;

/// One cell of the best-sampling table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingCell {
    pub k: usize,
    pub budget: usize,
    pub kind: CostKind,
    pub t: &'static [usize],
    /// Preorder; absent for scanned elements, which do not depend on the tree.
    pub tree: Option<&'static str>,
    pub leading: f64,
}

const fn cell(
    k: usize,
    budget: usize,
    kind: CostKind,
    t: &'static [usize],
    tree: Option<&'static str>,
    leading: f64,
) -> SamplingCell {
    SamplingCell {
        k,
        budget,
        kind,
        t,
        tree,
        leading,
    }
}

use CostKind::{Comparisons as Cmp, Scanned as Se, Sum};

const T3: Option<&str> = Some("[2,1,3]");
const T5A: Option<&str> = Some("[3,2,1,4,5]");
const T5B: Option<&str> = Some("[4,3,1,2,5]");
const T7A: Option<&str> = Some("[4,2,1,3,6,5,7]");
const T7B: Option<&str> = Some("[4,3,2,1,5,6,7]");
const T9A: Option<&str> = Some("[5,3,2,1,4,7,6,8,9]");
const T9B: Option<&str> = Some("[5,4,3,2,1,6,7,8,9]");

pub const SAMPLING_TABLE: &[SamplingCell] = &[
    cell(3, 0, Cmp, &[0, 0, 0, 0], T3, 1.846),
    cell(3, 0, Se, &[0, 0, 0, 0], None, 1.385),
    cell(3, 0, Sum, &[0, 0, 0, 0], T3, 3.231),
    cell(3, 4, Cmp, &[1, 1, 1, 1], T3, 1.642),
    cell(3, 4, Se, &[0, 2, 2, 0], None, 1.144),
    cell(3, 4, Sum, &[1, 1, 1, 1], T3, 2.874),
    cell(3, 8, Cmp, &[2, 2, 2, 2], T3, 1.575),
    cell(3, 8, Se, &[1, 3, 3, 1], None, 1.098),
    cell(3, 8, Sum, &[1, 3, 3, 1], T3, 2.745),
    cell(3, 16, Cmp, &[4, 4, 4, 4], T3, 1.522),
    cell(3, 16, Se, &[2, 6, 6, 2], None, 1.055),
    cell(3, 16, Sum, &[3, 5, 5, 3], T3, 2.627),
    cell(5, 0, Cmp, &[0; 6], T5A, 1.839),
    cell(5, 0, Se, &[0; 6], None, 1.379),
    cell(5, 0, Sum, &[0; 6], T5A, 3.218),
    cell(5, 6, Cmp, &[0, 0, 0, 2, 2, 2], T5B, 1.635),
    cell(5, 6, Se, &[0, 1, 2, 2, 1, 0], None, 1.097),
    cell(5, 6, Sum, &[0, 1, 2, 2, 1, 0], T5A, 2.741),
    cell(5, 12, Cmp, &[1, 1, 4, 4, 1, 1], T5A, 1.567),
    cell(5, 12, Se, &[0, 1, 5, 5, 1, 0], None, 1.019),
    cell(5, 12, Sum, &[1, 1, 4, 4, 1, 1], T5A, 2.635),
    cell(7, 0, Cmp, &[0; 8], T7A, 1.746),
    cell(7, 0, Se, &[0; 8], None, 1.455),
    cell(7, 0, Sum, &[0; 8], T7A, 3.201),
    cell(7, 8, Cmp, &[1; 8], T7A, 1.595),
    cell(7, 8, Se, &[0, 0, 1, 3, 3, 1, 0, 0], None, 1.094),
    cell(7, 8, Sum, &[0, 0, 1, 3, 3, 1, 0, 0], T7B, 2.698),
    cell(7, 16, Cmp, &[2; 8], T7A, 1.544),
    cell(7, 16, Se, &[0, 0, 2, 6, 6, 2, 0, 0], None, 1.017),
    cell(7, 16, Sum, &[0, 0, 2, 6, 6, 2, 0, 0], T7B, 2.594),
    cell(9, 0, Cmp, &[0; 10], T9A, 1.763),
    cell(9, 0, Se, &[0; 10], None, 1.555),
    cell(9, 0, Sum, &[0; 10], T9A, 3.318),
    cell(9, 10, Cmp, &[0, 0, 1, 2, 2, 2, 2, 1, 0, 0], T9A, 1.602),
    cell(9, 10, Se, &[0, 0, 0, 1, 4, 4, 1, 0, 0, 0], None, 1.131),
    cell(9, 10, Sum, &[0, 0, 0, 1, 4, 4, 1, 0, 0, 0], T9B, 2.748),
    cell(9, 20, Cmp, &[1, 1, 2, 3, 3, 3, 3, 2, 1, 1], T9A, 1.543),
    cell(9, 20, Se, &[0, 0, 0, 2, 8, 8, 2, 0, 0, 0], None, 1.040),
    cell(9, 20, Sum, &[0, 0, 1, 2, 7, 7, 2, 1, 0, 0], T9B, 2.601),
];

/// Sorting curves at `n = 2^20`: `(k, scanned/(n ln n), assignments/(n ln n))`.
pub const SORT_CURVES: [(usize, f64, f64); 6] = [
    (1, 2.0, 1.0),
    (2, 1.6, 1.6),
    (3, 1.385, 1.569),
    (5, 1.379, 1.658),
    (7, 1.455, 1.746),
    (9, 1.555, 1.843),
];

/// Best-`τ` values for scanned elements, `k = 3, 5, 7, 9`.
pub const OPT_TAU_SCANNED: [(usize, f64); 4] = [(3, 0.995), (5, 0.933), (7, 0.917), (9, 0.912)];

/// Reference leading coefficients of the optimal classification strategy
/// for `k = 2..=9`.
pub const TABLE1_REFERENCE: [(usize, f64); 8] = [
    (2, 1.800),
    (3, 1.705),
    (4, 1.650),
    (5, 1.610),
    (6, 1.590),
    (7, 1.577),
    (8, 1.564),
    (9, 1.555),
];
