//! Instrumented k-pivot quicksort.
//!
//! - [`trees`]: comparison trees, their costs and optimal choice.
//! - [`classify`]: per-element tree selection strategies.
//! - [`rearrange`]: the Exchange_k rearrangement with exact cost counters.
//! - [`sorter`]: the full recursive sort.
//! - [`theory`]: closed forms, the recurrence solver and optimizers.

pub mod classify;
pub mod par;
pub mod rearrange;
pub mod sorter;
pub mod theory;
pub mod trees;

/// Keys are distinct integers; experiments sort permutations of `1..=n`.
pub type Key = u32;

pub use classify::{ClassificationResult, Strategy, StrategyKind};
pub use rearrange::{CostLedger, PartitionLayout};
pub use sorter::{multipivot_sort, SamplingVector, SortConfig};
pub use trees::{ComparisonTree, GroupVector};
