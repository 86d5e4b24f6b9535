//! Experiment runner for the instrumented k-pivot quicksort: seeded inputs,
//! trial execution, CSV output and the acceptance checks.

pub mod exec;
pub mod experiments;
pub mod reference;
pub mod report;
pub mod rng;
pub mod stats;
pub mod validate;
