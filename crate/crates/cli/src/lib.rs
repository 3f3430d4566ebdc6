//! Benchmark harness and dataset plumbing behind the `sprintz` command.

pub mod datagen;
pub mod dataset;
pub mod external;
pub mod ratio;
pub mod report;
pub mod throughput;
pub mod variant;

pub use variant::Variant;
