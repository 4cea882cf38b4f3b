//! Seeded experiment generators, the v1-vs-v2 comparison harness, the
//! death-diameter asymptotics lab and CSV I/O used by the command line tool.
//!
//! Everything here works in `f64`.

mod asymptotics;
mod fat_tail;
mod generators;
mod harness;
pub mod io;
mod seeding;

pub use asymptotics::{
    asymptotics_sweep, counterexample_omega, counterexample_trial, counterexample_trial_for,
    sample_family, AsymptoticsRecord, CounterexampleOutcome, Family,
};
pub use fat_tail::{sample_fat_tail, FatTailSampler};
pub use generators::{
    generate_experiment, generate_experiment_with, iteration_count, iteration_parameter,
    AnnulusConfig, ExperimentMeta, LabeledDataset,
};
pub use harness::{run_comparison, ComparisonRow, ComparisonTable, SummaryRow};
pub use seeding::{derive_seed, rng_from_seed};
