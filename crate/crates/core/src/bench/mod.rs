//! Benchmark suites and run reports.

mod report;
mod suite;

pub use report::{run_benchmark, run_instance, tsp_optimum, BenchConfig, RunRecord, RunReport};
pub use suite::{generate_suite, grouping_seed, write_suite, SuiteConfig};
