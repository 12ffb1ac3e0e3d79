//! Solver toolkit for the clustered traveling salesman problem with a
//! d-relaxed priority rule (CTSP-d).
//!
//! Customers carry an urgency class (priority `1` is the most urgent). With
//! relaxation `d`, whenever `p` is the smallest priority among the customers
//! still to be served, the vehicle may next visit any customer whose priority
//! is at most `p + d`. `d = 0` forces strict class order; `d = g - 1` is a
//! plain TSP.
//!
//! The crate provides:
//!
//! * [`instance`]: TSPLIB loading, priority grouping and the extended file format.
//! * [`feasibility`]: the rule check and constant-time move predicates.
//! * [`construction`], [`local_search`], [`metaheuristic`]: the GILS-RVND solver.
//! * [`exact`]: brute force, a priority-aware Held-Karp and MIP model emission.
//! * [`bench`]: suite generation, benchmark runs and report tables.

pub mod bench;
pub mod construction;
pub mod error;
pub mod exact;
pub mod feasibility;
pub mod instance;
pub mod local_search;
pub mod metaheuristic;
pub mod solution;

pub use error::{Error, Result};
pub use feasibility::{is_feasible, Route, SegmentPriorityIndex};
pub use instance::{Grouping, Instance, InstanceLabel};
pub use metaheuristic::{solve, SearchParams};
