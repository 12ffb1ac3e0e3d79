//! GILS-RVND: multistart construction, iterated local search and feasible
//! perturbation.

use std::ops::RangeInclusive;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construction::{initialize, DEFAULT_RCL_SIZE};
use crate::error::{Error, Result};
use crate::feasibility::{Route, SegmentPriorityIndex};
use crate::instance::Instance;
use crate::local_search::{is_allowed, rvnd, Move, MoveKind};

/// Named parameter presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `(I_max, I_ILS) = (5, 500)`.
    Fast,
    /// `(I_max, I_ILS) = (5, 1000)`.
    Large,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Preset::Fast),
            "large" => Ok(Preset::Large),
            other => Err(Error::InvalidArgument(format!("unknown preset '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    /// Number of restarts.
    pub i_max: usize,
    /// Consecutive non-improving iterations before a restart ends.
    pub i_ils: usize,
    /// Restricted candidate list size for construction.
    pub k: usize,
    /// Probability that a perturbation move is a swap rather than a relocation.
    pub p_swap: f64,
    /// Number of perturbation moves; derived from the instance size when `None`.
    pub ip_range: Option<RangeInclusive<usize>>,
    /// Draws per perturbation move before it is skipped.
    pub max_retries: usize,
    pub seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams::preset(Preset::Fast)
    }
}

impl SearchParams {
    pub fn preset(preset: Preset) -> Self {
        let i_ils = match preset {
            Preset::Fast => 500,
            Preset::Large => 1000,
        };
        SearchParams {
            i_max: 5,
            i_ils,
            k: DEFAULT_RCL_SIZE,
            p_swap: 0.75,
            ip_range: None,
            max_retries: 50,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.i_max == 0 || self.i_ils == 0 {
            return Err(Error::InvalidArgument(
                "i_max and i_ils must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.p_swap) {
            return Err(Error::InvalidArgument(format!(
                "p_swap {} outside [0, 1]",
                self.p_swap
            )));
        }
        if let Some(r) = &self.ip_range {
            if r.is_empty() {
                return Err(Error::InvalidArgument("empty perturbation range".into()));
            }
        }
        Ok(())
    }

    /// Perturbation strength for an instance of `n` nodes.
    pub fn perturbation_range(&self, n: usize) -> RangeInclusive<usize> {
        match &self.ip_range {
            Some(r) => r.clone(),
            None if n < 60 => 4..=6,
            None if n <= 100 => 6..=8,
            None => 8..=10,
        }
    }
}

/// Applies a random number of random feasible swap/relocate moves.
///
/// Each move is a `Swap11` with probability `p_swap`, otherwise a
/// `Relocate1`; positions are drawn uniformly and redrawn until the rule
/// allows the move, at most `max_retries` times.
pub fn perturb<R: Rng + ?Sized>(
    route: &Route,
    inst: &Instance,
    rng: &mut R,
    params: &SearchParams,
) -> Route {
    let mut out = route.clone();
    let n = inst.n();
    let m = n - 1;
    if m < 2 {
        return out;
    }
    let d = inst.relax();
    let moves = rng.gen_range(params.perturbation_range(n));
    let mut idx = SegmentPriorityIndex::build(&out, inst);
    for _ in 0..moves {
        let kind = if rng.gen_bool(params.p_swap) {
            MoveKind::Swap11
        } else {
            MoveKind::Relocate1
        };
        for _ in 0..params.max_retries {
            let (i, j) = match kind {
                MoveKind::Swap11 => {
                    let a = rng.gen_range(1..=m);
                    let mut b = rng.gen_range(1..m);
                    if b >= a {
                        b += 1;
                    }
                    (a.min(b), a.max(b))
                }
                _ => {
                    let i = rng.gen_range(1..=m);
                    let mut j = rng.gen_range(1..=n - 2);
                    if j >= i {
                        j += 2;
                    }
                    (i, j)
                }
            };
            if is_allowed(&idx, kind, i, j, d) {
                Move::evaluate(&out, inst, kind, i, j).apply(&mut out);
                idx = SegmentPriorityIndex::build(&out, inst);
                break;
            }
        }
    }
    debug_assert!(crate::feasibility::is_feasible(&out, inst));
    out
}

/// Outcome of one restart.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartSummary {
    pub initial_cost: i64,
    pub best_cost: i64,
    pub iterations: usize,
}

/// Result of [`solve`].
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub best: Route,
    pub seconds: f64,
    pub restarts: Vec<RestartSummary>,
    /// `(seconds, cost)` every time the global best improved.
    pub trace: Vec<(f64, i64)>,
}

/// Runs GILS-RVND.
///
/// Restart `r` uses its own generator seeded with `seed + r`. Within a
/// restart the incumbent is always the one perturbed; the restart ends after
/// `i_ils` consecutive iterations without improving it.
pub fn solve(inst: &Instance, params: &SearchParams) -> Result<SolveResult> {
    params.validate()?;
    let start = Instant::now();
    let mut best: Option<Route> = None;
    let mut restarts = Vec::with_capacity(params.i_max);
    let mut trace = Vec::new();

    for r in 0..params.i_max {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(r as u64));
        let mut current = initialize(inst, params.k, &mut rng);
        let initial_cost = current.cost();
        let mut incumbent = current.clone();
        let mut stall = 0;
        let mut iterations = 0;
        while stall < params.i_ils {
            current = rvnd(current, inst, &mut rng);
            if current.cost() < incumbent.cost() {
                incumbent = current;
                stall = 0;
            }
            current = perturb(&incumbent, inst, &mut rng, params);
            stall += 1;
            iterations += 1;
        }
        restarts.push(RestartSummary {
            initial_cost,
            best_cost: incumbent.cost(),
            iterations,
        });
        if best.as_ref().is_none_or(|b| incumbent.cost() < b.cost()) {
            trace.push((start.elapsed().as_secs_f64(), incumbent.cost()));
            best = Some(incumbent);
        }
    }

    Ok(SolveResult {
        best: best.expect("at least one restart"),
        seconds: start.elapsed().as_secs_f64(),
        restarts,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perturbation_ranges_follow_size() {
        let p = SearchParams::default();
        assert_eq!(p.perturbation_range(42), 4..=6);
        assert_eq!(p.perturbation_range(60), 6..=8);
        assert_eq!(p.perturbation_range(101), 8..=10);
        assert_eq!(p.perturbation_range(100), 6..=8);
        let custom = SearchParams {
            ip_range: Some(1..=2),
            ..SearchParams::default()
        };
        assert_eq!(custom.perturbation_range(500), 1..=2);
    }

    #[test]
    fn validation() {
        let bad = SearchParams {
            p_swap: 1.5,
            ..SearchParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchParams {
            i_ils: 0,
            ..SearchParams::default()
        };
        assert!(bad.validate().is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let bad = SearchParams {
            ip_range: Some(3..=2),
            ..SearchParams::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!("large".parse::<Preset>().unwrap(), Preset::Large);
        assert!("huge".parse::<Preset>().is_err());
    }
}
