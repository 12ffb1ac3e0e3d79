use std::collections::hash_map::{DefaultHasher, Entry};
use std::collections::HashMap;
use std::hash::BuildHasherDefault;

use crate::error::{Error, Result};
use crate::feasibility::Route;
use crate::instance::{Instance, DEPOT};

/// Default cap on the number of stored `(visited set, last node)` states.
pub const DEFAULT_STATE_BUDGET: usize = 12_000_000;

const NO_PRED: u8 = u8::MAX;

// Fixed hasher keys keep iteration order, and therefore tie-breaking,
// identical across runs.
type Layer = HashMap<(u64, u8), (i64, u8), BuildHasherDefault<DefaultHasher>>;

#[derive(Debug, Clone)]
pub struct DpOutcome {
    pub cost: i64,
    /// Present when the optimal route was reconstructed.
    pub route: Option<Route>,
    /// Number of states expanded.
    pub states: usize,
}

/// Held-Karp restricted to the states the rule can reach, returning an
/// optimal route.
///
/// A state is the set of visited customers plus the last one; customer `j`
/// may extend a state only if its priority is at most the smallest unvisited
/// priority plus `d`. States are stored layer by layer and the run fails with
/// [`Error::TooLarge`] once more than `budget` of them exist. With a vacuous
/// rule this is the plain dynamic program, practical up to about 20 nodes;
/// tight rules keep far larger instances tractable.
pub fn dp_exact(inst: &Instance, budget: usize) -> Result<DpOutcome> {
    run(inst, budget, true)
}

/// As [`dp_exact`] but only the optimal cost is computed, keeping two layers
/// in memory instead of all of them.
pub fn dp_optimum(inst: &Instance, budget: usize) -> Result<DpOutcome> {
    run(inst, budget, false)
}

fn run(inst: &Instance, budget: usize, keep: bool) -> Result<DpOutcome> {
    let n = inst.n();
    let m = n - 1;
    if m > 64 {
        return Err(Error::TooLarge {
            solver: "dynamic program",
            detail: format!("{m} customers, limit is 64"),
        });
    }
    if m == 0 {
        let route = Route::from_order(vec![DEPOT], inst);
        return Ok(DpOutcome {
            cost: 0,
            route: keep.then_some(route),
            states: 0,
        });
    }
    let d = inst.relax();
    let g = inst.groups() as usize;
    let mut class_mask = vec![0u64; g + 1];
    for c in 0..m {
        class_mask[inst.priority(c + 1) as usize] |= 1 << c;
    }
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let limit = |visited: u64| -> u32 {
        (1..=g)
            .find(|&p| class_mask[p] & !visited != 0)
            .map_or(u32::MAX, |p| p as u32 + d)
    };
    let too_large = |states: usize| Error::TooLarge {
        solver: "dynamic program",
        detail: format!("more than {budget} states (reached {states})"),
    };

    let mut layer = Layer::default();
    let first = limit(0);
    for c in 0..m {
        if inst.priority(c + 1) <= first {
            layer.insert((1 << c, c as u8), (inst.cost(DEPOT, c + 1), NO_PRED));
        }
    }
    let mut states = layer.len();
    let mut layers = Vec::new();
    for _ in 1..m {
        let mut next = Layer::default();
        for (&(visited, last), &(cost, _)) in &layer {
            let lim = limit(visited);
            let mut free = full & !visited;
            while free != 0 {
                let c = free.trailing_zeros() as usize;
                free &= free - 1;
                if inst.priority(c + 1) > lim {
                    continue;
                }
                let value = cost + inst.cost(last as usize + 1, c + 1);
                match next.entry((visited | 1 << c, c as u8)) {
                    Entry::Occupied(mut e) => {
                        if value < e.get().0 {
                            *e.get_mut() = (value, last);
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert((value, last));
                        states += 1;
                        if states > budget {
                            return Err(too_large(states));
                        }
                    }
                }
            }
        }
        if keep {
            layers.push(layer);
        }
        layer = next;
    }

    let (best_last, best) = layer
        .iter()
        .map(|(&(_, last), &(cost, _))| (last, cost + inst.cost(last as usize + 1, DEPOT)))
        .min_by_key(|&(last, total)| (total, last))
        .expect("the final layer is never empty");
    let route = keep.then(|| {
        layers.push(layer);
        let mut order = vec![DEPOT; n];
        let (mut visited, mut last) = (full, best_last);
        for pos in (1..=m).rev() {
            order[pos] = last as usize + 1;
            let pred = layers[pos - 1][&(visited, last)].1;
            visited ^= 1 << last;
            last = pred;
        }
        Route::from_order(order, inst)
    });
    debug_assert!(route.as_ref().is_none_or(|r| r.cost() == best));
    Ok(DpOutcome {
        cost: best,
        route,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force;
    use crate::feasibility::is_feasible;
    use crate::instance::{assign_groups, Grouping};

    fn ring(n: usize) -> Instance {
        let pts = (0..n)
            .map(|k| {
                let a = k as f64 * 2.4;
                (100.0 * a.cos() + k as f64, 100.0 * a.sin())
            })
            .collect();
        Instance::from_coords("ring", pts).unwrap()
    }

    #[test]
    fn agrees_with_enumeration() {
        for seed in 0..6 {
            for d in 0..3 {
                let inst = assign_groups(&ring(9), 4, Grouping::Random, seed)
                    .unwrap()
                    .with_relax(d);
                let dp = dp_exact(&inst, DEFAULT_STATE_BUDGET).unwrap();
                let route = dp.route.unwrap();
                assert!(is_feasible(&route, &inst));
                assert_eq!(dp.cost, brute_force(&inst).unwrap().cost());
                assert_eq!(
                    dp_optimum(&inst, DEFAULT_STATE_BUDGET).unwrap().cost,
                    dp.cost
                );
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inst = ring(16);
        assert!(matches!(dp_exact(&inst, 1000), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn two_nodes() {
        let two = Instance::from_coords("two", vec![(0.0, 0.0), (3.0, 4.0)]).unwrap();
        assert_eq!(dp_exact(&two, 10).unwrap().cost, 10);
    }
}
