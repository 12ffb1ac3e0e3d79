use crate::error::{Error, Result};
use crate::feasibility::{is_feasible, Route};
use crate::instance::{Instance, DEPOT};

/// Largest instance (depot included) accepted by [`brute_force`].
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Enumerates every customer permutation and keeps the cheapest feasible
/// one. Ties keep the lexicographically smallest order.
pub fn brute_force(inst: &Instance) -> Result<Route> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            solver: "brute force",
            detail: format!("{n} nodes, limit is {BRUTE_FORCE_MAX_N}"),
        });
    }
    let mut perm: Vec<usize> = inst.customers().collect();
    let mut best: Option<Route> = None;
    loop {
        let mut order = Vec::with_capacity(n);
        order.push(DEPOT);
        order.extend_from_slice(&perm);
        let route = Route::from_order(order, inst);
        if is_feasible(&route, inst) && best.as_ref().is_none_or(|b| route.cost() < b.cost()) {
            best = Some(route);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    // the order sorted by priority is always feasible
    Ok(best.expect("a feasible permutation exists"))
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
