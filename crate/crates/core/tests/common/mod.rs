#![allow(dead_code)]

use std::path::PathBuf;

use ctsp::instance::Matrix;
use ctsp::{Instance, Route};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random points in a 1000 x 1000 square.
pub fn random_points<R: Rng>(n: usize, rng: &mut R) -> Instance {
    let pts = (0..n)
        .map(|_| (rng.gen_range(0..1000) as f64, rng.gen_range(0..1000) as f64))
        .collect();
    Instance::from_coords("rand", pts).unwrap()
}

/// Random points with priorities drawn uniformly from `1..=g`.
pub fn random_instance<R: Rng>(n: usize, g: u32, d: u32, rng: &mut R) -> Instance {
    let base = random_points(n, rng);
    let mut prio = vec![0];
    prio.extend((1..n).map(|_| rng.gen_range(1..=g)));
    base.with_priorities(prio, g).unwrap().with_relax(d)
}

/// Pairwise definition: nothing visited later may be more than `d` classes
/// more urgent than something visited earlier.
pub fn pairwise_feasible(seq: &[u32], d: u32) -> bool {
    for s in 0..seq.len() {
        for t in s + 1..seq.len() {
            if seq[s] > seq[t] + d {
                return false;
            }
        }
    }
    true
}

/// Customer priorities of a route in visiting order.
pub fn customer_priorities(order: &[usize], inst: &Instance) -> Vec<u32> {
    order[1..].iter().map(|&v| inst.priority(v)).collect()
}

/// Random route obeying the rule: each step picks uniformly among the
/// customers the rule currently allows.
pub fn random_feasible_route<R: Rng>(inst: &Instance, rng: &mut R) -> Route {
    let mut left: Vec<usize> = inst.customers().collect();
    let mut order = vec![0];
    while !left.is_empty() {
        let urgent = left.iter().map(|&v| inst.priority(v)).min().unwrap();
        let allowed: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&v| inst.priority(v) <= urgent + inst.relax())
            .collect();
        let v = *allowed.choose(rng).unwrap();
        left.retain(|&u| u != v);
        order.push(v);
    }
    Route::new(order, inst).unwrap()
}

/// Random permutation of the customers after the depot.
pub fn random_route<R: Rng>(inst: &Instance, rng: &mut R) -> Route {
    let mut order: Vec<usize> = inst.customers().collect();
    order.shuffle(rng);
    order.insert(0, 0);
    Route::new(order, inst).unwrap()
}

/// Closed tour length computed from scratch.
pub fn tour_length(order: &[usize], cost: &Matrix) -> i64 {
    (0..order.len())
        .map(|k| cost.get(order[k], order[(k + 1) % order.len()]))
        .sum()
}

/// Textbook Held-Karp over all subsets, no priorities.
pub fn held_karp(cost: &Matrix) -> i64 {
    let n = cost.dim();
    if n <= 1 {
        return 0;
    }
    let m = n - 1;
    let full = (1usize << m) - 1;
    let inf = i64::MAX / 4;
    let mut dp = vec![inf; (1 << m) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = cost.get(0, j + 1);
    }
    for set in 1..=full {
        for last in 0..m {
            let cur = dp[set * m + last];
            if cur >= inf || set & (1 << last) == 0 {
                continue;
            }
            for next in 0..m {
                if set & (1 << next) != 0 {
                    continue;
                }
                let key = (set | 1 << next) * m + next;
                let v = cur + cost.get(last + 1, next + 1);
                if v < dp[key] {
                    dp[key] = v;
                }
            }
        }
    }
    (0..m)
        .map(|j| dp[full * m + j] + cost.get(j + 1, 0))
        .min()
        .unwrap()
}

/// Applies a move by rebuilding the order from its description, without the
/// block machinery under test.
pub fn apply_by_description(
    order: &[usize],
    kind: ctsp::local_search::MoveKind,
    i: usize,
    j: usize,
) -> Vec<usize> {
    use ctsp::local_search::MoveKind::*;
    let mut v = order.to_vec();
    match kind {
        Swap11 => v.swap(i, j),
        Swap21 => {
            // the pair at i and the node at j trade places
            let pair = [v[i], v[i + 1]];
            let single = v[j];
            let mut out = Vec::new();
            for (p, &x) in order.iter().enumerate() {
                if p == i {
                    out.push(single);
                } else if p == i + 1 {
                    continue;
                } else if p == j {
                    out.extend_from_slice(&pair);
                } else {
                    out.push(x);
                }
            }
            v = out;
        }
        Swap22 => {
            v.swap(i, j);
            v.swap(i + 1, j + 1);
        }
        Relocate1 | Relocate2 => {
            let len = if kind == Relocate1 { 1 } else { 2 };
            let block: Vec<usize> = order[i..i + len].to_vec();
            let mut out = Vec::new();
            for (p, &x) in order.iter().enumerate() {
                if p == j {
                    out.extend_from_slice(&block);
                }
                if p < i || p >= i + len {
                    out.push(x);
                }
            }
            if j == order.len() {
                out.extend_from_slice(&block);
            }
            v = out;
        }
    }
    v
}

/// Directory holding the bundled TSPLIB files.
pub fn tsplib_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/tsplib")
}

pub fn load_tsplib(name: &str) -> Option<Instance> {
    Instance::load(tsplib_dir().join(format!("{name}.tsp"))).ok()
}
