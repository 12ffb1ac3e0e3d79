//! Greedy randomized construction of feasible routes.

use rand::Rng;

use crate::feasibility::Route;
use crate::instance::{Instance, DEPOT};

/// Default size of the restricted candidate list.
pub const DEFAULT_RCL_SIZE: usize = 5;

/// Customers not yet placed, with per-class counters to track the most
/// urgent waiting class.
#[derive(Debug, Clone)]
pub struct CandidateList {
    unvisited: Vec<usize>,
    remaining: Vec<usize>,
    /// Most recently added node.
    pub reference: usize,
}

impl CandidateList {
    pub fn new(inst: &Instance) -> Self {
        let mut remaining = vec![0; inst.groups() as usize + 1];
        for v in inst.customers() {
            remaining[inst.priority(v) as usize] += 1;
        }
        CandidateList {
            unvisited: inst.customers().collect(),
            remaining,
            reference: DEPOT,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.unvisited.is_empty()
    }

    pub fn unvisited(&self) -> &[usize] {
        &self.unvisited
    }

    /// Smallest priority among unvisited customers.
    pub fn most_urgent(&self) -> Option<u32> {
        self.remaining
            .iter()
            .skip(1)
            .position(|&c| c > 0)
            .map(|p| p as u32 + 1)
    }

    /// Up to `k` nearest unvisited customers (to the reference node) that the
    /// rule allows next. Distance ties break on node id.
    pub fn restricted(&mut self, inst: &Instance, k: usize) -> Vec<usize> {
        let r = self.reference;
        self.unvisited.sort_by_key(|&v| (inst.cost(r, v), v));
        let limit = self.most_urgent().unwrap_or(0) + inst.relax();
        self.unvisited
            .iter()
            .copied()
            .filter(|&v| inst.priority(v) <= limit)
            .take(k)
            .collect()
    }

    pub fn take(&mut self, inst: &Instance, v: usize) {
        let pos = self
            .unvisited
            .iter()
            .position(|&u| u == v)
            .expect("node is a candidate");
        self.unvisited.remove(pos);
        self.remaining[inst.priority(v) as usize] -= 1;
        self.reference = v;
    }
}

/// Builds a feasible route starting at the depot. At every step the next
/// customer is drawn uniformly from the `k` nearest ones the rule allows.
pub fn initialize<R: Rng + ?Sized>(inst: &Instance, k: usize, rng: &mut R) -> Route {
    let k = k.max(1);
    let mut order = Vec::with_capacity(inst.n());
    order.push(DEPOT);
    let mut cl = CandidateList::new(inst);
    while !cl.is_empty() {
        let rcl = cl.restricted(inst, k);
        // the most urgent waiting customer always qualifies
        debug_assert!(!rcl.is_empty());
        let v = rcl[rng.gen_range(0..rcl.len())];
        cl.take(inst, v);
        order.push(v);
    }
    Route::from_order(order, inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::is_feasible;
    use crate::instance::{assign_groups, Grouping};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> Instance {
        let pts = (0..n)
            .map(|k| ((k * 7 % 13) as f64 * 10.0, (k * 5 % 11) as f64 * 10.0))
            .collect();
        Instance::from_coords("grid", pts).unwrap()
    }

    #[test]
    fn k1_ignores_rng() {
        let inst = assign_groups(&grid(20), 3, Grouping::Random, 3)
            .unwrap()
            .with_relax(1);
        let a = initialize(&inst, 1, &mut ChaCha8Rng::seed_from_u64(1));
        let b = initialize(&inst, 1, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
        assert!(is_feasible(&a, &inst));
    }

    #[test]
    fn seeded_constructions_repeat() {
        let inst = assign_groups(&grid(25), 5, Grouping::Clustered, 3).unwrap();
        let a = initialize(&inst, 5, &mut ChaCha8Rng::seed_from_u64(7));
        let b = initialize(&inst, 5, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        assert!(is_feasible(&a, &inst));
    }

    #[test]
    fn most_urgent_tracks_removals() {
        let inst = grid(4).with_priorities(vec![0, 2, 1, 2], 2).unwrap();
        let mut cl = CandidateList::new(&inst);
        assert_eq!(cl.most_urgent(), Some(1));
        cl.take(&inst, 2);
        assert_eq!(cl.most_urgent(), Some(2));
        cl.take(&inst, 1);
        cl.take(&inst, 3);
        assert_eq!(cl.most_urgent(), None);
        assert!(cl.is_empty());
    }
}
