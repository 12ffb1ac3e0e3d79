//! Route representation, the d-relaxed rule and constant-time move checks.
//!
//! A route `r` lists every node once with the depot at position 0. Positions
//! `1..n` hold customers. The rule holds iff no customer is visited while a
//! customer more than `d` classes more urgent is still waiting, i.e. for all
//! positions `s < t`: `p(r[s]) <= p(r[t]) + d`. Every predicate below relies
//! on that pairwise form and assumes the route it inspects is feasible.

use crate::error::{Error, Result};
use crate::instance::{Instance, DEPOT};

/// A closed tour starting at the depot, with its cost cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Route {
    order: Vec<usize>,
    cost: i64,
}

impl Route {
    /// Validates `order` as a permutation of all nodes starting at the depot.
    pub fn new(order: Vec<usize>, inst: &Instance) -> Result<Self> {
        let n = inst.n();
        if order.len() != n {
            return Err(Error::InvalidRoute(format!(
                "expected {n} nodes, got {}",
                order.len()
            )));
        }
        if order[0] != DEPOT {
            return Err(Error::InvalidRoute("route must start at the depot".into()));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidRoute(format!(
                    "node {v} is out of range or repeated"
                )));
            }
        }
        let cost = inst.tour_cost(&order);
        Ok(Route { order, cost })
    }

    /// Trusted constructor for sequences produced by the solvers.
    pub(crate) fn from_order(order: Vec<usize>, inst: &Instance) -> Self {
        debug_assert!(Route::new(order.clone(), inst).is_ok());
        let cost = inst.tour_cost(&order);
        Route { order, cost }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn cost(&self) -> i64 {
        self.cost
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub fn node(&self, pos: usize) -> usize {
        self.order[pos]
    }

    /// Mutable access for move application; the caller keeps `cost` in sync.
    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<usize>, &mut i64) {
        (&mut self.order, &mut self.cost)
    }

    /// Priorities in visiting order, customers only.
    pub fn priority_sequence(&self, inst: &Instance) -> Vec<u32> {
        self.order[1..].iter().map(|&v| inst.priority(v)).collect()
    }
}

/// Checks the d-relaxed rule on a route with one backward suffix-minimum scan.
pub fn is_feasible(route: &Route, inst: &Instance) -> bool {
    sequence_is_feasible(
        route.order()[1..].iter().map(|&v| inst.priority(v)),
        inst.relax(),
    )
}

/// Rule check on a customer priority sequence in visiting order.
pub fn sequence_is_feasible<I>(seq: I, d: u32) -> bool
where
    I: IntoIterator<Item = u32>,
    I::IntoIter: DoubleEndedIterator,
{
    let mut suffix_min = u32::MAX;
    for p in seq.into_iter().rev() {
        suffix_min = suffix_min.min(p);
        if p > suffix_min.saturating_add(d) {
            return false;
        }
    }
    true
}

/// Rule check by simulating the drive: track how many customers of each class
/// remain and reject a visit to a class more than `d` levels behind the most
/// urgent waiting one.
pub fn sequence_is_feasible_by_simulation(seq: &[u32], d: u32) -> bool {
    let Some(&max_p) = seq.iter().max() else {
        return true;
    };
    let mut remaining = vec![0usize; max_p as usize + 1];
    for &p in seq {
        remaining[p as usize] += 1;
    }
    let mut most_urgent = 0usize;
    for &p in seq {
        while remaining[most_urgent] == 0 {
            most_urgent += 1;
        }
        if p as usize > most_urgent + d as usize {
            return false;
        }
        remaining[p as usize] -= 1;
    }
    true
}

/// Range minimum/maximum of customer priorities over route positions.
///
/// Built as a sparse table in `O(n log n)`; every query is two lookups.
/// Position 0 (the depot) never belongs to a segment. Empty segments
/// (`i > j`) answer `+inf` for the minimum and `-inf` for the maximum, so
/// conditions over them hold trivially.
#[derive(Debug, Clone)]
pub struct SegmentPriorityIndex {
    prio: Vec<i64>,
    min_levels: Vec<Vec<i64>>,
    max_levels: Vec<Vec<i64>>,
}

pub const EMPTY_MIN: i64 = i64::MAX;
pub const EMPTY_MAX: i64 = i64::MIN;

impl SegmentPriorityIndex {
    pub fn build(route: &Route, inst: &Instance) -> Self {
        let prio: Vec<i64> = route
            .order()
            .iter()
            .map(|&v| inst.priority(v) as i64)
            .collect();
        Self::from_priorities(prio)
    }

    /// `prio[pos]` is the priority at route position `pos`; entry 0 is ignored.
    pub fn from_priorities(prio: Vec<i64>) -> Self {
        let n = prio.len();
        let mut min_levels = vec![prio.clone()];
        let mut max_levels = vec![prio.clone()];
        let mut width = 1;
        while 2 * width <= n {
            let (pmin, pmax) = (min_levels.last().unwrap(), max_levels.last().unwrap());
            let len = n + 1 - 2 * width;
            let next_min = (0..len).map(|s| pmin[s].min(pmin[s + width])).collect();
            let next_max = (0..len).map(|s| pmax[s].max(pmax[s + width])).collect();
            min_levels.push(next_min);
            max_levels.push(next_max);
            width *= 2;
        }
        SegmentPriorityIndex {
            prio,
            min_levels,
            max_levels,
        }
    }

    /// Number of route positions covered, depot included.
    pub fn len(&self) -> usize {
        self.prio.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prio.is_empty()
    }

    /// Priority at route position `pos`.
    #[inline]
    pub fn at(&self, pos: usize) -> i64 {
        self.prio[pos]
    }

    #[inline]
    fn level(i: usize, j: usize) -> usize {
        (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize
    }

    /// Minimum priority over positions `i..=j`; clamps `i` to 1.
    #[inline]
    pub fn pmin(&self, i: usize, j: usize) -> i64 {
        let i = i.max(1);
        let j = j.min(self.prio.len() - 1);
        if i > j {
            return EMPTY_MIN;
        }
        let k = Self::level(i, j);
        let t = &self.min_levels[k];
        t[i].min(t[j + 1 - (1 << k)])
    }

    /// Maximum priority over positions `i..=j`; clamps `i` to 1.
    #[inline]
    pub fn pmax(&self, i: usize, j: usize) -> i64 {
        let i = i.max(1);
        let j = j.min(self.prio.len() - 1);
        if i > j {
            return EMPTY_MAX;
        }
        let k = Self::level(i, j);
        let t = &self.max_levels[k];
        t[i].max(t[j + 1 - (1 << k)])
    }

    /// Exchange customers at positions `i < j`.
    #[inline]
    pub fn can_swap11(&self, i: usize, j: usize, d: u32) -> bool {
        let d = d as i64;
        self.pmin(i, j - 1) >= self.at(j) - d && self.pmax(i + 1, j) <= self.at(i) + d
    }

    /// Exchange the pair at `(i, i+1)` with the single customer at `j`.
    /// `j > i + 1` and `j < i` are both allowed.
    #[inline]
    pub fn can_swap21(&self, i: usize, j: usize, d: u32) -> bool {
        let d = d as i64;
        let (a, b) = (self.at(i), self.at(i + 1));
        if j > i + 1 {
            self.pmin(i, j - 1) >= self.at(j) - d && self.pmax(i + 2, j) <= a.min(b) + d
        } else {
            debug_assert!(j < i);
            self.pmin(j, i - 1) >= a.max(b) - d && self.pmax(j + 1, i + 1) <= self.at(j) + d
        }
    }

    /// Exchange the pairs at `(i, i+1)` and `(j, j+1)`, `i + 1 < j`.
    #[inline]
    pub fn can_swap22(&self, i: usize, j: usize, d: u32) -> bool {
        let d = d as i64;
        let (a, b) = (self.at(i), self.at(i + 1));
        let (c, e) = (self.at(j), self.at(j + 1));
        self.pmin(i, j - 1) >= c.max(e) - d && self.pmax(i + 2, j + 1) <= a.min(b) + d
    }

    /// Move the customer at `i` to just before position `j` (`j == n` means
    /// the end of the route).
    #[inline]
    pub fn can_relocate1(&self, i: usize, j: usize, d: u32) -> bool {
        let d = d as i64;
        let p = self.at(i);
        if j < i {
            self.pmin(j, i - 1) >= p - d
        } else {
            self.pmax(i + 1, j - 1) <= p + d
        }
    }

    /// Move the pair at `(i, i+1)` to just before position `j`.
    #[inline]
    pub fn can_relocate2(&self, i: usize, j: usize, d: u32) -> bool {
        let d = d as i64;
        let (a, b) = (self.at(i), self.at(i + 1));
        if j < i {
            self.pmin(j, i - 1) >= a.max(b) - d
        } else {
            self.pmax(i + 2, j - 1) <= a.min(b) + d
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(ps: &[i64]) -> SegmentPriorityIndex {
        let mut v = vec![0];
        v.extend_from_slice(ps);
        SegmentPriorityIndex::from_priorities(v)
    }

    #[test]
    fn counterexample_sequence_is_rejected() {
        let seq = [1, 2, 1, 3, 2, 4, 7, 3, 5, 6];
        assert!(!sequence_is_feasible(seq, 2));
        assert!(!sequence_is_feasible_by_simulation(&seq, 2));
        // 7 is four levels behind the waiting 3
        assert!(sequence_is_feasible(seq, 4));
        assert!(sequence_is_feasible_by_simulation(&seq, 4));
    }

    #[test]
    fn strict_order_when_d_is_zero() {
        assert!(!sequence_is_feasible([2, 1], 0));
        assert!(sequence_is_feasible([1, 2], 0));
        assert!(sequence_is_feasible([1, 1, 2, 2, 3], 0));
        assert!(!sequence_is_feasible_by_simulation(&[2, 1], 0));
    }

    #[test]
    fn vacuous_when_d_covers_all_classes() {
        assert!(sequence_is_feasible([5, 4, 3, 2, 1], 4));
        assert!(sequence_is_feasible_by_simulation(&[5, 4, 3, 2, 1], 4));
        assert!(sequence_is_feasible(
            std::iter::empty::<u32>().collect::<Vec<_>>(),
            0
        ));
    }

    #[test]
    fn index_queries() {
        let idx = index(&[1, 3, 2]);
        assert_eq!(idx.pmin(1, 3), 1);
        assert_eq!(idx.pmax(2, 3), 3);
        for i in 1..=3 {
            assert_eq!(idx.pmin(i, i), idx.pmax(i, i));
            assert_eq!(idx.pmin(i, i), idx.at(i));
        }
        assert_eq!(idx.pmin(3, 2), EMPTY_MIN);
        assert_eq!(idx.pmax(3, 2), EMPTY_MAX);
        // depot position is never part of a segment
        assert_eq!(idx.pmin(0, 3), 1);
        assert_eq!(idx.pmax(0, 1), 1);
    }

    #[test]
    fn swap11_strict_order() {
        let idx = index(&[1, 2, 3]);
        assert!(!idx.can_swap11(1, 3, 0));
        assert!(idx.can_swap11(1, 3, 2));
        let idx = index(&[1, 1, 2]);
        assert!(idx.can_swap11(1, 2, 0));
        assert!(!idx.can_swap11(2, 3, 0));
    }

    #[test]
    fn relocate_boundaries() {
        let idx = index(&[1, 2, 2, 3]);
        // move the 1 to the end: passes 2,2,3 which are > 1 + 0
        assert!(!idx.can_relocate1(1, 5, 0));
        assert!(idx.can_relocate1(1, 5, 2));
        // move the 3 to the front
        assert!(!idx.can_relocate1(4, 1, 1));
        assert!(idx.can_relocate1(4, 1, 2));
        // move a 2 across the other 2
        assert!(idx.can_relocate1(2, 4, 0));
        assert!(idx.can_relocate2(2, 1, 1));
        assert!(!idx.can_relocate2(2, 1, 0));
    }
}
