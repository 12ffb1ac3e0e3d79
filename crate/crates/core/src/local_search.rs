//! The five neighborhoods and randomized variable neighborhood descent.
//!
//! Every move is expressed as an exchange of two route blocks `A` and `B`
//! (with `A` before `B` and an untouched middle `M`): `.. A M B ..` becomes
//! `.. B M A ..`. Relocations are the special case of adjacent blocks. Block
//! orientation is preserved, so the cost change only involves the arcs at the
//! block boundaries: four removed and four added, or three and three when the
//! blocks touch.

use std::fmt;

use rand::Rng;

use crate::feasibility::{Route, SegmentPriorityIndex};
use crate::instance::{Instance, Matrix, DEPOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// One customer moves elsewhere in the route.
    Relocate1,
    /// Two adjacent customers move together.
    Relocate2,
    /// Two customers trade places.
    Swap11,
    /// An adjacent pair trades places with one customer.
    Swap21,
    /// Two adjacent pairs trade places.
    Swap22,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] = [
        MoveKind::Relocate1,
        MoveKind::Relocate2,
        MoveKind::Swap11,
        MoveKind::Swap21,
        MoveKind::Swap22,
    ];
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MoveKind::Relocate1 => "relocate(1)",
            MoveKind::Relocate2 => "relocate(2)",
            MoveKind::Swap11 => "swap(1,1)",
            MoveKind::Swap21 => "swap(2,1)",
            MoveKind::Swap22 => "swap(2,2)",
        };
        f.write_str(s)
    }
}

/// A neighborhood move addressed by route positions.
///
/// * `Swap11(i, j)`: `i < j`.
/// * `Swap21(i, j)`: the pair starts at `i`; `j > i + 1` or `j < i`.
/// * `Swap22(i, j)`: pairs start at `i` and `j`, `i + 1 < j`.
/// * `Relocate1(i, j)`: customer at `i` goes right before position `j`
///   (`j` may equal the route length), `j ∉ {i, i+1}`.
/// * `Relocate2(i, j)`: pair at `i` goes right before `j`, `j ∉ {i, i+1, i+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    pub i: usize,
    pub j: usize,
    pub delta: i64,
}

/// Two blocks `[a, a + a_len)` and `[b, b + b_len)` with `a + a_len <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Blocks {
    a: usize,
    a_len: usize,
    b: usize,
    b_len: usize,
}

impl Blocks {
    #[inline(always)]
    fn of(kind: MoveKind, i: usize, j: usize) -> Blocks {
        let mk = |a, a_len, b, b_len| Blocks { a, a_len, b, b_len };
        match kind {
            MoveKind::Swap11 => mk(i, 1, j, 1),
            MoveKind::Swap21 if j > i => mk(i, 2, j, 1),
            MoveKind::Swap21 => mk(j, 1, i, 2),
            MoveKind::Swap22 => mk(i, 2, j, 2),
            MoveKind::Relocate1 if j < i => mk(j, i - j, i, 1),
            MoveKind::Relocate1 => mk(i, 1, i + 1, j - i - 1),
            MoveKind::Relocate2 if j < i => mk(j, i - j, i, 2),
            MoveKind::Relocate2 => mk(i, 2, i + 2, j - i - 2),
        }
    }

    /// Cost change on a closed tour, `closed[n]` being the depot again.
    #[inline(always)]
    fn delta(self, closed: &[usize], cost: &Matrix) -> i64 {
        let c = |p: usize, q: usize| cost.get(closed[p], closed[q]);
        let a_end = self.a + self.a_len - 1;
        let b_end = self.b + self.b_len - 1;
        let before = self.a - 1;
        let after = b_end + 1;
        if a_end + 1 == self.b {
            c(before, self.b) + c(b_end, self.a) + c(a_end, after)
                - c(before, self.a)
                - c(a_end, self.b)
                - c(b_end, after)
        } else {
            c(before, self.b) + c(b_end, a_end + 1) + c(self.b - 1, self.a) + c(a_end, after)
                - c(before, self.a)
                - c(a_end, a_end + 1)
                - c(self.b - 1, self.b)
                - c(b_end, after)
        }
    }

    fn apply(self, order: &mut [usize]) {
        if self.a_len == self.b_len {
            for k in 0..self.a_len {
                order.swap(self.a + k, self.b + k);
            }
            return;
        }
        let seg = &mut order[self.a..self.b + self.b_len];
        seg.reverse();
        let total = seg.len();
        seg[..self.b_len].reverse();
        seg[self.b_len..total - self.a_len].reverse();
        seg[total - self.a_len..].reverse();
    }
}

impl Move {
    /// Cost change of `kind(i, j)` on `route`, from the boundary arcs only.
    pub fn evaluate(route: &Route, inst: &Instance, kind: MoveKind, i: usize, j: usize) -> Move {
        let delta = Blocks::of(kind, i, j).delta(&closed(route), inst.cost_matrix());
        Move { kind, i, j, delta }
    }

    /// Checks the move against the d-relaxed rule using the index of `route`.
    pub fn is_allowed(&self, idx: &SegmentPriorityIndex, d: u32) -> bool {
        is_allowed(idx, self.kind, self.i, self.j, d)
    }

    /// Applies the move in place and updates the cached cost by `delta`.
    pub fn apply(&self, route: &mut Route) {
        let (order, cost) = route.parts_mut();
        Blocks::of(self.kind, self.i, self.j).apply(order);
        *cost += self.delta;
    }
}

/// Constant-time rule check for `kind(i, j)`.
#[inline]
pub fn is_allowed(idx: &SegmentPriorityIndex, kind: MoveKind, i: usize, j: usize, d: u32) -> bool {
    match kind {
        MoveKind::Swap11 => idx.can_swap11(i, j, d),
        MoveKind::Swap21 => idx.can_swap21(i, j, d),
        MoveKind::Swap22 => idx.can_swap22(i, j, d),
        MoveKind::Relocate1 => idx.can_relocate1(i, j, d),
        MoveKind::Relocate2 => idx.can_relocate2(i, j, d),
    }
}

fn closed(route: &Route) -> Vec<usize> {
    let mut v = Vec::with_capacity(route.len() + 1);
    v.extend_from_slice(route.order());
    v.push(DEPOT);
    v
}

/// Calls `f(i, j)` for every valid position pair of a neighborhood on a
/// route of `n` nodes, in scan order.
#[inline(always)]
pub fn for_each_position(kind: MoveKind, n: usize, mut f: impl FnMut(usize, usize)) {
    let last = n.saturating_sub(1);
    match kind {
        MoveKind::Swap11 => {
            for i in 1..=last {
                for j in (i + 1)..=last {
                    f(i, j);
                }
            }
        }
        MoveKind::Swap21 => {
            for i in 1..last {
                for j in 1..i {
                    f(i, j);
                }
                for j in (i + 2)..=last {
                    f(i, j);
                }
            }
        }
        MoveKind::Swap22 => {
            for i in 1..last {
                for j in (i + 2)..last {
                    f(i, j);
                }
            }
        }
        MoveKind::Relocate1 => {
            for i in 1..=last {
                for j in 1..i {
                    f(i, j);
                }
                for j in (i + 2)..=n {
                    f(i, j);
                }
            }
        }
        MoveKind::Relocate2 => {
            for i in 1..last {
                for j in 1..i {
                    f(i, j);
                }
                for j in (i + 3)..=n {
                    f(i, j);
                }
            }
        }
    }
}

/// All valid position pairs of a neighborhood, in scan order.
pub fn positions(kind: MoveKind, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for_each_position(kind, n, |i, j| out.push((i, j)));
    out
}

/// Best strictly improving feasible move of one neighborhood, if any.
/// Ties keep the first move in scan order.
pub fn best_move(
    route: &Route,
    idx: &SegmentPriorityIndex,
    inst: &Instance,
    kind: MoveKind,
) -> Option<Move> {
    // one monomorphic scan per neighborhood
    match kind {
        MoveKind::Relocate1 => scan(route, idx, inst, MoveKind::Relocate1),
        MoveKind::Relocate2 => scan(route, idx, inst, MoveKind::Relocate2),
        MoveKind::Swap11 => scan(route, idx, inst, MoveKind::Swap11),
        MoveKind::Swap21 => scan(route, idx, inst, MoveKind::Swap21),
        MoveKind::Swap22 => scan(route, idx, inst, MoveKind::Swap22),
    }
}

// Each arm evaluates the same deltas as `Blocks::delta`, in the order of
// `for_each_position`, with the terms that depend only on `i` hoisted.
#[inline(always)]
fn scan(
    route: &Route,
    idx: &SegmentPriorityIndex,
    inst: &Instance,
    kind: MoveKind,
) -> Option<Move> {
    let d = inst.relax();
    let cl = closed(route);
    let n = route.len();
    let last = n.saturating_sub(1);
    let m = inst.cost_matrix();
    let c = |u: usize, v: usize| m.get(u, v);
    let mut best: Option<Move> = None;
    let mut best_delta = 0;
    let mut consider = |delta: i64, i: usize, j: usize| {
        if delta < best_delta && is_allowed(idx, kind, i, j, d) {
            best_delta = delta;
            best = Some(Move { kind, i, j, delta });
        }
    };
    match kind {
        MoveKind::Swap11 => {
            for i in 1..=last {
                let (p, x, nx) = (cl[i - 1], cl[i], cl[i + 1]);
                let out_x = c(p, x) + c(x, nx);
                if i < last {
                    let (y, ny) = (cl[i + 1], cl[i + 2]);
                    consider(
                        c(p, y) + c(y, x) + c(x, ny) - c(p, x) - c(x, y) - c(y, ny),
                        i,
                        i + 1,
                    );
                }
                for j in i + 2..=last {
                    let (py, y, ny) = (cl[j - 1], cl[j], cl[j + 1]);
                    consider(
                        c(p, y) + c(y, nx) + c(py, x) + c(x, ny) - out_x - c(py, y) - c(y, ny),
                        i,
                        j,
                    );
                }
            }
        }
        MoveKind::Relocate1 => {
            for i in 1..=last {
                let (p, x, nx) = (cl[i - 1], cl[i], cl[i + 1]);
                let gain = c(p, x) + c(x, nx) - c(p, nx);
                let mut at = |j: usize| {
                    let (u, v) = (cl[j - 1], cl[j]);
                    consider(c(u, x) + c(x, v) - c(u, v) - gain, i, j);
                };
                (1..i).for_each(&mut at);
                (i + 2..=n).for_each(&mut at);
            }
        }
        MoveKind::Relocate2 => {
            for i in 1..last {
                let (p, x, y, ny) = (cl[i - 1], cl[i], cl[i + 1], cl[i + 2]);
                let gain = c(p, x) + c(y, ny) - c(p, ny);
                let mut at = |j: usize| {
                    let (u, v) = (cl[j - 1], cl[j]);
                    consider(c(u, x) + c(y, v) - c(u, v) - gain, i, j);
                };
                (1..i).for_each(&mut at);
                (i + 3..=n).for_each(&mut at);
            }
        }
        MoveKind::Swap21 => {
            for i in 1..last {
                let (p, x, y, ny) = (cl[i - 1], cl[i], cl[i + 1], cl[i + 2]);
                let out_pair = c(p, x) + c(y, ny);
                for j in 1..i {
                    let (pz, z, nz) = (cl[j - 1], cl[j], cl[j + 1]);
                    let delta = if j + 1 == i {
                        c(pz, x) + c(y, z) + c(z, ny) - c(pz, z) - c(z, x) - c(y, ny)
                    } else {
                        c(pz, x) + c(y, nz) + c(p, z) + c(z, ny) - c(pz, z) - c(z, nz) - out_pair
                    };
                    consider(delta, i, j);
                }
                for j in i + 2..=last {
                    let (pz, z, nz) = (cl[j - 1], cl[j], cl[j + 1]);
                    let delta = if j == i + 2 {
                        c(p, z) + c(z, x) + c(y, nz) - c(p, x) - c(y, z) - c(z, nz)
                    } else {
                        c(p, z) + c(z, ny) + c(pz, x) + c(y, nz) - out_pair - c(pz, z) - c(z, nz)
                    };
                    consider(delta, i, j);
                }
            }
        }
        MoveKind::Swap22 => {
            for i in 1..last {
                let (p, x1, x2, nx) = (cl[i - 1], cl[i], cl[i + 1], cl[i + 2]);
                let out_pair = c(p, x1) + c(x2, nx);
                for j in i + 2..last {
                    let (py, y1, y2, ny) = (cl[j - 1], cl[j], cl[j + 1], cl[j + 2]);
                    let delta = if j == i + 2 {
                        c(p, y1) + c(y2, x1) + c(x2, ny) - c(p, x1) - c(x2, y1) - c(y2, ny)
                    } else {
                        c(p, y1) + c(y2, nx) + c(py, x1) + c(x2, ny)
                            - out_pair
                            - c(py, y1)
                            - c(y2, ny)
                    };
                    consider(delta, i, j);
                }
            }
        }
    }
    best
}

/// Exhaustive best-improvement scan of one neighborhood.
pub fn scan_neighborhood(route: &Route, inst: &Instance, kind: MoveKind) -> Option<Move> {
    let idx = SegmentPriorityIndex::build(route, inst);
    best_move(route, &idx, inst, kind)
}

/// Randomized variable neighborhood descent.
///
/// Picks a neighborhood uniformly from the active list, applies its best
/// improving move and reactivates all five, or drops it when it cannot
/// improve. Stops when the list is empty; the result is a local optimum for
/// every neighborhood.
pub fn rvnd<R: Rng + ?Sized>(mut route: Route, inst: &Instance, rng: &mut R) -> Route {
    let mut active = MoveKind::ALL.to_vec();
    let mut idx = SegmentPriorityIndex::build(&route, inst);
    while !active.is_empty() {
        let pick = rng.gen_range(0..active.len());
        match best_move(&route, &idx, inst, active[pick]) {
            Some(mv) => {
                mv.apply(&mut route);
                debug_assert!(crate::feasibility::is_feasible(&route, inst));
                debug_assert_eq!(route.cost(), inst.tour_cost(route.order()));
                idx = SegmentPriorityIndex::build(&route, inst);
                active.clear();
                active.extend_from_slice(&MoveKind::ALL);
            }
            None => {
                active.remove(pick);
            }
        }
    }
    route
}

/// True when no neighborhood has a feasible improving move.
pub fn is_local_optimum(route: &Route, inst: &Instance) -> bool {
    let idx = SegmentPriorityIndex::build(route, inst);
    MoveKind::ALL
        .iter()
        .all(|&k| best_move(route, &idx, inst, k).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Instance {
        let pts = (0..n).map(|k| (k as f64 * 10.0, 0.0)).collect();
        Instance::from_coords("line", pts).unwrap()
    }

    #[test]
    fn block_apply_shapes() {
        let mut v: Vec<usize> = (0..8).collect();
        Blocks {
            a: 1,
            a_len: 2,
            b: 5,
            b_len: 1,
        }
        .apply(&mut v);
        assert_eq!(v, vec![0, 5, 3, 4, 1, 2, 6, 7]);
        let mut v: Vec<usize> = (0..8).collect();
        Blocks::of(MoveKind::Relocate1, 2, 6).apply(&mut v);
        assert_eq!(v, vec![0, 1, 3, 4, 5, 2, 6, 7]);
        let mut v: Vec<usize> = (0..8).collect();
        Blocks::of(MoveKind::Relocate1, 6, 2).apply(&mut v);
        assert_eq!(v, vec![0, 1, 6, 2, 3, 4, 5, 7]);
        let mut v: Vec<usize> = (0..8).collect();
        Blocks::of(MoveKind::Relocate2, 1, 8).apply(&mut v);
        assert_eq!(v, vec![0, 3, 4, 5, 6, 7, 1, 2]);
        let mut v: Vec<usize> = (0..8).collect();
        Blocks::of(MoveKind::Swap21, 5, 2).apply(&mut v);
        assert_eq!(v, vec![0, 1, 5, 6, 3, 4, 2, 7]);
        let mut v: Vec<usize> = (0..8).collect();
        Blocks::of(MoveKind::Swap22, 1, 5).apply(&mut v);
        assert_eq!(v, vec![0, 5, 6, 3, 4, 1, 2, 7]);
    }

    #[test]
    fn position_counts() {
        let n = 7; // six customers
        assert_eq!(positions(MoveKind::Swap11, n).len(), 15);
        assert_eq!(positions(MoveKind::Swap22, n).len(), 6);
        assert_eq!(positions(MoveKind::Relocate1, n).len(), 6 * 5);
        assert!(positions(MoveKind::Swap21, n)
            .into_iter()
            .all(|(i, j)| j != i && j != i + 1 && i + 1 < n));
        assert_eq!(positions(MoveKind::Swap11, 2).len(), 0);
        assert_eq!(positions(MoveKind::Relocate2, 3).len(), 0);
    }

    #[test]
    fn sorted_line_is_a_fixed_point() {
        let inst = line(7);
        let route = Route::new((0..7).collect(), &inst).unwrap();
        assert!(MoveKind::ALL
            .iter()
            .all(|&k| scan_neighborhood(&route, &inst, k).is_none()));
        assert!(is_local_optimum(&route, &inst));
    }

    #[test]
    fn finds_the_obvious_swap() {
        let inst = line(5);
        let route = Route::new(vec![0, 1, 3, 2, 4], &inst).unwrap();
        assert_eq!(route.cost(), 100);
        let mv = scan_neighborhood(&route, &inst, MoveKind::Swap11).unwrap();
        // swapping 3/2 and reversing the whole tour tie at -20; scan order picks (1, 4)
        assert_eq!(mv.delta, -20);
        let mut r = route.clone();
        mv.apply(&mut r);
        assert_eq!(r.cost(), 80);
        assert_eq!(inst.tour_cost(r.order()), 80);
    }
}
