use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Instance;
use crate::error::{Error, Result};

/// How customers are distributed into priority classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grouping {
    /// Each customer draws its class uniformly at random.
    Random,
    /// Spatially contiguous classes of near-equal size.
    Clustered,
}

impl Grouping {
    pub fn letter(self) -> char {
        match self {
            Grouping::Random => 'R',
            Grouping::Clustered => 'C',
        }
    }
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Grouping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" | "random" => Ok(Grouping::Random),
            "C" | "c" | "clustered" => Ok(Grouping::Clustered),
            other => Err(Error::InvalidArgument(format!(
                "unknown grouping '{other}'"
            ))),
        }
    }
}

/// Returns a copy of `inst` whose customers are split into `g` priority
/// classes.
///
/// Random mode draws each priority uniformly from `1..=g`; classes may end up
/// empty. Clustered mode sweeps customers by polar angle around their
/// centroid, starting from a seeded direction, and cuts the sweep into `g`
/// arcs whose sizes differ by at most one. The arc met first receives
/// priority 1. Instances without coordinates are embedded in the plane by
/// classical multidimensional scaling of the cost matrix first.
pub fn assign_groups(inst: &Instance, g: u32, mode: Grouping, seed: u64) -> Result<Instance> {
    let customers = inst.n() - 1;
    if g == 0 {
        return Err(Error::InvalidArgument(
            "group count must be at least 1".into(),
        ));
    }
    if g as usize > customers {
        return Err(Error::InvalidArgument(format!(
            "{g} groups requested but only {customers} customers"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut priority = vec![0u32; inst.n()];
    match mode {
        Grouping::Random => {
            for p in priority.iter_mut().skip(1) {
                *p = rng.gen_range(1..=g);
            }
        }
        Grouping::Clustered => {
            let points = match inst.coords() {
                Some(c) => c.to_vec(),
                None => planar_embedding(inst),
            };
            let offset = if g > 1 { rng.gen::<f64>() * TAU } else { 0.0 };
            for (rank, v) in angular_sweep(&points, offset).into_iter().enumerate() {
                priority[v] = arc_of(rank, customers, g as usize) as u32 + 1;
            }
        }
    }
    inst.with_priorities(priority, g)
}

/// Customers ordered by angle around their centroid, measured from `offset`.
fn angular_sweep(points: &[(f64, f64)], offset: f64) -> Vec<usize> {
    let m = (points.len() - 1) as f64;
    let (sx, sy) = points
        .iter()
        .skip(1)
        .fold((0.0, 0.0), |(ax, ay), &(x, y)| (ax + x, ay + y));
    let (cx, cy) = (sx / m, sy / m);
    let mut keyed: Vec<(f64, usize)> = (1..points.len())
        .map(|v| {
            let (x, y) = points[v];
            let a = (y - cy).atan2(x - cx);
            ((a - offset).rem_euclid(TAU), v)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, v)| v).collect()
}

/// Arc index of the `rank`-th swept customer when `m` customers are cut into
/// `g` arcs; the first `m % g` arcs get one extra member.
fn arc_of(rank: usize, m: usize, g: usize) -> usize {
    let small = m / g;
    let big = small + 1;
    let n_big = m % g;
    if rank < n_big * big {
        rank / big
    } else {
        n_big + (rank - n_big * big) / small
    }
}

/// Two-dimensional classical MDS embedding of the cost matrix.
fn planar_embedding(inst: &Instance) -> Vec<(f64, f64)> {
    let n = inst.n();
    let sq = DMatrix::from_fn(n, n, |i, j| {
        let c = inst.cost(i, j) as f64;
        c * c
    });
    let row_mean: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let total_mean = row_mean.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (sq[(i, j)] - row_mean[i] - row_mean[j] + total_mean)
    });
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });
    let axis = |k: usize| -> Vec<f64> {
        let idx = order[k];
        let scale = eig.eigenvalues[idx].max(0.0).sqrt();
        let col = eig.eigenvectors.column(idx);
        // fix the sign so the embedding does not depend on solver internals
        let sign = if col.iter().fold(0.0, |acc, &x| acc + x) < 0.0 {
            -1.0
        } else {
            1.0
        };
        col.iter().map(|&x| sign * scale * x).collect()
    };
    let (xs, ys) = (axis(0), axis(1));
    xs.into_iter().zip(ys).collect()
}
