//! Problem instances: cost/time matrices, priority classes and labels.

mod grouping;
mod label;
mod tsplib;

use std::fmt;
use std::fs;
use std::path::Path;

pub use grouping::{assign_groups, Grouping};
pub use label::InstanceLabel;
pub use tsplib::{parse_tsplib, read_instance, write_instance};

use crate::error::{Error, Result};

/// Node index of the depot. Always the first node of the file.
pub const DEPOT: usize = 0;

/// Dense square matrix of integer arc weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Checks symmetry, zero diagonal and nonnegativity.
    pub fn check_metric_shape(&self) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0 {
                return Err(Error::InvalidInstance(format!(
                    "nonzero diagonal entry at node {}",
                    i + 1
                )));
            }
            for j in (i + 1)..self.n {
                let (a, b) = (self.get(i, j), self.get(j, i));
                if a != b {
                    return Err(Error::InvalidInstance(format!(
                        "asymmetric weights between nodes {} and {}",
                        i + 1,
                        j + 1
                    )));
                }
                if a < 0 {
                    return Err(Error::InvalidInstance(format!(
                        "negative weight between nodes {} and {}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// TSPLIB `nint` rounding of the Euclidean distance.
pub fn euc_2d(a: (f64, f64), b: (f64, f64)) -> i64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    ((dx * dx + dy * dy).sqrt() + 0.5).floor() as i64
}

/// A CTSP-d instance.
///
/// Node `0` is the depot; it has no priority (stored as `0`). Every other
/// node carries a priority in `1..=groups`. Instances are immutable once
/// built; the `with_*` methods return modified copies.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    coords: Option<Vec<(f64, f64)>>,
    cost: Matrix,
    time: Matrix,
    priority: Vec<u32>,
    groups: u32,
    relax: u32,
}

impl Instance {
    /// Builds an instance with a single priority class and `d = 0`, i.e. a
    /// plain TSP. `time` defaults to `cost`.
    pub fn new(
        name: impl Into<String>,
        cost: Matrix,
        coords: Option<Vec<(f64, f64)>>,
    ) -> Result<Self> {
        let n = cost.dim();
        let mut priority = vec![1; n];
        if n > 0 {
            priority[DEPOT] = 0;
        }
        Self::from_parts(name.into(), coords, cost.clone(), cost, priority, 1, 0)
    }

    /// Builds an instance from Euclidean coordinates.
    pub fn from_coords(name: impl Into<String>, coords: Vec<(f64, f64)>) -> Result<Self> {
        let n = coords.len();
        let cost = Matrix::from_fn(n, |i, j| euc_2d(coords[i], coords[j]));
        Self::new(name, cost, Some(coords))
    }

    /// Full constructor; validates every invariant.
    pub fn from_parts(
        name: String,
        coords: Option<Vec<(f64, f64)>>,
        cost: Matrix,
        time: Matrix,
        priority: Vec<u32>,
        groups: u32,
        relax: u32,
    ) -> Result<Self> {
        let n = cost.dim();
        if n < 2 {
            return Err(Error::InvalidInstance(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        if time.dim() != n {
            return Err(Error::InvalidInstance(
                "time matrix dimension mismatch".into(),
            ));
        }
        if let Some(c) = &coords {
            if c.len() != n {
                return Err(Error::InvalidInstance("coordinate count mismatch".into()));
            }
        }
        if priority.len() != n {
            return Err(Error::InvalidInstance(
                "priority vector length mismatch".into(),
            ));
        }
        if groups == 0 {
            return Err(Error::InvalidInstance(
                "group count must be at least 1".into(),
            ));
        }
        cost.check_metric_shape()?;
        for (v, &p) in priority.iter().enumerate().skip(1) {
            if p < 1 || p > groups {
                return Err(Error::InvalidInstance(format!(
                    "priority {p} of node {} outside 1..={groups}",
                    v + 1
                )));
            }
        }
        let mut priority = priority;
        priority[DEPOT] = 0;
        Ok(Instance {
            name,
            coords,
            cost,
            time,
            priority,
            groups,
            relax,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of nodes including the depot.
    #[inline]
    pub fn n(&self) -> usize {
        self.cost.dim()
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> i64 {
        self.cost.get(i, j)
    }

    #[inline]
    pub fn time(&self, i: usize, j: usize) -> i64 {
        self.time.get(i, j)
    }

    pub fn cost_matrix(&self) -> &Matrix {
        &self.cost
    }

    pub fn time_matrix(&self) -> &Matrix {
        &self.time
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    /// Priority of `node`; `0` for the depot.
    #[inline]
    pub fn priority(&self, node: usize) -> u32 {
        self.priority[node]
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    /// Number of priority classes `g`.
    pub fn groups(&self) -> u32 {
        self.groups
    }

    /// Relaxation parameter `d`.
    pub fn relax(&self) -> u32 {
        self.relax
    }

    /// Customer nodes, i.e. every node but the depot.
    pub fn customers(&self) -> impl Iterator<Item = usize> {
        1..self.n()
    }

    /// True when the rule cannot reject any visiting order.
    pub fn rule_is_vacuous(&self) -> bool {
        self.groups <= 1 || self.relax + 1 >= self.groups
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        let mut out = self.clone();
        out.name = name.into();
        out
    }

    pub fn with_relax(&self, d: u32) -> Self {
        let mut out = self.clone();
        out.relax = d;
        out
    }

    pub fn with_time(&self, time: Matrix) -> Result<Self> {
        if time.dim() != self.n() {
            return Err(Error::InvalidInstance(
                "time matrix dimension mismatch".into(),
            ));
        }
        let mut out = self.clone();
        out.time = time;
        Ok(out)
    }

    /// Replaces the priority vector (depot entry ignored) and group count.
    pub fn with_priorities(&self, priority: Vec<u32>, groups: u32) -> Result<Self> {
        Self::from_parts(
            self.name.clone(),
            self.coords.clone(),
            self.cost.clone(),
            self.time.clone(),
            priority,
            groups,
            self.relax,
        )
    }

    /// Closing tour cost of a node sequence that starts at the depot.
    pub fn tour_cost(&self, order: &[usize]) -> i64 {
        if order.is_empty() {
            return 0;
        }
        let mut total = 0;
        for w in order.windows(2) {
            total += self.cost(w[0], w[1]);
        }
        total + self.cost(order[order.len() - 1], order[0])
    }

    /// Sizes of the priority classes `1..=g`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.groups as usize];
        for v in self.customers() {
            sizes[self.priority[v] as usize - 1] += 1;
        }
        sizes
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        read_instance(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, write_instance(self))?;
        Ok(())
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (n={}, g={}, d={})",
            self.name,
            self.n(),
            self.groups,
            self.relax
        )
    }
}
