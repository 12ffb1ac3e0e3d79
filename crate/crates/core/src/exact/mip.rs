//! Mixed-integer models of the problem, written in CPLEX LP format, and a
//! checker that evaluates them on the assignment induced by a route.
//!
//! Model nodes are numbered from 1: node `v + 1` is instance node `v`, so the
//! depot is node 1, and node `n + 1` is a copy of the depot that closes the
//! tour.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construction::initialize;
use crate::error::{Error, Result};
use crate::feasibility::Route;
use crate::instance::{Instance, DEPOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Arrival times with big-M linking.
    F1,
    /// `F1` plus the class-arc cuts.
    F1s,
    /// Visit positions (MTZ).
    F2,
    /// `F2` plus the class-arc cuts.
    F2s,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::F1, Variant::F1s, Variant::F2, Variant::F2s];

    pub fn uses_times(self) -> bool {
        matches!(self, Variant::F1 | Variant::F1s)
    }

    pub fn is_strengthened(self) -> bool {
        matches!(self, Variant::F1s | Variant::F2s)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::F1 => "F1",
            Variant::F1s => "F1s",
            Variant::F2 => "F2",
            Variant::F2s => "F2s",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(Variant::F1),
            "f1s" => Ok(Variant::F1s),
            "f2" => Ok(Variant::F2),
            "f2s" => Ok(Variant::F2s),
            _ => Err(Error::InvalidArgument(format!(
                "unknown model variant '{s}'"
            ))),
        }
    }
}

/// Which class pairs receive precedence rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precedence {
    /// Every pair of classes `p < q` with `q > p + d`.
    #[default]
    Full,
    /// Only `q = p + d + 1`. Too weak on its own: kept to demonstrate the gap.
    Boundary,
}

/// Big-M used by the arrival-time variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeBigM {
    /// Large enough for every Hamiltonian route.
    #[default]
    RouteBound,
    /// Duration of the nearest-neighbour feasible tour. Cuts off every route
    /// that takes longer than that tour.
    GreedyTour,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MipOptions {
    pub variant: Variant,
    pub precedence: Precedence,
    pub time_big_m: TimeBigM,
}

impl MipOptions {
    pub fn new(variant: Variant) -> Self {
        MipOptions {
            variant,
            precedence: Precedence::Full,
            time_big_m: TimeBigM::RouteBound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A row not satisfied by an assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub row: String,
    pub lhs: f64,
    pub sense: Sense,
    pub rhs: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {}",
            self.row,
            num(self.lhs),
            self.sense,
            num(self.rhs)
        )
    }
}

#[derive(Debug, Clone)]
pub struct MipModel {
    pub name: String,
    pub options: MipOptions,
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
    pub objective: Vec<(usize, f64)>,
    pub big_m: f64,
    /// Minimum separation of arrival times in precedence rows.
    pub epsilon: f64,
    n: usize,
    arcs: HashMap<(usize, usize), usize>,
    /// Position or time variable of model node `a` at index `a - 1`.
    order_vars: Vec<usize>,
    time: Vec<i64>,
}

/// Builds the model for `inst`.
pub fn emit_mip(inst: &Instance, options: MipOptions) -> MipModel {
    let n = inst.n();
    let ret = n + 1;
    let node = |a: usize| if a == ret { DEPOT } else { a - 1 };
    let d = inst.relax();
    let variant = options.variant;

    let mut variables = Vec::new();
    let mut arcs = HashMap::new();
    let mut arc_list = Vec::new();
    for a in 1..=n {
        for b in 2..=ret {
            if a == b || (a == 1 && b == ret && n > 1) {
                continue;
            }
            arcs.insert((a, b), variables.len());
            arc_list.push((a, b, variables.len()));
            variables.push(Variable {
                name: format!("x_{a}_{b}"),
                kind: VarKind::Binary,
                lower: 0.0,
                upper: Some(1.0),
            });
        }
    }
    let prefix = if variant.uses_times() { "s" } else { "u" };
    let order_vars: Vec<usize> = (1..=ret)
        .map(|a| {
            variables.push(Variable {
                name: format!("{prefix}_{a}"),
                kind: VarKind::Continuous,
                lower: 0.0,
                upper: (!variant.uses_times()).then_some(n as f64),
            });
            variables.len() - 1
        })
        .collect();
    let objective = arc_list
        .iter()
        .map(|&(a, b, x)| (x, inst.cost(node(a), node(b)) as f64))
        .collect();

    let time_of = |a: usize, b: usize| inst.time(node(a), node(b)) as f64;
    let epsilon = arc_list
        .iter()
        .map(|&(a, b, _)| time_of(a, b))
        .filter(|&t| t > 0.0)
        .fold(f64::INFINITY, f64::min);
    let epsilon = if epsilon.is_finite() { epsilon } else { 1.0 };
    let big_m = if variant.uses_times() {
        match options.time_big_m {
            TimeBigM::RouteBound => {
                let max_out: f64 = (1..=n)
                    .map(|a| {
                        (2..=ret)
                            .filter(|&b| b != a)
                            .map(|b| time_of(a, b))
                            .fold(0.0, f64::max)
                    })
                    .sum();
                let max_arc = arc_list
                    .iter()
                    .map(|&(a, b, _)| time_of(a, b))
                    .fold(0.0, f64::max);
                max_out + max_arc
            }
            TimeBigM::GreedyTour => {
                let greedy = initialize(inst, 1, &mut ChaCha8Rng::seed_from_u64(0));
                let order = greedy.order();
                let closing = order.iter().zip(order.iter().skip(1).chain([&DEPOT]));
                closing.map(|(&a, &b)| inst.time(a, b) as f64).sum()
            }
        }
    } else {
        n as f64
    };

    let mut rows = Vec::new();
    for b in 2..=ret {
        let terms = arc_list
            .iter()
            .filter(|t| t.1 == b)
            .map(|t| (t.2, 1.0))
            .collect();
        rows.push(row(format!("in_{b}"), terms, Sense::Eq, 1.0));
    }
    for a in 1..=n {
        let terms = arc_list
            .iter()
            .filter(|t| t.0 == a)
            .map(|t| (t.2, 1.0))
            .collect();
        rows.push(row(format!("out_{a}"), terms, Sense::Eq, 1.0));
    }
    rows.push(row(
        "start".into(),
        vec![(order_vars[0], 1.0)],
        Sense::Eq,
        0.0,
    ));
    for &(a, b, x) in &arc_list {
        let gap = if variant.uses_times() {
            time_of(a, b)
        } else {
            1.0
        };
        let terms = vec![
            (order_vars[a - 1], 1.0),
            (order_vars[b - 1], -1.0),
            (x, big_m),
        ];
        rows.push(row(format!("link_{a}_{b}"), terms, Sense::Le, big_m - gap));
    }

    let g = inst.groups();
    let mut classes = vec![Vec::new(); g as usize + 1];
    for v in inst.customers() {
        classes[inst.priority(v) as usize].push(v + 1);
    }
    let separated = |p: u32, q: u32| match options.precedence {
        Precedence::Full => q > p + d,
        Precedence::Boundary => q == p + d + 1,
    };
    let sep = if variant.uses_times() { epsilon } else { 1.0 };
    for p in 1..=g {
        for q in p + 1..=g {
            if !separated(p, q) {
                continue;
            }
            for &a in &classes[p as usize] {
                for &b in &classes[q as usize] {
                    let terms = vec![(order_vars[a - 1], 1.0), (order_vars[b - 1], -1.0)];
                    rows.push(row(format!("prec_{a}_{b}"), terms, Sense::Le, -sep));
                }
            }
        }
    }

    if variant.is_strengthened() {
        let arcs = &arcs;
        let arc_sum = |from: &[usize], to: &[usize]| -> Vec<(usize, f64)> {
            from.iter()
                .flat_map(|&a| {
                    to.iter()
                        .filter_map(move |&b| arcs.get(&(a, b)).map(|&x| (x, 1.0)))
                })
                .collect()
        };
        for p in 1..=g {
            for q in p + d + 1..=g {
                let (vp, vq) = (&classes[p as usize], &classes[q as usize]);
                rows.push(row(
                    format!("back_{p}_{q}"),
                    arc_sum(vq, vp),
                    Sense::Eq,
                    0.0,
                ));
                rows.push(row(
                    format!("once_{p}_{q}"),
                    arc_sum(vp, vq),
                    Sense::Le,
                    1.0,
                ));
            }
        }
        let present: Vec<u32> = (1..=g)
            .filter(|&p| !classes[p as usize].is_empty())
            .collect();
        if let (Some(&lo), Some(&hi)) = (present.first(), present.last()) {
            for &p in &present {
                if p > lo + d {
                    rows.push(row(
                        format!("first_{p}"),
                        arc_sum(&[1], &classes[p as usize]),
                        Sense::Eq,
                        0.0,
                    ));
                }
                if p + d < hi {
                    rows.push(row(
                        format!("last_{p}"),
                        arc_sum(&classes[p as usize], &[ret]),
                        Sense::Eq,
                        0.0,
                    ));
                }
            }
        }
        rows.retain(|r| !r.terms.is_empty());
    }

    MipModel {
        name: inst.name().to_string(),
        options,
        variables,
        rows,
        objective,
        big_m,
        epsilon,
        n,
        arcs,
        order_vars,
        time: (0..n * n).map(|k| inst.time(k / n, k % n)).collect(),
    }
}

fn row(name: String, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Row {
    Row {
        name,
        terms,
        sense,
        rhs,
    }
}

fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

impl MipModel {
    pub fn variant(&self) -> Variant {
        self.options.variant
    }

    /// Rows whose name starts with `prefix`.
    pub fn rows_named<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.name.starts_with(prefix))
    }

    /// Values induced by `route`: arcs of the closed tour, visit positions or
    /// cumulative arrival times.
    pub fn natural_assignment(&self, route: &Route) -> Result<Vec<f64>> {
        let n = self.n;
        let order = route.order();
        if order.len() != n || order.first() != Some(&DEPOT) {
            return Err(Error::InvalidRoute(format!(
                "expected {n} nodes starting at the depot, got {}",
                order.len()
            )));
        }
        let mut values = vec![0.0; self.variables.len()];
        let mut clock = 0.0;
        let mut times = vec![0.0; n + 1];
        let mut prev = DEPOT;
        for (pos, &v) in order.iter().enumerate().skip(1) {
            clock += self.time[prev * n + v] as f64;
            times[v] = clock;
            let x = self.arcs.get(&(prev + 1, v + 1)).ok_or_else(|| {
                Error::InvalidRoute(format!("arc {} -> {} is not in the model", prev + 1, v + 1))
            })?;
            values[*x] = 1.0;
            values[self.order_vars[v]] = if self.variant().uses_times() {
                clock
            } else {
                pos as f64
            };
            prev = v;
        }
        values[self.arcs[&(prev + 1, n + 1)]] = 1.0;
        clock += self.time[prev * n] as f64;
        values[self.order_vars[n]] = if self.variant().uses_times() {
            clock
        } else {
            n as f64
        };
        Ok(values)
    }

    /// Rows violated by `values`.
    pub fn violations(&self, values: &[f64]) -> Vec<Violation> {
        let mut out = Vec::new();
        for r in &self.rows {
            let lhs: f64 = r.terms.iter().map(|&(v, c)| c * values[v]).sum();
            let tol = 1e-6 * r.rhs.abs().max(1.0);
            let ok = match r.sense {
                Sense::Le => lhs <= r.rhs + tol,
                Sense::Ge => lhs >= r.rhs - tol,
                Sense::Eq => (lhs - r.rhs).abs() <= tol,
            };
            if !ok {
                out.push(Violation {
                    row: r.name.clone(),
                    lhs,
                    sense: r.sense,
                    rhs: r.rhs,
                });
            }
        }
        for (v, var) in self.variables.iter().enumerate() {
            let x = values[v];
            let above = var.upper.is_some_and(|u| x > u + 1e-6);
            if x < var.lower - 1e-6 || above {
                out.push(Violation {
                    row: format!("bound_{}", var.name),
                    lhs: x,
                    sense: if above { Sense::Le } else { Sense::Ge },
                    rhs: if above {
                        var.upper.unwrap_or_default()
                    } else {
                        var.lower
                    },
                });
            }
        }
        out
    }

    /// Rows violated by the assignment that `route` induces.
    pub fn validate_assignment(&self, route: &Route) -> Result<Vec<Violation>> {
        Ok(self.violations(&self.natural_assignment(route)?))
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// The model in CPLEX LP format.
    pub fn to_lp(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "\\ {} model {}", self.name, self.variant());
        s.push_str("Minimize\n");
        self.write_expr(&mut s, " obj:", &self.objective);
        s.push('\n');
        s.push_str("Subject To\n");
        for r in &self.rows {
            self.write_expr(&mut s, &format!(" {}:", r.name), &r.terms);
            let _ = writeln!(s, " {} {}", r.sense, num(r.rhs));
        }
        s.push_str("Bounds\n");
        for var in self
            .variables
            .iter()
            .filter(|v| v.kind == VarKind::Continuous)
        {
            match var.upper {
                Some(u) => {
                    let _ = writeln!(s, " {} <= {} <= {}", num(var.lower), var.name, num(u));
                }
                None => {
                    let _ = writeln!(s, " {} >= {}", var.name, num(var.lower));
                }
            }
        }
        s.push_str("Binaries\n");
        let binaries: Vec<&str> = self
            .variables
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .map(|v| v.name.as_str())
            .collect();
        for chunk in binaries.chunks(10) {
            let _ = writeln!(s, " {}", chunk.join(" "));
        }
        s.push_str("End\n");
        s
    }

    fn write_expr(&self, s: &mut String, head: &str, terms: &[(usize, f64)]) {
        s.push_str(head);
        for (k, &(v, c)) in terms.iter().enumerate() {
            if k > 0 && k % 8 == 0 {
                s.push_str("\n   ");
            }
            let sign = if c < 0.0 { '-' } else { '+' };
            let name = &self.variables[v].name;
            if c.abs() == 1.0 {
                let _ = write!(s, " {sign} {name}");
            } else {
                let _ = write!(s, " {sign} {} {name}", num(c.abs()));
            }
        }
        if terms.is_empty() {
            s.push_str(" 0");
        }
    }
}
