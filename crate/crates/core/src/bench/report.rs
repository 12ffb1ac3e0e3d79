use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::feasibility::{is_feasible, Route};
use crate::instance::Instance;
use crate::metaheuristic::{solve, SearchParams};

/// Optimal TSP tour lengths of common TSPLIB instances.
pub fn tsp_optimum(base: &str) -> Option<i64> {
    let v = match base {
        "gr17" => 2085,
        "gr24" => 1272,
        "bays29" => 2020,
        "swiss42" => 1273,
        "dantzig42" => 699,
        "eil51" => 426,
        "berlin52" => 7542,
        "st70" => 675,
        "eil76" => 538,
        "pr76" => 108159,
        "rat99" => 1211,
        "kroA100" => 21282,
        "kroB100" => 22141,
        "kroC100" => 20749,
        "kroD100" => 21294,
        "kroE100" => 22068,
        "eil101" => 629,
        "lin105" => 14379,
        "ch130" => 6110,
        "ch150" => 6528,
        "kroA200" => 29368,
        "kroB200" => 29437,
        "a280" => 2579,
        _ => return None,
    };
    Some(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub cost: i64,
    pub seconds: f64,
    pub feasible: bool,
}

/// All runs on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub instance: String,
    pub tsp_opt: Option<i64>,
    pub runs: Vec<RunRecord>,
}

impl RunReport {
    pub fn avg_sol(&self) -> f64 {
        self.runs.iter().map(|r| r.cost as f64).sum::<f64>() / self.runs.len() as f64
    }

    pub fn avg_time(&self) -> f64 {
        self.runs.iter().map(|r| r.seconds).sum::<f64>() / self.runs.len() as f64
    }

    /// Best cost over the runs.
    pub fn bks(&self) -> i64 {
        self.runs.iter().map(|r| r.cost).min().unwrap_or(0)
    }

    /// Percentage by which the average run exceeds the best one.
    pub fn avg_gap(&self) -> f64 {
        let bks = self.bks() as f64;
        100.0 * (self.avg_sol() - bks) / bks
    }

    /// Percentage of the best cost attributable to the rule, relative to the
    /// unconstrained optimum.
    pub fn gap_tsp(&self) -> Option<f64> {
        let bks = self.bks() as f64;
        self.tsp_opt.map(|opt| 100.0 * (bks - opt as f64) / bks)
    }

    pub fn all_feasible(&self) -> bool {
        self.runs.iter().all(|r| r.feasible)
    }

    const HEADER: [&'static str; 6] = ["Instance", "AvgSol", "AvgTime", "AvgGap", "BKS", "GapTSP"];

    fn cells(&self, timing: bool) -> [String; 6] {
        [
            self.instance.clone(),
            format!("{:.2}", self.avg_sol()),
            if timing {
                format!("{:.2}", self.avg_time())
            } else {
                String::new()
            },
            format!("{:.2}", self.avg_gap()),
            self.bks().to_string(),
            self.gap_tsp()
                .map(|g| format!("{g:.2}"))
                .unwrap_or_default(),
        ]
    }

    /// CSV table. Without `timing` the time column is left blank so repeated
    /// runs produce identical files.
    pub fn to_csv(reports: &[RunReport], timing: bool) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.into());
        w.write_record(Self::HEADER).map_err(io)?;
        for r in reports {
            w.write_record(r.cells(timing)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_markdown(reports: &[RunReport], timing: bool) -> String {
        let mut out = Vec::new();
        let _ = writeln!(out, "| {} |", Self::HEADER.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(Self::HEADER.len()));
        for r in reports {
            let cells = r.cells(timing);
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        String::from_utf8(out).expect("markdown output is utf-8")
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub params: SearchParams,
    pub runs: usize,
    /// Worker threads; instances are distributed among them.
    pub jobs: usize,
}

impl BenchConfig {
    /// Seed of run `r`. Restarts inside a run add their index, so runs are
    /// spaced far apart.
    pub fn run_seed(&self, r: usize) -> u64 {
        self.params.seed.wrapping_add(1_000 * r as u64)
    }
}

/// Solves `inst` `config.runs` times; returns the report and the best route.
pub fn run_instance(
    label: &str,
    base: &str,
    inst: &Instance,
    config: &BenchConfig,
) -> Result<(RunReport, Route)> {
    if config.runs == 0 {
        return Err(Error::InvalidArgument(
            "at least one run is required".into(),
        ));
    }
    let mut runs = Vec::with_capacity(config.runs);
    let mut best: Option<Route> = None;
    for r in 0..config.runs {
        let seed = config.run_seed(r);
        let result = solve(inst, &config.params.clone().with_seed(seed))?;
        runs.push(RunRecord {
            seed,
            cost: result.best.cost(),
            seconds: result.seconds,
            feasible: is_feasible(&result.best, inst),
        });
        if best.as_ref().is_none_or(|b| result.best.cost() < b.cost()) {
            best = Some(result.best);
        }
    }
    let report = RunReport {
        instance: label.to_string(),
        tsp_opt: tsp_optimum(base),
        runs,
    };
    Ok((report, best.expect("at least one run")))
}

type Slot = Mutex<Option<Result<(RunReport, Route)>>>;

/// Runs every `(label, base name, instance)` and returns the results in input
/// order.
pub fn run_benchmark(
    instances: &[(String, String, Instance)],
    config: &BenchConfig,
) -> Result<Vec<(RunReport, Route)>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Slot> = instances.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..config.jobs.clamp(1, instances.len().max(1)) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some((label, base, inst)) = instances.get(k) else {
                    break;
                };
                let out = run_instance(label, base, inst, config);
                *slots[k].lock().expect("no worker panicked") = Some(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| {
            s.into_inner()
                .expect("no worker panicked")
                .expect("every slot filled")
        })
        .collect()
}
