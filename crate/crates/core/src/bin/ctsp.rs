use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ctsp::bench::{
    generate_suite, run_benchmark, write_suite, BenchConfig, RunReport, SuiteConfig,
};
use ctsp::exact::{brute_force, dp_exact, emit_mip, MipOptions, Variant, DEFAULT_STATE_BUDGET};
use ctsp::instance::assign_groups;
use ctsp::metaheuristic::Preset;
use ctsp::solution::Solution;
use ctsp::{is_feasible, solve, Grouping, Instance, InstanceLabel, Result, Route, SearchParams};

#[derive(Parser)]
#[command(
    name = "ctsp",
    version,
    about = "Clustered TSP with a d-relaxed priority rule"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand TSPLIB instances into a labelled benchmark suite.
    Generate {
        /// Base TSPLIB files.
        #[arg(required = true)]
        bases: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
        g: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,3")]
        d: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "R,C")]
        grouping: Vec<Grouping>,
        /// Groupings per (grouping, g) when g > 1.
        #[arg(long, default_value_t = 1)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Ils)]
        mode: Mode,
        /// Model variant for `emit-mip`.
        #[arg(long, default_value = "F2s")]
        variant: Variant,
        #[command(flatten)]
        regroup: Regroup,
        #[command(flatten)]
        search: Search,
        /// State budget of the dynamic program.
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
        /// Output file (solution, or LP model for `emit-mip`); stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the metaheuristic repeatedly on many instances.
    Bench {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        #[command(flatten)]
        search: Search,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Leave the time column blank so reports are reproducible.
        #[arg(long)]
        no_timing: bool,
        /// Directory for report.csv, report.md and best solutions.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a solution file against an instance.
    Validate {
        instance: PathBuf,
        solution: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ils,
    Dp,
    Brute,
    EmitMip,
}

#[derive(clap::Args)]
struct Regroup {
    /// Reassign customers to this many classes.
    #[arg(long)]
    g: Option<u32>,
    #[arg(long, default_value = "C")]
    grouping: Grouping,
    /// Override the relaxation.
    #[arg(long)]
    d: Option<u32>,
}

#[derive(clap::Args)]
struct Search {
    #[arg(long, default_value = "fast")]
    preset: Preset,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restricted candidate list size.
    #[arg(long)]
    k: Option<usize>,
}

impl Search {
    fn params(&self) -> SearchParams {
        let mut p = SearchParams::preset(self.preset).with_seed(self.seed);
        if let Some(k) = self.k {
            p.k = k;
        }
        p
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            bases,
            g,
            d,
            grouping,
            replicates,
            seed,
            out,
        } => {
            let config = SuiteConfig {
                groups: g,
                relax: d,
                groupings: grouping,
                replicates,
                seed,
            };
            for base in bases {
                let inst = Instance::load(&base)?;
                let suite = generate_suite(&inst, &config)?;
                let paths = write_suite(&out, &suite)?;
                println!("{}: {} instances", inst.name(), paths.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            instance,
            mode,
            variant,
            regroup,
            search,
            budget,
            out,
        } => {
            let mut inst = Instance::load(&instance)?;
            if let Some(g) = regroup.g {
                inst = assign_groups(&inst, g, regroup.grouping, search.seed)?;
            }
            if let Some(d) = regroup.d {
                inst = inst.with_relax(d);
            }
            let route = match mode {
                Mode::EmitMip => {
                    let lp = emit_mip(&inst, MipOptions::new(variant)).to_lp();
                    emit(out.as_deref(), &lp)?;
                    return Ok(ExitCode::SUCCESS);
                }
                Mode::Brute => brute_force(&inst)?,
                Mode::Dp => dp_exact(&inst, budget)?.route.expect("route requested"),
                Mode::Ils => {
                    let result = solve(&inst, &search.params())?;
                    let iterations: usize = result.restarts.iter().map(|r| r.iterations).sum();
                    eprintln!("{:.2}s, {iterations} iterations", result.seconds);
                    result.best
                }
            };
            finish(&inst, &route, out.as_deref())
        }
        Command::Bench {
            instances,
            search,
            runs,
            jobs,
            no_timing,
            out,
        } => {
            let mut jobs_list = Vec::new();
            for path in &instances {
                let inst = Instance::load(path)?;
                let label = inst.name().to_string();
                let base = label
                    .parse::<InstanceLabel>()
                    .map(|l| l.base)
                    .unwrap_or_else(|_| label.clone());
                jobs_list.push((label, base, inst));
            }
            let config = BenchConfig {
                params: search.params(),
                runs,
                jobs,
            };
            let results = run_benchmark(&jobs_list, &config)?;
            let sol_dir = out.join("solutions");
            std::fs::create_dir_all(&sol_dir)?;
            let mut all_feasible = true;
            for ((report, best), (label, _, inst)) in results.iter().zip(&jobs_list) {
                all_feasible &= report.all_feasible();
                Solution::new(label.clone(), best, inst)
                    .save(sol_dir.join(format!("{label}.sol")))?;
            }
            let reports: Vec<RunReport> = results.into_iter().map(|(r, _)| r).collect();
            std::fs::write(
                out.join("report.csv"),
                RunReport::to_csv(&reports, !no_timing)?,
            )?;
            let md = RunReport::to_markdown(&reports, !no_timing);
            std::fs::write(out.join("report.md"), &md)?;
            print!("{md}");
            Ok(if all_feasible {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Validate { instance, solution } => {
            let inst = Instance::load(&instance)?;
            let sol = Solution::load(&solution)?;
            match sol.verify(&inst) {
                Ok(route) => {
                    println!("ok: cost {}", route.cost());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn finish(inst: &Instance, route: &Route, out: Option<&Path>) -> Result<ExitCode> {
    let sol = Solution::new(inst.name(), route, inst);
    emit(out, &sol.to_text())?;
    if out.is_some() {
        println!("{}: cost {}", inst.name(), route.cost());
    }
    if is_feasible(route, inst) {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: solution breaks the priority rule");
        Ok(ExitCode::from(2))
    }
}
