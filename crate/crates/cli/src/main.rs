//! `eqwreath`: solve equation systems in finite groups and run the finite
//! checks for universal solutions along quotient towers.
//!
//! Every command prints `key=value` lines to stdout. Exit status is 0 on
//! success, 1 when the answer is negative (no solution, counterexample,
//! empty level set, failed check) and 2 on usage or input errors.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eqwreath_core::assembly::{parse_support, run_pipeline, PipelineInput, Verdict};
use eqwreath_core::group::{catalog_group, parse_group_file, Elem, FiniteGroup};
use eqwreath_core::locality::run_locality_trials;
use eqwreath_core::solver::{self, Solvability, SolveOutcome, SolverConfig, SysFinVerdict, DEFAULT_NODE_BUDGET};
use eqwreath_core::tower::{parse_tower_file, TowerSpec};
use eqwreath_core::universal::{compute_x_n, UniversalProblem};
use eqwreath_core::EquationSystem;

#[derive(Parser)]
#[command(name = "eqwreath", version, about = "Equations over finite groups and wreath products")]
struct Cli {
    /// Worker threads (default: one per core). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SearchOpts {
    /// Node budget of a single search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Try every constant tuple instead of one per conjugation orbit.
    #[arg(long)]
    no_symmetry: bool,
}

impl SearchOpts {
    fn config(&self) -> SolverConfig {
        SolverConfig { node_budget: self.budget, parallel: true, symmetry_reduction: !self.no_symmetry }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Least solution of a system for fixed constants.
    Solve {
        /// Group file, or the name of a built-in group such as `S3`.
        #[arg(long)]
        group: String,
        #[arg(long)]
        system: PathBuf,
        /// Constants as element indices, `a1=<idx>,a2=<idx>`.
        #[arg(long, default_value = "")]
        assign: String,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Whether a system has a solution for every choice of constants.
    Solvable {
        #[arg(long)]
        group: String,
        #[arg(long)]
        system: PathBuf,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Looks for a built-in group in which the system is not solvable.
    Scan {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Random trials of the locality property of the section pullback.
    Locality {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw surjections from this tower instead of random quotients.
        #[arg(long)]
        tower: Option<PathBuf>,
    },
    /// Members of the level set `X` at one level of a tower.
    Xn {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        tower: PathBuf,
        #[arg(long = "H")]
        h: String,
        /// Constants as ambient points, `a1=<int>,...`.
        #[arg(long, default_value = "")]
        assign: String,
        /// 1-based level; the finest by default.
        #[arg(long)]
        level: Option<usize>,
        /// Also print a solution for every coarser level and every `f`.
        #[arg(long)]
        witnesses: bool,
    },
    /// Level sets, assembly and window checks in one report.
    Pipeline {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        tower: PathBuf,
        #[arg(long = "H")]
        h: String,
        #[arg(long, default_value = "")]
        assign: String,
        /// Support of the constants, `f1@<point>=<h>,...`.
        #[arg(long, default_value = "")]
        support: String,
        /// 1-based probe level; the second finest by default.
        #[arg(long)]
        probe: Option<usize>,
        #[arg(long, default_value_t = 8)]
        scan_max_order: usize,
    },
}

/// An error reported on stderr with exit status 2.
struct Usage(String);

impl<E: Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load_group(arg: &str) -> Result<FiniteGroup, Usage> {
    let path = Path::new(arg);
    if path.exists() {
        let g = parse_group_file(&read(path)?).map_err(|e| Usage(format!("{arg}: {e}")))?;
        let name = path.file_stem().map_or(arg.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok(g.renamed(name));
    }
    catalog_group(arg).ok_or_else(|| Usage(format!("{arg}: no such file or built-in group")))
}

fn load_system(path: &Path) -> Result<EquationSystem, Usage> {
    EquationSystem::parse(&read(path)?).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load_tower(path: &Path) -> Result<TowerSpec, Usage> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |name: &str| std::fs::read_to_string(dir.join(name)).map_err(|e| format!("{name}: {e}"));
    parse_tower_file(&read(path)?, &resolve).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

/// Parses `a1=v1,a2=v2,...` into a vector indexed by constant, requiring
/// exactly `a1..ak`.
fn parse_assign<T: std::str::FromStr>(text: &str, k: usize) -> Result<Vec<T>, Usage> {
    let mut slots: Vec<Option<T>> = (0..k).map(|_| None).collect();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item.split_once('=').ok_or_else(|| Usage(format!("bad assignment {item:?}")))?;
        let idx: usize = name
            .strip_prefix('a')
            .and_then(|i| i.parse().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| Usage(format!("bad constant name {name:?}")))?;
        if idx > k {
            return Err(Usage(format!("the system has no constant {name}")));
        }
        let value = value.parse().map_err(|_| Usage(format!("bad value in {item:?}")))?;
        slots[idx - 1] = Some(value);
    }
    slots.into_iter().enumerate().map(|(i, v)| v.ok_or_else(|| Usage(format!("a{} is not assigned", i + 1)))).collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn named(prefix: char, v: &[Elem]) -> String {
    v.iter().enumerate().map(|(i, e)| format!("{prefix}{}={e}", i + 1)).collect::<Vec<_>>().join(",")
}

/// Runs a command, printing its report; returns `true` for a positive answer.
fn run(command: Command) -> Result<bool, Usage> {
    match command {
        Command::Solve { group, system, assign, search } => {
            let g = load_group(&group)?;
            let sys = load_system(&system)?;
            let consts: Vec<Elem> = parse_assign(&assign, sys.num_constants())?;
            let report = solver::solve(&g, &sys, &consts, &search.config())?;
            println!("group={} order={}", report.group, g.order());
            let solved = match report.outcome {
                SolveOutcome::Solved(xs) => {
                    println!("status=solved");
                    for (i, x) in xs.iter().enumerate() {
                        println!("x{}={x}", i + 1);
                    }
                    true
                }
                SolveOutcome::NoSolution => {
                    println!("status=no-solution");
                    false
                }
            };
            println!("nodes={}", report.nodes);
            Ok(solved)
        }
        Command::Solvable { group, system, search } => {
            let g = load_group(&group)?;
            let sys = load_system(&system)?;
            let report = solver::solvable_in(&g, &sys, &search.config())?;
            println!("group={} order={}", report.group, g.order());
            let ok = match report.outcome {
                Solvability::SolvableInGroup => {
                    println!("status=solvable");
                    true
                }
                Solvability::NotSolvable(a) => {
                    println!("status=not-solvable");
                    println!("witness={}", named('a', &a));
                    false
                }
            };
            println!("nodes={}", report.nodes);
            Ok(ok)
        }
        Command::Scan { system, max_order, search } => {
            let sys = load_system(&system)?;
            match solver::scan_sys_fin(&sys, max_order, &search.config())? {
                SysFinVerdict::CounterexampleFound { group, constants } => {
                    println!("status=counterexample");
                    println!("group={} order={}", group.name(), group.order());
                    println!("witness={}", named('a', &constants));
                    Ok(false)
                }
                SysFinVerdict::NoCounterexampleUpTo(m) => {
                    println!("status=no-counterexample");
                    println!("max_order={m}");
                    Ok(true)
                }
            }
        }
        Command::Locality { trials, seed, tower } => {
            let spec = tower.as_deref().map(load_tower).transpose()?;
            let s = run_locality_trials(trials, seed, spec.as_ref());
            println!("seed={seed}");
            println!("trials={}", s.trials);
            println!("verified={}", s.verified);
            println!("premise_fails_agree={}", s.premise_fails_agree);
            println!("premise_fails_differ={}", s.premise_fails_differ);
            println!("violations={}", s.violations);
            if let Some(t) = s.first_differing {
                println!("first_differing_trial={t}");
            }
            if let Some(t) = s.first_violation {
                println!("first_violation_trial={t}");
            }
            Ok(s.violations == 0)
        }
        Command::Xn { system, tower, h, assign, level, witnesses } => {
            let sys = load_system(&system)?;
            let spec = load_tower(&tower)?;
            let h = load_group(&h)?;
            let consts: Vec<i64> = parse_assign(&assign, sys.num_constants())?;
            let depth = spec.tower.depth();
            let level = match level {
                None => depth - 1,
                Some(j) if (1..=depth).contains(&j) => j - 1,
                Some(j) => return Err(Usage(format!("level {j} is not in 1..={depth}"))),
            };
            let prob = UniversalProblem::new(h, spec.tower, sys, consts)?;
            let x = compute_x_n(&prob, level, witnesses)?;
            println!("level={} size={}", level + 1, x.len());
            for (i, u) in x.members.iter().enumerate() {
                println!("{}", join(u));
                if let Some(w) = &x.witnesses {
                    for lw in &w[i] {
                        for (f, phi) in &lw.solutions {
                            let tables = |t: &[eqwreath_core::FunctionTable]| {
                                t.iter().map(|t| join(t.values())).collect::<Vec<_>>().join(";")
                            };
                            println!("  level={} f={} phi={}", lw.level + 1, tables(f), tables(phi));
                        }
                    }
                }
            }
            Ok(!x.is_empty())
        }
        Command::Pipeline { system, tower, h, assign, support, probe, scan_max_order } => {
            let sys = load_system(&system)?;
            let spec = load_tower(&tower)?;
            let h = load_group(&h)?;
            let constants: Vec<i64> = parse_assign(&assign, sys.num_constants())?;
            let depth = spec.tower.depth();
            let probe = match probe {
                None => None,
                Some(j) if (1..=depth).contains(&j) => Some(j - 1),
                Some(j) => return Err(Usage(format!("probe level {j} is not in 1..={depth}"))),
            };
            let input = PipelineInput {
                system: sys,
                tower: spec,
                h,
                constants,
                support: parse_support(&support)?,
                probe,
                scan_max_order,
            };
            let report = run_pipeline(&input)?;
            print!("{}", report.text());
            Ok(report.verdict == Verdict::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
