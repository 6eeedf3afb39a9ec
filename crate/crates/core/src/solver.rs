//! Solvability of equation systems in finite groups.
//!
//! A system is solvable in `G` when every assignment of the constants admits
//! an assignment of the variables making every equation trivial. Membership
//! in the class of systems solvable in *all* finite groups cannot be decided
//! by a finite scan; [`scan_sys_fin`] only ever produces counterexamples.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::group::{catalog, Elem, FiniteGroup, GroupError};
use crate::search::{ProductCsp, SearchResult, Term};
use crate::word::{EquationSystem, SymbolKind, Word};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Largest `|G|^n` accepted by [`brute_oracle`].
pub const ORACLE_MAX_ASSIGNMENTS: u128 = 1_000_000;

/// Constant tuples handled per parallel batch in [`solvable_in`].
const CONST_BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("search budget of {budget} nodes exceeded")]
    Budget { budget: u64 },
    #[error("expected {expected} constants, got {got}")]
    ConstantCount { expected: usize, got: usize },
    #[error("element {elem} is not in a group of order {order}")]
    ElementOutOfRange { elem: Elem, order: usize },
    #[error("{0} constant tuples exceed the search budget")]
    TooManyConstantTuples(u128),
    #[error("oracle refuses {0} assignments")]
    OracleTooLarge(u128),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Partial assignments a single search may visit.
    pub node_budget: u64,
    /// Fan the top search level out over the rayon pool.
    pub parallel: bool,
    /// Only try one constant tuple per simultaneous-conjugation orbit.
    pub symmetry_reduction: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_budget: DEFAULT_NODE_BUDGET, parallel: true, symmetry_reduction: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Lexicographically least solution, `x1` most significant.
    Solved(Vec<Elem>),
    NoSolution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solvability {
    SolvableInGroup,
    /// Lexicographically least constant tuple admitting no solution.
    NotSolvable(Vec<Elem>),
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub outcome: T,
    pub group: String,
    /// Nodes a sequential search visits; independent of threading.
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub enum SysFinVerdict {
    CounterexampleFound {
        group: FiniteGroup,
        constants: Vec<Elem>,
    },
    /// Not a membership proof: only the catalog up to this order was tried.
    NoCounterexampleUpTo(usize),
}

/// Encodes a system with fixed constants as a cell search over the variables.
fn build_csp<'g>(g: &'g FiniteGroup, sys: &EquationSystem, consts: &[Elem]) -> ProductCsp<'g> {
    let mut csp = ProductCsp::new(g, sys.num_variables());
    for w in sys.words() {
        csp.add(word_terms(g, w, consts));
    }
    csp
}

fn word_terms<'a>(g: &'a FiniteGroup, w: &'a Word, consts: &'a [Elem]) -> impl Iterator<Item = Term> + 'a {
    w.letters().iter().map(move |l| {
        let i = l.index() as usize - 1;
        match l.kind {
            SymbolKind::Constant if l.is_inverse() => Term::Const(g.inverse(consts[i])),
            SymbolKind::Constant => Term::Const(consts[i]),
            SymbolKind::Variable => Term::Cell { cell: i, inverse: l.is_inverse() },
        }
    })
}

fn check_constants(g: &FiniteGroup, sys: &EquationSystem, consts: &[Elem]) -> Result<(), SolveError> {
    if consts.len() < sys.num_constants() {
        return Err(SolveError::ConstantCount { expected: sys.num_constants(), got: consts.len() });
    }
    if let Some(&elem) = consts.iter().find(|&&c| c >= g.order()) {
        return Err(SolveError::ElementOutOfRange { elem, order: g.order() });
    }
    Ok(())
}

fn solve_counted(
    g: &FiniteGroup,
    sys: &EquationSystem,
    consts: &[Elem],
    cfg: &SolverConfig,
) -> Result<(SolveOutcome, u64), SolveError> {
    let csp = build_csp(g, sys, consts);
    let (nodes, res) = csp.solve(cfg.node_budget, cfg.parallel);
    match res {
        Err(_) => Err(SolveError::Budget { budget: cfg.node_budget }),
        Ok(SearchResult::Exhausted) => Ok((SolveOutcome::NoSolution, nodes)),
        Ok(SearchResult::Found(xs)) => {
            assert!(
                sys.is_satisfied(g, consts, &xs).expect("all symbols assigned"),
                "solver returned a non-solution for {sys} in {}",
                g.name()
            );
            Ok((SolveOutcome::Solved(xs), nodes))
        }
    }
}

/// Searches `G^n` for the lexicographically least solution of `sys` with
/// the given constants, pruning on every equation whose variables are all
/// fixed.
pub fn solve(
    g: &FiniteGroup,
    sys: &EquationSystem,
    consts: &[Elem],
    cfg: &SolverConfig,
) -> Result<SolveReport<SolveOutcome>, SolveError> {
    let start = Instant::now();
    check_constants(g, sys, consts)?;
    let (outcome, nodes) = solve_counted(g, sys, consts, cfg)?;
    Ok(SolveReport { outcome, group: g.name().to_string(), nodes, elapsed: start.elapsed() })
}

/// Encodes `ā` with `a1` as the most significant digit, so that index order
/// is lexicographic order.
fn tuple_index(t: &[Elem], base: usize) -> usize {
    t.iter().fold(0, |acc, &v| acc * base + v)
}

fn tuple_at(mut idx: usize, base: usize, len: usize) -> Vec<Elem> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    t
}

/// Lexicographically least member of each orbit of `G^k` under simultaneous
/// conjugation, in ascending order.
pub fn conjugation_orbit_representatives(g: &FiniteGroup, k: usize) -> Vec<Vec<Elem>> {
    let n = g.order();
    let total = n.pow(k as u32);
    let mut seen = vec![false; total];
    let mut reps = Vec::new();
    for idx in 0..total {
        if seen[idx] {
            continue;
        }
        let t = tuple_at(idx, n, k);
        for c in g.elements() {
            let conj: Vec<Elem> = t.iter().map(|&a| g.conjugate(c, a)).collect();
            seen[tuple_index(&conj, n)] = true;
        }
        reps.push(t);
    }
    reps
}

/// Decides whether `sys` is solvable in `g`, returning the least failing
/// constant tuple otherwise.
pub fn solvable_in(
    g: &FiniteGroup,
    sys: &EquationSystem,
    cfg: &SolverConfig,
) -> Result<SolveReport<Solvability>, SolveError> {
    let start = Instant::now();
    let k = sys.num_constants();
    let total = (g.order() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > cfg.node_budget as u128 || total > usize::MAX as u128 {
        return Err(SolveError::TooManyConstantTuples(total));
    }
    let tuples: Vec<Vec<Elem>> = if cfg.symmetry_reduction {
        conjugation_orbit_representatives(g, k)
    } else {
        (0..total as usize).map(|i| tuple_at(i, g.order(), k)).collect()
    };

    let mut nodes = 0u64;
    for batch in tuples.chunks(CONST_BATCH) {
        let results: Vec<Result<(SolveOutcome, u64), SolveError>> = if cfg.parallel {
            batch.par_iter().map(|t| solve_counted(g, sys, t, cfg)).collect()
        } else {
            batch.iter().map(|t| solve_counted(g, sys, t, cfg)).collect()
        };
        for (t, r) in batch.iter().zip(results) {
            let (outcome, n) = r?;
            nodes += n;
            if outcome == SolveOutcome::NoSolution {
                return Ok(SolveReport {
                    outcome: Solvability::NotSolvable(t.clone()),
                    group: g.name().to_string(),
                    nodes,
                    elapsed: start.elapsed(),
                });
            }
        }
    }
    Ok(SolveReport {
        outcome: Solvability::SolvableInGroup,
        group: g.name().to_string(),
        nodes,
        elapsed: start.elapsed(),
    })
}

/// Runs [`solvable_in`] over the catalog in ascending order and stops at
/// the first group where the system fails.
pub fn scan_sys_fin(sys: &EquationSystem, max_order: usize, cfg: &SolverConfig) -> Result<SysFinVerdict, SolveError> {
    for g in catalog(max_order)? {
        if let Solvability::NotSolvable(constants) = solvable_in(&g, sys, cfg)?.outcome {
            return Ok(SysFinVerdict::CounterexampleFound { group: g, constants });
        }
    }
    Ok(SysFinVerdict::NoCounterexampleUpTo(max_order))
}

/// Plain enumeration of `G^n` in lexicographic order, with no pruning.
pub fn brute_oracle(g: &FiniteGroup, sys: &EquationSystem, consts: &[Elem]) -> Result<SolveOutcome, SolveError> {
    check_constants(g, sys, consts)?;
    let n = sys.num_variables();
    let total = (g.order() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > ORACLE_MAX_ASSIGNMENTS {
        return Err(SolveError::OracleTooLarge(total));
    }
    for idx in 0..total as usize {
        let xs = tuple_at(idx, g.order(), n);
        if sys.is_satisfied(g, consts, &xs).expect("all symbols assigned") {
            return Ok(SolveOutcome::Solved(xs));
        }
    }
    Ok(SolveOutcome::NoSolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    fn sys(text: &str) -> EquationSystem {
        EquationSystem::parse(text).unwrap()
    }

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n)
    }

    #[test]
    fn solve_examples() {
        let cfg = SolverConfig::default();
        let comm = sys("x1 a1 x1^-1 a1^-1");
        let s3 = catalog_group("S3").unwrap();
        for a in s3.elements() {
            assert_eq!(solve(&s3, &comm, &[a], &cfg).unwrap().outcome, SolveOutcome::Solved(vec![0]));
        }
        let sq = sys("x1^2 a1");
        assert_eq!(solve(&z(2), &sq, &[1], &cfg).unwrap().outcome, SolveOutcome::NoSolution);
        assert_eq!(solve(&z(3), &sq, &[1], &cfg).unwrap().outcome, SolveOutcome::Solved(vec![1]));
    }

    #[test]
    fn solve_errors() {
        let cfg = SolverConfig::default();
        let s = sys("x1 a2");
        assert_eq!(solve(&z(3), &s, &[0], &cfg).unwrap_err(), SolveError::ConstantCount { expected: 2, got: 1 });
        assert_eq!(solve(&z(3), &s, &[0, 3], &cfg).unwrap_err(), SolveError::ElementOutOfRange { elem: 3, order: 3 });
        let tight = SolverConfig { node_budget: 5, ..cfg };
        let hard = sys("x1 x2 x3 a1");
        assert_eq!(solve(&z(7), &hard, &[3], &tight).unwrap_err(), SolveError::Budget { budget: 5 });
    }

    #[test]
    fn solvable_in_examples() {
        let cfg = SolverConfig::default();
        let comm = sys("x1 a1 x1^-1 a1^-1");
        for g in catalog(12).unwrap() {
            assert_eq!(solvable_in(&g, &comm, &cfg).unwrap().outcome, Solvability::SolvableInGroup);
        }
        assert_eq!(solvable_in(&z(2), &sys("x1^2 a1"), &cfg).unwrap().outcome, Solvability::NotSolvable(vec![1]));
        assert_eq!(
            solvable_in(&z(2), &sys("x1 a1 x1^-1 a2^-1"), &cfg).unwrap().outcome,
            Solvability::NotSolvable(vec![0, 1])
        );
    }

    #[test]
    fn symmetry_reduction_does_not_change_verdicts() {
        let on = SolverConfig::default();
        let off = SolverConfig { symmetry_reduction: false, parallel: false, ..on };
        let systems = ["x1 a1 x1^-1 a2^-1", "x1^2 a1", "x1^3 a1 x2^2", "x1 a1 x1^-1 a1"];
        for g in catalog(8).unwrap() {
            for s in systems {
                let s = sys(s);
                assert_eq!(
                    solvable_in(&g, &s, &on).unwrap().outcome,
                    solvable_in(&g, &s, &off).unwrap().outcome,
                    "{s} in {}",
                    g.name()
                );
            }
        }
    }

    #[test]
    fn orbit_representatives_partition() {
        let s3 = catalog_group("S3").unwrap();
        let reps = conjugation_orbit_representatives(&s3, 1);
        // three conjugacy classes
        assert_eq!(reps.len(), 3);
        let reps2 = conjugation_orbit_representatives(&s3, 2);
        let mut covered = 0;
        for r in &reps2 {
            let orbit: std::collections::BTreeSet<Vec<Elem>> =
                s3.elements().map(|c| r.iter().map(|&a| s3.conjugate(c, a)).collect()).collect();
            assert_eq!(orbit.iter().next(), Some(r));
            covered += orbit.len();
        }
        assert_eq!(covered, 36);
    }

    #[test]
    fn scan_examples() {
        let cfg = SolverConfig::default();
        match scan_sys_fin(&sys("x1^2 a1"), 8, &cfg).unwrap() {
            SysFinVerdict::CounterexampleFound { group, constants } => {
                assert_eq!(group.name(), "Z2");
                assert_eq!(constants, vec![1]);
            }
            v => panic!("{v:?}"),
        }
        assert!(matches!(
            scan_sys_fin(&sys("x1 a1 x1^-1 a1^-1"), 12, &cfg).unwrap(),
            SysFinVerdict::NoCounterexampleUpTo(12)
        ));
        match scan_sys_fin(&sys("x1 a1 x1^-1 a2^-1"), 8, &cfg).unwrap() {
            SysFinVerdict::CounterexampleFound { group, constants } => {
                assert_eq!((group.name(), constants), ("Z2", vec![0, 1]));
            }
            v => panic!("{v:?}"),
        }
        assert!(matches!(
            scan_sys_fin(&sys("x1"), 17, &cfg),
            Err(SolveError::Group(GroupError::CatalogTooLarge { .. }))
        ));
    }

    #[test]
    fn oracle_examples() {
        let trivial = EquationSystem::new(vec![Word::identity()]).unwrap();
        assert_eq!(brute_oracle(&z(4), &trivial, &[]).unwrap(), SolveOutcome::Solved(vec![]));
        assert_eq!(brute_oracle(&z(2), &sys("x1^2 a1"), &[1]).unwrap(), SolveOutcome::NoSolution);
        assert!(matches!(brute_oracle(&z(16), &sys("x1 x2 x3 x4 x5"), &[]), Err(SolveError::OracleTooLarge(_))));
    }
}
