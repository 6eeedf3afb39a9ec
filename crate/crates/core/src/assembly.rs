//! Assembling a solution over the ambient group from level solutions, and
//! checking it on finite windows.
//!
//! The constants `f̄` are given by a finite support in the ambient group and
//! are the identity elsewhere. The variables `φ̄` are read off the solution
//! at the finest level through its section. At a probe point `x` whose
//! window `x S(ā, ū)` lies in the finest section, the `H`-component of the
//! system only reads defined values and must be the identity.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::group::{
    wreath_product, Elem, FiniteGroup, FunctionTable, Group, WreathElement, WreathGroup, DEFAULT_ORDER_CAP,
};
use crate::solver::{scan_sys_fin, SolverConfig, SysFinVerdict};
use crate::tower::{finite_level_check, SectionFamily, TowerKind, TowerSpec};
use crate::universal::{check_compatibility, compute_x_levels, Deepest, UniversalError, UniversalProblem};
use crate::word::{evaluate, prefix_values, SymbolKind, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssemblyError {
    #[error("bad support entry {entry:?}: {msg}")]
    Support { entry: String, msg: String },
    #[error("support point {point} of f{coord} lies outside the finest section")]
    OutsideSection { coord: usize, point: i64 },
    #[error("the tuple has {got} entries, the system {expected} variables")]
    VariableCount { expected: usize, got: usize },
    #[error("no solution at level {}; the tuple is not in X there", level + 1)]
    NoSolution { level: usize },
    #[error("probe level {} does not exist", level + 1)]
    NoProbe { level: usize },
    #[error(transparent)]
    Universal(#[from] UniversalError),
}

/// One `(coordinate, ambient point, value)` triple of the support of `f̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportEntry {
    /// 0-based constant index.
    pub coord: usize,
    pub point: i64,
    pub value: Elem,
}

/// Parses `f1@0=1,f1@-1=0,...`; an empty string is the empty support.
pub fn parse_support(text: &str) -> Result<Vec<SupportEntry>, AssemblyError> {
    let bad = |entry: &str, msg: &str| AssemblyError::Support { entry: entry.to_string(), msg: msg.to_string() };
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|entry| {
            let rest = entry.strip_prefix('f').ok_or_else(|| bad(entry, "expected f<i>@<point>=<value>"))?;
            let (coord, rest) = rest.split_once('@').ok_or_else(|| bad(entry, "missing '@'"))?;
            let (point, value) = rest.split_once('=').ok_or_else(|| bad(entry, "missing '='"))?;
            let coord: usize = coord.parse().map_err(|_| bad(entry, "bad coordinate"))?;
            if coord == 0 {
                return Err(bad(entry, "coordinates start at 1"));
            }
            Ok(SupportEntry {
                coord: coord - 1,
                point: point.parse().map_err(|_| bad(entry, "bad point"))?,
                value: value.parse().map_err(|_| bad(entry, "bad value"))?,
            })
        })
        .collect()
}

/// A problem with its sections, the constants `f̄` and a tuple `ū` at the
/// finest level.
#[derive(Debug, Clone)]
pub struct AssemblyInstance {
    prob: UniversalProblem,
    sections: SectionFamily,
    f: Vec<BTreeMap<i64, Elem>>,
    u: Vec<Elem>,
}

impl AssemblyInstance {
    pub fn new(
        prob: UniversalProblem,
        sections: SectionFamily,
        support: &[SupportEntry],
        u: Vec<Elem>,
    ) -> Result<Self, AssemblyError> {
        let finest = prob.tower().finest();
        let mut f = vec![BTreeMap::new(); prob.k()];
        for e in support {
            let text = format!("f{}@{}={}", e.coord + 1, e.point, e.value);
            if e.coord >= prob.k() {
                return Err(AssemblyError::Support { entry: text, msg: format!("only {} constants", prob.k()) });
            }
            if e.value >= prob.h().order() {
                return Err(AssemblyError::Support { entry: text, msg: "value outside H".into() });
            }
            if !sections.section(finest).contains(e.point) {
                return Err(AssemblyError::OutsideSection { coord: e.coord + 1, point: e.point });
            }
            f[e.coord].insert(e.point, e.value);
        }
        if u.len() != prob.n() {
            return Err(AssemblyError::VariableCount { expected: prob.n(), got: u.len() });
        }
        Ok(AssemblyInstance { prob, sections, f, u })
    }

    pub fn problem(&self) -> &UniversalProblem {
        &self.prob
    }

    pub fn sections(&self) -> &SectionFamily {
        &self.sections
    }

    pub fn u(&self) -> &[Elem] {
        &self.u
    }

    /// `f_i(p)`, the identity off the support.
    pub fn f_at(&self, i: usize, p: i64) -> Elem {
        self.f[i].get(&p).copied().unwrap_or(0)
    }

    /// Returns a copy with `f_i(p) = value`.
    pub fn with_f(&self, i: usize, p: i64, value: Elem) -> Self {
        let mut out = self.clone();
        out.f[i].insert(p, value);
        out
    }

    /// The pullback of `f̄` to level `j` through `Φ_j`.
    pub fn f_level(&self, j: usize) -> Vec<FunctionTable> {
        let sec = self.sections.section(j);
        (0..self.prob.k()).map(|i| FunctionTable((0..sec.len()).map(|e| self.f_at(i, sec.lift(e))).collect())).collect()
    }

    /// `ū` lifted to the ambient group through the finest section.
    pub fn u_ambient(&self) -> Vec<i64> {
        let sec = self.sections.section(self.prob.tower().finest());
        self.u.iter().map(|&e| sec.lift(e)).collect()
    }

    /// `ū` projected to level `j`.
    pub fn u_at(&self, j: usize) -> Vec<Elem> {
        let map = self.prob.tower().map(self.prob.tower().finest(), j);
        self.u.iter().map(|&e| map.apply(e)).collect()
    }
}

/// The lexicographically least `ψ̄` at level `j` for the pulled-back `f̄`.
pub fn solve_level(inst: &AssemblyInstance, j: usize) -> Result<Option<Vec<FunctionTable>>, AssemblyError> {
    Ok(inst.prob.solve_wreath(j, &inst.f_level(j), &inst.u_at(j))?)
}

/// `φ̄` on the finest section, `φ_i(x) = ψ_i(x_d)` for the level-`d`
/// solution `ψ̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssembledSolution {
    /// Level whose solution supplied every value.
    pub source_level: usize,
    pub psi: Vec<FunctionTable>,
    pub phi: Vec<BTreeMap<i64, Elem>>,
}

pub fn assemble(inst: &AssemblyInstance) -> Result<AssembledSolution, AssemblyError> {
    let d = inst.prob.tower().finest();
    let psi = solve_level(inst, d)?.ok_or(AssemblyError::NoSolution { level: d })?;
    let sec = inst.sections.section(d);
    let phi = psi.iter().map(|t| (0..sec.len()).map(|e| (sec.lift(e), t.get(e))).collect()).collect();
    Ok(AssembledSolution { source_level: d, psi, phi })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowOutcome {
    /// The `H`-component of each equation at `x`.
    InWindow(Vec<Elem>),
    OutOfWindow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowReport {
    pub probe_level: usize,
    /// Probe points in ascending order.
    pub entries: Vec<(i64, WindowOutcome)>,
    /// Group components at every level.
    pub group_checks: Vec<bool>,
}

impl WindowReport {
    pub fn all_identity(&self) -> bool {
        self.entries.iter().all(|(_, o)| match o {
            WindowOutcome::InWindow(d) => d.iter().all(|&v| v == 0),
            WindowOutcome::OutOfWindow => true,
        })
    }

    pub fn in_window(&self) -> usize {
        self.entries.iter().filter(|(_, o)| matches!(o, WindowOutcome::InWindow(_))).count()
    }
}

/// The `H`-component at `x` of `w` evaluated in `H wr Γ`, reading the
/// constants from `f` and the variables from `phi`; `None` if a value
/// outside the finest section would be needed.
fn h_component(
    inst: &AssemblyInstance,
    phi: &[BTreeMap<i64, Elem>],
    w: &Word,
    a: &[i64],
    u: &[i64],
    x: i64,
) -> Option<Elem> {
    let amb = inst.prob.tower().ambient();
    let h = inst.prob.h();
    let finest = inst.sections.section(inst.prob.tower().finest());
    let mut s = 0i64;
    let mut acc = 0;
    for letter in w.letters() {
        let i = letter.index() as usize - 1;
        let g = match letter.kind {
            SymbolKind::Constant => a[i],
            SymbolKind::Variable => u[i],
        };
        if letter.is_inverse() {
            s = amb.mul(&s, &amb.inv(&g));
        }
        let at = amb.mul(&x, &s);
        if !finest.contains(at) {
            return None;
        }
        let v = match letter.kind {
            SymbolKind::Constant => inst.f_at(i, at),
            SymbolKind::Variable => phi[i][&at],
        };
        acc = h.op(acc, if letter.is_inverse() { h.inverse(v) } else { v });
        if !letter.is_inverse() {
            s = amb.mul(&s, &g);
        }
    }
    Some(acc)
}

/// Evaluates `δ̄(x)` for each point `x` of `Φ_probe` whose window
/// `x S(ā, ū)` lies in the finest section.
pub fn verify_window(
    inst: &AssemblyInstance,
    sol: &AssembledSolution,
    probe: usize,
) -> Result<WindowReport, AssemblyError> {
    let tower = inst.prob.tower();
    if probe >= tower.depth() {
        return Err(AssemblyError::NoProbe { level: probe });
    }
    let amb = tower.ambient();
    let a = inst.prob.constants();
    let u = inst.u_ambient();
    let words = inst.prob.system().words();
    let s = prefix_values(&inst.prob.system().prefix_union(), &amb, a, &u).expect("all symbols assigned");
    let finest = inst.sections.section(tower.finest());
    let entries = inst
        .sections
        .section(probe)
        .points()
        .into_par_iter()
        .map(|x| {
            let inside = s.iter().all(|t| finest.contains(amb.mul(&x, t)));
            let outcome = if inside {
                let delta = words
                    .iter()
                    .map(|w| h_component(inst, &sol.phi, w, a, &u, x).expect("window inside the section"))
                    .collect();
                WindowOutcome::InWindow(delta)
            } else {
                WindowOutcome::OutOfWindow
            };
            (x, outcome)
        })
        .collect();
    let group_checks = finite_level_check(inst.prob.system(), a, &u, tower).expect("all symbols assigned");
    Ok(WindowReport { probe_level: probe, entries, group_checks })
}

/// Comparison of window values with evaluation in the materialized
/// `H wr L_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossValidation {
    Checked { group: String, order: usize, points: usize, mismatches: usize },
    Skipped { order: Option<u128> },
}

pub fn cross_validate(inst: &AssemblyInstance, sol: &AssembledSolution, report: &WindowReport) -> CrossValidation {
    let tower = inst.prob.tower();
    let d = tower.finest();
    let l = tower.level(d);
    let h = inst.prob.h();
    let wr = WreathGroup::new(h.clone(), l.clone());
    let Ok(big) = wreath_product(h, l, DEFAULT_ORDER_CAP) else {
        return CrossValidation::Skipped { order: wr.order() };
    };
    let a = inst.prob.constants_at(d);
    let consts: Vec<Elem> =
        inst.f_level(d).into_iter().zip(&a).map(|(f, &g)| wr.encode(&WreathElement { f, g })).collect();
    let vars: Vec<Elem> =
        sol.psi.iter().zip(&inst.u_at(d)).map(|(f, &g)| wr.encode(&WreathElement { f: f.clone(), g })).collect();
    let values: Vec<WreathElement> = inst
        .prob
        .system()
        .words()
        .iter()
        .map(|w| wr.decode(evaluate(w, &big, &consts, &vars).expect("all symbols assigned")))
        .collect();
    let mut points = 0;
    let mut mismatches = 0;
    for (x, outcome) in &report.entries {
        if let WindowOutcome::InWindow(delta) = outcome {
            points += 1;
            let xd = tower.project(d, *x);
            if values.iter().zip(delta).any(|(v, &dv)| v.f.get(xd) != dv) {
                mismatches += 1;
            }
        }
    }
    CrossValidation::Checked { group: big.name().to_string(), order: big.order(), points, mismatches }
}

/// Everything the pipeline needs.
#[derive(Debug, Clone)]
pub struct PipelineInput {
    pub system: crate::word::EquationSystem,
    pub tower: TowerSpec,
    pub h: FiniteGroup,
    pub constants: Vec<i64>,
    pub support: Vec<SupportEntry>,
    /// Defaults to the second-finest level (the finest for one level).
    pub probe: Option<usize>,
    pub scan_max_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Some `X_N` is empty.
    Refuted,
    Fail,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub lines: Vec<String>,
    pub verdict: Verdict,
}

impl PipelineReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        out
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Scan, level sets, compatibility, deepest member, assembly and window
/// checks, as a line-oriented report. Levels are printed 1-based.
pub fn run_pipeline(input: &PipelineInput) -> Result<PipelineReport, AssemblyError> {
    let mut lines = Vec::new();
    let tower = &input.tower.tower;
    lines.push(format!("system={}", input.system));
    lines.push(match tower.kind() {
        TowerKind::Integer { moduli } => format!("tower=ztower {}", join(moduli)),
        TowerKind::Explicit => {
            format!("tower=explicit {}", join(&tower.levels().iter().map(|g| g.order()).collect::<Vec<_>>()))
        }
    });
    lines.push(format!("H={} order={}", input.h.name(), input.h.order()));

    let cfg = SolverConfig::default();
    lines.push(match scan_sys_fin(&input.system, input.scan_max_order, &cfg) {
        Ok(SysFinVerdict::CounterexampleFound { group, constants }) => {
            format!("scan=counterexample group={} a={}", group.name(), join(&constants))
        }
        Ok(SysFinVerdict::NoCounterexampleUpTo(m)) => format!("scan=none max_order={m}"),
        Err(e) => format!("scan=error {e}"),
    });

    let prob = UniversalProblem::new(input.h.clone(), tower.clone(), input.system.clone(), input.constants.clone())?;
    for j in 0..tower.depth() {
        lines.push(format!("budget[{}]={}", j + 1, prob.level_work(j)));
    }
    let sets = compute_x_levels(&prob, false)?;
    for s in &sets {
        lines.push(format!("xn[{}]={}", s.level + 1, s.len()));
    }
    let mut compat_ok = true;
    for j in 1..sets.len() {
        if let Err(u) = check_compatibility(tower, &sets[j], &sets[j - 1]) {
            compat_ok = false;
            lines.push(format!("compat[{}->{}]=violated u={}", j + 1, j, join(&u)));
        }
    }
    lines.push(format!("compat={}", if compat_ok { "ok" } else { "violated" }));

    let u = match Deepest::from_levels(&prob, &sets) {
        Deepest::AllEmpty { level, hint } => {
            lines.push(format!("empty level={} search={hint}", level + 1));
            lines.push("verdict=FAIL".into());
            return Ok(PipelineReport { lines, verdict: Verdict::Refuted });
        }
        Deepest::Member { u, .. } => u,
    };
    let inst = AssemblyInstance::new(prob, input.tower.sections.clone(), &input.support, u)?;
    lines.push(format!("u={} lift={}", join(inst.u()), join(&inst.u_ambient())));

    let sol = assemble(&inst)?;
    lines.push(format!(
        "assembled level={} phi={}",
        sol.source_level + 1,
        sol.psi.iter().map(|t| join(t.values())).collect::<Vec<_>>().join(";")
    ));
    let probe = input.probe.unwrap_or(tower.depth().saturating_sub(2));
    let report = verify_window(&inst, &sol, probe)?;
    for (x, outcome) in &report.entries {
        lines.push(match outcome {
            WindowOutcome::InWindow(d) if d.iter().all(|&v| v == 0) => {
                format!("window[{}] x={x} delta=identity", probe + 1)
            }
            WindowOutcome::InWindow(d) => format!("window[{}] x={x} delta={}", probe + 1, join(d)),
            WindowOutcome::OutOfWindow => format!("window[{}] x={x} out-of-window", probe + 1),
        });
    }
    let cross = cross_validate(&inst, &sol, &report);
    let cross_ok = match &cross {
        CrossValidation::Checked { group, order, points, mismatches } => {
            lines.push(format!("crossval group={group} order={order} points={points} mismatches={mismatches}"));
            *mismatches == 0
        }
        CrossValidation::Skipped { order } => {
            let order = order.map_or("overflow".to_string(), |o| o.to_string());
            lines.push(format!("crossval=skipped order={order}"));
            true
        }
    };
    let groups_ok = report.group_checks.iter().all(|&b| b);
    lines.push(format!(
        "levels={}",
        report.group_checks.iter().map(|&b| if b { "ok" } else { "fail" }).collect::<Vec<_>>().join(",")
    ));
    let pass = compat_ok && report.all_identity() && cross_ok && groups_ok;
    lines.push(format!("verdict={}", if pass { "PASS" } else { "FAIL" }));
    Ok(PipelineReport { lines, verdict: if pass { Verdict::Pass } else { Verdict::Fail } })
}
