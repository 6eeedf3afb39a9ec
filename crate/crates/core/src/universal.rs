//! Level sets of universal solutions.
//!
//! For a tower `L_0 <- ... <- L_d`, a group `H` and constants `ā`, the set
//! `X_N` contains the tuples `ū ∈ L_N^n` such that for every coarser level
//! `M` and every `f̄ ∈ (H^{L_M})^k` some `φ̄ ∈ (H^{L_M})^n` solves
//! `w̄((f̄, ā_M), (φ̄, ū_M)) = 1` in `H wr L_M`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::group::{semidirect_product, Elem, FiniteGroup, FunctionTable, GroupAction, GroupError};
use crate::search::{ProductCsp, SearchResult, Term};
use crate::solver::{SolveError, DEFAULT_NODE_BUDGET};
use crate::tower::QuotientTower;
use crate::word::{EquationSystem, SymbolKind};

/// Default cap on `|L_M|^n |H|^{(k+n)|L_M|}` for a single level.
pub const DEFAULT_XN_BUDGET: u128 = 1 << 28;

/// Largest `D_N ⋊ L_N` materialized by [`micro_projection_check`].
pub const MICRO_MAX_ORDER: usize = 1_000_000;

/// Largest number of variable tuples enumerated in `D_N ⋊ L_N`.
const MICRO_MAX_TUPLES: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniversalError {
    #[error("level {} needs about {work} steps, over the budget of {budget}", level + 1)]
    Budget { level: usize, work: u128, budget: u128 },
    #[error("expected {expected} constants, got {got}")]
    ConstantCount { expected: usize, got: usize },
    #[error("{0} is not a point of the ambient group")]
    NotAmbient(i64),
    #[error("no level {} in a tower of depth {depth}", level + 1)]
    NoLevel { level: usize, depth: usize },
    #[error("universal tuple needs {0} coordinates")]
    TupleTooLarge(u128),
    #[error("the materialized group would have {0} tuples to enumerate")]
    MicroTooLarge(u128),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A system, a tower, a coefficient group `H` and ambient constants.
#[derive(Debug, Clone)]
pub struct UniversalProblem {
    h: FiniteGroup,
    tower: QuotientTower,
    system: EquationSystem,
    constants: Vec<i64>,
    budget: u128,
}

impl UniversalProblem {
    pub fn new(
        h: FiniteGroup,
        tower: QuotientTower,
        system: EquationSystem,
        constants: Vec<i64>,
    ) -> Result<Self, UniversalError> {
        if constants.len() != system.num_constants() {
            return Err(UniversalError::ConstantCount { expected: system.num_constants(), got: constants.len() });
        }
        if let Some(&p) = constants.iter().find(|&&p| !tower.is_ambient_point(p)) {
            return Err(UniversalError::NotAmbient(p));
        }
        Ok(UniversalProblem { h, tower, system, constants, budget: DEFAULT_XN_BUDGET })
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn tower(&self) -> &QuotientTower {
        &self.tower
    }

    pub fn system(&self) -> &EquationSystem {
        &self.system
    }

    pub fn constants(&self) -> &[i64] {
        &self.constants
    }

    pub fn k(&self) -> usize {
        self.system.num_constants()
    }

    pub fn n(&self) -> usize {
        self.system.num_variables()
    }

    /// `ā` projected to level `j`.
    pub fn constants_at(&self, j: usize) -> Vec<Elem> {
        self.tower.project_all(j, &self.constants)
    }

    /// `|L_j|^n |H|^{(k+n)|L_j|}`, saturating.
    pub fn level_work(&self, j: usize) -> u128 {
        let l = self.tower.level(j).order() as u128;
        let h = self.h.order() as u128;
        let outer = l.checked_pow(self.n() as u32);
        let inner = u32::try_from((self.k() + self.n()) as u128 * l).ok().and_then(|e| h.checked_pow(e));
        outer.zip(inner).and_then(|(a, b)| a.checked_mul(b)).unwrap_or(u128::MAX)
    }

    /// Fails on the first level up to `upto` whose work exceeds the budget.
    pub fn check_budget(&self, upto: usize) -> Result<(), UniversalError> {
        self.check_level(upto)?;
        for j in 0..=upto {
            let work = self.level_work(j);
            if work > self.budget {
                return Err(UniversalError::Budget { level: j, work, budget: self.budget });
            }
        }
        Ok(())
    }

    fn check_level(&self, j: usize) -> Result<(), UniversalError> {
        if j >= self.tower.depth() {
            return Err(UniversalError::NoLevel { level: j, depth: self.tower.depth() });
        }
        Ok(())
    }

    /// The lexicographically least `φ̄` solving the system in `H wr L_j`
    /// with constants `(f̄, ā_j)` and variables `(φ̄, v)`, or `None`.
    pub fn solve_wreath(
        &self,
        j: usize,
        f: &[FunctionTable],
        v: &[Elem],
    ) -> Result<Option<Vec<FunctionTable>>, UniversalError> {
        self.check_level(j)?;
        let l = self.tower.level(j);
        let a = self.constants_at(j);
        if !self.system.is_satisfied(l, &a, v).expect("all symbols assigned") {
            return Ok(None);
        }
        let csp = wreath_csp(&self.h, l, &self.system, &a, f, v);
        match csp.solve(DEFAULT_NODE_BUDGET, false).1 {
            Err(_) => Err(SolveError::Budget { budget: DEFAULT_NODE_BUDGET }.into()),
            Ok(SearchResult::Exhausted) => Ok(None),
            Ok(SearchResult::Found(cells)) => {
                Ok(Some(cells.chunks(l.order()).map(|c| FunctionTable(c.to_vec())).collect()))
            }
        }
    }

    /// Whether `v ∈ L_j^n` admits a solution for every `f̄` at level `j`,
    /// with the solutions when `retain` is set.
    fn level_condition(&self, j: usize, v: &[Elem], retain: bool) -> Result<LevelVerdict, UniversalError> {
        let l = self.tower.level(j);
        if !self.system.is_satisfied(l, &self.constants_at(j), v).expect("all symbols assigned") {
            return Ok(LevelVerdict { good: false, witnesses: Vec::new() });
        }
        let mut witnesses = Vec::new();
        for f in all_function_tuples(self.h.order(), self.k(), l.order()) {
            match self.solve_wreath(j, &f, v)? {
                None => return Ok(LevelVerdict { good: false, witnesses: Vec::new() }),
                Some(phi) if retain => witnesses.push((f, phi)),
                Some(_) => {}
            }
        }
        Ok(LevelVerdict { good: true, witnesses })
    }
}

struct LevelVerdict {
    good: bool,
    witnesses: Vec<(Vec<FunctionTable>, Vec<FunctionTable>)>,
}

/// Every `f̄ ∈ (H^L)^k` in code order; the code of `f̄` is that of the
/// concatenated table `f_1 f_2 ... f_k`.
pub fn all_function_tuples(h_order: usize, k: usize, len: usize) -> impl Iterator<Item = Vec<FunctionTable>> {
    FunctionTable::all(h_order, k * len).map(move |t| split_tables(&t, len))
}

fn split_tables(t: &FunctionTable, len: usize) -> Vec<FunctionTable> {
    if len == 0 {
        return Vec::new();
    }
    t.values().chunks(len).map(|c| FunctionTable(c.to_vec())).collect()
}

/// The `H`-components of the system in `H wr L` at every point, as cell
/// constraints on `φ̄` (cell `i |L| + x` is `φ_i(x)`).
pub(crate) fn wreath_csp<'h>(
    h: &'h FiniteGroup,
    l: &FiniteGroup,
    sys: &EquationSystem,
    a: &[Elem],
    f: &[FunctionTable],
    v: &[Elem],
) -> ProductCsp<'h> {
    let len = l.order();
    let mut csp = ProductCsp::new(h, sys.num_variables() * len);
    for w in sys.words() {
        for x in l.elements() {
            let mut s = 0;
            let mut terms = Vec::with_capacity(w.len());
            for letter in w.letters() {
                let i = letter.index() as usize - 1;
                let g = match letter.kind {
                    SymbolKind::Constant => a[i],
                    SymbolKind::Variable => v[i],
                };
                if letter.is_inverse() {
                    s = l.op(s, l.inverse(g));
                }
                let at = l.op(x, s);
                terms.push(match letter.kind {
                    SymbolKind::Constant if letter.is_inverse() => Term::Const(h.inverse(f[i].get(at))),
                    SymbolKind::Constant => Term::Const(f[i].get(at)),
                    SymbolKind::Variable => Term::Cell { cell: i * len + at, inverse: letter.is_inverse() },
                });
                if !letter.is_inverse() {
                    s = l.op(s, g);
                }
            }
            csp.add(terms);
        }
    }
    csp
}

/// Solutions kept for one member at one level: `(f̄, φ̄)` for every `f̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelWitness {
    pub level: usize,
    pub solutions: Vec<(Vec<FunctionTable>, Vec<FunctionTable>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XnSet {
    pub level: usize,
    /// Sorted lexicographically.
    pub members: Vec<Vec<Elem>>,
    /// Per member, one entry per level up to `level`, when retained.
    pub witnesses: Option<Vec<Vec<LevelWitness>>>,
}

impl XnSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: &[Elem]) -> bool {
        self.members.binary_search_by(|m| m.as_slice().cmp(u)).is_ok()
    }
}

pub(crate) fn tuple_at(mut idx: usize, base: usize, len: usize) -> Vec<Elem> {
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    v
}

fn tuple_index(v: &[Elem], base: usize) -> usize {
    v.iter().fold(0, |acc, &x| acc * base + x)
}

struct GoodSet {
    good: Vec<bool>,
    witnesses: Vec<Vec<(Vec<FunctionTable>, Vec<FunctionTable>)>>,
}

fn good_set(prob: &UniversalProblem, j: usize, retain: bool) -> Result<GoodSet, UniversalError> {
    let l = prob.tower.level(j).order();
    let count = l.pow(prob.n() as u32);
    let verdicts: Vec<LevelVerdict> = (0..count)
        .into_par_iter()
        .map(|idx| prob.level_condition(j, &tuple_at(idx, l, prob.n()), retain))
        .collect::<Result<_, _>>()?;
    let good = verdicts.iter().map(|v| v.good).collect();
    let witnesses = verdicts.into_iter().map(|v| v.witnesses).collect();
    Ok(GoodSet { good, witnesses })
}

/// `X_j` for every level `j` of the tower, coarsest first.
pub fn compute_x_levels(prob: &UniversalProblem, retain_witnesses: bool) -> Result<Vec<XnSet>, UniversalError> {
    compute_upto(prob, prob.tower.finest(), retain_witnesses)
}

/// `X_N` by exhaustive quantification. The budget is checked for every
/// level up to `level` before any search starts.
pub fn compute_x_n(prob: &UniversalProblem, level: usize, retain_witnesses: bool) -> Result<XnSet, UniversalError> {
    Ok(compute_upto(prob, level, retain_witnesses)?.pop().expect("at least one level"))
}

fn compute_upto(prob: &UniversalProblem, upto: usize, retain: bool) -> Result<Vec<XnSet>, UniversalError> {
    prob.check_budget(upto)?;
    let tower = &prob.tower;
    let n = prob.n();
    let mut goods: Vec<GoodSet> = Vec::new();
    let mut sets = Vec::new();
    for j in 0..=upto {
        goods.push(good_set(prob, j, retain)?);
        let l = tower.level(j).order();
        let mut members = Vec::new();
        let mut witnesses = Vec::new();
        for idx in 0..l.pow(n as u32) {
            let u = tuple_at(idx, l, n);
            let coarse: Vec<usize> = (0..=j)
                .map(|m| {
                    let um: Vec<Elem> = u.iter().map(|&x| tower.map(j, m).apply(x)).collect();
                    tuple_index(&um, tower.level(m).order())
                })
                .collect();
            if coarse.iter().enumerate().all(|(m, &ci)| goods[m].good[ci]) {
                if retain {
                    witnesses.push(
                        coarse
                            .iter()
                            .enumerate()
                            .map(|(m, &ci)| LevelWitness { level: m, solutions: goods[m].witnesses[ci].clone() })
                            .collect(),
                    );
                }
                members.push(u);
            }
        }
        sets.push(XnSet { level: j, members, witnesses: retain.then_some(witnesses) });
    }
    Ok(sets)
}

/// Checks that every member of `fine` projects into `coarse`; returns the
/// first violator otherwise.
pub fn check_compatibility(tower: &QuotientTower, fine: &XnSet, coarse: &XnSet) -> Result<(), Vec<Elem>> {
    assert!(coarse.level <= fine.level, "levels out of order");
    let map = tower.map(fine.level, coarse.level);
    for u in &fine.members {
        let down: Vec<Elem> = u.iter().map(|&x| map.apply(x)).collect();
        if !coarse.contains(&down) {
            return Err(u.clone());
        }
    }
    Ok(())
}

/// One block of coordinates of a universal tuple, for one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub level: usize,
    pub level_order: usize,
    /// `|H|^{k |L|}`.
    pub coords: usize,
    /// First cell of the block.
    pub offset: usize,
}

impl Block {
    pub fn cell(&self, coord: usize, x: Elem) -> usize {
        self.offset + coord * self.level_order + x
    }
}

/// A tuple `f̄ ∈ (H^C)^k` over the cells `C = ⊔_M ⊔_{c < m_M} L_M` whose
/// coordinate `c` of block `M` is the `c`-th element of `(H^{L_M})^k`.
#[derive(Debug, Clone)]
pub struct UniversalTuple {
    h: FiniteGroup,
    k: usize,
    blocks: Vec<Block>,
    cells: usize,
    f: Vec<FunctionTable>,
}

/// Builds the universal tuple for levels `0..=upto` of `tower`, refusing
/// more than `max_cells` cells.
pub fn build_universal_tuple(
    h: &FiniteGroup,
    k: usize,
    tower: &QuotientTower,
    upto: usize,
    max_cells: usize,
) -> Result<UniversalTuple, UniversalError> {
    let mut blocks = Vec::new();
    let mut cells: u128 = 0;
    for j in 0..=upto {
        let level_order = tower.level(j).order();
        let coords =
            u32::try_from(k * level_order).ok().and_then(|e| (h.order() as u128).checked_pow(e)).unwrap_or(u128::MAX);
        let size = coords.saturating_mul(level_order as u128);
        if cells.saturating_add(size) > max_cells as u128 {
            return Err(UniversalError::TupleTooLarge(cells.saturating_add(size)));
        }
        blocks.push(Block { level: j, level_order, coords: coords as usize, offset: cells as usize });
        cells += size;
    }
    let cells = cells as usize;
    let mut f = vec![FunctionTable(vec![0; cells]); k];
    for b in &blocks {
        for (c, tables) in all_function_tuples(h.order(), k, b.level_order).enumerate() {
            for (i, t) in tables.iter().enumerate() {
                for x in 0..b.level_order {
                    f[i].0[b.cell(c, x)] = t.get(x);
                }
            }
        }
    }
    let tuple = UniversalTuple { h: h.clone(), k, blocks, cells, f };
    tuple.validate();
    Ok(tuple)
}

impl UniversalTuple {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn tables(&self) -> &[FunctionTable] {
        &self.f
    }

    /// The `k` functions `L_M -> H` read off coordinate `c` of a block.
    pub fn projection(&self, block: &Block, c: usize) -> Vec<FunctionTable> {
        self.f
            .iter()
            .map(|t| FunctionTable((0..block.level_order).map(|x| t.get(block.cell(c, x))).collect()))
            .collect()
    }

    /// Asserts that each block's projections enumerate `(H^{L_M})^k`
    /// exactly once.
    pub fn validate(&self) {
        for b in &self.blocks {
            let mut seen = vec![false; b.coords];
            for c in 0..b.coords {
                let joined: Vec<Elem> = self.projection(b, c).iter().flat_map(|t| t.0.clone()).collect();
                let code = FunctionTable(joined).encode(self.h.order());
                assert!(!seen[code], "coordinate repeated in block {}", b.level);
                seen[code] = true;
            }
            assert!(seen.iter().all(|&s| s), "block {} misses a coordinate", b.level);
        }
        assert_eq!(self.f.len(), self.k);
    }
}

/// Result of solving the single system over `D_N ⋊ L_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MicroReport {
    pub group_order: usize,
    /// `ū`-parts of all solutions, sorted.
    pub projection: Vec<Vec<Elem>>,
    pub x_n: Vec<Vec<Elem>>,
}

impl MicroReport {
    pub fn matches(&self) -> bool {
        self.projection == self.x_n
    }
}

/// Materializes `D_N ⋊ L_N` with `D_N = H^C` for the universal tuple's
/// cells, solves the system with constants `(f̄, ā_N)` by enumeration and
/// compares the projection of its solution set with `X_N`.
pub fn micro_projection_check(prob: &UniversalProblem, level: usize) -> Result<MicroReport, UniversalError> {
    prob.check_level(level)?;
    let tower = &prob.tower;
    let g = tower.level(level);
    let tuple = build_universal_tuple(&prob.h, prob.k(), tower, level, 64)?;
    let d = FiniteGroup::power(&prob.h, tuple.cells(), MICRO_MAX_ORDER)?;
    let h_order = prob.h.order();
    let mut table = Vec::with_capacity(g.order() * d.order());
    for a in g.elements() {
        for code in d.elements() {
            let src = FunctionTable::decode(code, h_order, tuple.cells());
            let mut dst = vec![0; tuple.cells()];
            for b in tuple.blocks() {
                let shift = tower.map(level, b.level).apply(a);
                let lm = tower.level(b.level);
                for c in 0..b.coords {
                    for x in lm.elements() {
                        dst[b.cell(c, x)] = src.get(b.cell(c, lm.op(x, shift)));
                    }
                }
            }
            table.push(FunctionTable(dst).encode(h_order) as u32);
        }
    }
    let act = GroupAction::new(g.clone(), d.clone(), table)?;
    let dg = semidirect_product(&d, g, &act, MICRO_MAX_ORDER)?;
    let tuples = (dg.order() as u128).checked_pow(prob.n() as u32).unwrap_or(u128::MAX);
    if tuples > MICRO_MAX_TUPLES {
        return Err(UniversalError::MicroTooLarge(tuples));
    }
    let a = prob.constants_at(level);
    let consts: Vec<Elem> = tuple.tables().iter().zip(&a).map(|(f, &ai)| f.encode(h_order) * g.order() + ai).collect();
    let mut projection = BTreeSet::new();
    for idx in 0..tuples as usize {
        let xs = tuple_at(idx, dg.order(), prob.n());
        if prob.system.is_satisfied(&dg, &consts, &xs).expect("all symbols assigned") {
            projection.insert(xs.iter().map(|&x| x % g.order()).collect::<Vec<_>>());
        }
    }
    let x_n = compute_x_n(prob, level, false)?.members;
    Ok(MicroReport { group_order: dg.order(), projection: projection.into_iter().collect(), x_n })
}

/// Where a refutation can be looked for after `X_N = ∅`: the group
/// `H^C ⋊ L_N` built from the universal tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutationHint {
    pub level: usize,
    pub h_name: String,
    pub level_name: String,
    /// Number of cells `C`, if it fits.
    pub cells: Option<u128>,
}

impl fmt::Display for RefutationHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cells {
            Some(c) => write!(f, "{}^{} : {}", self.h_name, c, self.level_name),
            None => write!(f, "{}^(too many) : {}", self.h_name, self.level_name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deepest {
    /// The least member of `X` at the finest level.
    Member { level: usize, u: Vec<Elem> },
    /// `X` is empty from `level` on.
    AllEmpty { level: usize, hint: RefutationHint },
}

impl Deepest {
    pub fn from_levels(prob: &UniversalProblem, sets: &[XnSet]) -> Deepest {
        if let Some(empty) = sets.iter().find(|s| s.is_empty()) {
            let level = empty.level;
            let mut cells: Option<u128> = Some(0);
            for j in 0..=level {
                let l = prob.tower.level(j).order() as u128;
                let coords =
                    u32::try_from(prob.k() as u128 * l).ok().and_then(|e| (prob.h.order() as u128).checked_pow(e));
                cells = cells.zip(coords).and_then(|(acc, m)| m.checked_mul(l)?.checked_add(acc));
            }
            let hint = RefutationHint {
                level,
                h_name: prob.h.name().to_string(),
                level_name: prob.tower.level(level).name().to_string(),
                cells,
            };
            return Deepest::AllEmpty { level, hint };
        }
        let last = sets.last().expect("at least one level");
        Deepest::Member { level: last.level, u: last.members[0].clone() }
    }
}

/// The least member of `X` at the finest level, or the first empty level.
pub fn deepest_nonempty_member(prob: &UniversalProblem) -> Result<Deepest, UniversalError> {
    let sets = compute_x_levels(prob, false)?;
    Ok(Deepest::from_levels(prob, &sets))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(sys: &str, h: usize, moduli: &[u64], a: &[i64]) -> UniversalProblem {
        UniversalProblem::new(
            FiniteGroup::cyclic(h),
            QuotientTower::integer(moduli).unwrap(),
            EquationSystem::parse(sys).unwrap(),
            a.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn forced_solution_levels() {
        let p = problem("x1 a1^-1", 2, &[2, 4], &[2]);
        let sets = compute_x_levels(&p, false).unwrap();
        assert_eq!(sets[0].members, vec![vec![0]]);
        assert_eq!(sets[1].members, vec![vec![2]]);
        check_compatibility(p.tower(), &sets[1], &sets[0]).unwrap();
        assert_eq!(deepest_nonempty_member(&p).unwrap(), Deepest::Member { level: 1, u: vec![2] });
    }

    #[test]
    fn commutator_with_trivial_h_is_everything() {
        let p = problem("x1 a1 x1^-1 a1^-1", 1, &[2, 6], &[5]);
        let x = compute_x_n(&p, 1, false).unwrap();
        assert_eq!(x.members, (0..6).map(|u| vec![u]).collect::<Vec<_>>());
    }

    #[test]
    fn square_system_is_empty() {
        let p = problem("x1^2 a1", 2, &[2], &[1]);
        assert!(compute_x_n(&p, 0, false).unwrap().is_empty());
        match deepest_nonempty_member(&p).unwrap() {
            Deepest::AllEmpty { level: 0, hint } => assert_eq!(hint.to_string(), "Z2^8 : Z2"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn budget_is_checked_up_front() {
        let p = problem("x1 a1^-1", 2, &[2, 4, 8], &[1]).with_budget(2000);
        assert_eq!(
            compute_x_n(&p, 2, false).unwrap_err(),
            UniversalError::Budget { level: 2, work: 8 * (1 << 16), budget: 2000 }
        );
        assert_eq!(p.level_work(0), 2 * 16);
    }

    #[test]
    fn problem_validation() {
        let t = QuotientTower::integer(&[2]).unwrap();
        let s = EquationSystem::parse("x1 a1").unwrap();
        assert!(matches!(
            UniversalProblem::new(FiniteGroup::cyclic(2), t, s, vec![]),
            Err(UniversalError::ConstantCount { expected: 1, got: 0 })
        ));
    }

    #[test]
    fn universal_tuple_sizes() {
        let t = QuotientTower::integer(&[2]).unwrap();
        let u = build_universal_tuple(&FiniteGroup::cyclic(2), 1, &t, 0, 1 << 20).unwrap();
        assert_eq!(u.blocks()[0].coords, 4);
        assert_eq!(u.cells(), 8);
        let u = build_universal_tuple(&FiniteGroup::trivial(), 1, &t, 0, 1 << 20).unwrap();
        assert_eq!(u.blocks()[0].coords, 1);
        let t = QuotientTower::integer(&[2, 4]).unwrap();
        let u = build_universal_tuple(&FiniteGroup::cyclic(2), 2, &t, 1, 1 << 20).unwrap();
        assert_eq!(u.blocks()[1].coords, 256);
        assert_eq!(u.cells(), 16 * 2 + 256 * 4);
        assert!(build_universal_tuple(&FiniteGroup::cyclic(2), 2, &t, 1, 100).is_err());
    }

    #[test]
    fn micro_examples() {
        for sys in ["x1 a1^-1", "x1 a1 x1^-1 a1^-1", "x1^2 a1"] {
            for a in 0..2 {
                let p = problem(sys, 2, &[2], &[a]);
                let r = micro_projection_check(&p, 0).unwrap();
                assert_eq!(r.group_order, 512);
                assert!(r.matches(), "{sys} a={a}: {r:?}");
            }
        }
        let p = problem("x1^2", 2, &[2], &[]);
        let r = micro_projection_check(&p, 0).unwrap();
        assert_eq!(r.group_order, 8);
        assert!(r.matches() && r.x_n.contains(&vec![0]));
        let p = problem("x1 a1^-1", 2, &[2], &[1]);
        assert_eq!(micro_projection_check(&p, 0).unwrap().x_n, vec![vec![1]]);
        let p = problem("x1 a1^-1", 1, &[2], &[1]);
        assert_eq!(micro_projection_check(&p, 0).unwrap().group_order, 2);
    }

    #[test]
    fn witnesses_solve_their_systems() {
        let p = problem("x1 a1 x1^-1 a1^-1", 2, &[2, 4], &[1]);
        let x = compute_x_n(&p, 1, true).unwrap();
        let w = x.witnesses.as_ref().unwrap();
        assert_eq!(w.len(), x.len());
        for (u, per_level) in x.members.iter().zip(w) {
            for lw in per_level {
                assert_eq!(lw.solutions.len(), 1 << (p.tower().level(lw.level).order()));
                let um: Vec<Elem> = u.iter().map(|&e| p.tower().map(1, lw.level).apply(e)).collect();
                for (f, phi) in &lw.solutions {
                    assert_eq!(p.solve_wreath(lw.level, f, &um).unwrap().as_ref(), Some(phi));
                }
            }
        }
    }
}
