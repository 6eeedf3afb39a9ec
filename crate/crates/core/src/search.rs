//! Backtracking search for assignments of cells (values in a finite group)
//! subject to constraints of the form `t_1 t_2 ... t_m = 1`, where each term
//! is a fixed element or a cell (possibly inverted).
//!
//! Cells are assigned in index order with values in ascending order, so the
//! first solution found is the lexicographically least one. A constraint is
//! checked as soon as its highest cell is assigned.

use rayon::prelude::*;

use crate::group::{Elem, FiniteGroup};

/// Below this many leaves a search never fans out over threads.
const PARALLEL_MIN_LEAVES: u128 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Term {
    Const(Elem),
    Cell { cell: usize, inverse: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SearchResult {
    Found(Vec<Elem>),
    Exhausted,
}

/// The search would visit more nodes than its budget allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BudgetExceeded;

#[derive(Debug, Clone)]
pub(crate) struct ProductCsp<'a> {
    group: &'a FiniteGroup,
    cells: usize,
    /// `checks[c]` holds constraints whose highest cell is `c - 1`; `checks[0]`
    /// those with no cells at all.
    checks: Vec<Vec<Vec<Term>>>,
}

impl<'a> ProductCsp<'a> {
    pub fn new(group: &'a FiniteGroup, cells: usize) -> Self {
        ProductCsp { group, cells, checks: vec![Vec::new(); cells + 1] }
    }

    /// Adds the constraint `terms[0] terms[1] ... = 1`, folding adjacent
    /// constants.
    pub fn add(&mut self, terms: impl IntoIterator<Item = Term>) {
        let mut folded: Vec<Term> = Vec::new();
        let mut ready = 0;
        for t in terms {
            match (t, folded.last_mut()) {
                (Term::Const(b), Some(Term::Const(a))) => *a = self.group.op(*a, b),
                (Term::Const(0), _) => {}
                (Term::Const(b), _) => folded.push(Term::Const(b)),
                (Term::Cell { cell, .. }, _) => {
                    assert!(cell < self.cells);
                    ready = ready.max(cell + 1);
                    folded.push(t);
                }
            }
        }
        if let [Term::Const(0)] = folded.as_slice() {
            return;
        }
        if folded.is_empty() {
            return;
        }
        self.checks[ready].push(folded);
    }

    #[inline]
    fn holds(&self, terms: &[Term], assign: &[Elem]) -> bool {
        let g = self.group;
        let mut acc = 0;
        for t in terms {
            let v = match *t {
                Term::Const(c) => c,
                Term::Cell { cell, inverse: false } => assign[cell],
                Term::Cell { cell, inverse: true } => g.inverse(assign[cell]),
            };
            acc = g.op(acc, v);
        }
        acc == 0
    }

    fn level_ok(&self, level: usize, assign: &[Elem]) -> bool {
        self.checks[level].iter().all(|c| self.holds(c, assign))
    }

    /// Depth-first search below `depth` with `assign[..depth]` fixed.
    fn dfs(&self, depth: usize, assign: &mut Vec<Elem>, nodes: &mut u64, budget: u64) -> Result<bool, BudgetExceeded> {
        if depth == self.cells {
            return Ok(true);
        }
        for v in self.group.elements() {
            *nodes += 1;
            if *nodes > budget {
                return Err(BudgetExceeded);
            }
            assign[depth] = v;
            if self.level_ok(depth + 1, assign) && self.dfs(depth + 1, assign, nodes, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn run_branch(&self, first: Option<Elem>, budget: u64) -> (u64, Result<SearchResult, BudgetExceeded>) {
        let mut assign = vec![0; self.cells];
        let mut nodes = 0;
        let depth = match first {
            None => 0,
            Some(v) => {
                nodes = 1;
                assign[0] = v;
                if !self.level_ok(1, &assign) {
                    return (nodes, Ok(SearchResult::Exhausted));
                }
                1
            }
        };
        match self.dfs(depth, &mut assign, &mut nodes, budget) {
            Ok(true) => (nodes, Ok(SearchResult::Found(assign))),
            Ok(false) => (nodes, Ok(SearchResult::Exhausted)),
            Err(e) => (budget, Err(e)),
        }
    }

    /// Returns the lexicographically least solution and the number of nodes
    /// a sequential search would have visited. The result does not depend
    /// on `parallel` or on the thread count.
    pub fn solve(&self, budget: u64, parallel: bool) -> (u64, Result<SearchResult, BudgetExceeded>) {
        if !self.level_ok(0, &[]) {
            return (0, Ok(SearchResult::Exhausted));
        }
        let leaves = (self.group.order() as u128).checked_pow(self.cells as u32);
        let fan_out = parallel && self.cells >= 2 && leaves.is_none_or(|l| l >= PARALLEL_MIN_LEAVES);
        if !fan_out {
            return self.run_branch(None, budget);
        }
        let branches: Vec<(u64, Result<SearchResult, BudgetExceeded>)> =
            self.group.elements().into_par_iter().map(|v| self.run_branch(Some(v), budget)).collect();
        let mut total = 0u64;
        for (nodes, res) in branches {
            total = total.saturating_add(nodes);
            match res {
                _ if total > budget => return (budget, Err(BudgetExceeded)),
                Err(e) => return (budget, Err(e)),
                Ok(SearchResult::Found(a)) => return (total, Ok(SearchResult::Found(a))),
                Ok(SearchResult::Exhausted) => {}
            }
        }
        (total, Ok(SearchResult::Exhausted))
    }
}
