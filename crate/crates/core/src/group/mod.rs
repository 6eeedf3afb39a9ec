//! Exact finite groups on dense element indices `0..order`, identity at 0.
//!
//! Small groups are stored as Cayley tables. Direct powers and semidirect
//! products keep a structural representation so that wreath products of a
//! few thousand elements never need an `order²` table.

mod catalog;
mod hom;
mod io;
mod perm;
mod product;

use std::fmt;
use std::sync::Arc;

pub use catalog::{catalog, catalog_group, CATALOG_MAX_ORDER};
pub use hom::{quotient_by_normal_closure, GroupHom};
pub use io::parse_group_file;
pub use perm::{parse_cycles, Permutation};
pub use product::{
    action_by_right_translation, direct_product, semidirect_product, wreath_product, FunctionTable, GroupAction,
    WreathElement, WreathGroup,
};

/// Element of a [`FiniteGroup`].
pub type Elem = usize;

/// Default bound on the order of any constructed group.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// Minimal group interface used by word evaluation.
pub trait Group {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("Cayley table must be {expected}x{expected}; row {row} has {len} entries")]
    BadShape { expected: usize, row: usize, len: usize },
    #[error("group must have at least one element")]
    Empty,
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(Elem),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(Elem, Elem, Elem),
    #[error("group order {order} exceeds cap {cap}")]
    OrderCap { order: u128, cap: usize },
    #[error("malformed permutation {text:?}: {msg}")]
    MalformedCycle { text: String, msg: String },
    #[error("action of the identity moves {0}")]
    ActionIdentity(Elem),
    #[error("action is not compatible with multiplication at g={g}, h={h}, d={d}")]
    ActionComposition { g: Elem, h: Elem, d: Elem },
    #[error("action of {g} is not a bijection")]
    ActionNotBijective { g: Elem },
    #[error("action of {g} is not multiplicative on ({d1}, {d2})")]
    ActionNotAutomorphism { g: Elem, d1: Elem, d2: Elem },
    #[error("action table has wrong size {got}, expected {expected}")]
    ActionShape { got: usize, expected: usize },
    #[error("map table has wrong size {got}, expected {expected}")]
    HomShape { got: usize, expected: usize },
    #[error("map value {value} at {at} is out of range")]
    HomOutOfRange { at: Elem, value: Elem },
    #[error("not a homomorphism: map({a}*{b}) != map({a})*map({b})")]
    NotHomomorphism { a: Elem, b: Elem },
    #[error("homomorphisms do not compose: target of the first is not the source of the second")]
    HomMismatch,
    #[error("catalog only covers orders up to {max}, got {requested}")]
    CatalogTooLarge { requested: usize, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone)]
pub struct FiniteGroup(Arc<Inner>);

struct Inner {
    name: String,
    order: usize,
    repr: Repr,
}

enum Repr {
    Table {
        mul: Vec<u32>,
        inv: Vec<u32>,
    },
    /// `base^exp`, element `Σ d_i |base|^i` with little-endian digits.
    Power {
        base: FiniteGroup,
        exp: usize,
    },
    /// Pairs `(d, g)` stored as `d * |top| + g`; `act[g * |normal| + d] = g.d`.
    Semidirect {
        normal: FiniteGroup,
        top: FiniteGroup,
        act: Vec<u32>,
    },
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("name", &self.0.name).field("order", &self.0.order).finish()
    }
}

impl FiniteGroup {
    fn from_parts(name: String, order: usize, repr: Repr) -> Self {
        FiniteGroup(Arc::new(Inner { name, order, repr }))
    }

    /// Builds a group from a table already known to satisfy the axioms with
    /// identity 0.
    pub(crate) fn from_table_unchecked(name: impl Into<String>, n: usize, mul: Vec<u32>) -> Self {
        debug_assert_eq!(mul.len(), n * n);
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        Self::from_parts(name.into(), n, Repr::Table { mul, inv })
    }

    /// Validates an `n x n` Cayley table. If the identity is not element 0,
    /// it is swapped with 0; witnesses in errors use the input labels.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::BadShape { expected: n, row, len: r.len() });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::EntryOutOfRange { row, col, value });
            }
        }
        let at = |a: usize, b: usize| table[a][b];
        let e = (0..n).find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x)).ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            if !(0..n).any(|b| at(a, b) == e && at(b, a) == e) {
                return Err(GroupError::NoInverse(a));
            }
        }
        check_associative(n, e, at)?;

        let swap = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[swap(a) * n + swap(b)] = swap(at(a, b)) as u32;
            }
        }
        Ok(Self::from_table_unchecked(format!("cayley{n}"), n, mul))
    }

    /// The cyclic group `Z/n` under addition.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a + b) % n) as u32;
            }
        }
        Self::from_table_unchecked(format!("Z{n}"), n, mul)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Returns a copy of this group under a different label.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let repr = match &self.0.repr {
            Repr::Table { mul, inv } => Repr::Table { mul: mul.clone(), inv: inv.clone() },
            Repr::Power { base, exp } => Repr::Power { base: base.clone(), exp: *exp },
            Repr::Semidirect { normal, top, act } => {
                Repr::Semidirect { normal: normal.clone(), top: top.clone(), act: act.clone() }
            }
        };
        Self::from_parts(name.into(), self.0.order, repr)
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.0.order
    }

    pub fn ptr_eq(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Same order and identical multiplication on element indices.
    pub fn same_structure(&self, other: &FiniteGroup) -> bool {
        self.ptr_eq(other)
            || (self.order() == other.order()
                && self.elements().all(|a| self.elements().all(|b| self.op(a, b) == other.op(a, b))))
    }

    #[inline]
    pub fn op(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.repr {
            Repr::Table { mul, .. } => mul[a * self.0.order + b] as Elem,
            Repr::Power { base, exp } => {
                let q = base.order();
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for _ in 0..*exp {
                    out += base.op(a % q, b % q) * place;
                    a /= q;
                    b /= q;
                    place *= q;
                }
                out
            }
            Repr::Semidirect { normal, top, act } => {
                let t = top.order();
                let (d1, g1) = (a / t, a % t);
                let (d2, g2) = (b / t, b % t);
                let moved = act[g1 * normal.order() + d2] as Elem;
                normal.op(d1, moved) * t + top.op(g1, g2)
            }
        }
    }

    #[inline]
    pub fn inverse(&self, a: Elem) -> Elem {
        match &self.0.repr {
            Repr::Table { inv, .. } => inv[a] as Elem,
            Repr::Power { base, exp } => {
                let q = base.order();
                let mut a = a;
                let mut out = 0;
                let mut place = 1;
                for _ in 0..*exp {
                    out += base.inverse(a % q) * place;
                    a /= q;
                    place *= q;
                }
                out
            }
            Repr::Semidirect { normal, top, act } => {
                let t = top.order();
                let (d, g) = (a / t, a % t);
                let gi = top.inverse(g);
                act[gi * normal.order() + normal.inverse(d)] as Elem * t + gi
            }
        }
    }

    /// `g a g⁻¹`.
    pub fn conjugate(&self, g: Elem, a: Elem) -> Elem {
        self.op(self.op(g, a), self.inverse(g))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        let mut out = 0;
        for _ in 0..e {
            out = self.op(out, a);
        }
        out
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Copies the group into a plain Cayley table.
    pub fn materialize(&self) -> FiniteGroup {
        if let Repr::Table { .. } = self.0.repr {
            return self.clone();
        }
        let n = self.order();
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            mul.extend(self.row(a).into_iter().map(|v| v as u32));
        }
        Self::from_table_unchecked(self.name().to_string(), n, mul)
    }

    /// `a b` for every `b`, built from rows of the factors for products.
    pub fn row(&self, a: Elem) -> Vec<Elem> {
        match &self.0.repr {
            Repr::Table { mul, .. } => {
                let n = self.0.order;
                mul[a * n..(a + 1) * n].iter().map(|&v| v as Elem).collect()
            }
            Repr::Power { base, exp } => {
                let q = base.order();
                let digits: Vec<Vec<Elem>> = (0..*exp)
                    .scan(a, |rest, _| {
                        let d = *rest % q;
                        *rest /= q;
                        Some(base.row(d))
                    })
                    .collect();
                // most significant digit first, so that index and value
                // grow by the same place values
                let mut out = vec![0];
                for brow in digits.iter().rev() {
                    out = out.iter().flat_map(|&hi| brow.iter().map(move |&lo| hi * q + lo)).collect();
                }
                out
            }
            Repr::Semidirect { normal, top, act } => {
                let (t, m) = (top.order(), normal.order());
                let (d, g) = (a / t, a % t);
                let nrow = normal.row(d);
                let trow = top.row(g);
                let moved = &act[g * m..(g + 1) * m];
                let mut out = Vec::with_capacity(m * t);
                for &d2 in moved {
                    let hi = nrow[d2 as Elem] * t;
                    out.extend(trow.iter().map(|&g2| hi + g2));
                }
                out
            }
        }
    }

    /// Checks the identity, inverse and associative laws for all elements.
    pub fn validate_axioms(&self) -> Result<(), GroupError> {
        let n = self.order();
        for a in self.elements() {
            if self.op(0, a) != a || self.op(a, 0) != a {
                return Err(GroupError::NoIdentity);
            }
            let ai = self.inverse(a);
            if ai >= n || self.op(a, ai) != 0 || self.op(ai, a) != 0 {
                return Err(GroupError::NoInverse(a));
            }
        }
        // Light's test on whole rows: row(x s) = row(x) after row(s)
        for s in right_generators(n, 0, &|a, b| self.op(a, b)) {
            let srow = self.row(s);
            for x in self.elements() {
                let xrow = self.row(x);
                let xsrow = self.row(xrow[s]);
                if let Some(y) = (0..n).find(|&y| xsrow[y] != xrow[srow[y]]) {
                    return Err(GroupError::NotAssociative(x, s, y));
                }
            }
        }
        Ok(())
    }
}

/// Light's test: with `S` generating the table under right multiplication
/// from `e`, the operation is associative iff `(x s) y = x (s y)` for all
/// `x, y` and `s` in `S`. The set of `s` passing is closed under products.
fn check_associative(n: usize, e: usize, at: impl Fn(usize, usize) -> usize) -> Result<(), GroupError> {
    for s in right_generators(n, e, &at) {
        for x in 0..n {
            let xs = at(x, s);
            for y in 0..n {
                if at(xs, y) != at(x, at(s, y)) {
                    return Err(GroupError::NotAssociative(x, s, y));
                }
            }
        }
    }
    Ok(())
}

/// Elements chosen greedily until every element is a left-nested product
/// `e s_1 s_2 ... s_r` of them.
fn right_generators(n: usize, e: usize, at: &impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[e] = true;
    let mut reached = vec![e];
    let mut gens = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        gens.push(x);
        let mut stack = Vec::new();
        for i in 0..reached.len() {
            let y = at(reached[i], x);
            if !seen[y] {
                seen[y] = true;
                reached.push(y);
                stack.push(y);
            }
        }
        while let Some(y) = stack.pop() {
            for &s in &gens {
                let z = at(y, s);
                if !seen[z] {
                    seen[z] = true;
                    reached.push(z);
                    stack.push(z);
                }
            }
        }
    }
    gens
}

impl Group for FiniteGroup {
    type Elem = Elem;

    fn identity(&self) -> Elem {
        0
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.op(*a, *b)
    }

    fn inv(&self, a: &Elem) -> Elem {
        self.inverse(*a)
    }
}

/// The additive group of integers, used as the ambient group of integer
/// towers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl Group for Integers {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn inv(&self, a: &i64) -> i64 {
        -a
    }
}
