//! Direct powers, semidirect products and wreath products.
//!
//! All constructions use the multiplication `(d, g)(d', g') = (d (g.d'), g g')`.
//! For the wreath product `H wr G` the base group is `H^G` with
//! `(g.f)(x) = f(x g)`; one checks `g.(h.f) = (g h).f`, so this is a left
//! action and the formula above is associative.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Elem, FiniteGroup, Group, GroupError, Repr};

/// Pairs checked per `g` when an automorphism check would be too large.
const AUTOMORPHISM_SAMPLES: usize = 100_000;
const AUTOMORPHISM_EXHAUSTIVE_MAX: usize = 1 << 22;

/// A total function `G -> H`, stored by domain index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionTable(pub Vec<Elem>);

impl FunctionTable {
    pub fn constant(len: usize, value: Elem) -> Self {
        FunctionTable(vec![value; len])
    }

    pub fn values(&self) -> &[Elem] {
        &self.0
    }

    pub fn get(&self, x: Elem) -> Elem {
        self.0[x]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pointwise_mul(&self, other: &FunctionTable, h: &FiniteGroup) -> FunctionTable {
        FunctionTable(self.0.iter().zip(&other.0).map(|(&a, &b)| h.op(a, b)).collect())
    }

    pub fn pointwise_inv(&self, h: &FiniteGroup) -> FunctionTable {
        FunctionTable(self.0.iter().map(|&a| h.inverse(a)).collect())
    }

    /// Little-endian base-`|H|` code, the element index in `H^G`.
    pub fn encode(&self, h_order: usize) -> usize {
        self.0.iter().rev().fold(0, |acc, &v| acc * h_order + v)
    }

    pub fn decode(mut code: usize, h_order: usize, len: usize) -> Self {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(code % h_order);
            code /= h_order;
        }
        FunctionTable(v)
    }

    /// Every function `0..len -> 0..h_order`, in code order.
    pub fn all(h_order: usize, len: usize) -> impl Iterator<Item = FunctionTable> {
        let count = (h_order as u128).pow(len as u32);
        (0..count).map(move |c| Self::decode(c as usize, h_order, len))
    }
}

/// `(f, g)` in `H wr G`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WreathElement {
    pub f: FunctionTable,
    pub g: Elem,
}

/// Arithmetic in `H wr G` without materializing the group.
#[derive(Debug, Clone)]
pub struct WreathGroup {
    h: FiniteGroup,
    g: FiniteGroup,
}

impl WreathGroup {
    pub fn new(h: FiniteGroup, g: FiniteGroup) -> Self {
        WreathGroup { h, g }
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn g(&self) -> &FiniteGroup {
        &self.g
    }

    /// `|H|^|G| * |G|`, if it fits in a `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.h.order() as u128).checked_pow(self.g.order() as u32).and_then(|p| p.checked_mul(self.g.order() as u128))
    }

    /// `(g.f)(x) = f(x g)`.
    pub fn act(&self, g: Elem, f: &FunctionTable) -> FunctionTable {
        FunctionTable(self.g.elements().map(|x| f.get(self.g.op(x, g))).collect())
    }

    pub fn element(&self, f: Vec<Elem>, g: Elem) -> WreathElement {
        assert_eq!(f.len(), self.g.order());
        WreathElement { f: FunctionTable(f), g }
    }

    /// Index of `(f, g)` in [`wreath_product`]`(H, G)`.
    pub fn encode(&self, e: &WreathElement) -> Elem {
        e.f.encode(self.h.order()) * self.g.order() + e.g
    }

    pub fn decode(&self, idx: Elem) -> WreathElement {
        let t = self.g.order();
        WreathElement { f: FunctionTable::decode(idx / t, self.h.order(), t), g: idx % t }
    }
}

impl Group for WreathGroup {
    type Elem = WreathElement;

    fn identity(&self) -> WreathElement {
        WreathElement { f: FunctionTable::constant(self.g.order(), 0), g: 0 }
    }

    fn mul(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        let f = self.g.elements().map(|x| self.h.op(a.f.get(x), b.f.get(self.g.op(x, a.g)))).collect();
        WreathElement { f: FunctionTable(f), g: self.g.op(a.g, b.g) }
    }

    fn inv(&self, a: &WreathElement) -> WreathElement {
        let gi = self.g.inverse(a.g);
        let f = self.g.elements().map(|x| self.h.inverse(a.f.get(self.g.op(x, gi)))).collect();
        WreathElement { f: FunctionTable(f), g: gi }
    }
}

/// An action of `actor` on the elements of `space`, `table[g * |space| + d] = g.d`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    actor: FiniteGroup,
    space: FiniteGroup,
    table: Vec<u32>,
}

impl GroupAction {
    pub fn new(actor: FiniteGroup, space: FiniteGroup, table: Vec<u32>) -> Result<Self, GroupError> {
        let expected = actor.order() * space.order();
        if table.len() != expected {
            return Err(GroupError::ActionShape { got: table.len(), expected });
        }
        if table.iter().any(|&v| v as usize >= space.order()) {
            return Err(GroupError::ActionShape { got: table.len(), expected });
        }
        Ok(GroupAction { actor, space, table })
    }

    pub fn trivial(actor: FiniteGroup, space: FiniteGroup) -> Self {
        let table = (0..actor.order()).flat_map(|_| 0..space.order() as u32).collect();
        GroupAction { actor, space, table }
    }

    pub fn actor(&self) -> &FiniteGroup {
        &self.actor
    }

    pub fn space(&self) -> &FiniteGroup {
        &self.space
    }

    #[inline]
    pub fn apply(&self, g: Elem, d: Elem) -> Elem {
        self.table[g * self.space.order() + d] as Elem
    }

    /// Checks `1.d = d`, `g.(h.d) = (gh).d`, bijectivity of each `g.-`, and
    /// `g.(d1 d2) = (g.d1)(g.d2)` (exhaustive while `|G| |D|² ≤ 2²²`,
    /// sampled otherwise).
    pub fn validate(&self) -> Result<(), GroupError> {
        let (g_ord, d_ord) = (self.actor.order(), self.space.order());
        for d in 0..d_ord {
            if self.apply(0, d) != d {
                return Err(GroupError::ActionIdentity(d));
            }
        }
        for g in 0..g_ord {
            let mut hit = vec![false; d_ord];
            for d in 0..d_ord {
                hit[self.apply(g, d)] = true;
            }
            if !hit.into_iter().all(|x| x) {
                return Err(GroupError::ActionNotBijective { g });
            }
        }
        for g in 0..g_ord {
            for h in 0..g_ord {
                let gh = self.actor.op(g, h);
                for d in 0..d_ord {
                    if self.apply(g, self.apply(h, d)) != self.apply(gh, d) {
                        return Err(GroupError::ActionComposition { g, h, d });
                    }
                }
            }
        }
        let check = |g, d1, d2| {
            let lhs = self.apply(g, self.space.op(d1, d2));
            let rhs = self.space.op(self.apply(g, d1), self.apply(g, d2));
            if lhs != rhs {
                Err(GroupError::ActionNotAutomorphism { g, d1, d2 })
            } else {
                Ok(())
            }
        };
        if g_ord.saturating_mul(d_ord).saturating_mul(d_ord) <= AUTOMORPHISM_EXHAUSTIVE_MAX {
            for g in 0..g_ord {
                for d1 in 0..d_ord {
                    for d2 in 0..d_ord {
                        check(g, d1, d2)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64((g_ord * d_ord) as u64);
            for g in 0..g_ord {
                for _ in 0..AUTOMORPHISM_SAMPLES / g_ord.max(1) {
                    check(g, rng.gen_range(0..d_ord), rng.gen_range(0..d_ord))?;
                }
            }
        }
        Ok(())
    }
}

fn check_cap(order: Option<u128>, cap: usize) -> Result<usize, GroupError> {
    match order {
        Some(o) if o <= cap as u128 => Ok(o as usize),
        Some(o) => Err(GroupError::OrderCap { order: o, cap }),
        None => Err(GroupError::OrderCap { order: u128::MAX, cap }),
    }
}

impl FiniteGroup {
    /// The direct power `base^exp`.
    pub fn power(base: &FiniteGroup, exp: usize, cap: usize) -> Result<FiniteGroup, GroupError> {
        let order = check_cap((base.order() as u128).checked_pow(exp as u32), cap)?;
        Ok(FiniteGroup::from_parts(format!("{}^{exp}", base.name()), order, Repr::Power { base: base.clone(), exp }))
    }
}

/// The action `(g.f)(x) = f(x g)` of `G` on `H^G`.
pub fn action_by_right_translation(g: &FiniteGroup, h: &FiniteGroup, cap: usize) -> Result<GroupAction, GroupError> {
    let space = FiniteGroup::power(h, g.order(), cap)?;
    check_cap((space.order() as u128).checked_mul(g.order() as u128), cap)?;
    let wr = WreathGroup::new(h.clone(), g.clone());
    let mut table = Vec::with_capacity(space.order() * g.order());
    for a in g.elements() {
        for code in space.elements() {
            let f = FunctionTable::decode(code, h.order(), g.order());
            table.push(wr.act(a, &f).encode(h.order()) as u32);
        }
    }
    Ok(GroupAction { actor: g.clone(), space, table })
}

/// `D ⋊ G` for a validated action; element `(d, g)` has index `d |G| + g`.
pub fn semidirect_product(
    d: &FiniteGroup,
    g: &FiniteGroup,
    act: &GroupAction,
    cap: usize,
) -> Result<FiniteGroup, GroupError> {
    let order = check_cap((d.order() as u128).checked_mul(g.order() as u128), cap)?;
    if !act.actor.same_structure(g) || !act.space.same_structure(d) {
        return Err(GroupError::ActionShape { got: act.table.len(), expected: d.order() * g.order() });
    }
    act.validate()?;
    Ok(FiniteGroup::from_parts(
        format!("({}):({})", d.name(), g.name()),
        order,
        Repr::Semidirect { normal: d.clone(), top: g.clone(), act: act.table.clone() },
    ))
}

/// `A x B`; element `(a, b)` has index `a |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let act = GroupAction::trivial(b.clone(), a.clone());
    FiniteGroup::from_parts(
        format!("{} x {}", a.name(), b.name()),
        a.order() * b.order(),
        Repr::Semidirect { normal: a.clone(), top: b.clone(), act: act.table },
    )
}

/// `H wr G` as a [`FiniteGroup`] of order `|H|^|G| |G|`, indexed as in
/// [`WreathGroup::encode`].
pub fn wreath_product(h: &FiniteGroup, g: &FiniteGroup, cap: usize) -> Result<FiniteGroup, GroupError> {
    check_cap(WreathGroup::new(h.clone(), g.clone()).order(), cap)?;
    let act = action_by_right_translation(g, h, cap)?;
    let space = act.space.clone();
    semidirect_product(&space, g, &act, cap).map(|w| w.renamed(format!("{} wr {}", h.name(), g.name())))
}
