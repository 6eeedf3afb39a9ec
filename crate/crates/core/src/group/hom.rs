use super::{Elem, FiniteGroup, GroupError};

/// A validated homomorphism between finite groups.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    map: Vec<Elem>,
}

impl GroupHom {
    /// Validates `map` as a homomorphism `source -> target`.
    pub fn new(source: FiniteGroup, target: FiniteGroup, map: Vec<Elem>) -> Result<Self, GroupError> {
        let h = GroupHom { source, target, map };
        h.validate()?;
        Ok(h)
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), map: g.elements().collect() }
    }

    /// Returns the first pair `(a, b)` with `map(ab) != map(a) map(b)`.
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.source.order();
        if self.map.len() != n {
            return Err(GroupError::HomShape { got: self.map.len(), expected: n });
        }
        if let Some((at, &value)) = self.map.iter().enumerate().find(|(_, &v)| v >= self.target.order()) {
            return Err(GroupError::HomOutOfRange { at, value });
        }
        for a in self.source.elements() {
            for b in self.source.elements() {
                let lhs = self.map[self.source.op(a, b)];
                let rhs = self.target.op(self.map[a], self.map[b]);
                if lhs != rhs {
                    return Err(GroupError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn table(&self) -> &[Elem] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `then ∘ self`: first apply `self`, then `then`.
    pub fn compose(&self, then: &GroupHom) -> Result<GroupHom, GroupError> {
        if !self.target.same_structure(&then.source) {
            return Err(GroupError::HomMismatch);
        }
        GroupHom::new(self.source.clone(), then.target.clone(), self.map.iter().map(|&a| then.map[a]).collect())
    }

    /// Pointwise equality of two maps with the same domain.
    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.map == other.map
    }
}

/// Quotient of `g` by the normal closure of `gens`, with the projection.
/// Cosets are numbered by their least element, so the identity coset is 0.
pub fn quotient_by_normal_closure(g: &FiniteGroup, gens: &[Elem]) -> (FiniteGroup, GroupHom) {
    let n = g.order();
    let mut in_sub = vec![false; n];
    in_sub[0] = true;
    let mut members = vec![0];
    let mut seeds: Vec<Elem> = Vec::new();
    for &s in gens {
        for c in g.elements() {
            seeds.push(g.conjugate(c, s));
        }
    }
    let mut i = 0;
    while i < members.len() {
        let m = members[i];
        for &s in &seeds {
            let p = g.op(m, s);
            if !in_sub[p] {
                in_sub[p] = true;
                members.push(p);
            }
        }
        i += 1;
    }

    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for a in g.elements() {
        if coset[a] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(a);
        for &m in &members {
            coset[g.op(a, m)] = id;
        }
    }
    let q = reps.len();
    let mut mul = vec![0u32; q * q];
    for (i, &ra) in reps.iter().enumerate() {
        for (j, &rb) in reps.iter().enumerate() {
            mul[i * q + j] = coset[g.op(ra, rb)] as u32;
        }
    }
    let quotient = FiniteGroup::from_table_unchecked(format!("{}/N{}", g.name(), members.len()), q, mul);
    let proj = GroupHom { source: g.clone(), target: quotient.clone(), map: coset };
    debug_assert!(proj.validate().is_ok());
    (quotient, proj)
}
