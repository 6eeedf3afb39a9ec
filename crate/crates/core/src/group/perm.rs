//! Permutations in cycle notation and closure of generator sets.

use std::collections::HashMap;
use std::fmt;

use super::{FiniteGroup, GroupError, DEFAULT_ORDER_CAP};

/// A permutation of `0..degree`; `images[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u16).collect() }
    }

    /// Panics unless `images` is a permutation of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(i < images.len() && !seen[i], "not a permutation");
            seen[i] = true;
        }
        Permutation { images: images.into_iter().map(|i| i as u16).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation on points `1..=degree`; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{}", p + 1)?;
                p = self.image(p);
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Parses a product of disjoint-or-not cycles such as `(1 2 3)(4 5)` on
/// points `1..=degree`. Cycles are composed left to right.
pub fn parse_cycles(degree: usize, text: &str) -> Result<Permutation, GroupError> {
    let bad = |msg: &str| GroupError::MalformedCycle { text: text.to_string(), msg: msg.into() };
    let mut perm = Permutation::identity(degree);
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
        let points: Vec<usize> = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| bad("point is not a number")))
            .collect::<Result<_, _>>()?;
        let mut seen = vec![false; degree + 1];
        for &p in &points {
            if p == 0 || p > degree {
                return Err(bad(&format!("point {p} outside 1..={degree}")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(bad(&format!("point {p} repeated in a cycle")));
            }
        }
        let mut images: Vec<usize> = (0..degree).collect();
        for (i, &p) in points.iter().enumerate() {
            images[p - 1] = points[(i + 1) % points.len()] - 1;
        }
        perm = perm.then(&Permutation::from_images(images));
        rest = body[close + 1..].trim_start();
    }
    Ok(perm)
}

impl FiniteGroup {
    /// Closure of the given generators (cycle notation) under composition.
    pub fn from_permutations(degree: usize, generators: &[&str]) -> Result<Self, GroupError> {
        let gens = generators.iter().map(|g| parse_cycles(degree, g)).collect::<Result<Vec<_>, _>>()?;
        Self::from_permutation_list(degree, &gens, DEFAULT_ORDER_CAP)
    }

    /// Closure of permutation generators, failing once more than `cap`
    /// elements have been found. The product `a * b` applies `a` first.
    pub fn from_permutation_list(degree: usize, gens: &[Permutation], cap: usize) -> Result<Self, GroupError> {
        assert!(gens.iter().all(|g| g.degree() == degree));
        let mut elems = vec![Permutation::identity(degree)];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut next = 0;
        while next < elems.len() {
            for g in gens {
                let p = elems[next].then(g);
                if !index.contains_key(&p) {
                    if elems.len() == cap {
                        return Err(GroupError::OrderCap { order: cap as u128 + 1, cap });
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            next += 1;
        }
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                mul[a * n + b] = index[&pa.then(pb)] as u32;
            }
        }
        let name = format!("perm{degree}<{}>", gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","));
        Ok(FiniteGroup::from_table_unchecked(name, n, mul))
    }
}
