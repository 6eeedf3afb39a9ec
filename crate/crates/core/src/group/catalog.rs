//! Built-in small groups, each given by permutation generators.
//!
//! Every isomorphism type of order at most 8 appears exactly once (checked
//! against a brute-force enumeration of Cayley tables in the test suite).
//! Orders 9 to 16 contain a selection.

use std::sync::OnceLock;

use super::perm::Permutation;
use super::{FiniteGroup, GroupError};

pub const CATALOG_MAX_ORDER: usize = 16;

/// A permutation representation under construction.
#[derive(Clone)]
struct Rep {
    degree: usize,
    gens: Vec<Permutation>,
}

impl Rep {
    fn cyclic(n: usize) -> Rep {
        if n == 1 {
            return Rep { degree: 1, gens: vec![] };
        }
        Rep { degree: n, gens: vec![Permutation::from_images((0..n).map(|i| (i + 1) % n).collect())] }
    }

    fn dihedral(m: usize) -> Rep {
        let rot = Permutation::from_images((0..m).map(|i| (i + 1) % m).collect());
        let refl = Permutation::from_images((0..m).map(|i| (m - i) % m).collect());
        Rep { degree: m, gens: vec![rot, refl] }
    }

    /// Left-regular representation of the dicyclic group of order `4m`,
    /// `<a, x | a^2m, x^2 = a^m, x a x^-1 = a^-1>`. Element `a^i x^e` is
    /// point `i + 2m e`.
    fn dicyclic(m: usize) -> Rep {
        let n = 2 * m;
        let mul = |(i, e): (usize, usize), (j, f): (usize, usize)| -> (usize, usize) {
            match (e, f) {
                (0, _) => ((i + j) % n, f),
                (_, 0) => ((i + n - j) % n, 1),
                _ => ((i + n - j + m) % n, 0),
            }
        };
        let point = |(i, e): (usize, usize)| i + n * e;
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|e| (0..n).map(move |i| (i, e))).collect();
        let left = |s: (usize, usize)| {
            let mut images = vec![0; 2 * n];
            for &p in &elems {
                images[point(p)] = point(mul(s, p));
            }
            Permutation::from_images(images)
        };
        Rep { degree: 2 * n, gens: vec![left((1, 0)), left((0, 1))] }
    }

    fn product(&self, other: &Rep) -> Rep {
        let degree = self.degree + other.degree;
        let lift = |p: &Permutation, offset: usize| {
            let mut images: Vec<usize> = (0..degree).collect();
            for i in 0..p.degree() {
                images[offset + i] = offset + p.image(i);
            }
            Permutation::from_images(images)
        };
        let mut gens: Vec<Permutation> = self.gens.iter().map(|g| lift(g, 0)).collect();
        gens.extend(other.gens.iter().map(|g| lift(g, self.degree)));
        Rep { degree, gens }
    }

    fn from_cycles(degree: usize, cycles: &[&str]) -> Rep {
        let gens = cycles.iter().map(|c| super::parse_cycles(degree, c).unwrap()).collect();
        Rep { degree, gens }
    }

    fn build(&self, name: &str) -> FiniteGroup {
        let text: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        let refs: Vec<&str> = text.iter().map(String::as_str).collect();
        FiniteGroup::from_permutations(self.degree, &refs).expect("catalog generators are valid").renamed(name)
    }
}

fn entries() -> Vec<(usize, &'static str, Rep)> {
    let c = Rep::cyclic;
    vec![
        (1, "Z1", c(1)),
        (2, "Z2", c(2)),
        (3, "Z3", c(3)),
        (4, "Z4", c(4)),
        (4, "Z2xZ2", c(2).product(&c(2))),
        (5, "Z5", c(5)),
        (6, "Z6", c(6)),
        (6, "S3", Rep::from_cycles(3, &["(1 2 3)", "(1 2)"])),
        (7, "Z7", c(7)),
        (8, "Z8", c(8)),
        (8, "Z4xZ2", c(4).product(&c(2))),
        (8, "Z2xZ2xZ2", c(2).product(&c(2)).product(&c(2))),
        (8, "D8", Rep::dihedral(4)),
        (8, "Q8", Rep::dicyclic(2)),
        (9, "Z9", c(9)),
        (9, "Z3xZ3", c(3).product(&c(3))),
        (10, "Z10", c(10)),
        (10, "D10", Rep::dihedral(5)),
        (11, "Z11", c(11)),
        (12, "Z12", c(12)),
        (12, "Z6xZ2", c(6).product(&c(2))),
        (12, "D12", Rep::dihedral(6)),
        (12, "A4", Rep::from_cycles(4, &["(1 2 3)", "(1 2)(3 4)"])),
        (12, "Dic12", Rep::dicyclic(3)),
        (13, "Z13", c(13)),
        (14, "Z14", c(14)),
        (14, "D14", Rep::dihedral(7)),
        (15, "Z15", c(15)),
        (16, "Z16", c(16)),
        (16, "Z8xZ2", c(8).product(&c(2))),
        (16, "Z4xZ4", c(4).product(&c(4))),
        (16, "Z4xZ2xZ2", c(4).product(&c(2)).product(&c(2))),
        (16, "Z2xZ2xZ2xZ2", c(2).product(&c(2)).product(&c(2)).product(&c(2))),
        (16, "D16", Rep::dihedral(8)),
        (16, "Q16", Rep::dicyclic(4)),
        (16, "D8xZ2", Rep::dihedral(4).product(&c(2))),
        (16, "Q8xZ2", Rep::dicyclic(2).product(&c(2))),
    ]
}

fn full_catalog() -> &'static [FiniteGroup] {
    static CATALOG: OnceLock<Vec<FiniteGroup>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        entries()
            .into_iter()
            .map(|(order, name, rep)| {
                let g = rep.build(name);
                assert_eq!(g.order(), order, "catalog entry {name}");
                g
            })
            .collect()
    })
}

/// Catalog groups of order at most `max_order`, ascending by order.
pub fn catalog(max_order: usize) -> Result<Vec<FiniteGroup>, GroupError> {
    if max_order > CATALOG_MAX_ORDER {
        return Err(GroupError::CatalogTooLarge { requested: max_order, max: CATALOG_MAX_ORDER });
    }
    Ok(full_catalog().iter().filter(|g| g.order() <= max_order).cloned().collect())
}

/// Looks up a catalog group by name.
pub fn catalog_group(name: &str) -> Option<FiniteGroup> {
    full_catalog().iter().find(|g| g.name() == name).cloned()
}
