//! Fixed inputs shared by the benchmarks.

use eqwreath_core::group::catalog_group;
use eqwreath_core::{EquationSystem, FiniteGroup, QuotientTower, UniversalProblem};

/// Two equations in two variables and one constant.
pub fn two_variable_system() -> EquationSystem {
    EquationSystem::parse("x1 x2 x1^-1 x2^-1 a1\nx1^3 x2^2").expect("valid system")
}

pub fn alternating_four() -> FiniteGroup {
    catalog_group("A4").expect("A4 is built in")
}

/// The commutator `[x1, a1]` over `Z/2` along the tower `Z/2 <- Z/4 <- Z/8`.
pub fn commutator_problem() -> UniversalProblem {
    let tower = QuotientTower::integer(&[2, 4, 8]).expect("valid moduli");
    let sys = EquationSystem::parse("x1 a1 x1^-1 a1^-1").expect("valid system");
    UniversalProblem::new(FiniteGroup::cyclic(2), tower, sys, vec![1]).expect("one constant")
}
