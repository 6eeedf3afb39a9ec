//! Equations over free groups, their solvability in finite groups, and
//! finite checks of universal solutions along towers of quotients.

pub mod assembly;
pub mod group;
pub mod locality;
mod search;
pub mod solver;
pub mod tower;
pub mod universal;
pub mod word;

pub use group::{Elem, FiniteGroup, FunctionTable, Group, GroupError, GroupHom, WreathElement, WreathGroup};
pub use solver::{Solvability, SolveError, SolveOutcome, SolverConfig, SysFinVerdict};
pub use tower::{QuotientTower, SectionFamily, SectionedHom, TowerError, TowerSpec};
pub use universal::{UniversalError, UniversalProblem, XnSet};
pub use word::{EquationSystem, Letter, Word, WordError};
