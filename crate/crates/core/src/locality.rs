//! Seeded random trials of [`check_locality`].
//!
//! Each trial draws a group `A` of order at most 12, a surjection onto a
//! quotient of `A` with a random section, a coefficient group `H` of order
//! at most 4, a random word of length at most 6, a random tuple in
//! `H wr A` and a point. Trials are independent and seeded from the root
//! seed, so a summary does not depend on the thread count.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::group::{catalog, quotient_by_normal_closure, Elem, FiniteGroup, FunctionTable, WreathElement};
use crate::tower::{check_locality, LocalityOutcome, SectionedHom, TowerSpec};
use crate::word::{reduce, Letter, Word};

pub const MAX_SOURCE_ORDER: usize = 12;
pub const MAX_H_ORDER: usize = 4;
pub const MAX_WORD_LEN: usize = 6;

/// Seed of trial `t` under `root`.
pub fn trial_seed(root: u64, t: u64) -> u64 {
    root.wrapping_add(t.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A reduced word with letters drawn uniformly from `a1..ak, x1..xn` and
/// their inverses; `len` letters before reduction.
pub fn random_word<R: Rng>(rng: &mut R, k: u32, n: u32, len: usize) -> Word {
    let letters = (0..len).map(|_| {
        let pick = rng.gen_range(0..k + n);
        let l = if pick < k { Letter::constant(pick + 1) } else { Letter::variable(pick - k + 1) };
        if rng.gen_bool(0.5) {
            l.inv()
        } else {
            l
        }
    });
    reduce(letters)
}

fn random_wreath<R: Rng>(rng: &mut R, h: &FiniteGroup, a: &FiniteGroup) -> WreathElement {
    let f = FunctionTable((0..a.order()).map(|_| rng.gen_range(0..h.order())).collect());
    WreathElement { f, g: rng.gen_range(0..a.order()) }
}

/// A random surjection from a random catalog group with a random section.
fn random_sectioned_hom<R: Rng>(rng: &mut R) -> SectionedHom {
    let sources = catalog(MAX_SOURCE_ORDER).expect("within the catalog");
    let a = sources.choose(rng).expect("nonempty catalog").clone();
    let gens: Vec<Elem> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..a.order())).collect();
    let (_, hom) = quotient_by_normal_closure(&a, &gens);
    section_of(rng, hom)
}

fn section_of<R: Rng>(rng: &mut R, hom: crate::group::GroupHom) -> SectionedHom {
    let mut fibers: Vec<Vec<Elem>> = vec![Vec::new(); hom.target().order()];
    for x in hom.source().elements() {
        fibers[hom.apply(x)].push(x);
    }
    let section = fibers.iter().map(|f| *f.choose(rng).expect("surjective")).collect();
    SectionedHom::new(hom, section).expect("one point per fiber")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocalitySummary {
    pub trials: u64,
    pub verified: u64,
    pub premise_fails_agree: u64,
    pub premise_fails_differ: u64,
    pub violations: u64,
    /// Lowest trial index whose premise failed and whose values differed.
    pub first_differing: Option<u64>,
    pub first_violation: Option<u64>,
}

impl LocalitySummary {
    fn add(mut self, t: u64, outcome: LocalityOutcome) -> Self {
        self.trials += 1;
        match outcome {
            LocalityOutcome::Verified => self.verified += 1,
            LocalityOutcome::PremiseFails { agrees: true } => self.premise_fails_agree += 1,
            LocalityOutcome::PremiseFails { agrees: false } => {
                self.premise_fails_differ += 1;
                self.first_differing = Some(self.first_differing.map_or(t, |f| f.min(t)));
            }
            LocalityOutcome::Violation => {
                self.violations += 1;
                self.first_violation = Some(self.first_violation.map_or(t, |f| f.min(t)));
            }
        }
        self
    }

    fn merge(self, o: Self) -> Self {
        let min = |a: Option<u64>, b: Option<u64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        LocalitySummary {
            trials: self.trials + o.trials,
            verified: self.verified + o.verified,
            premise_fails_agree: self.premise_fails_agree + o.premise_fails_agree,
            premise_fails_differ: self.premise_fails_differ + o.premise_fails_differ,
            violations: self.violations + o.violations,
            first_differing: min(self.first_differing, o.first_differing),
            first_violation: min(self.first_violation, o.first_violation),
        }
    }
}

/// One trial. With a tower, the surjection is a random pair of its levels
/// with the tower's sections; otherwise it is drawn from the catalog.
pub fn locality_trial(root: u64, t: u64, tower: Option<&TowerSpec>) -> LocalityOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(root, t));
    let sh = match tower {
        None => random_sectioned_hom(&mut rng),
        Some(spec) => {
            let fine = rng.gen_range(0..spec.tower.depth());
            let coarse = rng.gen_range(0..=fine);
            spec.sections.sectioned_hom(&spec.tower, fine, coarse).expect("validated sections")
        }
    };
    let hs = catalog(MAX_H_ORDER).expect("within the catalog");
    let h = hs.choose(&mut rng).expect("nonempty catalog").clone();
    let k = rng.gen_range(0..=2);
    let n = rng.gen_range(1..=2);
    let len = rng.gen_range(1..=MAX_WORD_LEN);
    let p = random_word(&mut rng, k, n, len);
    let a = sh.source().clone();
    let consts: Vec<WreathElement> = (0..k).map(|_| random_wreath(&mut rng, &h, &a)).collect();
    let vars: Vec<WreathElement> = (0..n).map(|_| random_wreath(&mut rng, &h, &a)).collect();
    let x = rng.gen_range(0..a.order());
    check_locality(&p, &h, &consts, &vars, &sh, x).expect("all symbols assigned")
}

/// Runs trials `0..trials` in parallel and tallies the outcomes.
pub fn run_locality_trials(trials: u64, root: u64, tower: Option<&TowerSpec>) -> LocalitySummary {
    (0..trials)
        .into_par_iter()
        .map(|t| LocalitySummary::default().add(t, locality_trial(root, t, tower)))
        .reduce(LocalitySummary::default, LocalitySummary::merge)
}
