use eqwreath_core::group::{catalog, catalog_group, Elem};
use eqwreath_core::locality::random_word;
use eqwreath_core::solver::{
    brute_oracle, scan_sys_fin, solvable_in, solve, Solvability, SolveOutcome, SolverConfig, SysFinVerdict,
};
use eqwreath_core::EquationSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_system(rng: &mut ChaCha8Rng) -> EquationSystem {
    let k = rng.gen_range(0..=2);
    let n = rng.gen_range(1..=2);
    let total = rng.gen_range(1..=6);
    let split = rng.gen_range(0..=total);
    let mut words = vec![random_word(rng, k, n, split)];
    if split < total {
        words.push(random_word(rng, k, n, total - split));
    }
    EquationSystem::new(words).unwrap()
}

fn all_tuples(order: usize, len: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t| (0..order).map(move |e| [t.clone(), vec![e]].concat())).collect();
    }
    out
}

#[test]
fn solve_agrees_with_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let groups = catalog(6).unwrap();
    let cfg = SolverConfig::default();
    for _ in 0..40 {
        let sys = random_system(&mut rng);
        for g in &groups {
            for a in all_tuples(g.order(), sys.num_constants()) {
                let fast = solve(g, &sys, &a, &cfg).unwrap().outcome;
                assert_eq!(fast, brute_oracle(g, &sys, &a).unwrap(), "{sys} in {} at {a:?}", g.name());
            }
        }
    }
}

#[test]
fn solvability_agrees_with_exhaustive_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cfg = SolverConfig::default();
    let plain = SolverConfig { symmetry_reduction: false, ..cfg };
    for _ in 0..30 {
        let sys = random_system(&mut rng);
        for g in catalog(8).unwrap() {
            let first_bad = all_tuples(g.order(), sys.num_constants())
                .into_iter()
                .find(|a| brute_oracle(&g, &sys, a).unwrap() == SolveOutcome::NoSolution);
            let expected = first_bad.map_or(Solvability::SolvableInGroup, Solvability::NotSolvable);
            assert_eq!(solvable_in(&g, &sys, &cfg).unwrap().outcome, expected, "{sys} in {}", g.name());
            assert_eq!(solvable_in(&g, &sys, &plain).unwrap().outcome, expected);
        }
    }
}

#[test]
fn solvability_is_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = SolverConfig::default();
    for name in ["S3", "D8", "Q8", "A4"] {
        let g = catalog_group(name).unwrap();
        for _ in 0..20 {
            let sys = random_system(&mut rng);
            let a: Vec<Elem> = (0..sys.num_constants()).map(|_| rng.gen_range(0..g.order())).collect();
            let c = rng.gen_range(0..g.order());
            let conj: Vec<Elem> = a.iter().map(|&x| g.conjugate(c, x)).collect();
            let solved = |t: &[Elem]| matches!(solve(&g, &sys, t, &cfg).unwrap().outcome, SolveOutcome::Solved(_));
            assert_eq!(solved(&a), solved(&conj), "{sys} in {name}");
        }
    }
}

#[test]
fn scan_certificates_are_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let cfg = SolverConfig::default();
    let mut found = 0;
    for _ in 0..30 {
        let sys = random_system(&mut rng);
        if let SysFinVerdict::CounterexampleFound { group, constants } = scan_sys_fin(&sys, 8, &cfg).unwrap() {
            found += 1;
            assert_eq!(solvable_in(&group, &sys, &cfg).unwrap().outcome, Solvability::NotSolvable(constants.clone()));
            assert_eq!(brute_oracle(&group, &sys, &constants).unwrap(), SolveOutcome::NoSolution);
            // every smaller catalog group is fine
            for g in catalog(group.order()).unwrap() {
                if g.name() == group.name() {
                    break;
                }
                assert_eq!(solvable_in(&g, &sys, &cfg).unwrap().outcome, Solvability::SolvableInGroup);
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn results_do_not_depend_on_the_thread_count() {
    let sys = EquationSystem::parse("x1 x2 x1^-1 x2^-1 a1\nx1^3 x2^2").unwrap();
    let g = catalog_group("A4").unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let cfg = SolverConfig::default();
            let r = solve(&g, &sys, &[3], &cfg).unwrap();
            let s = solvable_in(&g, &sys, &cfg).unwrap();
            (r.outcome, r.nodes, s.outcome, s.nodes)
        })
    };
    assert_eq!(run(1), run(4));
}
