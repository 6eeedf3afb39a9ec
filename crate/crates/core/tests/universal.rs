use eqwreath_core::group::{Elem, FiniteGroup, FunctionTable, WreathElement, WreathGroup};
use eqwreath_core::locality::random_word;
use eqwreath_core::universal::{
    all_function_tuples, check_compatibility, compute_x_levels, deepest_nonempty_member, micro_projection_check,
    Deepest,
};
use eqwreath_core::word::{parse_word, Word};
use eqwreath_core::{EquationSystem, QuotientTower, UniversalProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn problem(sys: &EquationSystem, h: usize, moduli: &[u64], a: &[i64]) -> UniversalProblem {
    UniversalProblem::new(FiniteGroup::cyclic(h), QuotientTower::integer(moduli).unwrap(), sys.clone(), a.to_vec())
        .unwrap()
}

/// Membership of `u` in `X_N` by enumerating every `φ̄` and evaluating the
/// words in the wreath product.
fn member_by_enumeration(prob: &UniversalProblem, level: usize, u: &[Elem]) -> bool {
    let tower = prob.tower();
    (0..=level).all(|m| {
        let l = tower.level(m);
        let wr = WreathGroup::new(prob.h().clone(), l.clone());
        let a = prob.constants_at(m);
        let um: Vec<Elem> = u.iter().map(|&x| tower.map(level, m).apply(x)).collect();
        all_function_tuples(prob.h().order(), prob.k(), l.order()).all(|f| {
            let consts: Vec<WreathElement> =
                f.iter().zip(&a).map(|(f, &g)| WreathElement { f: f.clone(), g }).collect();
            all_function_tuples(prob.h().order(), prob.n(), l.order()).any(|phi| {
                let vars: Vec<WreathElement> =
                    phi.iter().zip(&um).map(|(f, &g)| WreathElement { f: f.clone(), g }).collect();
                prob.system().words().iter().all(|w| {
                    let v = eqwreath_core::word::evaluate(w, &wr, &consts, &vars).unwrap();
                    v.g == 0 && v.f == FunctionTable::constant(l.order(), 0)
                })
            })
        })
    })
}

fn all_tuples(order: usize, n: usize) -> Vec<Vec<Elem>> {
    (0..order.pow(n as u32))
        .map(|mut i| {
            let mut t = vec![0; n];
            for s in t.iter_mut().rev() {
                *s = i % order;
                i /= order;
            }
            t
        })
        .collect()
}

fn random_system(rng: &mut ChaCha8Rng) -> EquationSystem {
    let (k, n) = if rng.gen_bool(0.8) { (1, 1) } else { (0, 2) };
    loop {
        let len = rng.gen_range(1..=5);
        let w = random_word(rng, k, n, len);
        if w.max_variable() == n && w.max_constant() == k {
            return EquationSystem::new(vec![w]).unwrap();
        }
    }
}

#[test]
fn members_agree_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..25 {
        let sys = random_system(&mut rng);
        let a: Vec<i64> = (0..sys.num_constants()).map(|_| rng.gen_range(-3..4)).collect();
        let prob = problem(&sys, 2, &[2, 4], &a);
        let sets = compute_x_levels(&prob, false).unwrap();
        for s in &sets {
            let l = prob.tower().level(s.level).order();
            for u in all_tuples(l, prob.n()) {
                assert_eq!(s.contains(&u), member_by_enumeration(&prob, s.level, &u), "{sys} a={a:?} u={u:?}");
            }
        }
    }
}

#[test]
fn level_sets_are_compatible() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut nonempty = 0;
    for _ in 0..100 {
        let sys = random_system(&mut rng);
        let a: Vec<i64> = (0..sys.num_constants()).map(|_| rng.gen_range(0..4)).collect();
        let prob = problem(&sys, 2, &[2, 4], &a);
        let sets = compute_x_levels(&prob, false).unwrap();
        check_compatibility(prob.tower(), &sets[1], &sets[0]).unwrap();
        // each coarse member has 2^n lifts from Z/2 to Z/4
        assert!(sets[1].len() <= sets[0].len() << prob.n());
        nonempty += usize::from(!sets[1].is_empty());
    }
    assert!(nonempty > 10);
}

#[test]
fn forced_solution_is_the_constant() {
    let sys = EquationSystem::new(vec![parse_word("x1 a1^-1").unwrap()]).unwrap();
    for a in -5..6 {
        for h in [1, 2, 3] {
            let prob = problem(&sys, h, &[2, 4], &[a]);
            let sets = compute_x_levels(&prob, false).unwrap();
            assert_eq!(sets[0].members, vec![vec![a.rem_euclid(2) as usize]]);
            assert_eq!(sets[1].members, vec![vec![a.rem_euclid(4) as usize]]);
        }
    }
}

#[test]
fn trivial_coefficients_reduce_to_group_equations() {
    let sys = EquationSystem::new(vec![parse_word("x1 a1 x1^-1 a1^-1").unwrap()]).unwrap();
    let prob = problem(&sys, 1, &[3, 6, 12], &[7]);
    match deepest_nonempty_member(&prob).unwrap() {
        Deepest::Member { level, u } => assert_eq!((level, u), (2, vec![0])),
        other => panic!("{other:?}"),
    }
    let sets = compute_x_levels(&prob, false).unwrap();
    assert_eq!(sets.iter().map(|s| s.len()).collect::<Vec<_>>(), vec![3, 6, 12]);
}

#[test]
fn micro_projection_on_short_words() {
    let mut words: Vec<Word> = Vec::new();
    let letters = ["a1", "a1^-1", "x1", "x1^-1"];
    let mut frontier: Vec<String> = vec![String::new()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for prefix in &frontier {
            for l in letters {
                let text = if prefix.is_empty() { l.to_string() } else { format!("{prefix} {l}") };
                next.push(text);
            }
        }
        for t in &next {
            let w = parse_word(t).unwrap();
            if w.max_constant() == 1 && w.max_variable() == 1 && !words.contains(&w) {
                words.push(w);
            }
        }
        frontier = next;
    }
    assert!(words.len() >= 20);
    for w in words {
        let sys = EquationSystem::new(vec![w]).unwrap();
        for a in 0..2 {
            let prob = problem(&sys, 2, &[2], &[a]);
            let r = micro_projection_check(&prob, 0).unwrap();
            assert!(r.matches(), "{sys} a={a}: {r:?}");
        }
    }
}
