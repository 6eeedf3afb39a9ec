use eqwreath_core::assembly::{
    assemble, cross_validate, parse_support, run_pipeline, verify_window, AssemblyInstance, CrossValidation,
    PipelineInput, Verdict, WindowOutcome,
};
use eqwreath_core::group::{catalog_group, FiniteGroup};
use eqwreath_core::tower::parse_tower_file;
use eqwreath_core::universal::{deepest_nonempty_member, Deepest};
use eqwreath_core::word::prefix_values;
use eqwreath_core::{EquationSystem, Group, QuotientTower, SectionFamily, UniversalProblem};

fn no_files(_: &str) -> Result<String, String> {
    Err("no files".into())
}

fn instance(sys: &str, moduli: &[u64], a: &[i64], support: &str) -> AssemblyInstance {
    let tower = QuotientTower::integer(moduli).unwrap();
    let sections = SectionFamily::default_for(&tower).unwrap();
    let prob =
        UniversalProblem::new(FiniteGroup::cyclic(2), tower, EquationSystem::parse(sys).unwrap(), a.to_vec()).unwrap();
    let Deepest::Member { u, .. } = deepest_nonempty_member(&prob).unwrap() else {
        panic!("empty level set for {sys}");
    };
    AssemblyInstance::new(prob, sections, &parse_support(support).unwrap(), u).unwrap()
}

const SYSTEMS: [(&str, i64); 5] = [
    ("x1 a1 x1^-1 a1^-1", 1),
    ("x1 a1^-1", 3),
    ("x1 a1 x1^-1 a1^-1", 2),
    ("x1^2 a1^-2", 1),
    ("x1 a1 x1 a1^-1 x1^-2", 1),
];

#[test]
fn windows_are_identity_and_cross_validate() {
    for (sys, a) in SYSTEMS {
        let inst = instance(sys, &[2, 4, 8], &[a], "f1@0=1,f1@-1=1,f1@1=1");
        let sol = assemble(&inst).unwrap();
        for probe in 0..3 {
            let report = verify_window(&inst, &sol, probe).unwrap();
            assert!(report.all_identity(), "{sys} probe {probe}");
            assert!(report.group_checks.iter().all(|&b| b));
            match cross_validate(&inst, &sol, &report) {
                CrossValidation::Checked { order, mismatches, .. } => {
                    assert_eq!(order, 2048);
                    assert_eq!(mismatches, 0);
                }
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn out_of_window_points_are_reported() {
    let inst = instance("x1 a1^-1", &[2, 4, 8], &[3], "f1@3=1");
    assert_eq!(inst.u_ambient(), vec![3]);
    let sol = assemble(&inst).unwrap();
    let report = verify_window(&inst, &sol, 1).unwrap();
    let outside: Vec<i64> =
        report.entries.iter().filter(|(_, o)| *o == WindowOutcome::OutOfWindow).map(|(x, _)| *x).collect();
    assert_eq!(outside, vec![1]);
    assert_eq!(report.in_window(), 3);
}

#[test]
fn deeper_towers_keep_identity_windows() {
    for (sys, a) in SYSTEMS {
        let shallow = instance(sys, &[2, 4], &[a], "f1@0=1");
        let deep = instance(sys, &[2, 4, 8], &[a], "f1@0=1");
        let rs = verify_window(&shallow, &assemble(&shallow).unwrap(), 0).unwrap();
        let rd = verify_window(&deep, &assemble(&deep).unwrap(), 0).unwrap();
        for ((x, before), (y, after)) in rs.entries.iter().zip(&rd.entries) {
            assert_eq!(x, y);
            if let (WindowOutcome::InWindow(b), WindowOutcome::InWindow(d)) = (before, after) {
                assert!(b.iter().all(|&v| v == 0));
                assert!(d.iter().all(|&v| v == 0), "{sys} at {x}");
            }
        }
    }
}

#[test]
fn values_off_the_window_do_not_matter() {
    for (sys, a) in SYSTEMS {
        let inst = instance(sys, &[2, 4, 8], &[a], "f1@0=1,f1@-2=1");
        let sol = assemble(&inst).unwrap();
        let report = verify_window(&inst, &sol, 2).unwrap();
        let amb = inst.problem().tower().ambient();
        let s =
            prefix_values(&inst.problem().system().prefix_union(), &amb, inst.problem().constants(), &inst.u_ambient())
                .unwrap();
        for p in inst.sections().section(2).points() {
            let flipped = inst.with_f(0, p, 1 - inst.f_at(0, p));
            // same φ̄: only windows that contain p may change
            let changed = verify_window(&flipped, &sol, 2).unwrap();
            for ((x, before), (_, after)) in report.entries.iter().zip(&changed.entries) {
                let touches = s.iter().any(|t| amb.mul(x, t) == p);
                if !touches {
                    assert_eq!(before, after, "{sys}: flipping f at {p} changed x = {x}");
                }
            }
        }
    }
}

#[test]
fn forced_pipeline_passes() {
    let input = PipelineInput {
        system: EquationSystem::parse("x1 a1^-1").unwrap(),
        tower: parse_tower_file("ztower 2 4", &no_files).unwrap(),
        h: FiniteGroup::cyclic(2),
        constants: vec![1],
        support: parse_support("f1@0=1").unwrap(),
        probe: None,
        scan_max_order: 8,
    };
    let report = run_pipeline(&input).unwrap();
    assert_eq!(report.verdict, Verdict::Pass, "{}", report.text());
    assert!(report.lines.contains(&"xn[2]=1".to_string()));
    assert!(report.lines.iter().any(|l| l.starts_with("window[1] x=0 delta=identity")));
    assert_eq!(report.lines.last().unwrap(), "verdict=PASS");
}

#[test]
fn square_pipeline_is_refuted() {
    let input = PipelineInput {
        system: EquationSystem::parse("x1^2 a1").unwrap(),
        tower: parse_tower_file("ztower 2", &no_files).unwrap(),
        h: FiniteGroup::cyclic(2),
        constants: vec![1],
        support: Vec::new(),
        probe: None,
        scan_max_order: 8,
    };
    let report = run_pipeline(&input).unwrap();
    assert_eq!(report.verdict, Verdict::Refuted);
    assert!(report.lines.contains(&"scan=counterexample group=Z2 a=1".to_string()));
    assert!(report.lines.contains(&"xn[1]=0".to_string()));
}

#[test]
fn explicit_tower_pipeline() {
    let s3 = catalog_group("S3").unwrap();
    let sign: Vec<String> =
        s3.elements().map(|e| if s3.element_order(e) == 2 { "1" } else { "0" }.to_string()).collect();
    let text =
        format!("explicit\nlevel\ncayley 2\n0 1\n1 0\nlevel\nperm 3\n(1 2 3)\n(1 2)\nmap 2 1 {}\n", sign.join(" "));
    let tower = parse_tower_file(&text, &no_files).unwrap();
    let input = PipelineInput {
        system: EquationSystem::parse("x1 a1 x1^-1 a1^-1").unwrap(),
        tower,
        h: FiniteGroup::cyclic(2),
        constants: vec![3],
        support: parse_support("f1@0=1,f1@1=1").unwrap(),
        probe: None,
        scan_max_order: 6,
    };
    let report = run_pipeline(&input).unwrap();
    assert_eq!(report.verdict, Verdict::Pass, "{}", report.text());
    assert!(report.lines.iter().any(|l| l.starts_with("crossval group=Z2 wr L2 order=384")));
}
