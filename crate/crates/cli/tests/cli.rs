mod common;

use common::{eqwreath, Fixture};

const COMMUTATOR: &str = "x1 a1 x1^-1 a1^-1\n";

#[test]
fn solve_reports_the_least_solution() {
    let fx = Fixture::new();
    let sys = fx.file("sq.sys", "x1^2 a1^-1\n");
    // in Z4 the squares are 0 and 2; x = 1 is the least root of 2
    let r = eqwreath(&["solve", "--group", "Z4", "--system", &sys, "--assign", "a1=2"]);
    assert_eq!(r.code, 0, "{r:?}");
    assert!(r.has_line("status=solved"));
    assert!(r.has_line("x1=1"));
    let r = eqwreath(&["solve", "--group", "Z4", "--system", &sys, "--assign", "a1=1"]);
    assert_eq!(r.code, 1);
    assert!(r.has_line("status=no-solution"));
}

#[test]
fn group_files_are_accepted() {
    let fx = Fixture::new();
    let g = fx.file("klein.grp", "cayley 4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n");
    let sys = fx.file("sq.sys", "x1^2 a1^-1\n");
    let r = eqwreath(&["solvable", "--group", &g, "--system", &sys]);
    assert_eq!(r.code, 1, "{r:?}");
    assert!(r.has_line("group=klein order=4"));
    assert!(r.has_line("status=not-solvable"));
    assert!(r.has_line("witness=a1=1"));
}

#[test]
fn scan_finds_the_smallest_counterexample() {
    let fx = Fixture::new();
    let sys = fx.file("sq.sys", "x1^2 a1\n");
    let r = eqwreath(&["scan", "--system", &sys]);
    assert_eq!(r.code, 1);
    assert!(r.has_line("status=counterexample"));
    assert!(r.has_line("group=Z2 order=2"));
    let comm = fx.file("c.sys", COMMUTATOR);
    let r = eqwreath(&["scan", "--system", &comm, "--max-order", "6"]);
    assert_eq!(r.code, 0);
    assert!(r.has_line("max_order=6"));
}

#[test]
fn usage_errors_exit_with_two() {
    let fx = Fixture::new();
    let sys = fx.file("c.sys", COMMUTATOR);
    let bad = fx.file("bad.sys", "x1 b2\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["solve", "--group", "Z4", "--system", &sys],
        vec!["solve", "--group", "Z4", "--system", &sys, "--assign", "a2=1"],
        vec!["solve", "--group", "Z4", "--system", &sys, "--assign", "a1=9"],
        vec!["solve", "--group", "NoSuchGroup", "--system", &sys, "--assign", "a1=0"],
        vec!["solve", "--group", "Z4", "--system", &bad, "--assign", "a1=0"],
        vec!["solve", "--group", "Z4", "--system", "/nonexistent/file", "--assign", "a1=0"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let r = eqwreath(&args);
        assert_eq!(r.code, 2, "{args:?}: {r:?}");
        assert!(r.stdout.is_empty(), "{args:?}");
        assert!(!r.stderr.is_empty());
    }
}

#[test]
fn xn_lists_members_and_witnesses() {
    let fx = Fixture::new();
    let sys = fx.file("f.sys", "x1 a1^-1\n");
    let tower = fx.file("t.tower", "ztower 2 4\n");
    let r = eqwreath(&["xn", "--system", &sys, "--tower", &tower, "--H", "Z2", "--assign", "a1=2"]);
    assert_eq!(r.code, 0, "{r:?}");
    assert_eq!(r.stdout, "level=2 size=1\n2\n");
    let r = eqwreath(&[
        "xn",
        "--system",
        &sys,
        "--tower",
        &tower,
        "--H",
        "Z2",
        "--assign",
        "a1=3",
        "--level",
        "1",
        "--witnesses",
    ]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[..2], ["level=1 size=1", "1"]);
    // one witness per constant function f in H^L, L = Z/2
    assert_eq!(lines.iter().filter(|l| l.starts_with("  level=1 f=")).count(), 4);
    let r = eqwreath(&["xn", "--system", &sys, "--tower", &tower, "--H", "Z2", "--assign", "a1=3", "--level", "3"]);
    assert_eq!(r.code, 2);
}

#[test]
fn pipeline_report_for_the_commutator() {
    let fx = Fixture::new();
    let sys = fx.file("c.sys", COMMUTATOR);
    let tower = fx.file("t.tower", "ztower 2 4 8\n");
    let r = eqwreath(&[
        "pipeline",
        "--system",
        &sys,
        "--tower",
        &tower,
        "--H",
        "Z2",
        "--assign",
        "a1=1",
        "--support",
        "f1@0=1",
    ]);
    assert_eq!(r.code, 0, "{r:?}");
    for line in [
        "tower=ztower 2,4,8",
        "xn[1]=2",
        "xn[2]=4",
        "xn[3]=8",
        "compat=ok",
        "crossval group=Z2 wr Z8 order=2048 points=4 mismatches=0",
        "levels=ok,ok,ok",
        "verdict=PASS",
    ] {
        assert!(r.has_line(line), "missing {line}:\n{}", r.stdout);
    }
    let windows: Vec<&str> = r.stdout.lines().filter(|l| l.starts_with("window[2] ")).collect();
    assert_eq!(windows.len(), 4);
    assert!(windows.iter().all(|l| l.ends_with("delta=identity")));
}

#[test]
fn pipeline_rejects_support_outside_the_section() {
    let fx = Fixture::new();
    let sys = fx.file("c.sys", COMMUTATOR);
    let tower = fx.file("t.tower", "ztower 2 4\n");
    let r = eqwreath(&[
        "pipeline",
        "--system",
        &sys,
        "--tower",
        &tower,
        "--H",
        "Z2",
        "--assign",
        "a1=1",
        "--support",
        "f1@7=1",
    ]);
    assert_eq!(r.code, 2, "{r:?}");
}

#[test]
fn explicit_towers_load_level_files() {
    let fx = Fixture::new();
    fx.file("z2.grp", "cayley 2\n0 1\n1 0\n");
    fx.file("z4.grp", "perm 4\n(1 2 3 4)\n");
    let tower = fx.file("t.tower", "explicit\nlevel z2.grp\nlevel z4.grp\nmap 2 1 0 1 0 1\n");
    let sys = fx.file("c.sys", COMMUTATOR);
    let r = eqwreath(&["xn", "--system", &sys, "--tower", &tower, "--H", "Z2", "--assign", "a1=1"]);
    assert_eq!(r.code, 0, "{r:?}");
    assert!(r.stdout.starts_with("level=2 size=4\n"));
    let r = eqwreath(&["locality", "--trials", "300", "--seed", "4", "--tower", &tower]);
    assert_eq!(r.code, 0);
    assert!(r.has_line("violations=0"));
}

#[test]
fn output_does_not_depend_on_threads() {
    let fx = Fixture::new();
    let sys = fx.file("s.sys", "x1 x2 x1^-1 x2^-1 a1\nx1^3 x2^2\n");
    let runs: Vec<_> = ["1", "3"]
        .iter()
        .map(|t| {
            (
                eqwreath(&["--threads", t, "solvable", "--group", "A4", "--system", &sys]),
                eqwreath(&["--threads", t, "locality", "--trials", "2000", "--seed", "9"]),
            )
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}
