use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use smk_core::completion::check_smtlib;
use smk_core::syntax::{parse_formula, parse_program};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn smk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smk"))
        .args(args)
        .env_remove("SMK_SOLVER")
        .output()
        .unwrap()
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("smk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn script(name: &str, body: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

#[test]
fn check_exit_codes() {
    let o = smk(&["check", &fx("reach.lp"), &fx("reach_stable.str")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "STABLE\n");
    let o = smk(&["check", &fx("odd.lp"), &fx("odd.str")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NOT-STABLE\n");
    assert_eq!(smk(&["check", &fx("reach.lp"), &fx("missing.str")]).status.code(), Some(2));
    assert_eq!(smk(&["check", &fx("sigma11.fo"), &fx("two.str")]).status.code(), Some(2));
}

#[test]
fn check_why_prints_reduct_and_trace() {
    let o = smk(&["check", &fx("reach.lp"), &fx("reach_stable.str"), "--why"]);
    let text = stdout(&o);
    assert!(text.starts_with("% reduct\n"));
    assert!(text.contains("p(2) :- p(1)."));
    assert!(text.contains("% Γ↑1\np(1)\n"));
    assert!(text.contains("% Γ↑2\np(1)\np(2)\n"));
    assert!(text.ends_with("STABLE\n"));
}

fn successor_file() -> String {
    let out = scratch("successor.lp");
    let o = smk(&["translate", "successor", "--out", &out.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(0));
    out.to_string_lossy().into_owned()
}

#[test]
fn enumerate_counts_and_cap() {
    let ps = successor_file();
    let o = smk(&["enumerate", &ps, &fx("two.str")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("count: 2\n"));
    let o = smk(&["enumerate", &ps, &fx("three.str")]);
    assert!(stdout(&o).ends_with("count: 6\n"));
    assert_eq!(stdout(&o).matches("domain:").count(), 6);
    let o = smk(&["enumerate", &ps, &fx("three.str"), "--cap", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).ends_with("count: 4 (cap reached)\n"));
    let o = smk(&["enumerate", &fx("unsat.lp"), &fx("two.str")]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "count: 0\n".to_string()));
}

#[test]
fn enumerate_with_auxiliary_symbols() {
    let prog = scratch("aux.lp");
    std::fs::write(&prog, "p(X) :- a(X).\n").unwrap();
    let o = smk(&["enumerate", &prog.to_string_lossy(), &fx("two.str"), "--aux", "a"]);
    assert!(stdout(&o).ends_with("count: 4\n"), "{}", stdout(&o));
    let o = smk(&["enumerate", &prog.to_string_lossy(), &fx("two.str"), "--aux", "zz"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn d2n_matches_golden_file() {
    let out = scratch("cover_d2n.lp");
    let o = smk(&["translate", "d2n", &fx("cover.lp"), "--out", &out.to_string_lossy(), "--emit-mapping"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden");
    let read = |p: PathBuf| std::fs::read_to_string(p).unwrap();
    assert_eq!(read(out.clone()), read(golden.join("d2n_cover.lp")));
    assert_eq!(read(scratch("cover_d2n.lp.map")), read(golden.join("d2n_cover.map")));
    let again = stdout(&smk(&["translate", "d2n", &fx("cover.lp")]));
    assert_eq!(again, read(out));
}

#[test]
fn oc_emits_well_formed_smtlib() {
    let (reach, edge) = (fx("reach.lp"), fx("reach_edge.str"));
    for extra in [&[][..], &["--structure", edge.as_str()][..], &["--size", "2", "--int-order"][..]] {
        let mut args = vec!["translate", "oc", reach.as_str(), "--smt"];
        args.extend_from_slice(extra);
        let o = smk(&args);
        assert_eq!(o.status.code(), Some(0));
        check_smtlib(&stdout(&o)).unwrap();
    }
    let out = scratch("reach_oc.txt");
    let o = smk(&["translate", "oc", &fx("reach.lp"), "--smt", "--out", &out.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(0));
    check_smtlib(&std::fs::read_to_string(scratch("reach_oc.txt.smt2")).unwrap()).unwrap();
    let sentence = parse_formula(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sentence.to_string(), stdout(&smk(&["translate", "oc", &reach])).trim_end());
}

#[test]
fn translate_precondition_errors() {
    let o = smk(&["translate", "so2dlp-suc", &fx("sigma11.fo")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wrong prefix class"));
    let o = smk(&["translate", "oc", &fx("cover.lp")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not normal"));
    assert_eq!(smk(&["translate", "d2n"]).status.code(), Some(2));
    assert_eq!(smk(&["translate", "successor", "--emit-mapping"]).status.code(), Some(2));
}

#[test]
fn sentence_translations_print_programs() {
    for kind in ["so2dlp-suc", "so2dlp-fin", "so2dlp-arb"] {
        let o = smk(&["translate", kind, &fx("total.fo")]);
        assert_eq!(o.status.code(), Some(0));
        parse_program(&stdout(&o)).unwrap();
    }
    let nested = scratch("nested.fo");
    std::fs::write(&nested, "ALL x . q(x) & (SOME y . e(x,y))\n").unwrap();
    let path = nested.to_string_lossy();
    assert_eq!(smk(&["translate", "so2dlp-arb", &path]).status.code(), Some(2));
    assert_eq!(smk(&["translate", "so2dlp-arb", &path, "--normalize"]).status.code(), Some(0));
    let fin = stdout(&smk(&["translate", "finiteness"]));
    assert_eq!(parse_program(&fin).unwrap().len(), 14);
}

#[test]
fn solve_with_fake_solvers() {
    let sat = script("sat.sh", "echo sat");
    let unsat = script("unsat.sh", "echo unsat");
    let junk = script("junk.sh", "echo hello");
    let failing = script("fail.sh", "echo sat; exit 3");
    let run = |solver: &Path, s: &str, verify: bool| {
        let mut args = vec![
            "solve".to_string(),
            fx("reach.lp"),
            fx(s),
            "--solver".into(),
            solver.to_string_lossy().into_owned(),
        ];
        if verify {
            args.push("--verify".into());
        }
        let args: Vec<&str> = args.iter().map(|a| a.as_str()).collect();
        smk(&args)
    };
    let o = run(&sat, "reach_edge.str", true);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "SAT\nverify: agrees\n");
    assert_eq!(run(&unsat, "reach_noedge.str", true).status.code(), Some(1));
    assert_eq!(run(&unsat, "reach_edge.str", true).status.code(), Some(4));
    assert_eq!(run(&junk, "reach_edge.str", false).status.code(), Some(4));
    assert_eq!(run(&failing, "reach_edge.str", false).status.code(), Some(4));
    assert_eq!(run(Path::new("/nonexistent/z3"), "reach_edge.str", false).status.code(), Some(4));
    let o = smk(&["solve", &fx("reach.lp"), &fx("reach_edge.str")]);
    assert_eq!(o.status.code(), Some(4));
    let o = Command::new(env!("CARGO_BIN_EXE_smk"))
        .args(["solve", &fx("reach.lp"), &fx("reach_edge.str")])
        .env("SMK_SOLVER", &sat)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "SAT\n");
}

fn z3() -> Option<PathBuf> {
    std::env::var_os("PATH").and_then(|paths| {
        std::env::split_paths(&paths)
            .map(|d| d.join("z3"))
            .find(|p| p.is_file())
    })
}

#[test]
fn solve_with_z3_when_available() {
    let Some(z3) = z3() else {
        eprintln!("z3 not found; skipping");
        return;
    };
    let z3 = z3.to_string_lossy().into_owned();
    let o = smk(&["solve", &fx("reach.lp"), &fx("reach_edge.str"), "--solver", &z3, "--verify"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "SAT\nverify: agrees\n".to_string()));
    let o = smk(&["solve", &fx("reach.lp"), &fx("reach_noedge.str"), "--solver", &z3, "--verify"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "UNSAT\nverify: agrees\n".to_string()));
}

#[test]
fn selftest_is_reproducible() {
    let a = smk(&["selftest", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = smk(&["selftest", "--seed", "7"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("selftest seed 7\n"));
}
