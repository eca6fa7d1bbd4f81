mod common;

use std::path::PathBuf;

use smk_core::completion::{
    check_smtlib, completion_with_singleton_guard, emit_smtlib, lex_less, ordered_completion, order_width,
    run_solver, singleton_sentence, SmtDomain, SmtOptions, Verdict,
};
use smk_core::random::{random_program, random_structure, rng, ProgramConfig};
use smk_core::semantics::{check_stable, enumerate_stable};
use smk_core::structures::{eval_formula, Assignment, FiniteStructure};
use smk_core::syntax::{parse_formula, parse_program, Program, Term, Vocabulary};
use smk_core::Error;

use common::{naive_eval, naive_stable};

const REACH: &str = "p(s). p(Y) :- p(X), e(X,Y). :- not p(t).";

fn reach(edges: &[&[&str]]) -> FiniteStructure {
    FiniteStructure::of_size(2)
        .unwrap()
        .with_constant("s", "1")
        .unwrap()
        .with_constant("t", "2")
        .unwrap()
        .with_relation("e", 2, edges)
        .unwrap()
}

fn with_p(s: &FiniteStructure, p: &[&[&str]]) -> FiniteStructure {
    s.clone().with_relation("p", 1, p).unwrap()
}

#[test]
fn psi_for_reachability() {
    let r = ordered_completion(&parse_program(REACH).unwrap()).unwrap();
    assert_eq!(r.scheme.c, 1);
    assert_eq!(
        r.psi["p"].to_string(),
        "ALL x1 . p(x1) -> x1 = s v (SOME x . e(x,x1) & p(x) & prec(o_p_1(x),o_p_1(x1)))"
    );
}

#[test]
fn order_width_values() {
    assert_eq!(order_width(0, 0), 0);
    assert_eq!(order_width(1, 0), 0);
    assert_eq!(order_width(1, 1), 1);
    assert_eq!(order_width(2, 1), 2);
    assert_eq!(order_width(3, 2), 4);
    assert_eq!(order_width(4, 2), 4);
    assert_eq!(order_width(5, 0), 3);
}

#[test]
fn auxiliary_budget() {
    let p = parse_program("a(X,Y) :- e(X,Y). b(X) :- a(X,X). c(X,Y) :- b(X), c(Y,X).").unwrap();
    let r = ordered_completion(&p).unwrap();
    assert_eq!(r.scheme.c, 4);
    assert_eq!(r.aux.functions().len(), 12);
    assert!(r.aux.functions().values().all(|&k| k <= 2));
    assert_eq!(r.aux.predicates().len(), 1);
    assert_eq!(r.aux.predicate_arity(&r.scheme.prec), Some(2));
}

#[test]
fn lex_less_shapes() {
    let v = |n: &str| Term::var(n);
    assert_eq!(lex_less("lt", &[], &[]).unwrap().to_string(), "FALSE");
    assert_eq!(lex_less("lt", &[v("a")], &[v("b")]).unwrap().to_string(), "lt(a,b)");
    assert_eq!(
        lex_less("lt", &[v("a"), v("c")], &[v("b"), v("d")]).unwrap().to_string(),
        "lt(a,b) v a = b & lt(c,d)"
    );
    assert_eq!(
        lex_less("lt", &[v("a")], &[v("b"), v("d")]),
        Err(Error::LengthMismatch(1, 2))
    );
}

#[test]
fn disjunctive_programs_are_rejected() {
    let p = parse_program("p | q.").unwrap();
    assert!(matches!(ordered_completion(&p), Err(Error::NotNormal(_))));
}

fn guard_holds(p: &Program, s: &FiniteStructure) -> bool {
    eval_formula(s, &completion_with_singleton_guard(p).unwrap(), &Assignment::new()).unwrap()
}

#[test]
fn fact_and_odd_loop() {
    let fact = parse_program("p.").unwrap();
    let odd = parse_program("p :- not p.").unwrap();
    let forced = parse_program("p. :- not p.").unwrap();
    for n in 1..=2 {
        let base = FiniteStructure::of_size(n).unwrap();
        let on = base.clone().with_relation("p", 0, &[&[]]).unwrap();
        let off = base.clone().with_relation("p", 0, &[]).unwrap();
        assert!(guard_holds(&fact, &on));
        assert!(!guard_holds(&fact, &off));
        assert!(!guard_holds(&odd, &on));
        assert!(!guard_holds(&odd, &off));
        assert!(guard_holds(&forced, &on));
    }
}

#[test]
fn reachability_guard_matches_stability() {
    let p = parse_program(REACH).unwrap();
    let edge = reach(&[&["1", "2"]]);
    assert!(guard_holds(&p, &with_p(&edge, &[&["1"], &["2"]])));
    assert!(!guard_holds(&p, &with_p(&edge, &[&["1"]])));
    let none = reach(&[]);
    for ps in [&[][..], &[&["1"][..]], &[&["1"], &["2"]]] {
        assert!(!guard_holds(&p, &with_p(&none, ps)));
    }
}

#[test]
fn singleton_sentence_enumerates_stable_valuations() {
    let p = parse_program("p :- not q. q :- not p.").unwrap();
    let z = singleton_sentence(&p).unwrap();
    let s = FiniteStructure::of_size(1).unwrap();
    let truth: &[&[&str]] = &[&[]];
    let val = |a: bool, b: bool| {
        s.clone()
            .with_relation("p", 0, if a { truth } else { &[] })
            .unwrap()
            .with_relation("q", 0, if b { truth } else { &[] })
            .unwrap()
    };
    assert!(naive_eval(&val(true, false), &z));
    assert!(naive_eval(&val(false, true), &z));
    assert!(!naive_eval(&val(true, true), &z));
    assert!(!naive_eval(&val(false, false), &z));
}

/// The guarded completion against two stability oracles, with the
/// second-order part enumerated naively.
#[test]
fn guarded_completion_agrees_with_naive_oracles() {
    let mut r = rng(3);
    let cfg = ProgramConfig {
        max_arity: 1,
        predicates: vec!["p".into(), "q".into()],
        max_rules: 3,
        constant_rate: 0.0,
        ..ProgramConfig::normal()
    };
    let mut checked = 0;
    for _ in 0..40 {
        let p = random_program(&mut r, &cfg);
        let f = completion_with_singleton_guard(&p).unwrap();
        for n in 1..=2 {
            let s = random_structure(&mut r, p.vocabulary(), n, 0.5);
            let want = naive_stable(&p, &s).unwrap();
            assert_eq!(check_stable(&p, &s).unwrap(), want, "{p}\n{s}");
            assert_eq!(naive_eval(&s, &f), want, "{p}\n{s}");
            checked += 1;
        }
    }
    assert_eq!(checked, 80);
}

#[test]
fn smtlib_for_reachability_is_well_formed() {
    let r = ordered_completion(&parse_program(REACH).unwrap()).unwrap();
    let s = reach(&[&["1", "2"]]);
    for opts in [SmtOptions::default(), SmtOptions { int_order: true }] {
        for domain in [SmtDomain::Structure(&s), SmtDomain::Size(1), SmtDomain::Uninterpreted] {
            let text = emit_smtlib(&r, domain, &opts).unwrap();
            check_smtlib(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert!(text.contains("(check-sat)"));
        }
    }
}

fn solver() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("SMK_SOLVER") {
        return Some(PathBuf::from(p));
    }
    std::env::var_os("PATH").and_then(|paths| {
        std::env::split_paths(&paths)
            .map(|d| d.join("z3"))
            .find(|p| p.is_file())
    })
}

#[test]
fn external_solver_verdicts() {
    let Some(z3) = solver() else {
        eprintln!("no SMT solver found; skipping");
        return;
    };
    let p = parse_program(REACH).unwrap();
    let r = ordered_completion(&p).unwrap();
    for (edges, want) in [(&[&["1", "2"][..]][..], Verdict::Sat), (&[][..], Verdict::Unsat)] {
        let s = reach(edges);
        let text = emit_smtlib(&r, SmtDomain::Structure(&s), &SmtOptions::default()).unwrap();
        assert_eq!(run_solver(&z3, &text).unwrap().verdict, want);
        let stable = !enumerate_stable(&p, &s, &Vocabulary::new()).unwrap().is_empty();
        assert_eq!(stable, want == Verdict::Sat);
    }
    let forced = ordered_completion(&parse_program("p. :- not p.").unwrap()).unwrap();
    let text = emit_smtlib(&forced, SmtDomain::Size(2), &SmtOptions::default()).unwrap();
    assert_eq!(run_solver(&z3, &text).unwrap().verdict, Verdict::Sat);
    let odd = ordered_completion(&parse_program("p :- not p.").unwrap()).unwrap();
    for domain in [SmtDomain::Size(1), SmtDomain::Size(2), SmtDomain::Uninterpreted] {
        let text = emit_smtlib(&odd, domain, &SmtOptions { int_order: true }).unwrap();
        assert_eq!(run_solver(&z3, &text).unwrap().verdict, Verdict::Unsat);
    }
}

#[test]
fn solver_failures_are_reported() {
    let missing = PathBuf::from("/nonexistent/solver");
    assert!(matches!(run_solver(&missing, "(check-sat)"), Err(Error::Solver(_))));
}

#[test]
fn completion_sentences_reparse() {
    let mut r = rng(17);
    let mut programs = vec![parse_program(REACH).unwrap()];
    programs.extend((0..20).map(|_| random_program(&mut r, &ProgramConfig::normal())));
    for p in &programs {
        let c = ordered_completion(p).unwrap();
        assert_eq!(parse_formula(&c.sentence.to_string()).unwrap(), c.sentence, "{p}");
        let g = completion_with_singleton_guard(p).unwrap();
        assert_eq!(parse_formula(&g.to_string()).unwrap(), g, "{p}");
    }
}
