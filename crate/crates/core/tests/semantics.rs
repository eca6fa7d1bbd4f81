use std::collections::BTreeSet;

use smk_core::semantics::{
    check_stable, check_stable_progression, check_stable_progression_normal, enumerate_stable,
    is_minimal_model, minimal_models, progression_fixpoint, progression_step, reduct, ClauseSet,
    PropRule, PropositionalProgram,
};
use smk_core::structures::{FiniteStructure, GroundAtom};
use smk_core::syntax::{parse_program, Vocabulary};

fn atom(p: &str, args: &[usize]) -> GroundAtom {
    GroundAtom::new(p, args.to_vec())
}

fn set(atoms: &[GroundAtom]) -> BTreeSet<GroundAtom> {
    atoms.iter().cloned().collect()
}

fn rule(body: &[GroundAtom], head: &[GroundAtom]) -> PropRule {
    PropRule {
        body: set(body),
        head: set(head),
    }
}

const REACH: &str = "p(s). p(Y) :- p(X), e(X,Y). :- not p(t).";

fn reach_structure(edges: &[&[&str]], p: &[&[&str]]) -> FiniteStructure {
    FiniteStructure::of_size(2)
        .unwrap()
        .with_constant("s", "1")
        .unwrap()
        .with_constant("t", "2")
        .unwrap()
        .with_relation("e", 2, edges)
        .unwrap()
        .with_relation("p", 1, p)
        .unwrap()
}

#[test]
fn reduct_examples() {
    let prog = parse_program("r(X) :- p(X), not q(X).").unwrap();
    let base = FiniteStructure::new(["a"]).unwrap().with_relation("p", 1, &[&["a"]]).unwrap();
    let s = base.clone().with_relation("q", 1, &[]).unwrap().with_relation("r", 1, &[]).unwrap();
    assert_eq!(reduct(&prog, &s).unwrap().rules, vec![rule(&[], &[atom("r", &[0])])]);
    let s = base.with_relation("q", 1, &[&["a"]]).unwrap().with_relation("r", 1, &[]).unwrap();
    assert!(reduct(&prog, &s).unwrap().rules.is_empty());

    let odd = parse_program("p(X) :- not p(X).").unwrap();
    let s = FiniteStructure::new(["a"]).unwrap().with_relation("p", 1, &[&["a"]]).unwrap();
    assert!(reduct(&odd, &s).unwrap().rules.is_empty());
}

#[test]
fn reduct_is_plain() {
    let prog = parse_program("t(Y) :- t(X), e(X,Y), not s(Y). s(X) | t(X) :- not e(X,X).").unwrap();
    let s = FiniteStructure::of_size(3)
        .unwrap()
        .with_relation("e", 2, &[&["1", "2"], &["2", "3"]])
        .unwrap()
        .with_relation("s", 1, &[&["1"]])
        .unwrap()
        .with_relation("t", 1, &[&["2"]])
        .unwrap();
    for r in reduct(&prog, &s).unwrap().rules {
        assert!(r.body.iter().all(|a| prog.is_intensional(&a.pred)));
    }
}

#[test]
fn minimal_model_examples() {
    let (a, b) = (GroundAtom::prop("a"), GroundAtom::prop("b"));
    let pp = PropositionalProgram::new(vec![rule(&[], &[a.clone(), b.clone()])]);
    assert_eq!(
        minimal_models(&pp, &set(&[a.clone(), b.clone()])).unwrap(),
        vec![set(&[a.clone()]), set(&[b.clone()])]
    );
    let empty = PropositionalProgram::default();
    assert_eq!(minimal_models(&empty, &set(&[a.clone()])).unwrap(), vec![BTreeSet::new()]);
    let incons = PropositionalProgram::new(vec![rule(&[a.clone()], &[]), rule(&[], &[a.clone()])]);
    assert!(minimal_models(&incons, &set(&[a.clone()])).unwrap().is_empty());

    assert!(is_minimal_model(&pp, &set(&[a.clone()])));
    assert!(!is_minimal_model(&pp, &set(&[a.clone(), b.clone()])));
    assert!(!is_minimal_model(&incons, &set(&[a])));
}

#[test]
fn reachability_stability() {
    let prog = parse_program(REACH).unwrap();
    let good = reach_structure(&[&["1", "2"]], &[&["1"], &["2"]]);
    assert!(check_stable(&prog, &good).unwrap());
    assert!(check_stable_progression(&prog, &good).unwrap());
    assert!(check_stable_progression_normal(&prog, &good).unwrap());
    let bad = reach_structure(&[&["1", "2"]], &[&["1"]]);
    assert!(!check_stable(&prog, &bad).unwrap());
    assert!(!check_stable_progression(&prog, &bad).unwrap());
}

#[test]
fn odd_loop_has_no_stable_model() {
    let prog = parse_program("p(X) :- not p(X).").unwrap();
    for tuples in [vec![], vec![vec!["a"]]] {
        let t: Vec<&[&str]> = tuples.iter().map(|v: &Vec<&str>| v.as_slice()).collect();
        let s = FiniteStructure::new(["a"]).unwrap().with_relation("p", 1, &t).unwrap();
        assert!(!check_stable(&prog, &s).unwrap());
        assert!(!check_stable_progression(&prog, &s).unwrap());
    }
}

fn path3() -> FiniteStructure {
    FiniteStructure::of_size(3)
        .unwrap()
        .with_relation("e", 2, &[&["1", "2"], &["2", "3"]])
        .unwrap()
        .with_relation("s", 1, &[])
        .unwrap()
        .with_relation("t", 1, &[])
        .unwrap()
}

fn st_clause(a: usize, b: usize) -> BTreeSet<GroundAtom> {
    set(&[atom("s", &[a]), atom("t", &[b])])
}

#[test]
fn cover_first_step_and_fixpoint() {
    let prog = parse_program("s(X) | t(X). t(Y) :- t(X), e(X,Y).").unwrap();
    let s = path3();
    let pp = reduct(&prog, &s).unwrap();
    let first = progression_step(&pp, &ClauseSet::new());
    let expected: ClauseSet = (0..3).map(|a| st_clause(a, a)).collect();
    assert_eq!(first, expected);

    let fix = progression_fixpoint(&prog, &s).unwrap();
    let expected: ClauseSet = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]
        .into_iter()
        .map(|(a, b)| st_clause(a, b))
        .collect();
    assert_eq!(fix, expected);
    assert_eq!(progression_step(&pp, &fix), fix);
}

#[test]
fn progression_base_cases() {
    let (a, b, c) = (GroundAtom::prop("a"), GroundAtom::prop("b"), GroundAtom::prop("c"));
    let pp = PropositionalProgram::new(vec![
        rule(&[], &[a.clone()]),
        rule(&[], &[b.clone()]),
        rule(&[a.clone(), b.clone()], &[c.clone()]),
    ]);
    let lam: ClauseSet = [set(&[a.clone()]), set(&[b.clone()])].into_iter().collect();
    let expected: ClauseSet = [set(&[a]), set(&[b]), set(&[c])].into_iter().collect();
    assert_eq!(progression_step(&pp, &lam), expected);

    let nofacts = PropositionalProgram::new(vec![rule(&[GroundAtom::prop("x")], &[GroundAtom::prop("y")])]);
    assert!(progression_step(&nofacts, &ClauseSet::new()).is_empty());

    let one = FiniteStructure::of_size(1).unwrap().with_relation("p", 0, &[&[]]).unwrap();
    let fact = parse_program("p.").unwrap();
    assert_eq!(progression_fixpoint(&fact, &one).unwrap().len(), 1);
    assert!(check_stable_progression_normal(&fact, &one).unwrap());
    assert!(progression_fixpoint(&parse_program("").unwrap(), &one).unwrap().is_empty());
}

#[test]
fn cover_singleton_minimal_cover() {
    let prog = parse_program("s(X) | t(X). t(Y) :- t(X), e(X,Y).").unwrap();
    let s = FiniteStructure::of_size(1)
        .unwrap()
        .with_relation("e", 2, &[])
        .unwrap()
        .with_relation("s", 1, &[&["1"]])
        .unwrap()
        .with_relation("t", 1, &[])
        .unwrap();
    assert!(check_stable_progression(&prog, &s).unwrap());
    assert!(check_stable(&prog, &s).unwrap());
}

#[test]
fn enumerate_reachability() {
    let prog = parse_program(REACH).unwrap();
    let aux = Vocabulary::new().with_predicate("p", 1);
    let base = |edges: &[&[&str]]| {
        FiniteStructure::of_size(2)
            .unwrap()
            .with_constant("s", "1")
            .unwrap()
            .with_constant("t", "2")
            .unwrap()
            .with_relation("e", 2, edges)
            .unwrap()
    };
    assert_eq!(enumerate_stable(&prog, &base(&[&["1", "2"]]), &aux).unwrap().len(), 1);
    assert!(enumerate_stable(&prog, &base(&[]), &aux).unwrap().is_empty());
}

#[test]
fn enumerate_disjunctive_choice() {
    let prog = parse_program("s(X) | t(X). t(Y) :- t(X), e(X,Y).").unwrap();
    let s = FiniteStructure::of_size(3)
        .unwrap()
        .with_relation("e", 2, &[&["1", "2"], &["2", "3"]])
        .unwrap();
    let models = enumerate_stable(&prog, &s, &Vocabulary::new()).unwrap();
    // t is upward closed along the path: t ∈ {∅, {3}, {2,3}, {1,2,3}}.
    assert_eq!(models.len(), 4);
    for m in &models {
        assert!(check_stable(&prog, m).unwrap());
    }
}
