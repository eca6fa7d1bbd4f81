use std::collections::BTreeSet;

use smk_core::structures::{
    eval_formula, expansions, instances, parse_structure, Assignment, FiniteStructure, GroundAtom,
};
use smk_core::syntax::{parse_formula, Vocabulary};
use smk_core::Error;

fn eval(s: &FiniteStructure, text: &str) -> bool {
    eval_formula(s, &parse_formula(text).unwrap(), &Assignment::new()).unwrap()
}

#[test]
fn instances_of_a_relation() {
    let s = FiniteStructure::of_size(2)
        .unwrap()
        .with_relation("e", 2, &[&["1", "2"]])
        .unwrap();
    let got = instances(&s, &["e".to_string()]).unwrap();
    assert_eq!(got, BTreeSet::from([GroundAtom::new("e", vec![0, 1])]));
    assert!(instances(&s, &Vec::<String>::new()).unwrap().is_empty());
    assert!(matches!(
        instances(&s, &["q".to_string()]),
        Err(Error::UnknownPredicate(_))
    ));
}

#[test]
fn singleton_test_sentence() {
    let one = FiniteStructure::new(["a"]).unwrap();
    let two = FiniteStructure::new(["a", "b"]).unwrap();
    assert!(eval(&one, "SOME x . ALL y . x = y"));
    assert!(!eval(&two, "SOME x . ALL y . x = y"));
}

#[test]
fn infinity_axiom_fails_on_finite_domains() {
    // R is an irreflexive transitive relation in which every element has an R-successor.
    let text = "EX R/2 . (ALL x . ~R(x,x)) & (ALL x . ALL y . ALL z . R(x,y) & R(y,z) -> R(x,z)) & (ALL x . SOME y . R(x,y))";
    for n in 1..=3 {
        let s = FiniteStructure::of_size(n).unwrap();
        assert!(!eval(&s, text), "size {n}");
    }
}

#[test]
fn second_order_functions_and_predicates() {
    let s = FiniteStructure::of_size(3).unwrap();
    // There is a fixpoint-free involution only on even domains.
    let inv = "EX fn f/1 . ALL x . f(f(x)) = x & f(x) != x";
    assert!(!eval(&s, inv));
    assert!(eval(&FiniteStructure::of_size(2).unwrap(), inv));
    // Universal second-order quantification.
    assert!(eval(&s, "ALL P/1 . (ALL x . P(x)) v (SOME x . ~P(x))"));
    assert!(!eval(&s, "ALL P/1 . SOME x . P(x)"));
}

#[test]
fn uninterpreted_symbols_are_reported() {
    let s = FiniteStructure::of_size(2).unwrap();
    let f = parse_formula("SOME x . p(x)").unwrap();
    assert!(matches!(
        eval_formula(&s, &f, &Assignment::new()),
        Err(Error::Uninterpreted(_))
    ));
}

#[test]
fn cap_refuses_huge_second_order_spaces() {
    let s = FiniteStructure::of_size(5).unwrap();
    let f = parse_formula("EX R/2 . ALL x . R(x,x)").unwrap();
    assert!(matches!(
        eval_formula(&s, &f, &Assignment::new()),
        Err(Error::ResourceLimit(_))
    ));
}

#[test]
fn free_variables_from_assignment() {
    let s = FiniteStructure::of_size(2)
        .unwrap()
        .with_relation("p", 1, &[&["2"]])
        .unwrap();
    let f = smk_core::syntax::Formula::pred("p", vec![smk_core::syntax::Term::var("X")]);
    assert!(!eval_formula(&s, &f, &Assignment::new().bind("X", 0)).unwrap());
    assert!(eval_formula(&s, &f, &Assignment::new().bind("X", 1)).unwrap());
}

#[test]
fn expansion_counts() {
    let s = FiniteStructure::new(["a", "b"]).unwrap();
    let unary = Vocabulary::new().with_predicate("p", 1);
    assert_eq!(expansions(&s, &unary).unwrap().count(), 4);
    assert_eq!(expansions(&s, &Vocabulary::new()).unwrap().collect::<Vec<_>>(), vec![s.clone()]);
    let fun = Vocabulary::new().with_function("f", 1);
    assert_eq!(expansions(&s, &fun).unwrap().count(), 4);
    for n in 1..=3usize {
        let s = FiniteStructure::of_size(n).unwrap();
        for (k, is_pred) in [(0u32, true), (1, true), (2, true), (0, false), (1, false), (2, false)] {
            let v = if is_pred {
                Vocabulary::new().with_predicate("q", k as usize)
            } else {
                Vocabulary::new().with_function("g", k as usize)
            };
            let expected = if is_pred {
                2usize.pow(n.pow(k) as u32)
            } else {
                n.pow(n.pow(k) as u32)
            };
            if expected > 1 << 20 {
                continue;
            }
            assert_eq!(expansions(&s, &v).unwrap().count(), expected, "n={n} k={k} pred={is_pred}");
        }
    }
}

#[test]
fn expansions_reject_clashes() {
    let s = FiniteStructure::of_size(2)
        .unwrap()
        .with_relation("p", 1, &[])
        .unwrap();
    let v = Vocabulary::new().with_predicate("p", 1);
    assert!(matches!(expansions(&s, &v), Err(Error::VocabularyClash(_))));
}

#[test]
fn structure_format_round_trip() {
    let text = "\
% a small graph
domain: a b c
rel e/2:
  b c
  a b
rel p/0:
  ()
fun f/1:
  a b
  b c
  c a
fun s/0:
  a
";
    let s = parse_structure(text).unwrap();
    let printed = s.to_string();
    assert_eq!(
        printed,
        "domain: a b c\nrel e/2:\n  a b\n  b c\nrel p/0:\n  ()\nfun f/1:\n  a b\n  b c\n  c a\nfun s/0:\n  a\n"
    );
    assert_eq!(parse_structure(&printed).unwrap(), s);
}

#[test]
fn structure_format_errors() {
    assert!(parse_structure("rel e/2:\n").is_err());
    assert!(parse_structure("domain: a\nrel e/2:\n  a\n").is_err());
    assert!(parse_structure("domain: a b\nfun f/1:\n  a b\n").is_err());
    assert!(parse_structure("domain: a\nrel e/1:\n  z\n").is_err());
    assert!(parse_structure("domain:\n").is_err());
}
