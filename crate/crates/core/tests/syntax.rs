use smk_core::syntax::{
    build_sm_sentence, classify_prefix, parse_formula, parse_program, Atom, Formula, Literal, Term,
};
use smk_core::Error;

#[test]
fn parses_cover_program() {
    let p = parse_program("s(X) | t(X). t(Y) :- t(X), e(X,Y).").unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(p.rules()[0].head.len(), 2);
    assert!(p.rules()[0].body.is_empty());
    let tau: Vec<_> = p.intensional().iter().cloned().collect();
    assert_eq!(tau, vec!["s".to_string(), "t".to_string()]);
    assert_eq!(p.vocabulary().predicate_arity("e"), Some(2));
    assert!(!p.is_normal());
}

#[test]
fn constraint_with_negation() {
    let p = parse_program(":- not p.").unwrap();
    let r = &p.rules()[0];
    assert!(r.head.is_empty());
    assert_eq!(r.body, vec![Literal::neg(Atom::prop("p"))]);
    assert!(p.intensional().is_empty());
}

#[test]
fn equality_in_head_is_rejected() {
    assert!(parse_program("p(X,X) :- q(X).").is_ok());
    match parse_program("X = Y :- q(X).") {
        Err(Error::EqualityInHead { line: 1, col: 1 }) => {}
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_program("p(X) :- q(X)\nr.") {
        Err(Error::Syntax { line: 2, col: 1, .. }) => {}
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        parse_program("p(a). p(a,b)."),
        Err(Error::ArityMismatch { .. })
    ));
}

#[test]
fn program_round_trip() {
    let text = "s(X) | t(X).\nt(Y) :- t(X), e(X,Y).\n:- p(X), not q(f(X),c), X != Y, X = c.\nr.\n";
    let p = parse_program(text).unwrap();
    assert_eq!(p.to_string(), text);
    assert_eq!(parse_program(&p.to_string()).unwrap(), p);
}

#[test]
fn prefix_classes() {
    let f = parse_formula("EX T . ALL S . ALL x . SOME y . e(x,y)").unwrap();
    let c = classify_prefix(&f);
    assert!(c.in_sigma2_forall_exists());
    assert_eq!(c.levels(), 2);
    assert_eq!(c.universals, vec!["x".to_string()]);
    assert_eq!(c.existentials, vec!["y".to_string()]);

    let g = parse_formula("ALL x . x = x").unwrap();
    let c = classify_prefix(&g);
    assert!(c.in_sigma1_universal(0));
    assert_eq!(c.levels(), 1);
    assert!(!g.has_so_quantifier());

    let h = parse_formula("SOME x . ALL y . e(x,y)").unwrap();
    assert!(!classify_prefix(&h).in_sigma2_forall_exists());
}

#[test]
fn unbound_second_order_use_is_an_error() {
    assert!(matches!(
        parse_formula("ALL x . X(x)"),
        Err(Error::UnboundSecondOrder(_))
    ));
    assert!(matches!(
        parse_formula("p(X)"),
        Err(Error::UnboundVariable(_))
    ));
    assert!(parse_formula("EX X/1 . ALL x . X(x)").is_ok());
    assert!(matches!(
        parse_formula("EX X/1 . X(a, b)"),
        Err(Error::ArityMismatch { .. })
    ));
}

#[test]
fn formula_round_trip_examples() {
    for text in [
        "EX T/0 . ALL S/0 . ALL x . SOME y . e(x,y)",
        "ALL x . x = x",
        "(p -> q) -> r",
        "p -> q -> r",
        "~(p & q) v ~p & q <-> r",
        "EX fn f/1 . ALL x . f(f(x)) = x & x != f(x)",
        "(ALL x . p(x)) & (SOME y . q(y))",
        "TRUE & ~FALSE",
    ] {
        let f = parse_formula(text).unwrap();
        let printed = f.to_string();
        assert_eq!(parse_formula(&printed).unwrap(), f, "{text} -> {printed}");
    }
}

#[test]
fn sm_sentence_of_single_fact() {
    let p = parse_program("p.").unwrap();
    let f = build_sm_sentence(&p);
    assert_eq!(
        f.to_string(),
        "p & (ALL p_star/0 . (p_star -> p) & ~(p -> p_star) -> ~p_star)"
    );
    assert!(f.is_closed());
}

#[test]
fn sm_sentence_of_empty_program() {
    let p = parse_program("").unwrap();
    let f = build_sm_sentence(&p);
    assert!(f.is_closed());
    assert!(!f.has_so_quantifier());
}

#[test]
fn sm_sentence_stars_only_intensional() {
    let p = parse_program("s(X) | t(X). t(Y) :- t(X), e(X,Y).").unwrap();
    let f = build_sm_sentence(&p);
    let text = f.to_string();
    assert!(text.contains("s_star"));
    assert!(text.contains("t_star"));
    assert!(!text.contains("e_star"));
    assert!(f.is_closed());
    assert_eq!(parse_formula(&text).unwrap(), f);
}

#[test]
fn term_helpers() {
    let t = Term::app("f", vec![Term::var("X"), Term::constant("c")]);
    assert_eq!(t.to_string(), "f(X,c)");
    assert_eq!(Formula::eq(Term::var("x"), Term::constant("c")).to_string(), "x = c");
}
