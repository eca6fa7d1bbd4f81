//! The programs Π_S (guess a successor structure) and Π_T (detect finiteness).

use super::{neg, neq, pos, var};
use crate::syntax::{Program, Rule, Vocabulary};

/// The successor vocabulary: `succ/2`, `first/1`, `last/1`.
pub fn successor_vocabulary() -> Vocabulary {
    Vocabulary::new()
        .with_predicate("succ", 2)
        .with_predicate("first", 1)
        .with_predicate("last", 1)
}

fn r(head: Option<(&str, &[&str])>, body: Vec<crate::syntax::Literal>) -> Rule {
    let head = head
        .map(|(p, args)| vec![super::atom(p, args.iter().map(|a| var(a)).collect())])
        .unwrap_or_default();
    Rule { head, body }
}

fn v(names: &[&str]) -> Vec<crate::syntax::Term> {
    names.iter().map(|n| var(n)).collect()
}

/// Π_S: every stable model over a finite domain interprets `less` as a strict
/// total order and `succ`, `first`, `last` as the induced successor structure.
///
/// Internal predicates: `less/2`, `less_c/2`, `first_c/1`, `last_c/1`,
/// `succ_c/2`.
pub fn successor_program() -> Program {
    let rules = vec![
        r(Some(("less", &["X", "Y"])), vec![neg("less_c", v(&["X", "Y"]))]),
        r(Some(("less_c", &["X", "Y"])), vec![neg("less", v(&["X", "Y"]))]),
        r(
            Some(("less", &["X", "Z"])),
            vec![pos("less", v(&["X", "Y"])), pos("less", v(&["Y", "Z"]))],
        ),
        r(None, vec![pos("less", v(&["X", "Y"])), pos("less", v(&["Y", "X"]))]),
        r(
            None,
            vec![
                neg("less", v(&["X", "Y"])),
                neg("less", v(&["Y", "X"])),
                neq(var("X"), var("Y")),
            ],
        ),
        r(Some(("first_c", &["Y"])), vec![pos("less", v(&["X", "Y"]))]),
        r(Some(("first", &["X"])), vec![neg("first_c", v(&["X"]))]),
        r(Some(("last_c", &["X"])), vec![pos("less", v(&["X", "Y"]))]),
        r(Some(("last", &["X"])), vec![neg("last_c", v(&["X"]))]),
        r(
            Some(("succ_c", &["X", "Z"])),
            vec![pos("less", v(&["X", "Y"])), pos("less", v(&["Y", "Z"]))],
        ),
        r(
            Some(("succ", &["X", "Y"])),
            vec![neg("succ_c", v(&["X", "Y"])), pos("less", v(&["X", "Y"]))],
        ),
    ];
    Program::new(rules).expect("fixed program is well formed")
}

/// Π_T = Π_S plus the rules deriving `num/1` along the successor chain and
/// the proposition `finite` once the last element is reached.
pub fn finiteness_program() -> Program {
    let extra = vec![
        r(Some(("num", &["X"])), vec![pos("first", v(&["X"]))]),
        r(
            Some(("num", &["Y"])),
            vec![pos("num", v(&["X"])), pos("succ", v(&["X", "Y"]))],
        ),
        r(Some(("finite", &[])), vec![pos("num", v(&["X"])), pos("last", v(&["X"]))]),
    ];
    successor_program()
        .union(&Program::new(extra).expect("fixed program is well formed"))
        .expect("disjoint extension")
}
