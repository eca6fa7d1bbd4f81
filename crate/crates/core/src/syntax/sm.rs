//! The second-order sentence SM(Π).

use std::collections::BTreeMap;

use super::formula::{Formula, SoVar};
use super::{Atom, FreshNames, Literal, Program, Rule, Term};

/// Maps every program variable to a lowercase individual variable name that
/// clashes with no symbol of the program, so the result prints and re-parses.
pub(crate) fn formula_var_names(p: &Program, fresh: &mut FreshNames) -> BTreeMap<String, Term> {
    p.variable_names()
        .into_iter()
        .map(|v| {
            let lowered = if v.starts_with('_') {
                v.clone()
            } else {
                v.to_lowercase()
            };
            let name = fresh.fresh(&lowered);
            (v, Term::Var(name))
        })
        .collect()
}

fn literal_formula(l: &Literal, star: &BTreeMap<String, String>) -> Formula {
    let atom = match (&l.atom, l.positive) {
        (Atom::Pred { pred, args }, true) if star.contains_key(pred) => Atom::Pred {
            pred: star[pred].clone(),
            args: args.clone(),
        },
        (a, _) => a.clone(),
    };
    if l.positive {
        Formula::Atom(atom)
    } else {
        Formula::not(Formula::Atom(atom))
    }
}

/// `∀x̄ (body → head)` with positive intensional occurrences renamed via `star`.
pub(crate) fn rule_formula(r: &Rule, vars: &BTreeMap<String, Term>, star: &BTreeMap<String, String>) -> Formula {
    let r = r.substitute(vars);
    let head = Formula::or(
        r.head
            .iter()
            .map(|a| literal_formula(&Literal::pos(a.clone()), star))
            .collect(),
    );
    let f = if r.body.is_empty() {
        head
    } else {
        let body = Formula::and(r.body.iter().map(|l| literal_formula(l, star)).collect());
        Formula::implies(body, head)
    };
    let mut names = Vec::new();
    for a in &r.head {
        a.collect_vars(&mut names);
    }
    for l in &r.body {
        l.atom.collect_vars(&mut names);
    }
    Formula::forall_many(&names, f)
}

/// Builds SM(Π) = φ ∧ ∀τ*(τ* < τ → ¬φ*).
pub fn build_sm_sentence(p: &Program) -> Formula {
    let mut fresh = FreshNames::new(p.vocabulary().names());
    let vars = formula_var_names(p, &mut fresh);

    let star: BTreeMap<String, String> = p
        .intensional()
        .iter()
        .map(|q| (q.clone(), fresh.fresh(&format!("{q}_star"))))
        .collect();
    let none = BTreeMap::new();

    let phi = Formula::and(p.rules().iter().map(|r| rule_formula(r, &vars, &none)).collect());
    let phi_star = Formula::and(p.rules().iter().map(|r| rule_formula(r, &vars, &star)).collect());

    let mut below = Vec::new();
    let mut above = Vec::new();
    let mut so_vars = Vec::new();
    let all_xs: Vec<String> = (1..=p.max_intensional_arity())
        .map(|i| fresh.fresh(&format!("x{i}")))
        .collect();
    for (q, qs) in &star {
        let k = p.vocabulary().predicate_arity(q).unwrap_or(0);
        let xs = &all_xs[..k];
        let args: Vec<Term> = xs.iter().map(|x| Term::Var(x.clone())).collect();
        let pq = Formula::pred(q.clone(), args.clone());
        let ps = Formula::pred(qs.clone(), args);
        below.push(Formula::forall_many(xs, Formula::implies(ps.clone(), pq.clone())));
        above.push(Formula::forall_many(xs, Formula::implies(pq, ps)));
        so_vars.push(SoVar::predicate(qs.clone(), k));
    }
    let lt = Formula::And(vec![Formula::and(below), Formula::not(Formula::and(above))]);
    let minimality = Formula::so_forall_many(&so_vars, Formula::implies(lt, Formula::not(phi_star)));
    Formula::And(vec![phi, minimality])
}
