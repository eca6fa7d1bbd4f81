//! Σ¹₂ sentences of the form `∃τ ∀σ ∀x̄ ∃ȳ (θ₁ ∨ … ∨ θ_m)` to disjunctive
//! programs whose stable models exist exactly on the structures satisfying
//! the sentence.

use std::collections::BTreeMap;

use super::normal_form::{normalize_forall_exists, DEFAULT_MAX_DISJUNCTS};
use super::successor::{successor_program, successor_vocabulary};
use super::{atom, eq, pos, vars, Translation};
use crate::error::{Error, Result};
use crate::syntax::{classify_prefix, Atom, FoShape, Formula, FreshNames, Literal, Program, Rule, SoKind, Term, Vocabulary};

/// A second-order variable and the program predicate standing for it.
struct SoSymbol {
    arity: usize,
    pred: String,
}

struct Prepared {
    tau: Vec<SoSymbol>,
    sigma: Vec<SoSymbol>,
    /// Program variables for the universal block.
    xs: Vec<String>,
    /// Disjuncts of the matrix as program literals.
    terms: Vec<Vec<Literal>>,
    /// Which predicate names denote second-order variables.
    so_preds: BTreeMap<String, usize>,
    vars: FreshNames,
    preds: FreshNames,
    base: Vocabulary,
    aux: Vocabulary,
    mapping: Vec<(String, String)>,
}

impl Prepared {
    fn new_pred(&mut self, base: &str, arity: usize, role: String) -> Result<String> {
        let name = self.preds.fresh(base);
        self.aux.add_predicate(&name, arity)?;
        self.mapping.push((name.clone(), role));
        Ok(name)
    }

    /// Rule-local variables avoiding the translated first-order ones.
    fn fresh_vars(&self, base: &str, k: usize) -> Vec<String> {
        let mut f = self.vars.clone();
        (1..=k).map(|i| f.fresh(&format!("{base}{i}"))).collect()
    }
}

fn program_var_name(v: &str) -> String {
    let mut cs = v.chars();
    match cs.next() {
        Some(c) if c.is_ascii_lowercase() => c.to_ascii_uppercase().to_string() + cs.as_str(),
        Some('_') | Some('A'..='Z') => v.to_string(),
        _ => format!("V{v}"),
    }
}

/// Splits a quantifier-free matrix into disjuncts of literals.
fn disjuncts(m: &Formula) -> Option<Vec<Vec<Formula>>> {
    let parts: Vec<&Formula> = match m {
        Formula::Or(ps) => ps.iter().collect(),
        Formula::False => return Some(Vec::new()),
        other => vec![other],
    };
    let mut out = Vec::new();
    for p in parts {
        let lits: Vec<Formula> = match p {
            Formula::And(ls) => ls.clone(),
            Formula::True => Vec::new(),
            other => vec![other.clone()],
        };
        for l in &lits {
            match l {
                Formula::Atom(_) => {}
                Formula::Not(a) if matches!(**a, Formula::Atom(_)) => {}
                _ => return None,
            }
        }
        out.push(lits);
    }
    Some(out)
}

fn convert_term(t: &Term, env: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(env[v].clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| convert_term(a, env)).collect()),
    }
}

fn convert_literal(l: &Formula, env: &BTreeMap<String, String>, so: &BTreeMap<String, String>) -> Literal {
    let (a, positive) = match l {
        Formula::Atom(a) => (a, true),
        Formula::Not(g) => match &**g {
            Formula::Atom(a) => (a, false),
            _ => unreachable!("checked literal"),
        },
        _ => unreachable!("checked literal"),
    };
    let atom = match a {
        Atom::Pred { pred, args } => Atom::Pred {
            pred: so.get(pred).cloned().unwrap_or_else(|| pred.clone()),
            args: args.iter().map(|t| convert_term(t, env)).collect(),
        },
        Atom::Eq(l, r) => Atom::Eq(convert_term(l, env), convert_term(r, env)),
    };
    Literal { atom, positive }
}

/// Checks the prefix class and matrix shape and sets up names.
fn prepare(f: &Formula, reserved: &Vocabulary) -> Result<Prepared> {
    if let Some(v) = f.free_vars().first() {
        return Err(Error::UnboundVariable(v.clone()));
    }
    let class = classify_prefix(f);
    if class.levels() > 2 {
        return Err(Error::WrongPrefixClass(format!(
            "{} second-order quantifier blocks; at most ∃∀ is supported",
            class.levels()
        )));
    }
    if class.has_function_vars() {
        return Err(Error::WrongPrefixClass("second-order function variables are not supported".into()));
    }
    let shape_ok = class.shape != FoShape::Other;
    let matrix = if shape_ok { disjuncts(&class.matrix) } else { None };
    let Some(matrix) = matrix else {
        // Distinguish a sentence outside the class from one that merely needs rewriting.
        return match normalize_forall_exists(f, DEFAULT_MAX_DISJUNCTS) {
            Err(e @ Error::WrongPrefixClass(_)) => Err(e),
            _ => Err(Error::NotNormalForm(
                "expected ∀x̄ ∃ȳ followed by a disjunction of conjunctions of literals; normalize the sentence first"
                    .into(),
            )),
        };
    };
    let mut base = Vocabulary::new();
    let mut taken: Vec<String> = reserved.names().into_iter().collect();
    for (name, arity, kind) in f.free_symbols() {
        match kind {
            SoKind::Predicate => base.add_predicate(&name, arity)?,
            SoKind::Function => base.add_function(&name, arity)?,
        }
        taken.push(name);
    }
    let mut preds = FreshNames::new(taken);
    let mut so_map = BTreeMap::new();
    let mut so_preds = BTreeMap::new();
    let mut aux = Vocabulary::new();
    let mut mapping = Vec::new();
    let mut symbols = |vs: Vec<crate::syntax::SoVar>, kind: &str| -> Result<Vec<SoSymbol>> {
        let mut out = Vec::new();
        for v in vs {
            if so_map.contains_key(&v.name) {
                return Err(Error::WrongPrefixClass(format!("second-order variable `{}` bound twice", v.name)));
            }
            let pred = preds.fresh(&v.name.to_lowercase());
            aux.add_predicate(&pred, v.arity)?;
            mapping.push((pred.clone(), format!("{kind} variable {}/{}", v.name, v.arity)));
            so_map.insert(v.name.clone(), pred.clone());
            so_preds.insert(pred.clone(), v.arity);
            out.push(SoSymbol { arity: v.arity, pred });
        }
        Ok(out)
    };
    let tau = symbols(class.existential_so(), "existential")?;
    let sigma = symbols(class.universal_so(), "universal")?;

    let mut fo_vars = FreshNames::new(Vec::<String>::new());
    let mut env = BTreeMap::new();
    for v in class.universals.iter().chain(class.existentials.iter()) {
        env.insert(v.clone(), fo_vars.fresh(&program_var_name(v)));
    }
    let xs = class.universals.iter().map(|v| env[v].clone()).collect();
    let terms = matrix
        .iter()
        .map(|t| t.iter().map(|l| convert_literal(l, &env, &so_map)).collect())
        .collect();
    Ok(Prepared {
        tau,
        sigma,
        xs,
        terms,
        so_preds,
        vars: fo_vars,
        preds,
        base,
        aux,
        mapping,
    })
}

fn rule(head: Vec<Atom>, body: Vec<Literal>) -> Rule {
    Rule { head, body }
}

fn conj(pred: &str, xs: &[String]) -> Vec<Literal> {
    xs.iter().map(|x| pos(pred, vec![Term::var(x.clone())])).collect()
}

/// `Succ_i(ū, v̄)` as body literals, `i` counted from 0.
fn succ_i(i: usize, u: &[String], v: &[String]) -> Vec<Literal> {
    let mut out = Vec::new();
    for j in 0..i {
        out.push(eq(Term::var(u[j].clone()), Term::var(v[j].clone())));
    }
    out.push(pos("succ", vec![Term::var(u[i].clone()), Term::var(v[i].clone())]));
    for j in i + 1..u.len() {
        out.push(pos("last", vec![Term::var(u[j].clone())]));
        out.push(pos("first", vec![Term::var(v[j].clone())]));
    }
    out
}

fn finish(p: Prepared, rules: Vec<Rule>, extra: &Vocabulary) -> Result<Translation> {
    let mut vocab = p.base.clone();
    vocab.merge(extra)?;
    vocab.merge(&p.aux)?;
    let program = Program::with_vocabulary(rules, &vocab)?;
    Ok(Translation {
        program,
        aux: p.aux,
        mapping: p.mapping,
    })
}

/// Rules Δ1–Δ6 over an external successor structure.
fn delta(p: &mut Prepared) -> Result<Vec<Rule>> {
    let n = p.xs.len();
    let d = p.new_pred("d", n, "all assignments to the universal variables are checked up to here".into())?;
    let mut comp = BTreeMap::new();
    let so: Vec<(String, usize, bool)> = p
        .tau
        .iter()
        .map(|s| (s.pred.clone(), s.arity, false))
        .chain(p.sigma.iter().map(|s| (s.pred.clone(), s.arity, true)))
        .collect();
    for (x, _, _) in &so {
        let c = p.new_pred(&format!("{x}_c"), p.so_preds[x], format!("complement of {x}"))?;
        comp.insert(x.clone(), c);
    }
    let xs = p.xs.clone();
    let dx = atom(&d, vars(&xs));
    let mut rules = Vec::new();
    for (x, k, _) in &so {
        let zs = p.fresh_vars("Z", *k);
        rules.push(rule(vec![atom(x, vars(&zs)), atom(&comp[x], vars(&zs))], vec![]));
    }
    for (x, k, universal) in &so {
        if !universal {
            continue;
        }
        let zs = p.fresh_vars("Z", *k);
        let mut body = conj("last", &xs);
        body.push(Literal::pos(dx.clone()));
        rules.push(rule(vec![atom(&comp[x], vars(&zs))], body.clone()));
        rules.push(rule(vec![atom(x, vars(&zs))], body));
    }
    let theta_c: Vec<Vec<Literal>> = p
        .terms
        .iter()
        .map(|t| {
            t.iter()
                .map(|l| match &l.atom {
                    Atom::Pred { pred, args } if !l.positive && comp.contains_key(pred) => {
                        pos(&comp[pred], args.clone())
                    }
                    _ => l.clone(),
                })
                .collect()
        })
        .collect();
    for t in &theta_c {
        let mut body = conj("first", &xs);
        body.extend(t.iter().cloned());
        rules.push(rule(vec![dx.clone()], body));
    }
    if n > 0 {
        let vs = p.fresh_vars("V", n);
        for j in 0..n {
            for t in &theta_c {
                let mut body = succ_i(j, &vs, &xs);
                body.push(pos(&d, vars(&vs)));
                body.extend(t.iter().cloned());
                rules.push(rule(vec![dx.clone()], body));
            }
        }
    }
    let mut body = conj("last", &xs);
    body.push(Literal::neg(dx));
    rules.push(rule(vec![], body));
    Ok(rules)
}

/// Translation for successor structures: the input structure interprets
/// `succ`, `first` and `last` as a successor structure.
pub fn translate_so2dlp_suc(f: &Formula) -> Result<Translation> {
    let succ = successor_vocabulary();
    let mut p = prepare(f, &succ)?;
    let rules = delta(&mut p)?;
    finish(p, rules, &succ)
}

/// Translation for arbitrary finite structures: Π_S guesses the successor
/// structure that the rules of the successor variant rely on.
pub fn translate_so2dlp_fin(f: &Formula) -> Result<Translation> {
    let pi_s = successor_program();
    let internal = pi_s.vocabulary().difference(&successor_vocabulary());
    for (name, _, _) in f.free_symbols() {
        if internal.contains(&name) {
            return Err(Error::VocabularyClash(name));
        }
    }
    let mut p = prepare(f, pi_s.vocabulary())?;
    let mut rules = delta(&mut p)?;
    rules.extend(pi_s.rules().iter().cloned());
    // The order is guessed, so the structure no longer interprets υ_S.
    p.base = p.base.difference(&successor_vocabulary());
    for (name, &k) in pi_s.vocabulary().predicates() {
        p.aux.add_predicate(name, k)?;
        p.mapping.push((name.clone(), "successor guess".into()));
    }
    finish(p, rules, pi_s.vocabulary())
}

/// Translation for arbitrary finite structures without an order: every
/// second-order variable gets true/false copies indexed by the universal tuple.
pub fn translate_so2dlp_arb(f: &Formula) -> Result<Translation> {
    let mut p = prepare(f, &Vocabulary::new())?;
    let xs = p.xs.clone();
    let n = xs.len();
    let d = p.new_pred("d", n, "the matrix holds for this assignment".into())?;
    let dx = atom(&d, vars(&xs));
    let so: Vec<(String, usize, bool)> = p
        .tau
        .iter()
        .map(|s| (s.pred.clone(), s.arity, false))
        .chain(p.sigma.iter().map(|s| (s.pred.clone(), s.arity, true)))
        .collect();
    let mut tf = BTreeMap::new();
    for (x, k, _) in &so {
        let t = p.new_pred(&format!("t_{x}"), n + k, format!("{x} holds, per universal tuple"))?;
        let f = p.new_pred(&format!("f_{x}"), n + k, format!("{x} fails, per universal tuple"))?;
        tf.insert(x.clone(), (t, f));
    }
    let with_x = |args: &[Term]| {
        let mut v = vars(&xs);
        v.extend(args.iter().cloned());
        v
    };
    let mut rules = Vec::new();
    for (x, k, _) in &so {
        let zs = p.fresh_vars("Z", *k);
        let (t, f) = &tf[x];
        rules.push(rule(
            vec![atom(t, with_x(&vars(&zs))), atom(f, with_x(&vars(&zs)))],
            vec![],
        ));
    }
    for (x, k, universal) in &so {
        if !universal {
            continue;
        }
        let zs = p.fresh_vars("Z", *k);
        let (t, f) = &tf[x];
        rules.push(rule(vec![atom(f, with_x(&vars(&zs)))], vec![Literal::pos(dx.clone())]));
        rules.push(rule(vec![atom(t, with_x(&vars(&zs)))], vec![Literal::pos(dx.clone())]));
    }
    for term in &p.terms {
        let body = term
            .iter()
            .map(|l| match &l.atom {
                Atom::Pred { pred, args } if tf.contains_key(pred) => {
                    let (t, f) = &tf[pred];
                    pos(if l.positive { t } else { f }, with_x(args))
                }
                _ => l.clone(),
            })
            .collect();
        rules.push(rule(vec![dx.clone()], body));
    }
    rules.push(rule(vec![], vec![Literal::neg(dx.clone())]));
    // The existential guess must not depend on the universal tuple.
    if n > 0 {
        for (x, k, universal) in &so {
            if *universal {
                continue;
            }
            let zs = p.fresh_vars("Z", *k);
            let other = p.fresh_vars("W", n);
            let (t, f) = &tf[x];
            let mut f_args = vars(&other);
            f_args.extend(vars(&zs));
            rules.push(rule(vec![], vec![pos(t, with_x(&vars(&zs))), pos(f, f_args)]));
        }
    }
    finish(p, rules, &Vocabulary::new())
}
