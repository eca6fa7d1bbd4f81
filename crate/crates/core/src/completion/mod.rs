//! Ordered completion of normal programs.
//!
//! The completion extends Clark's completion with a derivation order: every
//! intensional atom `Q(t̄)` gets a rank `(o_Q^c(t̄), …, o_Q^1(t̄))`, ranks are
//! compared lexicographically under a strict partial order `≺`, and each true
//! atom needs a supporting rule whose positive intensional body atoms have
//! strictly smaller rank. On finite structures with at least two elements the
//! result is equivalent to SM(Π) with the order symbols existentially
//! quantified.

mod smtlib;
mod solver;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::semantics::check_stable;
use crate::structures::FiniteStructure;
use crate::syntax::sm::{formula_var_names, rule_formula};
use crate::syntax::{Atom, Formula, FreshNames, Literal, Program, Rule, SoVar, Term, Vocabulary};

pub use smtlib::{check_smtlib, emit_smtlib, SmtDomain, SmtOptions};
pub use solver::{run_solver, SolverOutcome, Verdict};

/// Names of the order symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderScheme {
    pub c: usize,
    /// The binary order predicate ≺.
    pub prec: String,
    /// For each intensional predicate, `o_Q^1 … o_Q^c` (index `s - 1`).
    pub functions: BTreeMap<String, Vec<String>>,
    pub arities: BTreeMap<String, usize>,
}

impl OrderScheme {
    /// `ord(Q(t̄)) = (o_Q^c(t̄), …, o_Q^1(t̄))`.
    pub fn ord(&self, q: &str, args: &[Term]) -> Vec<Term> {
        self.functions[q]
            .iter()
            .rev()
            .map(|f| Term::app(f.clone(), args.to_vec()))
            .collect()
    }

    pub fn lex_less(&self, s: &[Term], t: &[Term]) -> Result<Formula> {
        lex_less(&self.prec, s, t)
    }

    /// `less_D(ϑ, λ)` for two intensional atoms.
    pub fn less_d(&self, theta: &Atom, lambda: &Atom) -> Result<Formula> {
        let (Some(q), Some(p)) = (theta.predicate(), lambda.predicate()) else {
            return Err(Error::InvalidStructure("less_D on an equality atom".into()));
        };
        self.lex_less(&self.ord(q, theta.args()), &self.ord(p, lambda.args()))
    }

    /// The auxiliary vocabulary σ: all order functions and ≺.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new().with_predicate(&self.prec, 2);
        for (q, fs) in &self.functions {
            for f in fs {
                v.add_function(f, self.arities[q]).expect("fresh order names");
            }
        }
        v
    }

    pub fn function_count(&self) -> usize {
        self.functions.values().map(Vec::len).sum()
    }
}

/// Lexicographic comparison of two term tuples: `⋁ᵢ (⋀_{j<i} sⱼ = tⱼ ∧ sᵢ ≺ tᵢ)`.
/// Empty tuples are never strictly less.
pub fn lex_less(prec: &str, s: &[Term], t: &[Term]) -> Result<Formula> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch(s.len(), t.len()));
    }
    let mut disjuncts = Vec::new();
    for i in 0..s.len() {
        let mut conj: Vec<Formula> = (0..i).map(|j| Formula::eq(s[j].clone(), t[j].clone())).collect();
        conj.push(Formula::pred(prec, vec![s[i].clone(), t[i].clone()]));
        disjuncts.push(Formula::and(conj));
    }
    Ok(Formula::or(disjuncts))
}

/// The least `c` with `c ≥ log₂ m + n`; zero when there are no intensional
/// predicates.
pub fn order_width(m: usize, n: usize) -> usize {
    if m == 0 {
        return 0;
    }
    let ceil_log2 = (usize::BITS - (m - 1).leading_zeros()) as usize;
    ceil_log2 + n
}

#[derive(Clone, Debug)]
pub struct CompletionResult {
    /// `∃σ φ_Π`.
    pub sentence: Formula,
    /// `φ_Π` with σ free.
    pub matrix: Formula,
    /// σ: the order functions and ≺.
    pub aux: Vocabulary,
    pub scheme: OrderScheme,
    /// `ψ_P` for each intensional predicate, universally closed.
    pub psi: BTreeMap<String, Formula>,
    pub program: Program,
}

/// A rule with head `P(x₁,…,x_k)`, split as in the completion.
struct NormalizedRule {
    /// Non-positive-intensional conjuncts ζ.
    zeta: Vec<Literal>,
    /// Positive intensional conjuncts ϑ.
    theta: Vec<Atom>,
    /// Variables not in the head.
    locals: Vec<String>,
}

/// Rewrites `rule` (already in formula variables) so its head is `P(xs)`.
fn normalize(rule: &Rule, xs: &[String], p: &Program) -> NormalizedRule {
    let head = &rule.head[0];
    let mut map: BTreeMap<String, Term> = BTreeMap::new();
    for (i, t) in head.args().iter().enumerate() {
        if let Term::Var(v) = t {
            if !map.contains_key(v) {
                map.insert(v.clone(), Term::Var(xs[i].clone()));
            }
        }
    }
    let r = rule.substitute(&map);
    let mut zeta = Vec::new();
    for (i, t) in r.head[0].args().iter().enumerate() {
        if *t != Term::Var(xs[i].clone()) {
            zeta.push(Literal::pos(Atom::Eq(Term::Var(xs[i].clone()), t.clone())));
        }
    }
    let mut theta = Vec::new();
    for l in &r.body {
        match (&l.atom, l.positive) {
            (Atom::Pred { pred, .. }, true) if p.is_intensional(pred) => theta.push(l.atom.clone()),
            _ => zeta.push(l.clone()),
        }
    }
    let mut names = Vec::new();
    for l in &r.body {
        l.atom.collect_vars(&mut names);
    }
    let head_vars: BTreeSet<&String> = xs[..head.args().len()].iter().collect();
    let mut locals = Vec::new();
    for v in names {
        if !head_vars.contains(&v) && !locals.contains(&v) {
            locals.push(v);
        }
    }
    NormalizedRule { zeta, theta, locals }
}

fn literal_formula(l: &Literal) -> Formula {
    if l.positive {
        Formula::Atom(l.atom.clone())
    } else {
        Formula::not(Formula::Atom(l.atom.clone()))
    }
}

/// The ordered completion `∃σ φ_Π` of a normal program.
///
/// Constraints of `p` are kept as their universal closures, so the result
/// also excludes structures violating them.
pub fn ordered_completion(p: &Program) -> Result<CompletionResult> {
    if let Some(i) = p.first_disjunctive_rule() {
        return Err(Error::NotNormal(i));
    }
    let mut fresh = FreshNames::new(p.vocabulary().names());
    let vars = formula_var_names(p, &mut fresh);
    let tau: Vec<String> = p.intensional().iter().cloned().collect();
    let n = p.max_intensional_arity();
    let c = order_width(tau.len(), n);

    let prec = fresh.fresh("prec");
    let mut functions = BTreeMap::new();
    let mut arities = BTreeMap::new();
    for q in &tau {
        let k = p.vocabulary().predicate_arity(q).unwrap_or(0);
        let names: Vec<String> = (1..=c).map(|s| fresh.fresh(&format!("o_{q}_{s}"))).collect();
        functions.insert(q.clone(), names);
        arities.insert(q.clone(), k);
    }
    let scheme = OrderScheme {
        c,
        prec: prec.clone(),
        functions,
        arities,
    };

    let xs: Vec<String> = (1..=n).map(|i| fresh.fresh(&format!("x{i}"))).collect();
    let (u, v, w) = (fresh.fresh("u"), fresh.fresh("v"), fresh.fresh("w"));
    let pr = |a: &str, b: &str| Formula::pred(prec.clone(), vec![Term::var(a), Term::var(b)]);
    let varpi = Formula::And(vec![
        Formula::forall(u.clone(), Formula::not(pr(&u, &u))),
        Formula::forall_many(
            &[u.clone(), v.clone(), w.clone()],
            Formula::implies(Formula::And(vec![pr(&u, &v), pr(&v, &w)]), pr(&u, &w)),
        ),
    ]);

    let none = BTreeMap::new();
    let mut parts = vec![varpi];
    for r in p.rules().iter().filter(|r| r.is_constraint()) {
        parts.push(rule_formula(r, &vars, &none));
    }
    let mut psi = BTreeMap::new();
    for q in &tau {
        let k = scheme.arities[q];
        let lambda = Atom::pred(q.clone(), xs[..k].iter().map(|x| Term::var(x.clone())).collect());
        let rules: Vec<&Rule> = p
            .rules()
            .iter()
            .filter(|r| r.head.first().and_then(Atom::predicate) == Some(q.as_str()))
            .collect();
        let phi_p = Formula::and(rules.iter().map(|r| rule_formula(r, &vars, &none)).collect());
        let mut support = Vec::new();
        for r in &rules {
            let nr = normalize(&r.substitute(&vars), &xs, p);
            let mut conj: Vec<Formula> = nr.zeta.iter().map(literal_formula).collect();
            for t in &nr.theta {
                conj.push(Formula::Atom(t.clone()));
                conj.push(scheme.less_d(t, &lambda)?);
            }
            support.push(Formula::exists_many(&nr.locals, Formula::and(conj)));
        }
        let psi_p = Formula::forall_many(
            &xs[..k],
            Formula::implies(Formula::Atom(lambda), Formula::or(support)),
        );
        psi.insert(q.clone(), psi_p.clone());
        parts.push(phi_p);
        parts.push(psi_p);
    }
    let matrix = Formula::and(parts);

    let mut so = vec![SoVar::predicate(prec.clone(), 2)];
    for q in &tau {
        for f in &scheme.functions[q] {
            so.push(SoVar::function(f.clone(), scheme.arities[q]));
        }
    }
    let sentence = Formula::so_exists_many(&so, matrix.clone());
    Ok(CompletionResult {
        sentence,
        matrix,
        aux: scheme.vocabulary(),
        scheme,
        psi,
        program: p.clone(),
    })
}

/// Upper bound on the number of predicates for the singleton case analysis.
pub const SINGLETON_MAX_PREDICATES: usize = 20;

/// A sentence equivalent to SM(Π) on one-element structures, compiled by
/// checking every valuation of the (collapsed, propositional) program.
pub fn singleton_sentence(p: &Program) -> Result<Formula> {
    let preds: Vec<(String, usize)> = p
        .vocabulary()
        .predicates()
        .iter()
        .map(|(q, &k)| (q.clone(), k))
        .collect();
    if preds.len() > SINGLETON_MAX_PREDICATES {
        return Err(Error::ResourceLimit(format!(
            "singleton case analysis over {} predicates",
            preds.len()
        )));
    }
    let mut fresh = FreshNames::new(p.vocabulary().names());
    let x = fresh.fresh("x");
    let mut base = FiniteStructure::of_size(1)?;
    for (f, &k) in p.vocabulary().functions() {
        base.set_function(f, k, vec![0])?;
    }
    let mut cases = Vec::new();
    for mask in 0u64..(1u64 << preds.len()) {
        let mut s = base.clone();
        let mut lits = Vec::new();
        for (i, (q, k)) in preds.iter().enumerate() {
            let on = mask >> i & 1 == 1;
            let tuples = if on { vec![vec![0; *k]] } else { vec![] };
            s.set_relation(q, *k, tuples)?;
            let a = Formula::pred(q.clone(), vec![Term::var(x.clone()); *k]);
            lits.push(if on { a } else { Formula::not(a) });
        }
        if check_stable(p, &s)? {
            cases.push(Formula::and(lits));
        }
    }
    Ok(Formula::exists(x, Formula::or(cases)))
}

/// `[∃x∀y(x=y) ∧ ζ] ∨ [∃x∃z(¬x=z) ∧ ψ]` with ψ the ordered completion.
pub fn completion_with_singleton_guard(p: &Program) -> Result<Formula> {
    let psi = ordered_completion(p)?.sentence;
    let zeta = singleton_sentence(p)?;
    Ok(guard(zeta, psi))
}

pub(crate) fn guard(zeta: Formula, psi: Formula) -> Formula {
    let (x, y) = (Term::var("x"), Term::var("y"));
    let single = Formula::exists("x", Formula::forall("y", Formula::eq(x.clone(), y.clone())));
    let several = Formula::exists_many(
        &["x".to_string(), "y".to_string()],
        Formula::not(Formula::eq(x, y)),
    );
    Formula::Or(vec![
        Formula::And(vec![single, zeta]),
        Formula::And(vec![several, psi]),
    ])
}
