//! Disjunctive to normal programs over finite structures with at least three
//! elements.
//!
//! Clauses of intensional atoms are encoded as domain elements by a pairing
//! function `enc`; the translated program computes the Γ-progression on these
//! codes and reads the stable model back from the derivable clauses.

use std::collections::BTreeMap;

use super::{atom, eq, neg, neq, pos, var, Translation};
use crate::error::Result;
use crate::syntax::{Atom, FreshNames, Literal, Program, Rule, Term, Vocabulary};

struct Names {
    enc: String,
    enc_c: String,
    ok_e: String,
    mrg: String,
    in_: String,
    subc: String,
    equ: String,
    true_: String,
    false_: String,
    eps: String,
    codes: BTreeMap<String, String>,
}

impl Names {
    fn code(&self, pred: &str) -> Term {
        Term::constant(self.codes[pred].clone())
    }
}

/// Appends the literals of the macro `enc(from, ⌈P(s̄)⌉, to)` with the code
/// of `P` substituted for the first link of the chain.
fn encode_atom(
    n: &Names,
    pred: &str,
    args: &[Term],
    fresh: &mut FreshNames,
    u: &mut usize,
    body: &mut Vec<Literal>,
) -> Term {
    let mut cur = n.code(pred);
    for s in args {
        *u += 1;
        let next = Term::var(fresh.fresh(&format!("U{u}")));
        body.push(pos(&n.enc, vec![cur, s.clone(), next.clone()]));
        cur = next;
    }
    cur
}

fn rule(head: Option<Atom>, body: Vec<Literal>) -> Rule {
    Rule {
        head: head.into_iter().collect(),
        body,
    }
}

fn fixed_rules(n: &Names) -> Vec<Rule> {
    let (x, y, z, u, v, w) = (var("X"), var("Y"), var("Z"), var("U"), var("V"), var("W"));
    let mut rules = Vec::new();
    // Π1: `enc` is a total injective function from pairs onto non-codes.
    for c in n.codes.values().chain(std::iter::once(&n.eps)) {
        rules.push(rule(None, vec![pos(&n.enc, vec![x.clone(), y.clone(), Term::constant(c.clone())])]));
    }
    let xyz = vec![x.clone(), y.clone(), z.clone()];
    rules.push(rule(Some(atom(&n.enc, xyz.clone())), vec![neg(&n.enc_c, xyz.clone())]));
    rules.push(rule(Some(atom(&n.enc_c, xyz.clone())), vec![neg(&n.enc, xyz.clone())]));
    let uvz = vec![u.clone(), v.clone(), z.clone()];
    rules.push(rule(
        None,
        vec![pos(&n.enc, xyz.clone()), pos(&n.enc, uvz.clone()), neq(x.clone(), u.clone())],
    ));
    rules.push(rule(
        None,
        vec![pos(&n.enc, xyz.clone()), pos(&n.enc, uvz), neq(y.clone(), v.clone())],
    ));
    let xy = vec![x.clone(), y.clone()];
    rules.push(rule(Some(atom(&n.ok_e, xy.clone())), vec![pos(&n.enc, xyz.clone())]));
    rules.push(rule(Some(atom(&n.ok_e, xy.clone())), vec![neg(&n.ok_e, xy.clone())]));
    rules.push(rule(
        None,
        vec![
            pos(&n.enc, xyz.clone()),
            pos(&n.enc, vec![x.clone(), y.clone(), u.clone()]),
            neq(z.clone(), u.clone()),
        ],
    ));
    // Π2: merging, membership, subclause and equivalence of codes.
    let eps = Term::constant(n.eps.clone());
    rules.push(rule(
        Some(atom(&n.mrg, vec![x.clone(), y.clone(), x.clone()])),
        vec![eq(y.clone(), eps.clone())],
    ));
    rules.push(rule(
        Some(atom(&n.mrg, xyz.clone())),
        vec![
            pos(&n.mrg, vec![x.clone(), u.clone(), v.clone()]),
            pos(&n.enc, vec![u.clone(), w.clone(), y.clone()]),
            pos(&n.enc, vec![v.clone(), w.clone(), z.clone()]),
        ],
    ));
    rules.push(rule(
        Some(atom(&n.in_, vec![u.clone(), y.clone()])),
        vec![pos(&n.enc, vec![x.clone(), u.clone(), y.clone()])],
    ));
    rules.push(rule(
        Some(atom(&n.in_, vec![u.clone(), y.clone()])),
        vec![
            pos(&n.enc, vec![x.clone(), z.clone(), y.clone()]),
            pos(&n.in_, vec![u.clone(), x.clone()]),
        ],
    ));
    rules.push(rule(Some(atom(&n.subc, xy.clone())), vec![eq(x.clone(), eps.clone())]));
    rules.push(rule(
        Some(atom(&n.subc, xy.clone())),
        vec![
            pos(&n.subc, vec![u.clone(), y.clone()]),
            pos(&n.enc, vec![u.clone(), v.clone(), x.clone()]),
            pos(&n.in_, vec![v.clone(), y.clone()]),
        ],
    ));
    rules.push(rule(
        Some(atom(&n.equ, xy.clone())),
        vec![pos(&n.subc, xy.clone()), pos(&n.subc, vec![y.clone(), x.clone()])],
    ));
    // Π3, first part: truth is closed under clause equivalence.
    rules.push(rule(
        Some(atom(&n.true_, vec![y.clone()])),
        vec![pos(&n.true_, vec![x.clone()]), pos(&n.equ, xy)],
    ));
    rules
}

/// The progression rule simulating one rule of the source program on codes.
fn progression_rule(n: &Names, r: &Rule, intensional: &dyn Fn(&str) -> bool) -> Rule {
    let mut fresh = FreshNames::new(r.variables());
    let mut body = Vec::new();
    let mut rest = Vec::new();
    let mut ys = Vec::new();
    let mut u = 0usize;
    for l in &r.body {
        match &l.atom {
            Atom::Pred { pred, args } if l.positive && intensional(pred) => {
                let i = ys.len() + 1;
                let x = Term::var(fresh.fresh(&format!("X{i}")));
                body.push(pos(&n.true_, vec![x.clone()]));
                let code = encode_atom(n, pred, args, &mut fresh, &mut u, &mut body);
                let y = Term::var(fresh.fresh(&format!("Y{i}")));
                body.push(pos(&n.enc, vec![y.clone(), code, x]));
                ys.push(y);
            }
            _ => rest.push(l.clone()),
        }
    }
    let z = Term::var(fresh.fresh("Z"));
    let mut w = 0usize;
    let steps = r.head.len() + ys.len();
    let mut step = 0usize;
    let mut next_link = |fresh: &mut FreshNames, step: &mut usize| {
        *step += 1;
        if *step == steps {
            z.clone()
        } else {
            w += 1;
            Term::var(fresh.fresh(&format!("W{w}")))
        }
    };
    let mut cur = Term::constant(n.eps.clone());
    for a in &r.head {
        if let Atom::Pred { pred, args } = a {
            let code = encode_atom(n, pred, args, &mut fresh, &mut u, &mut body);
            let next = next_link(&mut fresh, &mut step);
            body.push(pos(&n.enc, vec![cur, code, next.clone()]));
            cur = next;
        }
    }
    for y in ys {
        let next = next_link(&mut fresh, &mut step);
        body.push(pos(&n.mrg, vec![cur, y, next.clone()]));
        cur = next;
    }
    body.extend(rest);
    // With an empty head and no intensional body atoms the derived clause is ε.
    rule(Some(atom(&n.true_, vec![cur])), body)
}

/// The falsity and decoding rules for an intensional predicate of arity `k`.
fn decoding_rules(n: &Names, pred: &str, k: usize) -> [Rule; 2] {
    let mut fresh = FreshNames::new(["X", "Y"]);
    let zs: Vec<Term> = (1..=k).map(|i| Term::var(fresh.fresh(&format!("Z{i}")))).collect();
    let (x, y) = (var("X"), var("Y"));
    let mut u = 0usize;
    let mut chain = Vec::new();
    let code = encode_atom(n, pred, &zs, &mut fresh, &mut u, &mut chain);

    let mut body = vec![pos(&n.false_, vec![x.clone()])];
    body.extend(chain.iter().cloned());
    body.push(pos(&n.enc, vec![x.clone(), code.clone(), y.clone()]));
    body.push(neg(pred, zs.clone()));
    let falsity = rule(Some(atom(&n.false_, vec![y.clone()])), body);

    let mut body = vec![pos(&n.true_, vec![x.clone()])];
    body.extend(chain);
    body.push(pos(&n.enc, vec![y.clone(), code, x]));
    body.push(pos(&n.false_, vec![y]));
    let decode = rule(Some(atom(pred, zs)), body);
    [falsity, decode]
}

/// Translates a disjunctive program Π into a normal program Π◇ such that,
/// over finite structures with at least three elements, the stable models of
/// Π◇ restricted to the vocabulary of Π are exactly those of Π.
pub fn translate_d2n(p: &Program) -> Result<Translation> {
    let mut fresh = FreshNames::new(p.vocabulary().names());
    let mut mapping = Vec::new();
    let mut aux = Vocabulary::new();
    let mut name = |base: &str, arity: usize, role: &str, aux: &mut Vocabulary, pred: bool| -> Result<String> {
        let s = fresh.fresh(base);
        if pred {
            aux.add_predicate(&s, arity)?;
        } else {
            aux.add_function(&s, arity)?;
        }
        mapping.push((s.clone(), role.to_string()));
        Ok(s)
    };
    let mut codes = BTreeMap::new();
    for pred in p.vocabulary().predicates().keys() {
        let c = name(&format!("c_{pred}"), 0, &format!("code of predicate {pred}"), &mut aux, false)?;
        codes.insert(pred.clone(), c);
    }
    let n = Names {
        eps: name("c_eps", 0, "code of the empty clause", &mut aux, false)?,
        enc: name("enc", 3, "pairing function on codes", &mut aux, true)?,
        enc_c: name("enc_c", 3, "complement of enc", &mut aux, true)?,
        ok_e: name("ok_e", 2, "totality witness for enc", &mut aux, true)?,
        mrg: name("mrg", 3, "union of two clause codes", &mut aux, true)?,
        in_: name("in", 2, "atom code occurs in clause code", &mut aux, true)?,
        subc: name("subc", 2, "subclause relation on codes", &mut aux, true)?,
        equ: name("equ", 2, "codes of the same clause", &mut aux, true)?,
        true_: name("true", 1, "clause derived by progression", &mut aux, true)?,
        false_: name("false", 1, "clause all of whose atoms are false", &mut aux, true)?,
        codes,
    };

    let is_int = |q: &str| p.is_intensional(q);
    let mut rules = fixed_rules(&n);
    for r in p.rules() {
        rules.push(progression_rule(&n, r, &is_int));
    }
    let x = var("X");
    rules.push(rule(
        Some(atom(&n.false_, vec![x.clone()])),
        vec![eq(x, Term::constant(n.eps.clone()))],
    ));
    rules.push(rule(None, vec![pos(&n.true_, vec![Term::constant(n.eps.clone())])]));
    let decoding: Vec<[Rule; 2]> = p
        .intensional()
        .iter()
        .map(|q| decoding_rules(&n, q, p.vocabulary().predicate_arity(q).unwrap_or(0)))
        .collect();
    rules.extend(decoding.iter().map(|[f, _]| f.clone()));
    rules.extend(decoding.into_iter().map(|[_, d]| d));

    let program = Program::with_vocabulary(rules, &{
        let mut v = p.vocabulary().clone();
        v.merge(&aux)?;
        v
    })?;
    Ok(Translation { program, aux, mapping })
}
