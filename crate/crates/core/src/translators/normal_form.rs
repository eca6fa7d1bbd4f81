//! Bringing a second-order sentence into the shape `Q̄ ∀x̄ ∃ȳ (DNF)` expected
//! by the so2dlp translators.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::syntax::{Atom, Formula, FreshNames, Quantifier, SoVar, Term};

/// Default bound on the number of disjuncts produced by [`normalize_forall_exists`].
pub const DEFAULT_MAX_DISJUNCTS: usize = 4096;

fn nnf(f: &Formula, positive: bool) -> Result<Formula> {
    Ok(match f {
        Formula::True => {
            if positive {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::False => {
            if positive {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => nnf(g, !positive)?,
        Formula::And(gs) | Formula::Or(gs) => {
            let parts = gs.iter().map(|g| nnf(g, positive)).collect::<Result<Vec<_>>>()?;
            if matches!(f, Formula::And(_)) == positive {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                Formula::Or(vec![nnf(a, false)?, nnf(b, true)?])
            } else {
                Formula::And(vec![nnf(a, true)?, nnf(b, false)?])
            }
        }
        Formula::Iff(a, b) => Formula::Or(vec![
            Formula::And(vec![nnf(a, true)?, nnf(b, positive)?]),
            Formula::And(vec![nnf(a, false)?, nnf(b, !positive)?]),
        ]),
        Formula::Quant(q, v, g) => {
            let q = if positive { *q } else { flip(*q) };
            Formula::Quant(q, v.clone(), Box::new(nnf(g, positive)?))
        }
        Formula::SoQuant(..) => {
            return Err(Error::WrongPrefixClass(
                "second-order quantifier inside the first-order part".into(),
            ))
        }
    })
}

fn flip(q: Quantifier) -> Quantifier {
    match q {
        Quantifier::Exists => Quantifier::Forall,
        Quantifier::Forall => Quantifier::Exists,
    }
}

/// Pulls all quantifiers of an NNF formula to the front, renaming bound
/// variables apart. Fails when a universal lies in the scope of an existential.
struct Prenexer {
    fresh: FreshNames,
    universals: Vec<String>,
    existentials: Vec<String>,
}

impl Prenexer {
    fn strip(&mut self, f: &Formula, env: &BTreeMap<String, String>, under_exists: bool) -> Result<Formula> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom(a) => Formula::Atom(rename_atom(a, env)),
            Formula::Not(g) => Formula::not(self.strip(g, env, under_exists)?),
            Formula::And(gs) => Formula::And(
                gs.iter()
                    .map(|g| self.strip(g, env, under_exists))
                    .collect::<Result<_>>()?,
            ),
            Formula::Or(gs) => Formula::Or(
                gs.iter()
                    .map(|g| self.strip(g, env, under_exists))
                    .collect::<Result<_>>()?,
            ),
            Formula::Quant(q, v, g) => {
                if *q == Quantifier::Forall && under_exists {
                    return Err(Error::WrongPrefixClass(format!(
                        "universal `{v}` in the scope of an existential quantifier; the first-order part is not ∀*∃*"
                    )));
                }
                let name = self.fresh.fresh(v);
                let mut env = env.clone();
                env.insert(v.clone(), name.clone());
                match q {
                    Quantifier::Forall => self.universals.push(name),
                    Quantifier::Exists => self.existentials.push(name),
                }
                self.strip(g, &env, under_exists || *q == Quantifier::Exists)?
            }
            Formula::Implies(..) | Formula::Iff(..) | Formula::SoQuant(..) => unreachable!("input is in NNF"),
        })
    }
}

fn rename_term(t: &Term, env: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(env.get(v).cloned().unwrap_or_else(|| v.clone())),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename_term(a, env)).collect()),
    }
}

fn rename_atom(a: &Atom, env: &BTreeMap<String, String>) -> Atom {
    match a {
        Atom::Pred { pred, args } => Atom::Pred {
            pred: pred.clone(),
            args: args.iter().map(|t| rename_term(t, env)).collect(),
        },
        Atom::Eq(l, r) => Atom::Eq(rename_term(l, env), rename_term(r, env)),
    }
}

type Dnf = Vec<Vec<Formula>>;

fn dnf(f: &Formula, max: usize) -> Result<Dnf> {
    let too_big = || Error::ResourceLimit(format!("normal form exceeds {max} disjuncts"));
    Ok(match f {
        Formula::True => vec![vec![]],
        Formula::False => vec![],
        Formula::Atom(_) | Formula::Not(_) => vec![vec![f.clone()]],
        Formula::Or(gs) => {
            let mut out = Vec::new();
            for g in gs {
                out.extend(dnf(g, max)?);
                if out.len() > max {
                    return Err(too_big());
                }
            }
            out
        }
        Formula::And(gs) => {
            let mut acc: Dnf = vec![vec![]];
            for g in gs {
                let d = dnf(g, max)?;
                if acc.len().saturating_mul(d.len()) > max {
                    return Err(too_big());
                }
                let mut next = Vec::with_capacity(acc.len() * d.len());
                for a in &acc {
                    for b in &d {
                        let mut t = a.clone();
                        t.extend(b.iter().cloned());
                        next.push(t);
                    }
                }
                acc = simplify(next);
            }
            acc
        }
        _ => unreachable!("quantifier-free NNF"),
    })
}

/// Drops repeated literals, contradictory terms and duplicate terms.
fn simplify(terms: Dnf) -> Dnf {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    'terms: for t in terms {
        let mut lits: Vec<Formula> = Vec::new();
        for l in t {
            if !lits.contains(&l) {
                lits.push(l);
            }
        }
        for l in &lits {
            if let Formula::Not(a) = l {
                if lits.contains(a) {
                    continue 'terms;
                }
            }
        }
        let key = format!("{lits:?}");
        if seen.insert(key) {
            out.push(lits);
        }
    }
    out
}

/// Rewrites a sentence `Q̄ φ` with a second-order prefix Q̄ into
/// `Q̄ ∀x̄ ∃ȳ θ` with θ a disjunction of conjunctions of literals.
///
/// Fails with `WrongPrefixClass` when the first-order part has no
/// equivalent `∀*∃*` prenex form obtainable by pulling quantifiers outward,
/// and with `ResourceLimit` when θ would have more than `max_disjuncts` terms.
pub fn normalize_forall_exists(f: &Formula, max_disjuncts: usize) -> Result<Formula> {
    let mut prefix: Vec<(Quantifier, SoVar)> = Vec::new();
    let mut cur = f;
    while let Formula::SoQuant(q, v, body) = cur {
        prefix.push((*q, v.clone()));
        cur = body;
    }
    if let Some(v) = cur.free_vars().first() {
        return Err(Error::UnboundVariable(v.clone()));
    }
    let body = nnf(cur, true)?;
    let mut taken: Vec<String> = f.free_symbols().into_iter().map(|(n, _, _)| n).collect();
    taken.extend(prefix.iter().map(|(_, v)| v.name.clone()));
    let mut p = Prenexer {
        fresh: FreshNames::new(taken),
        universals: Vec::new(),
        existentials: Vec::new(),
    };
    let matrix = p.strip(&body, &BTreeMap::new(), false)?;
    let terms = simplify(dnf(&matrix, max_disjuncts)?);
    let theta = Formula::or(terms.into_iter().map(Formula::and).collect());
    let fo = Formula::forall_many(&p.universals, Formula::exists_many(&p.existentials, theta));
    Ok(prefix.into_iter().rev().fold(fo, |acc, (q, v)| match q {
        Quantifier::Exists => Formula::so_exists(v, acc),
        Quantifier::Forall => Formula::so_forall(v, acc),
    }))
}
