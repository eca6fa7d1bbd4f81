//! Brute-force oracles that share no code with the library's evaluators and
//! solvers. Only the data types are reused.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use smk_core::structures::{all_tuples, Elem, FiniteStructure};
use smk_core::syntax::{Atom, Formula, Literal, Program, Quantifier, SoKind, Term};

#[derive(Clone, Default)]
struct Env {
    fo: BTreeMap<String, Elem>,
    rels: BTreeMap<String, BTreeSet<Vec<Elem>>>,
    funs: BTreeMap<String, Vec<Elem>>,
}

fn index(n: usize, args: &[Elem]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

fn term(s: &FiniteStructure, env: &Env, t: &Term) -> Elem {
    match t {
        Term::Var(v) => env.fo[v],
        Term::App(f, args) => {
            let vals: Vec<Elem> = args.iter().map(|a| term(s, env, a)).collect();
            match env.funs.get(f) {
                Some(table) => table[index(s.size(), &vals)],
                None => s.apply(f, &vals).unwrap_or_else(|| panic!("uninterpreted function {f}")),
            }
        }
    }
}

fn atom(s: &FiniteStructure, env: &Env, a: &Atom) -> bool {
    match a {
        Atom::Eq(l, r) => term(s, env, l) == term(s, env, r),
        Atom::Pred { pred, args } => {
            let vals: Vec<Elem> = args.iter().map(|t| term(s, env, t)).collect();
            match env.rels.get(pred) {
                Some(r) => r.contains(&vals),
                None => {
                    assert!(s.interprets(pred), "uninterpreted predicate {pred}");
                    s.holds(pred, &vals)
                }
            }
        }
    }
}

fn eval(s: &FiniteStructure, env: &mut Env, f: &Formula) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => atom(s, env, a),
        Formula::Not(g) => !eval(s, env, g),
        Formula::And(gs) => gs.iter().all(|g| eval(s, env, g)),
        Formula::Or(gs) => gs.iter().any(|g| eval(s, env, g)),
        Formula::Implies(a, b) => !eval(s, env, a) || eval(s, env, b),
        Formula::Iff(a, b) => eval(s, env, a) == eval(s, env, b),
        Formula::Quant(q, v, g) => {
            let saved = env.fo.get(v).copied();
            let mut result = *q == Quantifier::Forall;
            for e in 0..s.size() {
                env.fo.insert(v.clone(), e);
                if eval(s, env, g) != result {
                    result = !result;
                    break;
                }
            }
            match saved {
                Some(e) => env.fo.insert(v.clone(), e),
                None => env.fo.remove(v),
            };
            result
        }
        Formula::SoQuant(q, v, g) => {
            let n = s.size();
            let want = *q == Quantifier::Exists;
            let cells = n.pow(v.arity as u32);
            let mut found = false;
            match v.kind {
                SoKind::Predicate => {
                    let tuples: Vec<Vec<Elem>> = all_tuples(n, v.arity).collect();
                    let saved = env.rels.remove(&v.name);
                    for mask in 0u64..(1u64 << cells) {
                        let rel = tuples
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, t)| t.clone())
                            .collect();
                        env.rels.insert(v.name.clone(), rel);
                        if eval(s, env, g) == want {
                            found = true;
                            break;
                        }
                    }
                    env.rels.remove(&v.name);
                    if let Some(r) = saved {
                        env.rels.insert(v.name.clone(), r);
                    }
                }
                SoKind::Function => {
                    let saved = env.funs.remove(&v.name);
                    let mut table = vec![0; cells];
                    loop {
                        env.funs.insert(v.name.clone(), table.clone());
                        if eval(s, env, g) == want {
                            found = true;
                            break;
                        }
                        // Odometer over all tables.
                        let mut i = 0;
                        while i < cells && table[i] == n - 1 {
                            table[i] = 0;
                            i += 1;
                        }
                        if i == cells {
                            break;
                        }
                        table[i] += 1;
                    }
                    env.funs.remove(&v.name);
                    if let Some(t) = saved {
                        env.funs.insert(v.name.clone(), t);
                    }
                }
            }
            if found {
                want
            } else {
                !want
            }
        }
    }
}

/// Truth of a sentence by exhaustive enumeration of every quantified symbol.
pub fn naive_eval(s: &FiniteStructure, f: &Formula) -> bool {
    eval(s, &mut Env::default(), f)
}

/// Stability straight from the definition: the intensional part M of `s`
/// must be a minimal model of the reduct. Minimality is checked over all
/// subsets of M, so `None` is returned when M is too large.
pub fn naive_stable(p: &Program, s: &FiniteStructure) -> Option<bool> {
    let n = s.size();
    let mut ground: Vec<(Vec<(String, Vec<Elem>)>, Vec<(String, Vec<Elem>)>)> = Vec::new();
    for r in p.rules() {
        let mut names: Vec<String> = r.variables();
        names.sort();
        names.dedup();
        for vals in all_tuples(n, names.len()) {
            let env = Env {
                fo: names.iter().cloned().zip(vals).collect(),
                ..Env::default()
            };
            let mut keep = true;
            let mut body = Vec::new();
            for Literal { atom: a, positive } in &r.body {
                match a {
                    Atom::Pred { pred, args } if *positive && p.is_intensional(pred) => {
                        body.push((pred.clone(), args.iter().map(|t| term(s, &env, t)).collect()));
                    }
                    _ => {
                        if atom(s, &env, a) != *positive {
                            keep = false;
                        }
                    }
                }
            }
            if keep {
                let head = r
                    .head
                    .iter()
                    .map(|a| (a.predicate().unwrap().to_string(), a.args().iter().map(|t| term(s, &env, t)).collect()))
                    .collect();
                ground.push((body, head));
            }
        }
    }
    let m: Vec<(String, Vec<Elem>)> = p
        .intensional()
        .iter()
        .flat_map(|q| {
            s.relation(q)
                .map(|r| r.tuples.iter().map(|t| (q.clone(), t.clone())).collect::<Vec<_>>())
                .unwrap_or_default()
        })
        .collect();
    if m.len() > 16 {
        return None;
    }
    let is_model = |mask: u32| {
        let has = |a: &(String, Vec<Elem>)| m.iter().position(|b| b == a).is_some_and(|i| mask >> i & 1 == 1);
        ground
            .iter()
            .all(|(body, head)| !body.iter().all(has) || head.iter().any(has))
    };
    let full = if m.is_empty() { 0 } else { (1u32 << m.len()) - 1 };
    if !is_model(full) {
        return Some(false);
    }
    Some((0..full).all(|mask| !is_model(mask)))
}

/// Checks that `succ`, `first`, `last` describe a successor structure: the
/// transitive closure of `succ` is a strict total order, `first`/`last` are
/// its unique minimum/maximum and `succ` is a partial injection.
pub fn is_successor_structure(s: &FiniteStructure) -> bool {
    let n = s.size();
    let succ = |a: Elem, b: Elem| s.holds("succ", &[a, b]);
    for a in 0..n {
        let outs = (0..n).filter(|&b| succ(a, b)).count();
        let ins = (0..n).filter(|&b| succ(b, a)).count();
        if outs > 1 || ins > 1 {
            return false;
        }
    }
    let mut reach = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            reach[a][b] = succ(a, b);
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if reach[a][k] && reach[k][b] {
                    reach[a][b] = true;
                }
            }
        }
    }
    for a in 0..n {
        if reach[a][a] {
            return false;
        }
        for b in 0..n {
            if a != b && !reach[a][b] && !reach[b][a] {
                return false;
            }
        }
    }
    let firsts: Vec<Elem> = (0..n).filter(|&a| s.holds("first", &[a])).collect();
    let lasts: Vec<Elem> = (0..n).filter(|&a| s.holds("last", &[a])).collect();
    firsts.len() == 1
        && lasts.len() == 1
        && (0..n).all(|b| !reach[b][firsts[0]])
        && (0..n).all(|b| !reach[lasts[0]][b])
}

/// Adds `succ`, `first`, `last` for the order 0 < 1 < … < n-1.
pub fn with_natural_successor(mut s: FiniteStructure) -> FiniteStructure {
    let n = s.size();
    s.set_relation("succ", 2, (1..n).map(|i| vec![i - 1, i])).unwrap();
    s.set_relation("first", 1, vec![vec![0]]).unwrap();
    s.set_relation("last", 1, vec![vec![n - 1]]).unwrap();
    s
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
