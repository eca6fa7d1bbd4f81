//! Model checking of first- and second-order formulas over finite structures.
//!
//! Second-order quantifiers range over all relations (functions) of the given
//! arity. They are explored lazily: the body is evaluated three-valuedly under
//! a partial table, and a branch is opened only on the entry whose value is
//! actually needed. This is exact, and usually far cheaper than enumerating
//! whole tables.

use std::collections::HashMap;

use super::{tuple_index, Assignment, FiniteStructure, DEFAULT_CAP_LOG2};
use crate::error::{Error, Result};
use crate::syntax::{Atom, Formula, Quantifier, SoKind, Term};

const UNKNOWN: u16 = u16::MAX;

#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Refuse a second-order quantifier whose candidate space exceeds 2^cap_log2.
    pub cap_log2: u32,
    /// Abort with a resource error after this many evaluation steps.
    pub step_budget: Option<u64>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            cap_log2: DEFAULT_CAP_LOG2,
            step_budget: None,
        }
    }
}

pub fn eval_formula(s: &FiniteStructure, f: &Formula, a: &Assignment) -> Result<bool> {
    eval_formula_with(s, f, a, &EvalOptions::default())
}

pub fn eval_formula_with(s: &FiniteStructure, f: &Formula, a: &Assignment, opts: &EvalOptions) -> Result<bool> {
    let mut c = Compiler {
        s,
        a,
        opts,
        n: s.size(),
        rels: Vec::new(),
        funs: Vec::new(),
        fixed_rels: HashMap::new(),
        fixed_funs: HashMap::new(),
        fo_scope: Vec::new(),
        so_scope: Vec::new(),
        slots: 0,
        free: HashMap::new(),
    };
    let cf = c.formula(f)?;
    let mut env = vec![0u16; c.slots];
    for &(slot, e) in c.free.values() {
        env[slot as usize] = e;
    }
    let mut ev = Evaluator {
        n: c.n as u16,
        rels: c.rels,
        funs: c.funs,
        env,
        steps: 0,
        budget: opts.step_budget.unwrap_or(u64::MAX),
    };
    match ev.eval(&cf) {
        V::T => Ok(true),
        V::F => Ok(false),
        V::Abort => Err(Error::ResourceLimit(format!(
            "evaluation exceeded the budget of {} steps",
            ev.budget
        ))),
        V::Need(..) => unreachable!("free table entry outside its binder"),
    }
}

enum CT {
    Var(u32),
    Fun(u32, Vec<CT>),
}

enum CF {
    Const(bool),
    Pred(u32, Vec<CT>),
    Eq(CT, CT),
    Not(Box<CF>),
    And(Vec<CF>),
    Or(Vec<CF>),
    Imp(Box<CF>, Box<CF>),
    Iff(Box<CF>, Box<CF>),
    Fo(Quantifier, u32, Box<CF>),
    So(Quantifier, SoKind, u32, Box<CF>),
}

struct Compiler<'a> {
    s: &'a FiniteStructure,
    a: &'a Assignment,
    opts: &'a EvalOptions,
    n: usize,
    rels: Vec<Vec<u16>>,
    funs: Vec<Vec<u16>>,
    fixed_rels: HashMap<String, (u32, usize)>,
    fixed_funs: HashMap<String, (u32, usize)>,
    fo_scope: Vec<(String, u32)>,
    so_scope: Vec<(String, SoKind, u32, usize)>,
    slots: usize,
    free: HashMap<String, (u32, u16)>,
}

impl Compiler<'_> {
    fn rel_id(&mut self, name: &str, arity: usize) -> Result<u32> {
        if let Some((_, kind, id, k)) = self.so_scope.iter().rev().find(|e| e.0 == name) {
            if *kind != SoKind::Predicate {
                return Err(Error::KindConflict(name.to_string()));
            }
            return check_arity(name, *k, arity).map(|_| *id);
        }
        if let Some(&(id, k)) = self.fixed_rels.get(name) {
            return check_arity(name, k, arity).map(|_| id);
        }
        let rel = self
            .a
            .relations
            .get(name)
            .or_else(|| self.s.relation(name))
            .ok_or_else(|| {
                if self.a.functions.contains_key(name) || self.s.function(name).is_some() {
                    Error::KindConflict(name.to_string())
                } else {
                    Error::Uninterpreted(name.to_string())
                }
            })?;
        check_arity(name, rel.arity, arity)?;
        let mut table = vec![0u16; self.n.pow(arity as u32)];
        for t in &rel.tuples {
            table[tuple_index(self.n, t)] = 1;
        }
        let id = self.rels.len() as u32;
        self.rels.push(table);
        self.fixed_rels.insert(name.to_string(), (id, arity));
        Ok(id)
    }

    fn fun_id(&mut self, name: &str, arity: usize) -> Result<u32> {
        if let Some((_, kind, id, k)) = self.so_scope.iter().rev().find(|e| e.0 == name) {
            if *kind != SoKind::Function {
                return Err(Error::KindConflict(name.to_string()));
            }
            return check_arity(name, *k, arity).map(|_| *id);
        }
        if let Some(&(id, k)) = self.fixed_funs.get(name) {
            return check_arity(name, k, arity).map(|_| id);
        }
        let f = self
            .a
            .functions
            .get(name)
            .or_else(|| self.s.function(name))
            .ok_or_else(|| {
                if self.a.relations.contains_key(name) || self.s.relation(name).is_some() {
                    Error::KindConflict(name.to_string())
                } else {
                    Error::Uninterpreted(name.to_string())
                }
            })?;
        check_arity(name, f.arity, arity)?;
        let id = self.funs.len() as u32;
        self.funs.push(f.table.iter().map(|&e| e as u16).collect());
        self.fixed_funs.insert(name.to_string(), (id, arity));
        Ok(id)
    }

    fn term(&mut self, t: &Term) -> Result<CT> {
        match t {
            Term::Var(v) => {
                if let Some((_, slot)) = self.fo_scope.iter().rev().find(|e| &e.0 == v) {
                    return Ok(CT::Var(*slot));
                }
                if let Some(&(slot, _)) = self.free.get(v) {
                    return Ok(CT::Var(slot));
                }
                let e = self
                    .a
                    .get(v)
                    .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
                if e >= self.n {
                    return Err(Error::InvalidStructure(format!("variable `{v}` assigned outside the domain")));
                }
                let slot = self.slots as u32;
                self.slots += 1;
                self.free.insert(v.clone(), (slot, e as u16));
                Ok(CT::Var(slot))
            }
            Term::App(f, args) => {
                let id = self.fun_id(f, args.len())?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<_>>()?;
                Ok(CT::Fun(id, args))
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<CF> {
        Ok(match f {
            Formula::True => CF::Const(true),
            Formula::False => CF::Const(false),
            Formula::Atom(Atom::Pred { pred, args }) => {
                let id = self.rel_id(pred, args.len())?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<_>>()?;
                CF::Pred(id, args)
            }
            Formula::Atom(Atom::Eq(l, r)) => CF::Eq(self.term(l)?, self.term(r)?),
            Formula::Not(g) => CF::Not(Box::new(self.formula(g)?)),
            Formula::And(gs) => CF::And(gs.iter().map(|g| self.formula(g)).collect::<Result<_>>()?),
            Formula::Or(gs) => CF::Or(gs.iter().map(|g| self.formula(g)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => CF::Imp(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Iff(a, b) => CF::Iff(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Quant(q, v, body) => {
                let slot = self.slots as u32;
                self.slots += 1;
                self.fo_scope.push((v.clone(), slot));
                let body = self.formula(body);
                self.fo_scope.pop();
                CF::Fo(*q, slot, Box::new(body?))
            }
            Formula::SoQuant(q, v, body) => {
                let entries = self.n.pow(v.arity as u32);
                let bits = match v.kind {
                    SoKind::Predicate => entries as f64,
                    SoKind::Function => entries as f64 * (self.n as f64).log2(),
                };
                if bits > self.opts.cap_log2 as f64 + 1e-9 {
                    return Err(Error::ResourceLimit(format!(
                        "quantified symbol `{}` ranges over 2^{bits:.1} candidates (cap 2^{})",
                        v.name, self.opts.cap_log2
                    )));
                }
                let id = match v.kind {
                    SoKind::Predicate => {
                        self.rels.push(vec![UNKNOWN; entries]);
                        self.rels.len() - 1
                    }
                    SoKind::Function => {
                        self.funs.push(vec![UNKNOWN; entries]);
                        self.funs.len() - 1
                    }
                } as u32;
                self.so_scope.push((v.name.clone(), v.kind, id, v.arity));
                let body = self.formula(body);
                self.so_scope.pop();
                CF::So(*q, v.kind, id, Box::new(body?))
            }
        })
    }
}

fn check_arity(name: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            symbol: name.to_string(),
            expected,
            found,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum V {
    T,
    F,
    /// The value depends on an undecided table entry (kind, table, entry).
    Need(SoKind, u32, u32),
    Abort,
}

struct Evaluator {
    n: u16,
    rels: Vec<Vec<u16>>,
    funs: Vec<Vec<u16>>,
    env: Vec<u16>,
    steps: u64,
    budget: u64,
}

impl Evaluator {
    fn term(&mut self, t: &CT) -> Result<u16, V> {
        match t {
            CT::Var(s) => Ok(self.env[*s as usize]),
            CT::Fun(id, args) => {
                let idx = self.index(args)?;
                let v = self.funs[*id as usize][idx];
                if v == UNKNOWN {
                    Err(V::Need(SoKind::Function, *id, idx as u32))
                } else {
                    Ok(v)
                }
            }
        }
    }

    fn index(&mut self, args: &[CT]) -> Result<usize, V> {
        let mut idx = 0usize;
        let mut pending = None;
        for a in args {
            match self.term(a) {
                Ok(v) => idx = idx * self.n as usize + v as usize,
                Err(e) => {
                    pending.get_or_insert(e);
                }
            }
        }
        match pending {
            Some(e) => Err(e),
            None => Ok(idx),
        }
    }

    fn eval(&mut self, f: &CF) -> V {
        self.steps += 1;
        if self.steps > self.budget {
            return V::Abort;
        }
        match f {
            CF::Const(b) => bool_v(*b),
            CF::Pred(id, args) => match self.index(args) {
                Ok(idx) => match self.rels[*id as usize][idx] {
                    0 => V::F,
                    UNKNOWN => V::Need(SoKind::Predicate, *id, idx as u32),
                    _ => V::T,
                },
                Err(v) => v,
            },
            CF::Eq(l, r) => {
                let (a, b) = (self.term(l), self.term(r));
                match (a, b) {
                    (Ok(a), Ok(b)) => bool_v(a == b),
                    (Err(e), _) | (_, Err(e)) => e,
                }
            }
            CF::Not(g) => negate(self.eval(g)),
            CF::And(gs) => {
                let mut pending = None;
                for g in gs {
                    match self.eval(g) {
                        V::T => {}
                        V::F => return V::F,
                        V::Abort => return V::Abort,
                        n => {
                            pending.get_or_insert(n);
                        }
                    }
                }
                pending.unwrap_or(V::T)
            }
            CF::Or(gs) => {
                let mut pending = None;
                for g in gs {
                    match self.eval(g) {
                        V::F => {}
                        V::T => return V::T,
                        V::Abort => return V::Abort,
                        n => {
                            pending.get_or_insert(n);
                        }
                    }
                }
                pending.unwrap_or(V::F)
            }
            CF::Imp(a, b) => {
                let va = self.eval(a);
                match va {
                    V::F => V::T,
                    V::Abort => V::Abort,
                    _ => match self.eval(b) {
                        V::T => V::T,
                        V::Abort => V::Abort,
                        vb => {
                            if va == V::T {
                                vb
                            } else {
                                va
                            }
                        }
                    },
                }
            }
            CF::Iff(a, b) => {
                let va = self.eval(a);
                if va == V::Abort {
                    return V::Abort;
                }
                let vb = self.eval(b);
                match (va, vb) {
                    (_, V::Abort) => V::Abort,
                    (V::T | V::F, V::T | V::F) => bool_v(va == vb),
                    (V::Need(..), _) => va,
                    _ => vb,
                }
            }
            CF::Fo(q, slot, body) => {
                let (stop, default) = match q {
                    Quantifier::Forall => (V::F, V::T),
                    Quantifier::Exists => (V::T, V::F),
                };
                let mut pending = None;
                for e in 0..self.n {
                    self.env[*slot as usize] = e;
                    match self.eval(body) {
                        V::Abort => return V::Abort,
                        v if v == stop => return stop,
                        v if v == default => {}
                        n => {
                            pending.get_or_insert(n);
                        }
                    }
                }
                pending.unwrap_or(default)
            }
            CF::So(q, kind, id, body) => {
                let table = match kind {
                    SoKind::Predicate => &mut self.rels[*id as usize],
                    SoKind::Function => &mut self.funs[*id as usize],
                };
                table.iter_mut().for_each(|x| *x = UNKNOWN);
                self.search(*q, *kind, *id, body)
            }
        }
    }

    fn search(&mut self, q: Quantifier, kind: SoKind, id: u32, body: &CF) -> V {
        let (stop, default) = match q {
            Quantifier::Forall => (V::F, V::T),
            Quantifier::Exists => (V::T, V::F),
        };
        match self.eval(body) {
            V::Need(k, i, entry) if k == kind && i == id => {
                let values = match kind {
                    SoKind::Predicate => 2,
                    SoKind::Function => self.n,
                };
                let mut pending = None;
                for val in 0..values {
                    self.set(kind, id, entry, val);
                    let r = self.search(q, kind, id, body);
                    self.set(kind, id, entry, UNKNOWN);
                    match r {
                        V::Abort => return V::Abort,
                        v if v == stop => return stop,
                        v if v == default => {}
                        n => {
                            pending.get_or_insert(n);
                        }
                    }
                }
                pending.unwrap_or(default)
            }
            other => other,
        }
    }

    fn set(&mut self, kind: SoKind, id: u32, entry: u32, val: u16) {
        let table = match kind {
            SoKind::Predicate => &mut self.rels[id as usize],
            SoKind::Function => &mut self.funs[id as usize],
        };
        table[entry as usize] = val;
    }
}

fn bool_v(b: bool) -> V {
    if b {
        V::T
    } else {
        V::F
    }
}

fn negate(v: V) -> V {
    match v {
        V::T => V::F,
        V::F => V::T,
        other => other,
    }
}
