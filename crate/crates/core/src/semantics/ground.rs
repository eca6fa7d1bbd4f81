//! Instantiation of first-order rules over a finite structure.

use crate::error::{Error, Result};
use crate::structures::{tuple_index, Elem, FiniteStructure, Function, GroundAtom};
use crate::syntax::{Atom, Rule, Term};

enum GTerm<'s> {
    Var(usize),
    App(&'s Function, Vec<GTerm<'s>>),
}

enum GAtom<'s> {
    Pred(String, Vec<GTerm<'s>>),
    Eq(GTerm<'s>, GTerm<'s>),
}

struct GLit<'s> {
    atom: GAtom<'s>,
    positive: bool,
    /// Evaluated against the structure during instantiation.
    fixed: bool,
}

/// A ground instance: the residual (non-fixed) body literals and the head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Instance {
    pub pos: Vec<GroundAtom>,
    pub neg: Vec<GroundAtom>,
    pub head: Vec<GroundAtom>,
}

/// A rule prepared for instantiation over a fixed structure.
pub(crate) struct Grounder<'s> {
    s: &'s FiniteStructure,
    nvars: usize,
    lits: Vec<GLit<'s>>,
    head: Vec<(String, Vec<GTerm<'s>>)>,
    /// Fixed literals to test once the variable at each level is bound
    /// (index 0 holds variable-free literals).
    checks: Vec<Vec<usize>>,
    /// For each variable, a positive equality that determines its value.
    definers: Vec<Option<usize>>,
}

fn term_vars(t: &Term, vars: &[String], out: &mut Vec<usize>) {
    match t {
        Term::Var(v) => out.push(vars.iter().position(|x| x == v).unwrap()),
        Term::App(_, args) => args.iter().for_each(|a| term_vars(a, vars, out)),
    }
}

impl<'s> Grounder<'s> {
    /// `fixed` decides, per body literal, whether it is evaluated in `s`.
    pub fn new(s: &'s FiniteStructure, rule: &Rule, fixed: &dyn Fn(&Atom, bool) -> bool) -> Result<Self> {
        let vars = rule.variables();
        let conv = |t: &Term| compile_term(s, t, &vars);
        let mut lits = Vec::new();
        let mut checks = vec![Vec::new(); vars.len() + 1];
        let mut definers = vec![None; vars.len()];
        for (i, l) in rule.body.iter().enumerate() {
            let is_fixed = fixed(&l.atom, l.positive);
            let atom = match &l.atom {
                Atom::Pred { pred, args } => {
                    if is_fixed {
                        match s.relation(pred) {
                            Some(r) if r.arity == args.len() => {}
                            Some(r) => {
                                return Err(Error::ArityMismatch {
                                    symbol: pred.clone(),
                                    expected: r.arity,
                                    found: args.len(),
                                })
                            }
                            None => return Err(Error::Uninterpreted(pred.clone())),
                        }
                    }
                    GAtom::Pred(pred.clone(), args.iter().map(conv).collect::<Result<_>>()?)
                }
                Atom::Eq(a, b) => GAtom::Eq(conv(a)?, conv(b)?),
            };
            let mut vs = Vec::new();
            l.atom.args().iter().for_each(|t| term_vars(t, &vars, &mut vs));
            if let Atom::Eq(a, b) = &l.atom {
                term_vars(a, &vars, &mut vs);
                term_vars(b, &vars, &mut vs);
                if l.positive && is_fixed {
                    for (x, y) in [(a, b), (b, a)] {
                        if let Term::Var(v) = x {
                            let xi = vars.iter().position(|z| z == v).unwrap();
                            let mut ys = Vec::new();
                            term_vars(y, &vars, &mut ys);
                            if ys.iter().all(|&j| j < xi) && definers[xi].is_none() {
                                definers[xi] = Some(i);
                            }
                        }
                    }
                }
            }
            if is_fixed {
                let level = vs.iter().map(|&v| v + 1).max().unwrap_or(0);
                checks[level].push(i);
            }
            lits.push(GLit {
                atom,
                positive: l.positive,
                fixed: is_fixed,
            });
        }
        let head = rule
            .head
            .iter()
            .map(|a| match a {
                Atom::Pred { pred, args } => Ok((pred.clone(), args.iter().map(conv).collect::<Result<_>>()?)),
                Atom::Eq(..) => Err(Error::EqualityInHead { line: 0, col: 0 }),
            })
            .collect::<Result<_>>()?;
        Ok(Grounder {
            s,
            nvars: vars.len(),
            lits,
            head,
            checks,
            definers,
        })
    }

    /// Calls `emit` for every assignment satisfying the fixed literals.
    pub fn for_each(&self, emit: &mut dyn FnMut(Instance) -> Result<()>) -> Result<()> {
        let mut env = vec![0; self.nvars];
        if !self.level_ok(0, &env) {
            return Ok(());
        }
        self.go(0, &mut env, emit)
    }

    fn go(&self, i: usize, env: &mut Vec<Elem>, emit: &mut dyn FnMut(Instance) -> Result<()>) -> Result<()> {
        if i == self.nvars {
            return emit(self.instance(env));
        }
        if let Some(d) = self.definers[i] {
            if let GAtom::Eq(a, b) = &self.lits[d].atom {
                let other = match (a, b) {
                    (GTerm::Var(x), o) if *x == i => o,
                    (o, _) => o,
                };
                env[i] = self.eval(other, env);
                if self.level_ok(i + 1, env) {
                    self.go(i + 1, env, emit)?;
                }
                return Ok(());
            }
        }
        for e in 0..self.s.size() {
            env[i] = e;
            if self.level_ok(i + 1, env) {
                self.go(i + 1, env, emit)?;
            }
        }
        Ok(())
    }

    fn level_ok(&self, level: usize, env: &[Elem]) -> bool {
        self.checks[level].iter().all(|&k| self.holds(&self.lits[k], env))
    }

    fn eval(&self, t: &GTerm, env: &[Elem]) -> Elem {
        match t {
            GTerm::Var(i) => env[*i],
            GTerm::App(f, args) => {
                let vals: Vec<Elem> = args.iter().map(|a| self.eval(a, env)).collect();
                f.table[tuple_index(self.s.size(), &vals)]
            }
        }
    }

    fn holds(&self, l: &GLit, env: &[Elem]) -> bool {
        let v = match &l.atom {
            GAtom::Pred(p, args) => {
                let vals: Vec<Elem> = args.iter().map(|a| self.eval(a, env)).collect();
                self.s.holds(p, &vals)
            }
            GAtom::Eq(a, b) => self.eval(a, env) == self.eval(b, env),
        };
        v == l.positive
    }

    fn ground(&self, p: &str, args: &[GTerm], env: &[Elem]) -> GroundAtom {
        GroundAtom::new(p, args.iter().map(|a| self.eval(a, env)).collect())
    }

    fn instance(&self, env: &[Elem]) -> Instance {
        let mut inst = Instance {
            pos: Vec::new(),
            neg: Vec::new(),
            head: Vec::new(),
        };
        for l in self.lits.iter().filter(|l| !l.fixed) {
            match &l.atom {
                GAtom::Pred(p, args) => {
                    let g = self.ground(p, args, env);
                    if l.positive {
                        inst.pos.push(g);
                    } else {
                        inst.neg.push(g);
                    }
                }
                GAtom::Eq(..) => unreachable!("equalities are always evaluated"),
            }
        }
        for (p, args) in &self.head {
            inst.head.push(self.ground(p, args, env));
        }
        for v in [&mut inst.pos, &mut inst.neg, &mut inst.head] {
            v.sort();
            v.dedup();
        }
        inst
    }
}

fn compile_term<'s>(s: &'s FiniteStructure, t: &Term, vars: &[String]) -> Result<GTerm<'s>> {
    match t {
        Term::Var(v) => Ok(GTerm::Var(vars.iter().position(|x| x == v).unwrap())),
        Term::App(f, args) => {
            let fun = s.function(f).ok_or_else(|| {
                if s.relation(f).is_some() {
                    Error::KindConflict(f.clone())
                } else {
                    Error::Uninterpreted(f.clone())
                }
            })?;
            if fun.arity != args.len() {
                return Err(Error::ArityMismatch {
                    symbol: f.clone(),
                    expected: fun.arity,
                    found: args.len(),
                });
            }
            Ok(GTerm::App(
                fun,
                args.iter()
                    .map(|a| compile_term(s, a, vars))
                    .collect::<Result<_>>()?,
            ))
        }
    }
}
