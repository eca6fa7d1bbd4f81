//! First- and second-order formulas.

use std::collections::BTreeSet;

use super::{Atom, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SoKind {
    Predicate,
    Function,
}

/// A second-order variable: a predicate or function symbol bound by a quantifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SoVar {
    pub name: String,
    pub arity: usize,
    pub kind: SoKind,
}

impl SoVar {
    pub fn predicate(name: impl Into<String>, arity: usize) -> SoVar {
        SoVar {
            name: name.into(),
            arity,
            kind: SoKind::Predicate,
        }
    }

    pub fn function(name: impl Into<String>, arity: usize) -> SoVar {
        SoVar {
            name: name.into(),
            arity,
            kind: SoKind::Function,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// First-order quantifier over an individual variable.
    Quant(Quantifier, String, Box<Formula>),
    /// Second-order quantifier over a predicate or function variable.
    SoQuant(Quantifier, SoVar, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::pred(name, args))
    }

    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::Atom(Atom::Eq(l, r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Conjunction; the empty conjunction is `TRUE` and singletons are unwrapped.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; the empty disjunction is `FALSE`.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, var.into(), Box::new(body))
    }

    pub fn forall_many(vars: &[String], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.clone(), acc))
    }

    pub fn exists_many(vars: &[String], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.clone(), acc))
    }

    pub fn so_forall(var: SoVar, body: Formula) -> Formula {
        Formula::SoQuant(Quantifier::Forall, var, Box::new(body))
    }

    pub fn so_exists(var: SoVar, body: Formula) -> Formula {
        Formula::SoQuant(Quantifier::Exists, var, Box::new(body))
    }

    pub fn so_exists_many(vars: &[SoVar], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::so_exists(v.clone(), acc))
    }

    pub fn so_forall_many(vars: &[SoVar], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::so_forall(v.clone(), acc))
    }

    /// Free individual variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                let mut vs = Vec::new();
                a.collect_vars(&mut vs);
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            Formula::SoQuant(_, _, f) => f.collect_free(bound, out),
        }
    }

    /// Predicate and function names used but not bound by a second-order quantifier.
    pub fn free_symbols(&self) -> BTreeSet<(String, usize, SoKind)> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_symbols(&mut bound, &mut out);
        out
    }

    fn collect_symbols(&self, bound: &mut Vec<String>, out: &mut BTreeSet<(String, usize, SoKind)>) {
        fn term(t: &Term, bound: &[String], out: &mut BTreeSet<(String, usize, SoKind)>) {
            if let Term::App(f, args) = t {
                if !bound.contains(f) {
                    out.insert((f.clone(), args.len(), SoKind::Function));
                }
                args.iter().for_each(|a| term(a, bound, out));
            }
        }
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(Atom::Pred { pred, args }) => {
                if !bound.contains(pred) {
                    out.insert((pred.clone(), args.len(), SoKind::Predicate));
                }
                args.iter().for_each(|a| term(a, bound, out));
            }
            Formula::Atom(Atom::Eq(l, r)) => {
                term(l, bound, out);
                term(r, bound, out);
            }
            Formula::Not(f) | Formula::Quant(_, _, f) => f.collect_symbols(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_symbols(bound, out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_symbols(bound, out);
                b.collect_symbols(bound, out);
            }
            Formula::SoQuant(_, v, f) => {
                bound.push(v.name.clone());
                f.collect_symbols(bound, out);
                bound.pop();
            }
        }
    }

    /// No free individual variables.
    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(|f| f.is_quantifier_free()),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Quant(..) | Formula::SoQuant(..) => false,
        }
    }

    pub fn has_so_quantifier(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => false,
            Formula::Not(f) | Formula::Quant(_, _, f) => f.has_so_quantifier(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|f| f.has_so_quantifier()),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.has_so_quantifier() || b.has_so_quantifier()
            }
            Formula::SoQuant(..) => true,
        }
    }

    /// Number of nodes, used for size guards.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Quant(_, _, f) | Formula::SoQuant(_, _, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(|f| f.size()).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Renames predicate symbols (free occurrences only) according to `f`.
    pub fn map_predicates(&self, f: &dyn Fn(&str) -> Option<String>) -> Formula {
        let mut bound = Vec::new();
        self.map_preds_inner(f, &mut bound)
    }

    fn map_preds_inner(&self, f: &dyn Fn(&str) -> Option<String>, bound: &mut Vec<String>) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(Atom::Eq(..)) => self.clone(),
            Formula::Atom(Atom::Pred { pred, args }) => {
                let name = if bound.contains(pred) {
                    None
                } else {
                    f(pred)
                };
                Formula::Atom(Atom::Pred {
                    pred: name.unwrap_or_else(|| pred.clone()),
                    args: args.clone(),
                })
            }
            Formula::Not(g) => Formula::not(g.map_preds_inner(f, bound)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_preds_inner(f, bound)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_preds_inner(f, bound)).collect()),
            Formula::Implies(a, b) => {
                Formula::implies(a.map_preds_inner(f, bound), b.map_preds_inner(f, bound))
            }
            Formula::Iff(a, b) => Formula::iff(a.map_preds_inner(f, bound), b.map_preds_inner(f, bound)),
            Formula::Quant(q, v, g) => Formula::Quant(*q, v.clone(), Box::new(g.map_preds_inner(f, bound))),
            Formula::SoQuant(q, v, g) => {
                bound.push(v.name.clone());
                let inner = g.map_preds_inner(f, bound);
                bound.pop();
                Formula::SoQuant(*q, v.clone(), Box::new(inner))
            }
        }
    }
}

/// Shape of the first-order part that follows the second-order prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoShape {
    /// `∀x̄ θ` with θ quantifier-free.
    Universal,
    /// `∀x̄ ∃ȳ θ` with at least one existential.
    UniversalExistential,
    Other,
}

/// Quantifier-prefix analysis of a sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixClass {
    /// Second-order blocks, normalized so that the first block is existential
    /// (possibly empty) and blocks alternate.
    pub blocks: Vec<(Quantifier, Vec<SoVar>)>,
    /// First-order variables of the leading universal block.
    pub universals: Vec<String>,
    /// First-order variables of the following existential block.
    pub existentials: Vec<String>,
    pub shape: FoShape,
    /// The matrix after stripping the recognized prefixes.
    pub matrix: Formula,
}

impl PrefixClass {
    /// Number of second-order blocks (at least one).
    pub fn levels(&self) -> usize {
        self.blocks.len().max(1)
    }

    pub fn max_arity(&self) -> usize {
        self.blocks
            .iter()
            .flat_map(|(_, vs)| vs.iter().map(|v| v.arity))
            .max()
            .unwrap_or(0)
    }

    pub fn has_function_vars(&self) -> bool {
        self.blocks
            .iter()
            .any(|(_, vs)| vs.iter().any(|v| v.kind == SoKind::Function))
    }

    fn fo_universal(&self) -> bool {
        self.shape == FoShape::Universal
    }

    fn fo_forall_exists(&self) -> bool {
        matches!(self.shape, FoShape::Universal | FoShape::UniversalExistential)
    }

    /// Membership in Σ¹ᶠ_{1,k}[∀*] (function variables allowed).
    pub fn in_sigma1_universal(&self, k: usize) -> bool {
        self.levels() == 1 && self.max_arity() <= k && self.fo_universal()
    }

    /// Membership in Σ¹_{2,n}[∀ⁿ∃*].
    pub fn in_sigma2_bounded(&self, n: usize) -> bool {
        self.levels() <= 2
            && !self.has_function_vars()
            && self.max_arity() <= n
            && self.fo_forall_exists()
            && self.universals.len() <= n
    }

    /// Membership in Σ¹₂[∀*∃*].
    pub fn in_sigma2_forall_exists(&self) -> bool {
        self.levels() <= 2 && !self.has_function_vars() && self.fo_forall_exists()
    }

    /// Existentially quantified second-order variables (first block).
    pub fn existential_so(&self) -> Vec<SoVar> {
        match self.blocks.first() {
            Some((Quantifier::Exists, vs)) => vs.clone(),
            _ => Vec::new(),
        }
    }

    /// Universally quantified second-order variables of the second block.
    pub fn universal_so(&self) -> Vec<SoVar> {
        match self.blocks.get(1) {
            Some((Quantifier::Forall, vs)) => vs.clone(),
            _ => Vec::new(),
        }
    }
}

/// Splits a sentence into its second-order prefix, first-order prefix and matrix.
pub fn classify_prefix(f: &Formula) -> PrefixClass {
    let mut blocks: Vec<(Quantifier, Vec<SoVar>)> = Vec::new();
    let mut cur = f;
    while let Formula::SoQuant(q, v, body) = cur {
        match blocks.last_mut() {
            Some((bq, vs)) if bq == q => vs.push(v.clone()),
            _ => {
                if blocks.is_empty() && *q == Quantifier::Forall {
                    blocks.push((Quantifier::Exists, Vec::new()));
                }
                blocks.push((*q, vec![v.clone()]));
            }
        }
        cur = body;
    }
    let mut universals = Vec::new();
    while let Formula::Quant(Quantifier::Forall, v, body) = cur {
        universals.push(v.clone());
        cur = body;
    }
    let mut existentials = Vec::new();
    while let Formula::Quant(Quantifier::Exists, v, body) = cur {
        existentials.push(v.clone());
        cur = body;
    }
    let shape = if !cur.is_quantifier_free() {
        FoShape::Other
    } else if existentials.is_empty() {
        FoShape::Universal
    } else {
        FoShape::UniversalExistential
    };
    PrefixClass {
        blocks,
        universals,
        existentials,
        shape,
        matrix: cur.clone(),
    }
}
