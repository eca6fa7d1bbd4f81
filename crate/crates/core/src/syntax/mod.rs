//! Abstract syntax for first-order logic programs and second-order formulas,
//! together with the concrete text formats used by the rest of the crate.
//!
//! Program text is ASP-like: variables start with an uppercase letter or `_`,
//! everything else (predicates, functions, individual constants) starts with a
//! lowercase letter or a digit.

mod fresh;
mod lexer;
mod parser;
mod print;

pub mod formula;
pub mod sm;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub use formula::{classify_prefix, FoShape, Formula, PrefixClass, Quantifier, SoKind, SoVar};
pub use fresh::FreshNames;
pub use parser::{parse_formula, parse_program};
pub use sm::build_sm_sentence;

/// Signature of predicate and function constants with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    predicates: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<()> {
        if self.functions.contains_key(name) {
            return Err(Error::KindConflict(name.to_string()));
        }
        match self.predicates.get(name) {
            Some(&a) if a != arity => Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: a,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<()> {
        if self.predicates.contains_key(name) {
            return Err(Error::KindConflict(name.to_string()));
        }
        match self.functions.get(name) {
            Some(&a) if a != arity => Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: a,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.functions.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn from_predicates(preds: &BTreeMap<String, usize>) -> Self {
        Vocabulary {
            predicates: preds.clone(),
            functions: BTreeMap::new(),
        }
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.add_predicate(name, arity)
            .expect("conflicting predicate declaration");
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.add_function(name, arity)
            .expect("conflicting function declaration");
        self
    }

    pub fn merge(&mut self, other: &Vocabulary) -> Result<()> {
        for (p, &a) in &other.predicates {
            self.add_predicate(p, a)?;
        }
        for (f, &a) in &other.functions {
            self.add_function(f, a)?;
        }
        Ok(())
    }

    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    pub fn functions(&self) -> &BTreeMap<String, usize> {
        &self.functions
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.predicates.contains_key(name) || self.functions.contains_key(name)
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty() && self.functions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.predicates.len() + self.functions.len()
    }

    /// All symbol names, predicates and functions alike.
    pub fn names(&self) -> BTreeSet<String> {
        self.predicates
            .keys()
            .chain(self.functions.keys())
            .cloned()
            .collect()
    }

    pub fn is_disjoint(&self, other: &Vocabulary) -> bool {
        self.names().is_disjoint(&other.names())
    }

    /// Restriction to the given symbol names.
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Vocabulary {
        let keep: BTreeSet<&str> = names.into_iter().collect();
        Vocabulary {
            predicates: self
                .predicates
                .iter()
                .filter(|(k, _)| keep.contains(k.as_str()))
                .map(|(k, &v)| (k.clone(), v))
                .collect(),
            functions: self
                .functions
                .iter()
                .filter(|(k, _)| keep.contains(k.as_str()))
                .map(|(k, &v)| (k.clone(), v))
                .collect(),
        }
    }

    /// Symbols of `self` that are not in `other`.
    pub fn difference(&self, other: &Vocabulary) -> Vocabulary {
        let names = other.names();
        Vocabulary {
            predicates: self
                .predicates
                .iter()
                .filter(|(k, _)| !names.contains(*k))
                .map(|(k, &v)| (k.clone(), v))
                .collect(),
            functions: self
                .functions
                .iter()
                .filter(|(k, _)| !names.contains(*k))
                .map(|(k, &v)| (k.clone(), v))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// Function application; arity 0 is an individual constant.
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect()),
        }
    }

    fn register(&self, vocab: &mut Vocabulary) -> Result<()> {
        if let Term::App(f, args) = self {
            vocab.add_function(f, args.len())?;
            for a in args {
                a.register(vocab)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Pred { pred: String, args: Vec<Term> },
    Eq(Term, Term),
}

impl Atom {
    pub fn pred(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom::Pred {
            pred: pred.into(),
            args,
        }
    }

    pub fn prop(pred: impl Into<String>) -> Atom {
        Atom::pred(pred, Vec::new())
    }

    pub fn eq(lhs: Term, rhs: Term) -> Atom {
        Atom::Eq(lhs, rhs)
    }

    pub fn predicate(&self) -> Option<&str> {
        match self {
            Atom::Pred { pred, .. } => Some(pred),
            Atom::Eq(..) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Atom::Pred { args, .. } => args,
            Atom::Eq(..) => &[],
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Atom::Pred { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            Atom::Eq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Atom {
        match self {
            Atom::Pred { pred, args } => Atom::Pred {
                pred: pred.clone(),
                args: args.iter().map(|a| a.substitute(map)).collect(),
            },
            Atom::Eq(l, r) => Atom::Eq(l.substitute(map), r.substitute(map)),
        }
    }

    fn register(&self, vocab: &mut Vocabulary) -> Result<()> {
        match self {
            Atom::Pred { pred, args } => {
                vocab.add_predicate(pred, args.len())?;
                for a in args {
                    a.register(vocab)?;
                }
            }
            Atom::Eq(l, r) => {
                l.register(vocab)?;
                r.register(vocab)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Literal {
        Literal {
            atom: self.atom.substitute(map),
            positive: self.positive,
        }
    }
}

/// `body -> head`, where an empty head stands for falsity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Vec<Atom>,
    pub body: Vec<Literal>,
}

impl Rule {
    /// Fails if a head atom is an equality.
    pub fn new(head: Vec<Atom>, body: Vec<Literal>) -> Result<Rule> {
        if head.iter().any(|a| matches!(a, Atom::Eq(..))) {
            return Err(Error::EqualityInHead { line: 0, col: 0 });
        }
        Ok(Rule { head, body })
    }

    pub fn fact(head: Atom) -> Rule {
        Rule {
            head: vec![head],
            body: Vec::new(),
        }
    }

    pub fn constraint(body: Vec<Literal>) -> Rule {
        Rule {
            head: Vec::new(),
            body,
        }
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    /// Variables in order of first occurrence, head first.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in &self.head {
            a.collect_vars(&mut out);
        }
        for l in &self.body {
            l.atom.collect_vars(&mut out);
        }
        out
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Rule {
        Rule {
            head: self.head.iter().map(|a| a.substitute(map)).collect(),
            body: self.body.iter().map(|l| l.substitute(map)).collect(),
        }
    }
}

/// A finite disjunctive program together with its vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    rules: Vec<Rule>,
    vocabulary: Vocabulary,
    intensional: BTreeSet<String>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Result<Program> {
        Program::with_vocabulary(rules, &Vocabulary::new())
    }

    /// Builds a program whose vocabulary also contains `extra`, e.g. symbols
    /// that only the intended structures mention.
    pub fn with_vocabulary(rules: Vec<Rule>, extra: &Vocabulary) -> Result<Program> {
        let mut vocabulary = extra.clone();
        let mut intensional = BTreeSet::new();
        for rule in &rules {
            for a in &rule.head {
                match a {
                    Atom::Pred { pred, .. } => {
                        intensional.insert(pred.clone());
                    }
                    Atom::Eq(..) => return Err(Error::EqualityInHead { line: 0, col: 0 }),
                }
                a.register(&mut vocabulary)?;
            }
            for l in &rule.body {
                l.atom.register(&mut vocabulary)?;
            }
        }
        Ok(Program {
            rules,
            vocabulary,
            intensional,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    /// Predicates occurring in some rule head.
    pub fn intensional(&self) -> &BTreeSet<String> {
        &self.intensional
    }

    pub fn is_intensional(&self, pred: &str) -> bool {
        self.intensional.contains(pred)
    }

    pub fn extensional_predicates(&self) -> BTreeSet<String> {
        self.vocabulary
            .predicates()
            .keys()
            .filter(|p| !self.intensional.contains(*p))
            .cloned()
            .collect()
    }

    pub fn is_normal(&self) -> bool {
        self.rules.iter().all(|r| r.head.len() <= 1)
    }

    pub fn first_disjunctive_rule(&self) -> Option<usize> {
        self.rules.iter().position(|r| r.head.len() > 1)
    }

    /// Maximal arity of an intensional predicate (0 if there are none).
    pub fn max_intensional_arity(&self) -> usize {
        self.intensional
            .iter()
            .filter_map(|p| self.vocabulary.predicate_arity(p))
            .max()
            .unwrap_or(0)
    }

    pub fn union(&self, other: &Program) -> Result<Program> {
        let mut rules = self.rules.clone();
        rules.extend(other.rules.iter().cloned());
        let mut extra = self.vocabulary.clone();
        extra.merge(&other.vocabulary)?;
        Program::with_vocabulary(rules, &extra)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// All variable names used anywhere in the program.
    pub fn variable_names(&self) -> BTreeSet<String> {
        self.rules.iter().flat_map(|r| r.variables()).collect()
    }
}
