//! Finite structures, assignments and the brute-force evaluation substrate.

mod eval;
mod expand;
mod format;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::Vocabulary;

pub use eval::{eval_formula, eval_formula_with, EvalOptions};
pub use expand::{expansion_count_log2, expansions, expansions_with_cap, Expansions};
pub use format::parse_structure;

/// Domain elements are indices into the structure's ordered domain.
pub type Elem = usize;

/// Default bound on log₂ of the number of candidate interpretations for a
/// single symbol during exhaustive enumeration.
pub const DEFAULT_CAP_LOG2: u32 = 24;

/// A ground atom `P(a₁,…,aₖ)` over domain indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<Elem>,
}

impl GroundAtom {
    pub fn new(pred: impl Into<String>, args: Vec<Elem>) -> GroundAtom {
        GroundAtom {
            pred: pred.into(),
            args,
        }
    }

    pub fn prop(pred: impl Into<String>) -> GroundAtom {
        GroundAtom::new(pred, Vec::new())
    }
}

/// Interpretation of a predicate: a set of tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Elem>>,
}

impl Relation {
    pub fn new(arity: usize) -> Relation {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn contains(&self, args: &[Elem]) -> bool {
        self.tuples.contains(args)
    }
}

/// Interpretation of a function: a total table indexed by the mixed-radix
/// encoding of the argument tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Function {
    pub arity: usize,
    pub table: Vec<Elem>,
}

/// Index of `args` in a dense table over a domain of size `n`.
pub fn tuple_index(n: usize, args: &[Elem]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(n: usize, arity: usize, mut idx: usize) -> Vec<Elem> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

/// All tuples of the given arity in lexicographic domain order.
pub fn all_tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
    (0..total).map(move |i| index_tuple(n, arity, i))
}

/// A finite structure: an ordered nonempty domain plus relation and function tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    domain: Vec<String>,
    index: HashMap<String, Elem>,
    relations: BTreeMap<String, Relation>,
    functions: BTreeMap<String, Function>,
}

impl FiniteStructure {
    pub fn new<S: Into<String>>(domain: impl IntoIterator<Item = S>) -> Result<FiniteStructure> {
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        if domain.is_empty() {
            return Err(Error::InvalidStructure("empty domain".into()));
        }
        let mut index = HashMap::new();
        for (i, d) in domain.iter().enumerate() {
            if index.insert(d.clone(), i).is_some() {
                return Err(Error::InvalidStructure(format!("duplicate element `{d}`")));
            }
        }
        Ok(FiniteStructure {
            domain,
            index,
            relations: BTreeMap::new(),
            functions: BTreeMap::new(),
        })
    }

    /// Domain `1, …, n`.
    pub fn of_size(n: usize) -> Result<FiniteStructure> {
        FiniteStructure::new((1..=n).map(|i| i.to_string()))
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn element(&self, name: &str) -> Result<Elem> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.domain[e]
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn functions(&self) -> &BTreeMap<String, Function> {
        &self.functions
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn function(&self, name: &str) -> Option<&Function> {
        self.functions.get(name)
    }

    pub fn interprets(&self, name: &str) -> bool {
        self.relations.contains_key(name) || self.functions.contains_key(name)
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new();
        for (p, r) in &self.relations {
            v.add_predicate(p, r.arity).expect("structure symbols are unique");
        }
        for (f, t) in &self.functions {
            v.add_function(f, t.arity).expect("structure symbols are unique");
        }
        v
    }

    fn check_fresh(&self, name: &str, is_rel: bool, arity: usize) -> Result<()> {
        if is_rel && self.functions.contains_key(name) || !is_rel && self.relations.contains_key(name) {
            return Err(Error::KindConflict(name.to_string()));
        }
        let existing = if is_rel {
            self.relations.get(name).map(|r| r.arity)
        } else {
            self.functions.get(name).map(|f| f.arity)
        };
        match existing {
            Some(a) if a != arity => Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: a,
                found: arity,
            }),
            _ => Ok(()),
        }
    }

    /// Interprets (or reinterprets) a predicate.
    pub fn set_relation<I>(&mut self, name: &str, arity: usize, tuples: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        self.check_fresh(name, true, arity)?;
        let mut rel = Relation::new(arity);
        for t in tuples {
            if t.len() != arity {
                return Err(Error::LengthMismatch(t.len(), arity));
            }
            if let Some(&bad) = t.iter().find(|&&e| e >= self.size()) {
                return Err(Error::InvalidStructure(format!("element index {bad} out of range")));
            }
            rel.tuples.insert(t);
        }
        self.relations.insert(name.to_string(), rel);
        Ok(())
    }

    /// Like [`set_relation`](Self::set_relation) with tuples given by element names.
    pub fn set_relation_named(&mut self, name: &str, arity: usize, tuples: &[&[&str]]) -> Result<()> {
        let ts = tuples
            .iter()
            .map(|t| t.iter().map(|e| self.element(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        self.set_relation(name, arity, ts)
    }

    pub fn with_relation(mut self, name: &str, arity: usize, tuples: &[&[&str]]) -> Result<Self> {
        self.set_relation_named(name, arity, tuples)?;
        Ok(self)
    }

    /// Interprets a function by its dense table (see [`tuple_index`]).
    pub fn set_function(&mut self, name: &str, arity: usize, table: Vec<Elem>) -> Result<()> {
        self.check_fresh(name, false, arity)?;
        let expected = self.size().pow(arity as u32);
        if table.len() != expected {
            return Err(Error::InvalidStructure(format!(
                "function `{name}` table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if table.iter().any(|&e| e >= self.size()) {
            return Err(Error::InvalidStructure(format!("function `{name}` maps outside the domain")));
        }
        self.functions.insert(name.to_string(), Function { arity, table });
        Ok(())
    }

    pub fn set_constant(&mut self, name: &str, value: &str) -> Result<()> {
        let e = self.element(value)?;
        self.set_function(name, 0, vec![e])
    }

    pub fn with_constant(mut self, name: &str, value: &str) -> Result<Self> {
        self.set_constant(name, value)?;
        Ok(self)
    }

    pub fn remove(&mut self, name: &str) {
        self.relations.remove(name);
        self.functions.remove(name);
    }

    pub fn holds(&self, pred: &str, args: &[Elem]) -> bool {
        self.relations.get(pred).is_some_and(|r| r.contains(args))
    }

    pub fn holds_atom(&self, atom: &GroundAtom) -> bool {
        self.holds(&atom.pred, &atom.args)
    }

    pub fn apply(&self, fun: &str, args: &[Elem]) -> Option<Elem> {
        let f = self.functions.get(fun)?;
        Some(f.table[tuple_index(self.size(), args)])
    }

    /// Restriction to the symbols of `vocab`.
    pub fn restrict(&self, vocab: &Vocabulary) -> FiniteStructure {
        let mut out = self.clone();
        out.relations.retain(|k, _| vocab.predicates().contains_key(k));
        out.functions.retain(|k, _| vocab.functions().contains_key(k));
        out
    }

    /// Structure without the given symbols.
    pub fn without<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> FiniteStructure {
        let mut out = self.clone();
        for n in names {
            out.remove(n);
        }
        out
    }

    /// Replaces the interpretation of every predicate in `preds` by the atoms
    /// of `atoms` over it.
    pub fn with_atoms(&self, preds: &BTreeMap<String, usize>, atoms: &BTreeSet<GroundAtom>) -> Result<FiniteStructure> {
        let mut out = self.clone();
        for (p, &k) in preds {
            let tuples = atoms.iter().filter(|a| &a.pred == p).map(|a| a.args.clone());
            out.set_relation(p, k, tuples)?;
        }
        Ok(out)
    }

    pub fn atom_to_string(&self, atom: &GroundAtom) -> String {
        if atom.args.is_empty() {
            return atom.pred.clone();
        }
        let args: Vec<&str> = atom.args.iter().map(|&e| self.name(e)).collect();
        format!("{}({})", atom.pred, args.join(","))
    }

    /// Parses `p` or `p(a,b)` using element names.
    pub fn parse_atom(&self, text: &str) -> Result<GroundAtom> {
        let text = text.trim();
        let (pred, rest) = match text.find('(') {
            Some(i) => (&text[..i], &text[i..]),
            None => (text, ""),
        };
        let args = if rest.is_empty() {
            Vec::new()
        } else {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::InvalidStructure(format!("bad atom `{text}`")))?;
            inner
                .split(',')
                .map(|e| self.element(e.trim()))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(GroundAtom::new(pred.trim(), args))
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::print_structure(self))
    }
}

/// Values for free variables of a formula: individuals plus optional
/// second-order valuations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub individuals: BTreeMap<String, Elem>,
    pub relations: BTreeMap<String, Relation>,
    pub functions: BTreeMap<String, Function>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn bind(mut self, var: impl Into<String>, e: Elem) -> Assignment {
        self.individuals.insert(var.into(), e);
        self
    }

    pub fn get(&self, var: &str) -> Option<Elem> {
        self.individuals.get(var).copied()
    }
}

/// `Ins(s, preds)`: the ground atoms of the given predicates true in `s`.
pub fn instances<'a, I>(s: &FiniteStructure, preds: I) -> Result<BTreeSet<GroundAtom>>
where
    I: IntoIterator<Item = &'a String>,
{
    let mut out = BTreeSet::new();
    for p in preds {
        let rel = s
            .relation(p)
            .ok_or_else(|| Error::UnknownPredicate(p.clone()))?;
        for t in &rel.tuples {
            out.insert(GroundAtom::new(p.clone(), t.clone()));
        }
    }
    Ok(out)
}
