//! Stable-model semantics over finite structures: the first-order reduct,
//! minimal models, the progression operator and stable-model enumeration.

mod ground;
mod progression;
mod sat;
mod solve;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::structures::{instances, FiniteStructure, GroundAtom};
use crate::syntax::{Atom, Program};

pub use progression::{
    check_stable_progression, check_stable_progression_normal, clause_to_string, progression_fixpoint,
    progression_fixpoint_reduced, progression_fixpoint_with, progression_step, progression_trace, ClauseSet, GroundPositiveClause,
};
pub use solve::{enumerate_stable, enumerate_stable_each, enumerate_stable_with};

use ground::Grounder;
use sat::Lit;

/// Resource limits shared by the semantic procedures.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Largest universe accepted by [`minimal_models`].
    pub max_universe: usize,
    /// Largest clause set built by the progression fixpoint.
    pub max_clauses: usize,
    /// Largest number of ground rule instances.
    pub max_ground: usize,
    /// log₂ bound on the number of outer expansions in enumeration.
    pub cap_log2: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_universe: 22,
            max_clauses: 2_000_000,
            max_ground: 5_000_000,
            cap_log2: crate::structures::DEFAULT_CAP_LOG2,
        }
    }
}

/// A ground plain rule `body → head` (an empty head is ⊥).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropRule {
    pub body: BTreeSet<GroundAtom>,
    pub head: BTreeSet<GroundAtom>,
}

/// A ground program without default negation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropositionalProgram {
    pub rules: Vec<PropRule>,
}

impl PropositionalProgram {
    pub fn new(rules: Vec<PropRule>) -> PropositionalProgram {
        PropositionalProgram { rules }
    }

    /// Every atom mentioned by some rule.
    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        self.rules
            .iter()
            .flat_map(|r| r.body.iter().chain(r.head.iter()).cloned())
            .collect()
    }

    /// Classical satisfaction by the set of true atoms `m`.
    pub fn satisfied_by(&self, m: &BTreeSet<GroundAtom>) -> bool {
        self.rules
            .iter()
            .all(|r| !r.body.iter().all(|a| m.contains(a)) || r.head.iter().any(|a| m.contains(a)))
    }

    /// Renders the rules with element names taken from `s`.
    pub fn display<'a>(&'a self, s: &'a FiniteStructure) -> impl fmt::Display + 'a {
        PropDisplay { p: self, s }
    }
}

struct PropDisplay<'a> {
    p: &'a PropositionalProgram,
    s: &'a FiniteStructure,
}

impl fmt::Display for PropDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.p.rules {
            let head: Vec<String> = r.head.iter().map(|a| self.s.atom_to_string(a)).collect();
            let body: Vec<String> = r.body.iter().map(|a| self.s.atom_to_string(a)).collect();
            match (head.is_empty(), body.is_empty()) {
                (false, true) => writeln!(f, "{}.", head.join(" | "))?,
                (true, _) => writeln!(f, ":- {}.", body.join(", "))?,
                (false, false) => writeln!(f, "{} :- {}.", head.join(" | "), body.join(", "))?,
            }
        }
        Ok(())
    }
}

/// The first-order Gelfond–Lifschitz reduct of `p` relative to `s`.
///
/// For every rule and assignment satisfying, in `s`, the body conjuncts in
/// which no intensional predicate occurs positively, the instance keeps the
/// positive intensional body atoms and the head.
pub fn reduct(p: &Program, s: &FiniteStructure) -> Result<PropositionalProgram> {
    reduct_with(p, s, &Limits::default())
}

pub fn reduct_with(p: &Program, s: &FiniteStructure, limits: &Limits) -> Result<PropositionalProgram> {
    let tau = p.intensional();
    let fixed = |a: &Atom, positive: bool| match a {
        Atom::Pred { pred, .. } => !(positive && tau.contains(pred)),
        Atom::Eq(..) => true,
    };
    let mut rules = Vec::new();
    let mut seen = BTreeSet::new();
    for rule in p.rules() {
        let g = Grounder::new(s, rule, &fixed)?;
        g.for_each(&mut |inst| {
            let r = PropRule {
                body: inst.pos.into_iter().collect(),
                head: inst.head.into_iter().collect(),
            };
            if seen.insert(r.clone()) {
                if rules.len() >= limits.max_ground {
                    return Err(Error::ResourceLimit(format!(
                        "more than {} ground rules",
                        limits.max_ground
                    )));
                }
                rules.push(r);
            }
            Ok(())
        })?;
    }
    Ok(PropositionalProgram { rules })
}

/// All ⊆-minimal subsets of `universe` that satisfy every rule of `pp`,
/// found by enumerating subsets in order of increasing cardinality.
pub fn minimal_models(pp: &PropositionalProgram, universe: &BTreeSet<GroundAtom>) -> Result<Vec<BTreeSet<GroundAtom>>> {
    minimal_models_with(pp, universe, &Limits::default())
}

pub fn minimal_models_with(
    pp: &PropositionalProgram,
    universe: &BTreeSet<GroundAtom>,
    limits: &Limits,
) -> Result<Vec<BTreeSet<GroundAtom>>> {
    if universe.len() > limits.max_universe {
        return Err(Error::ResourceLimit(format!(
            "universe of {} atoms exceeds the limit of {}",
            universe.len(),
            limits.max_universe
        )));
    }
    let atoms: Vec<&GroundAtom> = universe.iter().collect();
    let pos: HashMap<&GroundAtom, usize> = atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let mask = |set: &BTreeSet<GroundAtom>| -> Option<u64> {
        set.iter()
            .try_fold(0u64, |m, a| pos.get(a).map(|&i| m | (1u64 << i)))
    };
    // Rules mentioning atoms outside the universe: body atoms outside are false.
    let mut rules = Vec::new();
    for r in &pp.rules {
        let Some(body) = mask(&r.body) else { continue };
        let head = r
            .head
            .iter()
            .filter_map(|a| pos.get(a))
            .fold(0u64, |m, &i| m | (1u64 << i));
        rules.push((body, head));
    }
    let n = atoms.len();
    let mut found: Vec<u64> = Vec::new();
    for k in 0..=n {
        for set in subsets_of_size(n, k) {
            if found.iter().any(|&f| f & set == f) {
                continue;
            }
            if rules.iter().all(|&(b, h)| b & set != b || h & set != 0) {
                found.push(set);
            }
        }
    }
    let mut out: Vec<BTreeSet<GroundAtom>> = found
        .into_iter()
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| atoms[i].clone()).collect())
        .collect();
    out.sort();
    Ok(out)
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    // Gosper's hack over n-bit words.
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut cur = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur;
        if k == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 || r > limit {
                done = true;
            } else {
                cur = (((r ^ cur) >> 2) / c) | r;
                if cur > limit {
                    done = true;
                }
            }
        }
        Some(out)
    })
}

/// Whether `m` is a ⊆-minimal model of `pp` (atoms outside `m` being false).
pub fn is_minimal_model(pp: &PropositionalProgram, m: &BTreeSet<GroundAtom>) -> bool {
    if !pp.satisfied_by(m) {
        return false;
    }
    if m.is_empty() {
        return true;
    }
    // Search for a model strictly inside m.
    let idx: HashMap<&GroundAtom, usize> = m.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    for r in &pp.rules {
        if !r.body.iter().all(|a| idx.contains_key(a)) {
            continue;
        }
        let mut c: Vec<Lit> = r.body.iter().map(|a| Lit::neg(idx[a])).collect();
        c.extend(r.head.iter().filter_map(|a| idx.get(a)).map(|&i| Lit::pos(i)));
        clauses.push(c);
    }
    clauses.push((0..m.len()).map(Lit::neg).collect());
    sat::solve(m.len(), &clauses).is_none()
}

/// Whether `s` is a stable model of `p`: `Ins(s, τ)` is a minimal model of the reduct.
pub fn check_stable(p: &Program, s: &FiniteStructure) -> Result<bool> {
    let pp = reduct(p, s)?;
    let m = instances(s, p.intensional())?;
    Ok(is_minimal_model(&pp, &m))
}

/// Arity table of the intensional predicates of `p`.
pub(crate) fn intensional_arities(p: &Program) -> BTreeMap<String, usize> {
    p.intensional()
        .iter()
        .map(|q| (q.clone(), p.vocabulary().predicate_arity(q).unwrap_or(0)))
        .collect()
}
