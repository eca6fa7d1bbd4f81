//! The progression operator Γ on sets of ground positive clauses.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{reduct, Limits, PropositionalProgram};
use crate::error::{Error, Result};
use crate::structures::{instances, FiniteStructure, GroundAtom};
use crate::syntax::Program;

/// A ground positive clause, identified with its set of atoms.
pub type GroundPositiveClause = BTreeSet<GroundAtom>;

/// A set of ground positive clauses in canonical form.
pub type ClauseSet = BTreeSet<GroundPositiveClause>;

/// Renders a clause as `a | b | c` using the element names of `s`.
pub fn clause_to_string(s: &FiniteStructure, c: &GroundPositiveClause) -> String {
    if c.is_empty() {
        return "FALSE".into();
    }
    c.iter()
        .map(|a| s.atom_to_string(a))
        .collect::<Vec<_>>()
        .join(" | ")
}

struct Engine {
    atoms: Vec<GroundAtom>,
    ids: HashMap<GroundAtom, u32>,
    rules: Vec<(Vec<u32>, Vec<u32>)>,
    clauses: Vec<Vec<u32>>,
    known: HashSet<Vec<u32>>,
    by_atom: Vec<Vec<usize>>,
    max_clauses: usize,
    /// Drop clauses that have a proper subset in the set.
    subsume: bool,
    dead: Vec<bool>,
    by_min: Vec<Vec<usize>>,
}

impl Engine {
    fn new(pp: &PropositionalProgram, max_clauses: usize, subsume: bool) -> Engine {
        let mut e = Engine {
            atoms: Vec::new(),
            ids: HashMap::new(),
            rules: Vec::new(),
            clauses: Vec::new(),
            known: HashSet::new(),
            by_atom: Vec::new(),
            max_clauses,
            subsume,
            dead: Vec::new(),
            by_min: Vec::new(),
        };
        for r in &pp.rules {
            let body = r.body.iter().map(|a| e.intern(a)).collect();
            let head = r.head.iter().map(|a| e.intern(a)).collect();
            e.rules.push((body, head));
        }
        e
    }

    fn intern(&mut self, a: &GroundAtom) -> u32 {
        if let Some(&i) = self.ids.get(a) {
            return i;
        }
        let i = self.atoms.len() as u32;
        self.atoms.push(a.clone());
        self.ids.insert(a.clone(), i);
        self.by_atom.push(Vec::new());
        self.by_min.push(Vec::new());
        i
    }

    fn subsumed(&self, c: &[u32]) -> bool {
        c.iter().any(|&a| {
            self.by_min[a as usize]
                .iter()
                .any(|&d| !self.dead[d] && is_subset(&self.clauses[d], c))
        })
    }

    fn add(&mut self, mut c: Vec<u32>) -> Result<()> {
        c.sort_unstable();
        c.dedup();
        if c.is_empty() || self.known.contains(&c) {
            return Ok(());
        }
        if self.subsume {
            if self.subsumed(&c) {
                return Ok(());
            }
            let rarest = *c.iter().min_by_key(|&&a| self.by_atom[a as usize].len()).unwrap();
            for &d in &self.by_atom[rarest as usize] {
                if !self.dead[d] && is_subset(&c, &self.clauses[d]) {
                    self.dead[d] = true;
                }
            }
        }
        if self.clauses.len() >= self.max_clauses {
            return Err(Error::ResourceLimit(format!(
                "progression exceeded {} clauses",
                self.max_clauses
            )));
        }
        let idx = self.clauses.len();
        for &a in &c {
            self.by_atom[a as usize].push(idx);
        }
        self.by_min[c[0] as usize].push(idx);
        self.known.insert(c.clone());
        self.clauses.push(c);
        self.dead.push(false);
        Ok(())
    }

    /// Adds every clause obtainable from a rule instance that uses at least
    /// one clause with index in `start..end` and otherwise clauses below `end`.
    fn round(&mut self, start: usize, end: usize) -> Result<()> {
        let mut fresh: Vec<Vec<u32>> = Vec::new();
        for (body, head) in &self.rules {
            if body.is_empty() {
                if end == 0 {
                    fresh.push(head.clone());
                }
                continue;
            }
            for j in 0..body.len() {
                let ranges: Vec<&[usize]> = body
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| {
                        let list = &self.by_atom[p as usize];
                        let lo = if i == j { list.partition_point(|&x| x < start) } else { 0 };
                        let hi = if i < j {
                            list.partition_point(|&x| x < start)
                        } else {
                            list.partition_point(|&x| x < end)
                        };
                        &list[lo..hi]
                    })
                    .collect();
                if ranges.iter().any(|r| r.is_empty()) {
                    continue;
                }
                let mut acc = head.clone();
                self.product(body, &ranges, 0, &mut acc, &mut fresh)?;
            }
        }
        for c in fresh {
            self.add(c)?;
        }
        Ok(())
    }

    fn product(
        &self,
        body: &[u32],
        ranges: &[&[usize]],
        i: usize,
        acc: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        if i == body.len() {
            if out.len() + self.clauses.len() > self.max_clauses.saturating_mul(4) {
                return Err(Error::ResourceLimit(format!(
                    "progression exceeded {} clauses",
                    self.max_clauses
                )));
            }
            out.push(acc.clone());
            return Ok(());
        }
        for &ci in ranges[i] {
            if self.dead[ci] {
                continue;
            }
            let mark = acc.len();
            acc.extend(self.clauses[ci].iter().filter(|&&a| a != body[i]));
            self.product(body, ranges, i + 1, acc, out)?;
            acc.truncate(mark);
        }
        Ok(())
    }

    fn snapshot(&self, upto: usize) -> ClauseSet {
        self.clauses[..upto]
            .iter()
            .zip(&self.dead)
            .filter(|(_, &dead)| !dead)
            .map(|(c, _)| c)
            .map(|c| c.iter().map(|&a| self.atoms[a as usize].clone()).collect())
            .collect()
    }

    /// Runs to the fixpoint, returning the clause count after each stage.
    fn run(&mut self) -> Result<Vec<usize>> {
        let mut stages = Vec::new();
        let (mut start, mut end) = (0, 0);
        loop {
            self.round(start, end)?;
            if self.clauses.len() == end && !stages.is_empty() {
                return Ok(stages);
            }
            stages.push(self.clauses.len());
            if self.clauses.len() == end {
                return Ok(stages);
            }
            start = end;
            end = self.clauses.len();
        }
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut j = 0;
    for &a in small {
        while j < big.len() && big[j] < a {
            j += 1;
        }
        if j == big.len() || big[j] != a {
            return false;
        }
        j += 1;
    }
    true
}

/// One application of Γ: for each rule `p₁ ∧ … ∧ pₖ → H` and clauses
/// `Cᵢ ∨ pᵢ` of `ls`, the clause `H ∨ C₁ ∨ … ∨ Cₖ`. Empty results are dropped.
pub fn progression_step(pp: &PropositionalProgram, ls: &ClauseSet) -> ClauseSet {
    let mut out = ClauseSet::new();
    for r in &pp.rules {
        let body: Vec<&GroundAtom> = r.body.iter().collect();
        let cands: Vec<Vec<&GroundPositiveClause>> = body
            .iter()
            .map(|p| ls.iter().filter(|c| c.contains(*p)).collect())
            .collect();
        let mut acc: Vec<GroundAtom> = r.head.iter().cloned().collect();
        step_product(&body, &cands, 0, &mut acc, &mut out);
    }
    out
}

fn step_product(
    body: &[&GroundAtom],
    cands: &[Vec<&GroundPositiveClause>],
    i: usize,
    acc: &mut Vec<GroundAtom>,
    out: &mut ClauseSet,
) {
    if i == body.len() {
        let c: GroundPositiveClause = acc.iter().cloned().collect();
        if !c.is_empty() {
            out.insert(c);
        }
        return;
    }
    for c in &cands[i] {
        let mark = acc.len();
        acc.extend(c.iter().filter(|a| *a != body[i]).cloned());
        step_product(body, cands, i + 1, acc, out);
        acc.truncate(mark);
    }
}

/// The stages Γ↑1, Γ↑2, … up to and including the first one equal to its
/// successor. An empty program yields the single stage ∅.
pub fn progression_trace(pp: &PropositionalProgram, limits: &Limits) -> Result<Vec<ClauseSet>> {
    let mut e = Engine::new(pp, limits.max_clauses, false);
    let stages = e.run()?;
    Ok(stages.into_iter().map(|k| e.snapshot(k)).collect())
}

/// Γ↑ω of the reduct of `p` relative to `s`.
pub fn progression_fixpoint(p: &Program, s: &FiniteStructure) -> Result<ClauseSet> {
    progression_fixpoint_with(&reduct(p, s)?, &Limits::default())
}

pub fn progression_fixpoint_with(pp: &PropositionalProgram, limits: &Limits) -> Result<ClauseSet> {
    let mut e = Engine::new(pp, limits.max_clauses, false);
    e.run()?;
    Ok(e.snapshot(e.clauses.len()))
}

/// Γ↑ω up to subsumption: every clause of Γ↑ω has a subset in the result,
/// and the result is a subset-free part of Γ↑ω. Minimal models, and the
/// clauses meeting a model in a single atom, are the same as for Γ↑ω.
pub fn progression_fixpoint_reduced(pp: &PropositionalProgram, limits: &Limits) -> Result<ClauseSet> {
    let mut e = Engine::new(pp, limits.max_clauses, true);
    e.run()?;
    Ok(e.snapshot(e.clauses.len()))
}

fn constraints_hold(pp: &PropositionalProgram, m: &BTreeSet<GroundAtom>) -> bool {
    pp.rules
        .iter()
        .filter(|r| r.head.is_empty())
        .all(|r| !r.body.iter().all(|a| m.contains(a)))
}

/// Whether `m` is a minimal model of a set of positive clauses.
pub(crate) fn is_minimal_clause_model(cs: &ClauseSet, m: &BTreeSet<GroundAtom>) -> bool {
    if !cs.iter().all(|c| c.iter().any(|a| m.contains(a))) {
        return false;
    }
    let mut witnessed: BTreeSet<&GroundAtom> = BTreeSet::new();
    for c in cs {
        let mut inside = c.iter().filter(|a| m.contains(*a));
        if let (Some(a), None) = (inside.next(), inside.next()) {
            witnessed.insert(a);
        }
    }
    witnessed.len() == m.len()
}

/// Stability via the progression fixpoint: `Ins(s, τ)` must be a minimal
/// model of Γ↑ω and satisfy the ground constraints of the reduct.
pub fn check_stable_progression(p: &Program, s: &FiniteStructure) -> Result<bool> {
    let pp = reduct(p, s)?;
    let m = instances(s, p.intensional())?;
    if !constraints_hold(&pp, &m) {
        return Ok(false);
    }
    let fix = progression_fixpoint_reduced(&pp, &Limits::default())?;
    Ok(is_minimal_clause_model(&fix, &m))
}

/// For normal programs: `Ins(s, τ)` must coincide with the unit clauses of Γ↑ω.
pub fn check_stable_progression_normal(p: &Program, s: &FiniteStructure) -> Result<bool> {
    if let Some(i) = p.first_disjunctive_rule() {
        return Err(Error::NotNormal(i));
    }
    let pp = reduct(p, s)?;
    let m = instances(s, p.intensional())?;
    if !constraints_hold(&pp, &m) {
        return Ok(false);
    }
    let fix = progression_fixpoint_reduced(&pp, &Limits::default())?;
    let units: BTreeSet<GroundAtom> = fix
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c.iter().next().unwrap().clone())
        .collect();
    Ok(units == m)
}
