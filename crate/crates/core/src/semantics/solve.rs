//! Enumeration of stable expansions.
//!
//! Non-intensional auxiliary symbols are expanded exhaustively. For each such
//! expansion the program is instantiated once, and the intensional part is
//! found by a branching search with clause and support propagation; every
//! complete candidate is accepted only if it is a minimal model of its reduct.

use std::collections::{BTreeSet, HashMap};

use super::ground::{Grounder, Instance};
use super::sat::{self, Lit};
use super::{intensional_arities, Limits};
use crate::error::{Error, Result};
use crate::structures::{expansions_with_cap, FiniteStructure, GroundAtom};
use crate::syntax::{Atom, Program, Vocabulary};

/// All expansions of `s` by `aux` and the intensional predicates of `p` that
/// are stable models of `p`.
pub fn enumerate_stable(p: &Program, s: &FiniteStructure, aux: &Vocabulary) -> Result<Vec<FiniteStructure>> {
    enumerate_stable_with(p, s, aux, &Limits::default())
}

pub fn enumerate_stable_with(
    p: &Program,
    s: &FiniteStructure,
    aux: &Vocabulary,
    limits: &Limits,
) -> Result<Vec<FiniteStructure>> {
    let mut out = Vec::new();
    enumerate_stable_each(p, s, aux, limits, &mut |m| {
        out.push(m);
        true
    })?;
    Ok(out)
}

/// Streams stable expansions to `found`; returning `false` stops the search.
/// Returns the number of expansions reported.
pub fn enumerate_stable_each(
    p: &Program,
    s: &FiniteStructure,
    aux: &Vocabulary,
    limits: &Limits,
    found: &mut dyn FnMut(FiniteStructure) -> bool,
) -> Result<usize> {
    let tau = intensional_arities(p);
    let base = s.without(tau.keys().map(|k| k.as_str()));
    let outer = aux.difference(&Vocabulary::from_predicates(&tau));
    for name in outer.names() {
        if base.interprets(&name) {
            return Err(Error::VocabularyClash(name));
        }
    }
    let mut count = 0;
    for ext in expansions_with_cap(&base, &outer, limits.cap_log2)? {
        let mut stop = false;
        solve_intensional(p, &ext, &tau, limits, &mut |m| {
            count += 1;
            if !found(m) {
                stop = true;
            }
            !stop
        })?;
        if stop {
            break;
        }
    }
    Ok(count)
}

struct GRule {
    pos: Vec<usize>,
    neg: Vec<usize>,
    head: Vec<usize>,
}

const UNSET: i8 = -1;

struct Search<'a> {
    rules: &'a [GRule],
    /// Rules in which an atom occurs anywhere.
    occurs: Vec<Vec<usize>>,
    /// Rules with the atom in the head.
    supports: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<usize>,
    queue_head: usize,
}

impl Search<'_> {
    fn assign(&mut self, a: usize, v: bool) -> bool {
        match self.value[a] {
            UNSET => {
                self.value[a] = v as i8;
                self.trail.push(a);
                true
            }
            x => x == v as i8,
        }
    }

    fn check_rule(&mut self, r: usize) -> bool {
        let rule = &self.rules[r];
        let mut open = None;
        let mut count = 0;
        let lits = rule
            .pos
            .iter()
            .map(|&a| (a, false))
            .chain(rule.neg.iter().map(|&a| (a, true)))
            .chain(rule.head.iter().map(|&a| (a, true)));
        for (a, want) in lits {
            match self.value[a] {
                UNSET => {
                    count += 1;
                    open = Some((a, want));
                }
                v if (v == 1) == want => return true,
                _ => {}
            }
        }
        match count {
            0 => false,
            1 => {
                let (a, want) = open.unwrap();
                self.assign(a, want)
            }
            _ => true,
        }
    }

    fn blocked(&self, r: usize, a: usize) -> bool {
        let rule = &self.rules[r];
        rule.pos.iter().any(|&b| self.value[b] == 0)
            || rule.neg.iter().any(|&b| self.value[b] == 1)
            || rule.head.iter().any(|&h| h != a && self.value[h] == 1)
    }

    fn check_support(&mut self, a: usize) -> bool {
        if self.value[a] == 0 {
            return true;
        }
        let mut open = None;
        let mut count = 0;
        for k in 0..self.supports[a].len() {
            let r = self.supports[a][k];
            if !self.blocked(r, a) {
                count += 1;
                open = Some(r);
                if count > 1 {
                    break;
                }
            }
        }
        match (count, self.value[a]) {
            (0, 1) => false,
            (0, _) => self.assign(a, false),
            (1, 1) => {
                let r = open.unwrap();
                let rule = &self.rules[r];
                let pos = rule.pos.clone();
                let neg = rule.neg.clone();
                let others: Vec<usize> = rule.head.iter().copied().filter(|&h| h != a).collect();
                pos.into_iter().all(|b| self.assign(b, true))
                    && neg.into_iter().all(|b| self.assign(b, false))
                    && others.into_iter().all(|h| self.assign(h, false))
            }
            _ => true,
        }
    }

    /// Rule propagation to a fixpoint, then support checks for the head atoms
    /// of every touched rule, each atom once per round.
    fn propagate(&mut self) -> bool {
        let mut dirty = vec![false; self.value.len()];
        let mut pending = Vec::new();
        loop {
            while self.queue_head < self.trail.len() {
                let a = self.trail[self.queue_head];
                self.queue_head += 1;
                if !dirty[a] {
                    dirty[a] = true;
                    pending.push(a);
                }
                for k in 0..self.occurs[a].len() {
                    let r = self.occurs[a][k];
                    if !self.check_rule(r) {
                        return false;
                    }
                    for &b in &self.rules[r].head {
                        if !dirty[b] {
                            dirty[b] = true;
                            pending.push(b);
                        }
                    }
                }
            }
            if pending.is_empty() {
                return true;
            }
            for b in std::mem::take(&mut pending) {
                dirty[b] = false;
                if !self.check_support(b) {
                    return false;
                }
            }
        }
    }

    /// Falsifies atoms outside the least fixpoint of the rules whose bodies
    /// are not yet false. Other head atoms are ignored, which keeps the
    /// pruning sound for disjunctive rules: every stable model extending the
    /// current assignment lies inside that fixpoint.
    fn unfounded(&mut self) -> bool {
        let n = self.value.len();
        let mut missing: Vec<usize> = Vec::with_capacity(self.rules.len());
        let mut derivable = vec![false; n];
        let mut stack = Vec::new();
        for r in self.rules {
            let dead = r.pos.iter().any(|&b| self.value[b] == 0) || r.neg.iter().any(|&b| self.value[b] == 1);
            missing.push(if dead { usize::MAX } else { r.pos.len() });
            if !dead && r.pos.is_empty() {
                for &h in &r.head {
                    if !derivable[h] {
                        derivable[h] = true;
                        stack.push(h);
                    }
                }
            }
        }
        let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, r) in self.rules.iter().enumerate() {
            if missing[k] != usize::MAX {
                for &b in &r.pos {
                    watch[b].push(k);
                }
            }
        }
        while let Some(a) = stack.pop() {
            for &k in &watch[a] {
                missing[k] -= 1;
                if missing[k] == 0 {
                    for &h in &self.rules[k].head {
                        if !derivable[h] {
                            derivable[h] = true;
                            stack.push(h);
                        }
                    }
                }
            }
        }
        (0..n).all(|a| derivable[a] || self.assign(a, false))
    }

    /// Unit propagation interleaved with unfounded-set pruning.
    fn propagate_all(&mut self) -> bool {
        loop {
            if !self.propagate() {
                return false;
            }
            let before = self.trail.len();
            if !self.unfounded() {
                return false;
            }
            if self.trail.len() == before {
                return true;
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().unwrap();
            self.value[a] = UNSET;
        }
        self.queue_head = self.queue_head.min(mark);
    }

    fn initial(&mut self) -> bool {
        for r in 0..self.rules.len() {
            if !self.check_rule(r) {
                return false;
            }
        }
        for a in 0..self.value.len() {
            if !self.check_support(a) {
                return false;
            }
        }
        self.propagate_all()
    }

    fn run(&mut self, leaf: &mut dyn FnMut(&[i8]) -> bool) -> bool {
        let Some(a) = self.value.iter().position(|&v| v == UNSET) else {
            return leaf(&self.value);
        };
        for v in [false, true] {
            let mark = self.trail.len();
            self.queue_head = mark;
            if self.assign(a, v) && self.propagate_all() && !self.run(leaf) {
                self.undo(mark);
                return false;
            }
            self.undo(mark);
        }
        true
    }
}

/// Minimality of the candidate `m` (atoms with value 1) with respect to the
/// reduct of the ground rules.
fn minimal(rules: &[GRule], value: &[i8]) -> bool {
    let inside: Vec<usize> = (0..value.len()).filter(|&a| value[a] == 1).collect();
    if inside.is_empty() {
        return true;
    }
    let idx: HashMap<usize, usize> = inside.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    for r in rules {
        if r.neg.iter().any(|&b| value[b] == 1) || !r.pos.iter().all(|b| idx.contains_key(b)) {
            continue;
        }
        let mut c: Vec<Lit> = r.pos.iter().map(|b| Lit::neg(idx[b])).collect();
        c.extend(r.head.iter().filter_map(|h| idx.get(h)).map(|&i| Lit::pos(i)));
        clauses.push(c);
    }
    clauses.push((0..inside.len()).map(Lit::neg).collect());
    sat::solve(inside.len(), &clauses).is_none()
}

fn solve_intensional(
    p: &Program,
    s: &FiniteStructure,
    tau: &std::collections::BTreeMap<String, usize>,
    limits: &Limits,
    found: &mut dyn FnMut(FiniteStructure) -> bool,
) -> Result<()> {
    // Instantiate, evaluating everything that does not mention τ.
    let fixed = |a: &Atom, _: bool| match a {
        Atom::Pred { pred, .. } => !tau.contains_key(pred),
        Atom::Eq(..) => true,
    };
    let mut insts: Vec<Instance> = Vec::new();
    for rule in p.rules() {
        let g = Grounder::new(s, rule, &fixed)?;
        g.for_each(&mut |inst| {
            if insts.len() >= limits.max_ground {
                return Err(Error::ResourceLimit(format!(
                    "more than {} ground rules",
                    limits.max_ground
                )));
            }
            insts.push(inst);
            Ok(())
        })?;
    }

    // Atoms that may be true: least fixpoint ignoring negation.
    let mut possible: BTreeSet<GroundAtom> = BTreeSet::new();
    loop {
        let before = possible.len();
        for inst in &insts {
            if inst.pos.iter().all(|a| possible.contains(a)) {
                possible.extend(inst.head.iter().cloned());
            }
        }
        if possible.len() == before {
            break;
        }
    }
    let atoms: Vec<GroundAtom> = possible.into_iter().collect();
    let ids: HashMap<&GroundAtom, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();

    let mut rules = Vec::new();
    for inst in &insts {
        if !inst.pos.iter().all(|a| ids.contains_key(a)) {
            continue;
        }
        rules.push(GRule {
            pos: inst.pos.iter().map(|a| ids[a]).collect(),
            neg: inst.neg.iter().filter_map(|a| ids.get(a).copied()).collect(),
            head: inst.head.iter().filter_map(|a| ids.get(a).copied()).collect(),
        });
    }
    drop(insts);

    let n = atoms.len();
    let mut occurs = vec![Vec::new(); n];
    let mut supports = vec![Vec::new(); n];
    for (r, rule) in rules.iter().enumerate() {
        for &a in rule.pos.iter().chain(&rule.neg).chain(&rule.head) {
            if occurs[a].last() != Some(&r) {
                occurs[a].push(r);
            }
        }
        for &h in &rule.head {
            supports[h].push(r);
        }
    }
    let mut search = Search {
        rules: &rules,
        occurs,
        supports,
        value: vec![UNSET; n],
        trail: Vec::new(),
        queue_head: 0,
    };
    if !search.initial() {
        return Ok(());
    }
    let mut result: Result<()> = Ok(());
    search.run(&mut |value| {
        if !minimal(&rules, value) {
            return true;
        }
        let m: BTreeSet<GroundAtom> = (0..n).filter(|&a| value[a] == 1).map(|a| atoms[a].clone()).collect();
        match s.with_atoms(tau, &m) {
            Ok(model) => found(model),
            Err(e) => {
                result = Err(e);
                false
            }
        }
    });
    result
}
