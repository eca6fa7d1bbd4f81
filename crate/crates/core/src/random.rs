//! Seeded generators of small programs, structures and formulas for
//! differential testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::structures::{all_tuples, FiniteStructure};
use crate::syntax::{Atom, Formula, Literal, Program, Rule, Term, Vocabulary};

pub use rand_chacha::ChaCha8Rng as TestRng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct ProgramConfig {
    pub max_rules: usize,
    pub max_arity: usize,
    /// Predicate names to draw from; arities are chosen at random.
    pub predicates: Vec<String>,
    pub max_body: usize,
    pub max_head: usize,
    pub negation: bool,
    pub equality: bool,
    /// Probability of an individual constant `c` instead of a variable.
    pub constant_rate: f64,
    pub constraints: bool,
}

impl Default for ProgramConfig {
    fn default() -> Self {
        ProgramConfig {
            max_rules: 4,
            max_arity: 2,
            predicates: ["p", "q", "r"].iter().map(|s| s.to_string()).collect(),
            max_body: 3,
            max_head: 2,
            negation: true,
            equality: true,
            constant_rate: 0.1,
            constraints: true,
        }
    }
}

impl ProgramConfig {
    pub fn normal() -> Self {
        ProgramConfig {
            max_head: 1,
            ..ProgramConfig::default()
        }
    }
}

const VARS: [&str; 3] = ["X", "Y", "Z"];

fn random_term(rng: &mut impl Rng, cfg: &ProgramConfig) -> Term {
    if rng.gen_bool(cfg.constant_rate) {
        Term::constant("c")
    } else {
        Term::var(*VARS.choose(rng).unwrap())
    }
}

fn random_atom(rng: &mut impl Rng, cfg: &ProgramConfig, arities: &[(String, usize)]) -> Atom {
    let (p, k) = arities.choose(rng).unwrap();
    Atom::pred(p.clone(), (0..*k).map(|_| random_term(rng, cfg)).collect())
}

/// A random program; every predicate in `cfg.predicates` gets one arity.
pub fn random_program(rng: &mut impl Rng, cfg: &ProgramConfig) -> Program {
    let arities: Vec<(String, usize)> = cfg
        .predicates
        .iter()
        .map(|p| (p.clone(), rng.gen_range(0..=cfg.max_arity)))
        .collect();
    let nrules = rng.gen_range(1..=cfg.max_rules);
    let mut rules = Vec::new();
    for _ in 0..nrules {
        let min_head = if cfg.constraints && rng.gen_bool(0.15) { 0 } else { 1 };
        let nhead = if min_head == 0 {
            0
        } else {
            rng.gen_range(1..=cfg.max_head.max(1))
        };
        let head: Vec<Atom> = (0..nhead).map(|_| random_atom(rng, cfg, &arities)).collect();
        let nbody = rng.gen_range(if nhead == 0 { 1 } else { 0 }..=cfg.max_body);
        let mut body = Vec::new();
        for _ in 0..nbody {
            if cfg.equality && rng.gen_bool(0.12) {
                let eq = Atom::Eq(random_term(rng, cfg), random_term(rng, cfg));
                body.push(if rng.gen_bool(0.5) {
                    Literal::pos(eq)
                } else {
                    Literal::neg(eq)
                });
                continue;
            }
            let a = random_atom(rng, cfg, &arities);
            let positive = !(cfg.negation && rng.gen_bool(0.35));
            body.push(Literal { atom: a, positive });
        }
        rules.push(Rule { head, body });
    }
    // Predicates that never occur still belong to the program's vocabulary.
    let mut extra = Vocabulary::new();
    for (p, k) in &arities {
        extra.add_predicate(p, *k).expect("distinct names");
    }
    Program::with_vocabulary(rules, &extra).expect("well-formed random program")
}

/// Interprets every symbol of `vocab` at random over a domain of `size`
/// elements; each tuple is included with probability `density`.
pub fn random_structure(rng: &mut impl Rng, vocab: &Vocabulary, size: usize, density: f64) -> FiniteStructure {
    let mut s = FiniteStructure::of_size(size).expect("positive size");
    for (p, &k) in vocab.predicates() {
        let tuples: Vec<_> = all_tuples(size, k).filter(|_| rng.gen_bool(density)).collect();
        s.set_relation(p, k, tuples).expect("fresh symbol");
    }
    for (f, &k) in vocab.functions() {
        let table = (0..size.pow(k as u32)).map(|_| rng.gen_range(0..size)).collect();
        s.set_function(f, k, table).expect("fresh symbol");
    }
    s
}

/// A random first-order sentence over `vocab` with at most `depth` nested
/// connectives; individual variables are `x0`, `x1`, ….
pub fn random_sentence(rng: &mut impl Rng, vocab: &Vocabulary, depth: usize) -> Formula {
    let preds: Vec<(String, usize)> = vocab.predicates().iter().map(|(p, &k)| (p.clone(), k)).collect();
    let consts: Vec<String> = vocab
        .functions()
        .iter()
        .filter(|(_, &k)| k == 0)
        .map(|(f, _)| f.clone())
        .collect();
    let unary: Vec<String> = vocab
        .functions()
        .iter()
        .filter(|(_, &k)| k == 1)
        .map(|(f, _)| f.clone())
        .collect();
    let mut bound = Vec::new();
    sentence_rec(rng, &preds, &consts, &unary, depth, &mut bound)
}

fn random_fo_term(rng: &mut impl Rng, consts: &[String], unary: &[String], bound: &[String]) -> Term {
    let base = if !bound.is_empty() && (consts.is_empty() || rng.gen_bool(0.8)) {
        Term::var(bound.choose(rng).unwrap().clone())
    } else if let Some(c) = consts.choose(rng) {
        Term::constant(c.clone())
    } else {
        return Term::var(bound.first().cloned().unwrap_or_else(|| "x0".into()));
    };
    match unary.choose(rng) {
        Some(f) if rng.gen_bool(0.2) => Term::app(f.clone(), vec![base]),
        _ => base,
    }
}

fn sentence_rec(
    rng: &mut impl Rng,
    preds: &[(String, usize)],
    consts: &[String],
    unary: &[String],
    depth: usize,
    bound: &mut Vec<String>,
) -> Formula {
    let can_atom = !bound.is_empty() || !consts.is_empty();
    let choice = if depth == 0 {
        if can_atom {
            0
        } else {
            6
        }
    } else {
        rng.gen_range(0..8)
    };
    match choice {
        0 | 1 if can_atom => {
            if preds.is_empty() || rng.gen_bool(0.2) {
                let l = random_fo_term(rng, consts, unary, bound);
                let r = random_fo_term(rng, consts, unary, bound);
                Formula::eq(l, r)
            } else {
                let (p, k) = preds.choose(rng).unwrap();
                let args = (0..*k).map(|_| random_fo_term(rng, consts, unary, bound)).collect();
                Formula::pred(p.clone(), args)
            }
        }
        2 => Formula::not(sentence_rec(rng, preds, consts, unary, depth.saturating_sub(1), bound)),
        3 => Formula::And(vec![
            sentence_rec(rng, preds, consts, unary, depth.saturating_sub(1), bound),
            sentence_rec(rng, preds, consts, unary, depth.saturating_sub(1), bound),
        ]),
        4 => Formula::Or(vec![
            sentence_rec(rng, preds, consts, unary, depth.saturating_sub(1), bound),
            sentence_rec(rng, preds, consts, unary, depth.saturating_sub(1), bound),
        ]),
        5 => {
            let a = sentence_rec(rng, preds, consts, unary, depth.saturating_sub(1), bound);
            let b = sentence_rec(rng, preds, consts, unary, depth.saturating_sub(1), bound);
            if rng.gen_bool(0.5) {
                Formula::implies(a, b)
            } else {
                Formula::iff(a, b)
            }
        }
        _ => {
            let v = format!("x{}", bound.len());
            bound.push(v.clone());
            let body = sentence_rec(rng, preds, consts, unary, depth.saturating_sub(1), bound);
            bound.pop();
            if rng.gen_bool(0.5) {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}

/// Shape of random sentences `∃τ ∀σ ∀x̄ ∃ȳ θ` with θ in disjunctive normal form.
#[derive(Clone, Debug)]
pub struct Sigma2Config {
    pub max_tau: usize,
    pub max_sigma: usize,
    pub max_so_arity: usize,
    pub max_universals: usize,
    pub max_existentials: usize,
    pub max_disjuncts: usize,
    pub max_literals: usize,
}

impl Default for Sigma2Config {
    fn default() -> Self {
        Sigma2Config {
            max_tau: 1,
            max_sigma: 1,
            max_so_arity: 1,
            max_universals: 2,
            max_existentials: 1,
            max_disjuncts: 3,
            max_literals: 3,
        }
    }
}

/// A random sentence in the input shape of the so2dlp translators. First-order
/// variables are `x1…` (universal) and `y1…` (existential); second-order ones
/// are `T1…` (existential) and `S1…` (universal).
pub fn random_sigma2_sentence(rng: &mut impl Rng, base: &Vocabulary, cfg: &Sigma2Config) -> Formula {
    use crate::syntax::SoVar;
    let tau: Vec<SoVar> = (1..=rng.gen_range(0..=cfg.max_tau))
        .map(|i| SoVar::predicate(format!("T{i}"), rng.gen_range(0..=cfg.max_so_arity)))
        .collect();
    let sigma: Vec<SoVar> = (1..=rng.gen_range(0..=cfg.max_sigma))
        .map(|i| SoVar::predicate(format!("S{i}"), rng.gen_range(0..=cfg.max_so_arity)))
        .collect();
    let xs: Vec<String> = (1..=rng.gen_range(0..=cfg.max_universals)).map(|i| format!("x{i}")).collect();
    let mut ys: Vec<String> = (1..=rng.gen_range(0..=cfg.max_existentials)).map(|i| format!("y{i}")).collect();
    if xs.is_empty() && ys.is_empty() {
        ys.push("y1".into());
    }
    let mut preds: Vec<(String, usize)> = base.predicates().iter().map(|(p, &k)| (p.clone(), k)).collect();
    preds.extend(tau.iter().chain(sigma.iter()).map(|v| (v.name.clone(), v.arity)));
    let all_vars: Vec<String> = xs.iter().chain(ys.iter()).cloned().collect();
    let term = |rng: &mut dyn rand::RngCore| Term::var(all_vars.choose(rng).unwrap().clone());
    let mut disjuncts = Vec::new();
    for _ in 0..rng.gen_range(1..=cfg.max_disjuncts) {
        let mut lits = Vec::new();
        for _ in 0..rng.gen_range(1..=cfg.max_literals) {
            let a = if preds.is_empty() || rng.gen_bool(0.1) {
                Formula::eq(term(rng), term(rng))
            } else {
                let (p, k) = preds.choose(rng).unwrap().clone();
                Formula::pred(p, (0..k).map(|_| term(rng)).collect())
            };
            lits.push(if rng.gen_bool(0.4) { Formula::not(a) } else { a });
        }
        disjuncts.push(Formula::and(lits));
    }
    let fo = Formula::forall_many(&xs, Formula::exists_many(&ys, Formula::or(disjuncts)));
    Formula::so_exists_many(&tau, Formula::so_forall_many(&sigma, fo))
}

/// Adds `succ`, `first` and `last` describing a random linear order of the domain.
pub fn add_random_successor(rng: &mut impl Rng, s: &mut FiniteStructure) {
    let n = s.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let succ: Vec<Vec<usize>> = order.windows(2).map(|w| vec![w[0], w[1]]).collect();
    s.set_relation("succ", 2, succ).expect("fresh symbol");
    s.set_relation("first", 1, vec![vec![order[0]]]).expect("fresh symbol");
    s.set_relation("last", 1, vec![vec![order[n - 1]]]).expect("fresh symbol");
}
