//! Seeded differential run: the stability procedures, the guarded completion
//! and the sentence translations are compared against each other.

use anyhow::Result;
use rand::seq::SliceRandom;
use rand::Rng;

use smk_core::completion::completion_with_singleton_guard;
use smk_core::random::{
    add_random_successor, random_program, random_sigma2_sentence, random_structure, rng, ProgramConfig, Sigma2Config,
    TestRng,
};
use smk_core::semantics::{check_stable, check_stable_progression, enumerate_stable, enumerate_stable_each, Limits};
use smk_core::structures::{eval_formula, eval_formula_with, Assignment, EvalOptions, FiniteStructure};
use smk_core::syntax::{build_sm_sentence, Program, Vocabulary};
use smk_core::translators::{translate_d2n, translate_so2dlp_arb, translate_so2dlp_fin, translate_so2dlp_suc, Translation};
use smk_core::Error;

fn extensional(p: &Program) -> Vocabulary {
    let names: Vec<String> = p
        .vocabulary()
        .names()
        .into_iter()
        .filter(|n| !p.is_intensional(n))
        .collect();
    p.vocabulary().restrict(names.iter().map(|s| s.as_str()))
}

/// Random extensional part; a stable model half of the time.
fn instance(r: &mut TestRng, p: &Program, size: usize) -> Result<FiniteStructure> {
    let base = random_structure(r, &extensional(p), size, 0.5);
    if r.gen_bool(0.5) {
        if let Some(m) = enumerate_stable(p, &base, &Vocabulary::new())?.choose(r) {
            return Ok(m.clone());
        }
    }
    let tau = p.vocabulary().difference(&extensional(p));
    let mut s = base;
    for (q, rel) in random_structure(r, &tau, size, 0.5).relations() {
        s.set_relation(q, rel.arity, rel.tuples.iter().cloned())?;
    }
    Ok(s)
}

fn satisfiable(t: &Translation, s: &FiniteStructure) -> Result<bool> {
    let mut found = false;
    enumerate_stable_each(&t.program, s, &t.aux, &Limits::default(), &mut |_| {
        found = true;
        false
    })?;
    Ok(found)
}

struct Tally {
    failures: usize,
}

impl Tally {
    fn report(&mut self, name: &str, agree: usize, disagree: Vec<String>, note: &str) {
        let status = if disagree.is_empty() { "ok" } else { "FAILED" };
        println!("{name}: {status}, {agree} agree{note}");
        for d in &disagree {
            println!("  disagreement:\n{d}");
        }
        self.failures += disagree.len();
    }
}

pub fn run(seed: u64) -> Result<u8> {
    println!("selftest seed {seed}");
    let mut r = rng(seed);
    let mut tally = Tally { failures: 0 };

    let (mut agree, mut bad) = (0, Vec::new());
    for _ in 0..100 {
        let p = random_program(&mut r, &ProgramConfig::default());
        let size = r.gen_range(1..=3);
        let s = instance(&mut r, &p, size)?;
        let a = check_stable(&p, &s)?;
        let b = check_stable_progression(&p, &s)?;
        let c = eval_formula(&s, &build_sm_sentence(&p), &Assignment::new())?;
        if a == b && b == c {
            agree += 1;
        } else {
            bad.push(format!("{p}\n{s}"));
        }
    }
    tally.report("stability", agree, bad, "");

    let opts = EvalOptions {
        step_budget: Some(20_000_000),
        ..EvalOptions::default()
    };
    let (mut agree, mut bad, mut skipped) = (0, Vec::new(), 0);
    for _ in 0..40 {
        let p = random_program(&mut r, &ProgramConfig::normal());
        let size = r.gen_range(1..=3);
        let s = instance(&mut r, &p, size)?;
        let f = completion_with_singleton_guard(&p)?;
        match eval_formula_with(&s, &f, &Assignment::new(), &opts) {
            Ok(v) if v == check_stable(&p, &s)? => agree += 1,
            Ok(_) => bad.push(format!("{p}\n{s}")),
            Err(Error::ResourceLimit(_)) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    tally.report("completion", agree, bad, &format!(", {skipped} skipped"));

    let cfg = ProgramConfig {
        max_rules: 3,
        predicates: vec!["p".into(), "q".into()],
        max_arity: 1,
        ..ProgramConfig::default()
    };
    let (mut agree, mut bad) = (0, Vec::new());
    for _ in 0..5 {
        let p = random_program(&mut r, &cfg);
        let t = translate_d2n(&p)?;
        let s = random_structure(&mut r, &extensional(&p), 2, 0.5);
        if t.program.is_normal() && !satisfiable(&t, &s)? {
            agree += 1;
        } else {
            bad.push(format!("{p}\n{s}"));
        }
    }
    tally.report("d2n", agree, bad, "");

    let base = Vocabulary::new().with_predicate("e", 2).with_predicate("q", 1);
    let (mut agree, mut bad) = (0, Vec::new());
    for _ in 0..10 {
        let f = random_sigma2_sentence(&mut r, &base, &Sigma2Config::default());
        let variants = [translate_so2dlp_suc(&f)?, translate_so2dlp_fin(&f)?, translate_so2dlp_arb(&f)?];
        for n in 1..=2 {
            for (i, t) in variants.iter().enumerate() {
                let mut s = random_structure(&mut r, &base, n, 0.5);
                if i == 0 {
                    add_random_successor(&mut r, &mut s);
                }
                if satisfiable(t, &s)? == eval_formula(&s, &f, &Assignment::new())? {
                    agree += 1;
                } else {
                    bad.push(format!("{f}\n{s}"));
                }
            }
        }
    }
    tally.report("so2dlp", agree, bad, "");

    Ok(if tally.failures == 0 { 0 } else { 1 })
}
