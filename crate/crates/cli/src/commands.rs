use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use smk_core::completion::{emit_smtlib, ordered_completion, run_solver, CompletionResult, SmtDomain, SmtOptions, Verdict};
use smk_core::semantics::{
    check_stable, clause_to_string, enumerate_stable, enumerate_stable_each, progression_trace, reduct, Limits,
};
use smk_core::structures::{parse_structure, FiniteStructure};
use smk_core::syntax::{parse_formula, parse_program, Formula, Program, Vocabulary};
use smk_core::translators::{
    finiteness_program, normalize_forall_exists, successor_program, translate_d2n, translate_so2dlp_arb,
    translate_so2dlp_fin, translate_so2dlp_suc, Translation, DEFAULT_MAX_DISJUNCTS,
};

use crate::Kind;

/// An error carrying its own exit code.
#[derive(Debug)]
pub struct Exit(pub u8, pub String);

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_program(path: &Path) -> Result<Program> {
    Ok(parse_program(&read(path)?).with_context(|| path.display().to_string())?)
}

fn load_formula(path: &Path) -> Result<Formula> {
    Ok(parse_formula(&read(path)?).with_context(|| path.display().to_string())?)
}

fn load_structure(path: &Path) -> Result<FiniteStructure> {
    Ok(parse_structure(&read(path)?).with_context(|| path.display().to_string())?)
}

pub fn check(program: &Path, structure: &Path, why: bool) -> Result<u8> {
    let p = load_program(program)?;
    let s = load_structure(structure)?;
    let stable = check_stable(&p, &s)?;
    if why {
        let pp = reduct(&p, &s)?;
        println!("% reduct");
        print!("{}", pp.display(&s));
        for (i, stage) in progression_trace(&pp, &Limits::default())?.iter().enumerate() {
            println!("% Γ↑{}", i + 1);
            for c in stage {
                println!("{}", clause_to_string(&s, c));
            }
        }
    }
    println!("{}", if stable { "STABLE" } else { "NOT-STABLE" });
    Ok(if stable { 0 } else { 1 })
}

fn aux_vocabulary(p: &Program, names: &[String]) -> Result<Vocabulary> {
    for n in names {
        if !p.vocabulary().contains(n) {
            bail!("auxiliary symbol `{n}` does not occur in the program");
        }
    }
    Ok(p.vocabulary().restrict(names.iter().map(|s| s.as_str())))
}

pub fn enumerate(program: &Path, structure: &Path, aux: &[String], cap: u64) -> Result<u8> {
    let p = load_program(program)?;
    let s = load_structure(structure)?;
    let aux = aux_vocabulary(&p, aux)?;
    let mut count = 0u64;
    let mut capped = false;
    let mut stdout = std::io::stdout().lock();
    let outcome = enumerate_stable_each(&p, &s, &aux, &Limits::default(), &mut |m| {
        if count == cap {
            capped = true;
            return false;
        }
        count += 1;
        let _ = writeln!(stdout, "{m}");
        true
    });
    match outcome {
        Ok(_) if capped => {
            writeln!(stdout, "count: {count} (cap reached)")?;
            Err(Exit(3, format!("more than {cap} stable expansions")).into())
        }
        Ok(_) => {
            writeln!(stdout, "count: {count}")?;
            Ok(0)
        }
        Err(e @ smk_core::Error::ResourceLimit(_)) => {
            writeln!(stdout, "count: {count} (partial)")?;
            Err(e.into())
        }
        Err(e) => Err(e.into()),
    }
}

pub struct TranslateArgs {
    pub kind: Kind,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub emit_mapping: bool,
    pub smt: bool,
    pub structure: Option<PathBuf>,
    pub size: Option<usize>,
    pub int_order: bool,
    pub normalize: bool,
}

fn sidecar(out: &Path, ext: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn completion_mapping(r: &CompletionResult) -> String {
    let mut out = format!("{} : order\n", r.scheme.prec);
    for (q, funs) in &r.scheme.functions {
        for f in funs {
            out.push_str(&format!("{f} : order function of {q}\n"));
        }
    }
    out
}

fn fixed_mapping(p: &Program) -> String {
    p.vocabulary()
        .predicates()
        .keys()
        .map(|q| format!("{q} : auxiliary\n"))
        .collect()
}

pub fn translate(a: &TranslateArgs) -> Result<u8> {
    let input = || {
        a.input
            .as_deref()
            .ok_or_else(|| anyhow::anyhow!("this translation needs an input file"))
    };
    if a.emit_mapping && a.out.is_none() {
        bail!("--emit-mapping needs --out");
    }
    if a.smt && !matches!(a.kind, Kind::Oc) {
        bail!("--smt only applies to oc");
    }
    let sentence = || -> Result<Formula> {
        let f = load_formula(input()?)?;
        Ok(if a.normalize {
            normalize_forall_exists(&f, DEFAULT_MAX_DISJUNCTS)?
        } else {
            f
        })
    };
    let (text, mapping) = match a.kind {
        Kind::Oc => {
            let p = load_program(input()?)?;
            let r = ordered_completion(&p)?;
            if a.smt {
                let s = a.structure.as_deref().map(load_structure).transpose()?;
                let domain = match (&s, a.size) {
                    (Some(s), _) => SmtDomain::Structure(s),
                    (None, Some(n)) => SmtDomain::Size(n),
                    (None, None) => SmtDomain::Uninterpreted,
                };
                let script = emit_smtlib(&r, domain, &SmtOptions { int_order: a.int_order })?;
                match &a.out {
                    Some(out) => write_out(Some(&sidecar(out, ".smt2")), &script)?,
                    None => {
                        print!("{script}");
                        return Ok(0);
                    }
                }
            }
            (format!("{}\n", r.sentence), completion_mapping(&r))
        }
        Kind::Successor | Kind::Finiteness => {
            let p = if matches!(a.kind, Kind::Successor) {
                successor_program()
            } else {
                finiteness_program()
            };
            (p.to_string(), fixed_mapping(&p))
        }
        kind => {
            let t: Translation = match kind {
                Kind::D2n => translate_d2n(&load_program(input()?)?)?,
                Kind::So2dlpSuc => translate_so2dlp_suc(&sentence()?)?,
                Kind::So2dlpFin => translate_so2dlp_fin(&sentence()?)?,
                _ => translate_so2dlp_arb(&sentence()?)?,
            };
            (t.program.to_string(), t.mapping_text())
        }
    };
    write_out(a.out.as_deref(), &text)?;
    if a.emit_mapping {
        let out = a.out.as_deref().unwrap();
        write_out(Some(&sidecar(out, ".map")), &mapping)?;
    }
    Ok(0)
}

pub fn solve(program: &Path, structure: &Path, solver: Option<&Path>, verify: bool, cap: usize) -> Result<u8> {
    let Some(solver) = solver else {
        return Err(Exit(4, "no solver configured: pass --solver or set SMK_SOLVER".into()).into());
    };
    let p = load_program(program)?;
    let s = load_structure(structure)?;
    let s = s.without(p.intensional().iter().map(|q| q.as_str()));
    let r = ordered_completion(&p)?;
    let script = emit_smtlib(&r, SmtDomain::Structure(&s), &SmtOptions::default())?;
    let verdict = run_solver(solver, &script)?.verdict;
    let sat = match verdict {
        Verdict::Sat => true,
        Verdict::Unsat => false,
        Verdict::Unknown => return Err(Exit(4, "solver answered unknown".into()).into()),
    };
    println!("{}", if sat { "SAT" } else { "UNSAT" });
    if verify {
        if s.size() > cap {
            println!("verify: skipped, domain of {} exceeds cap {cap}", s.size());
        } else {
            let found = !enumerate_stable(&p, &s, &Vocabulary::new())?.is_empty();
            if found != sat {
                println!("verify: DISAGREES (enumeration found {})", if found { "a model" } else { "none" });
                return Err(Exit(4, "solver verdict contradicts enumeration".into()).into());
            }
            println!("verify: agrees");
        }
    }
    Ok(if sat { 0 } else { 1 })
}
