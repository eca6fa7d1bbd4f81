//! Browser front end. The plain functions do the work and are tested
//! natively; the `#[wasm_bindgen]` exports only convert errors to strings.

use std::fmt::Write;

use wasm_bindgen::prelude::*;

use smk_core::completion::ordered_completion;
use smk_core::semantics::{check_stable, clause_to_string, enumerate_stable_each, progression_trace, reduct, Limits};
use smk_core::structures::{parse_structure, FiniteStructure};
use smk_core::syntax::{parse_formula, parse_program, Program};
use smk_core::translators::{
    finiteness_program, normalize_forall_exists, successor_program, translate_d2n, translate_so2dlp_arb,
    translate_so2dlp_fin, translate_so2dlp_suc, DEFAULT_MAX_DISJUNCTS,
};
use smk_core::Result;

/// Reports are text; errors are messages.
pub type Report = std::result::Result<String, String>;

/// Stage bound for traces shown in the page.
const MAX_CLAUSES: usize = 20_000;

fn inputs(program: &str, structure: &str) -> Result<(Program, FiniteStructure)> {
    Ok((parse_program(program)?, parse_structure(structure)?))
}

/// The reduct, every stage Γ↑n and the stability verdict.
pub fn progression_report(program: &str, structure: &str) -> Report {
    progression_inner(program, structure).map_err(|e| e.to_string())
}

fn progression_inner(program: &str, structure: &str) -> Result<String> {
    let (p, s) = inputs(program, structure)?;
    let pp = reduct(&p, &s)?;
    let limits = Limits {
        max_clauses: MAX_CLAUSES,
        ..Limits::default()
    };
    let mut out = String::from("% reduct\n");
    write!(out, "{}", pp.display(&s)).unwrap();
    for (i, stage) in progression_trace(&pp, &limits)?.iter().enumerate() {
        writeln!(out, "% Γ↑{} ({} clauses)", i + 1, stage.len()).unwrap();
        for c in stage {
            writeln!(out, "{}", clause_to_string(&s, c)).unwrap();
        }
    }
    let verdict = if check_stable(&p, &s)? { "STABLE" } else { "NOT-STABLE" };
    writeln!(out, "{verdict}").unwrap();
    Ok(out)
}

/// Stable expansions of `structure`, at most `cap` of them, then a count line.
/// `aux` is a comma- or space-separated list of program symbols.
pub fn enumeration_report(program: &str, structure: &str, aux: &str, cap: usize) -> Report {
    let (p, s) = inputs(program, structure).map_err(|e| e.to_string())?;
    let names: Vec<&str> = aux.split([',', ' ']).filter(|n| !n.is_empty()).collect();
    if let Some(n) = names.iter().find(|n| !p.vocabulary().contains(n)) {
        return Err(format!("auxiliary symbol `{n}` does not occur in the program"));
    }
    let aux = p.vocabulary().restrict(names);
    let mut out = String::new();
    let mut count = 0;
    let mut capped = false;
    enumerate_stable_each(&p, &s, &aux, &Limits::default(), &mut |m| {
        if count == cap {
            capped = true;
            return false;
        }
        count += 1;
        writeln!(out, "{m}").unwrap();
        true
    })
    .map_err(|e| e.to_string())?;
    let note = if capped { " (cap reached)" } else { "" };
    writeln!(out, "count: {count}{note}").unwrap();
    Ok(out)
}

/// Runs a translation by name; the result is the output followed by the
/// auxiliary-symbol table as `%` comments.
pub fn translation_report(kind: &str, input: &str, normalize: bool) -> Report {
    if !KINDS.contains(&kind) {
        return Err(format!("unknown translation `{kind}`"));
    }
    translate_known(kind, input, normalize).map_err(|e| e.to_string())
}

pub const KINDS: [&str; 7] = ["d2n", "oc", "so2dlp-suc", "so2dlp-fin", "so2dlp-arb", "successor", "finiteness"];

fn translate_known(kind: &str, input: &str, normalize: bool) -> Result<String> {
    let sentence = || {
        let f = parse_formula(input)?;
        if normalize {
            normalize_forall_exists(&f, DEFAULT_MAX_DISJUNCTS)
        } else {
            Ok(f)
        }
    };
    let (text, mapping) = match kind {
        "oc" => {
            let r = ordered_completion(&parse_program(input)?)?;
            (format!("{}\n", r.sentence), String::new())
        }
        "successor" => (successor_program().to_string(), String::new()),
        "finiteness" => (finiteness_program().to_string(), String::new()),
        _ => {
            let t = match kind {
                "d2n" => translate_d2n(&parse_program(input)?)?,
                "so2dlp-suc" => translate_so2dlp_suc(&sentence()?)?,
                "so2dlp-fin" => translate_so2dlp_fin(&sentence()?)?,
                _ => translate_so2dlp_arb(&sentence()?)?,
            };
            (t.program.to_string(), t.mapping_text())
        }
    };
    let mut out = text;
    for line in mapping.lines() {
        writeln!(out, "% {line}").unwrap();
    }
    Ok(out)
}

fn js(r: Report) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn progression(program: &str, structure: &str) -> std::result::Result<String, JsError> {
    js(progression_report(program, structure))
}

#[wasm_bindgen]
pub fn enumerate(program: &str, structure: &str, aux: &str, cap: usize) -> std::result::Result<String, JsError> {
    js(enumeration_report(program, structure, aux, cap))
}

#[wasm_bindgen]
pub fn translate(kind: &str, input: &str, normalize: bool) -> std::result::Result<String, JsError> {
    js(translation_report(kind, input, normalize))
}
