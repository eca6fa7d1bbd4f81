//! Text format for finite structures.
//!
//! ```text
//! domain: 1 2 3
//! rel e/2:
//!   1 2
//!   2 3
//! rel p/0:
//!   ()
//! fun s/0:
//!   1
//! ```
//!
//! A function line lists the arguments followed by the value. `%` and `#`
//! start comments.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{all_tuples, tuple_index, Elem, FiniteStructure};
use crate::error::{Error, Result};

enum Section {
    None,
    Rel(String, usize),
    Fun(String, usize),
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col: 1,
        msg: msg.into(),
    }
}

fn header(rest: &str, line: usize) -> Result<(String, usize)> {
    let rest = rest.trim();
    let rest = rest
        .strip_suffix(':')
        .ok_or_else(|| bad(line, "section header must end with `:`"))?;
    let (name, arity) = rest
        .split_once('/')
        .ok_or_else(|| bad(line, "expected `name/arity`"))?;
    let arity = arity
        .trim()
        .parse::<usize>()
        .map_err(|_| bad(line, format!("bad arity `{arity}`")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(bad(line, "missing symbol name"));
    }
    Ok((name.to_string(), arity))
}

fn tokens(line: &str) -> Vec<&str> {
    line.split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')')
        .filter(|t| !t.is_empty())
        .collect()
}

/// Parses the structure text format.
pub fn parse_structure(text: &str) -> Result<FiniteStructure> {
    let mut s: Option<FiniteStructure> = None;
    let mut section = Section::None;
    let mut rels: BTreeMap<String, (usize, Vec<Vec<Elem>>)> = BTreeMap::new();
    let mut funs: BTreeMap<String, (usize, BTreeMap<usize, Elem>)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split(['%', '#']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("domain:") {
            if s.is_some() {
                return Err(bad(ln, "duplicate domain section"));
            }
            s = Some(FiniteStructure::new(tokens(rest))?);
            section = Section::None;
            continue;
        }
        if let Some(rest) = line.strip_prefix("rel ") {
            let (name, k) = header(rest, ln)?;
            if rels.contains_key(&name) || funs.contains_key(&name) {
                return Err(bad(ln, format!("duplicate section for `{name}`")));
            }
            rels.insert(name.clone(), (k, Vec::new()));
            section = Section::Rel(name, k);
            continue;
        }
        if let Some(rest) = line.strip_prefix("fun ") {
            let (name, k) = header(rest, ln)?;
            if rels.contains_key(&name) || funs.contains_key(&name) {
                return Err(bad(ln, format!("duplicate section for `{name}`")));
            }
            funs.insert(name.clone(), (k, BTreeMap::new()));
            section = Section::Fun(name, k);
            continue;
        }
        let st = s
            .as_ref()
            .ok_or_else(|| bad(ln, "the domain must be declared first"))?;
        let elems = tokens(line)
            .into_iter()
            .map(|t| st.element(t))
            .collect::<Result<Vec<_>>>()?;
        match &section {
            Section::None => return Err(bad(ln, "tuple outside of a section")),
            Section::Rel(name, k) => {
                if elems.len() != *k {
                    return Err(bad(ln, format!("`{name}` expects {k} elements per tuple")));
                }
                rels.get_mut(name).unwrap().1.push(elems);
            }
            Section::Fun(name, k) => {
                if elems.len() != k + 1 {
                    return Err(bad(ln, format!("`{name}` expects {k} arguments and a value")));
                }
                let idx = tuple_index(st.size(), &elems[..*k]);
                let table = &mut funs.get_mut(name).unwrap().1;
                if let Some(&old) = table.get(&idx) {
                    if old != elems[*k] {
                        return Err(bad(ln, format!("conflicting values for `{name}`")));
                    }
                }
                table.insert(idx, elems[*k]);
            }
        }
    }
    let mut s = s.ok_or_else(|| Error::InvalidStructure("missing `domain:` section".into()))?;
    for (name, (k, tuples)) in rels {
        s.set_relation(&name, k, tuples)?;
    }
    let n = s.size();
    for (name, (k, table)) in funs {
        let total = n.pow(k as u32);
        if table.len() != total {
            return Err(Error::InvalidStructure(format!(
                "function `{name}` is not total ({} of {total} entries)",
                table.len()
            )));
        }
        s.set_function(&name, k, table.into_values().collect())?;
    }
    Ok(s)
}

/// Canonical rendering: relations then functions, each sorted by name, tuples
/// in domain order.
pub(crate) fn print_structure(s: &FiniteStructure) -> String {
    let mut out = String::new();
    let names = |t: &[Elem]| t.iter().map(|&e| s.name(e)).collect::<Vec<_>>().join(" ");
    writeln!(out, "domain: {}", s.domain().join(" ")).unwrap();
    for (name, rel) in s.relations() {
        writeln!(out, "rel {name}/{}:", rel.arity).unwrap();
        for t in &rel.tuples {
            if t.is_empty() {
                out.push_str("  ()\n");
            } else {
                writeln!(out, "  {}", names(t)).unwrap();
            }
        }
    }
    for (name, f) in s.functions() {
        writeln!(out, "fun {name}/{}:", f.arity).unwrap();
        for (i, args) in all_tuples(s.size(), f.arity).enumerate() {
            if args.is_empty() {
                writeln!(out, "  {}", s.name(f.table[i])).unwrap();
            } else {
                writeln!(out, "  {} {}", names(&args), s.name(f.table[i])).unwrap();
            }
        }
    }
    out
}
