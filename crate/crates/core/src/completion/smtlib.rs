//! SMT-LIB v2 emission for ordered completions, plus a small
//! well-formedness checker (parsing, declarations, sorts).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{guard, singleton_sentence, CompletionResult};
use crate::error::{Error, Result};
use crate::structures::{all_tuples, FiniteStructure};
use crate::syntax::{Atom, Formula, Quantifier, Term};

/// What is known about the domain.
#[derive(Clone, Copy, Debug)]
pub enum SmtDomain<'a> {
    /// An enumerated sort; every symbol the structure interprets is fixed.
    Structure(&'a FiniteStructure),
    /// An enumerated sort of the given size, nothing fixed.
    Size(usize),
    /// An uninterpreted sort.
    Uninterpreted,
}

#[derive(Clone, Debug, Default)]
pub struct SmtOptions {
    /// Map ≺ to `<` on an integer rank instead of axiomatizing it.
    pub int_order: bool,
}

const SORT: &str = "D";

fn pred_sym(p: &str) -> String {
    format!("p_{p}")
}

fn fun_sym(f: &str) -> String {
    format!("f_{f}")
}

fn var_sym(v: &str) -> String {
    format!("v_{v}")
}

fn elem_sym(i: usize) -> String {
    format!("el_{i}")
}

struct Emitter<'a> {
    out: String,
    prec: &'a str,
    int_order: bool,
}

impl Emitter<'_> {
    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => var_sym(v),
            Term::App(f, args) if args.is_empty() => fun_sym(f),
            Term::App(f, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("({} {})", fun_sym(f), args.join(" "))
            }
        }
    }

    fn atom(&self, a: &Atom) -> String {
        match a {
            Atom::Eq(l, r) => format!("(= {} {})", self.term(l), self.term(r)),
            Atom::Pred { pred, args } if self.int_order && pred == self.prec => format!(
                "(< (rank {}) (rank {}))",
                self.term(&args[0]),
                self.term(&args[1])
            ),
            Atom::Pred { pred, args } if args.is_empty() => pred_sym(pred),
            Atom::Pred { pred, args } => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("({} {})", pred_sym(pred), args.join(" "))
            }
        }
    }

    fn formula(&self, f: &Formula) -> Result<String> {
        let nary = |op: &str, gs: &[Formula], empty: &str| -> Result<String> {
            match gs.len() {
                0 => Ok(empty.to_string()),
                1 => self.formula(&gs[0]),
                _ => {
                    let parts: Result<Vec<String>> = gs.iter().map(|g| self.formula(g)).collect();
                    Ok(format!("({op} {})", parts?.join(" ")))
                }
            }
        };
        Ok(match f {
            Formula::True => "true".into(),
            Formula::False => "false".into(),
            Formula::Atom(a) => self.atom(a),
            Formula::Not(g) => format!("(not {})", self.formula(g)?),
            Formula::And(gs) => nary("and", gs, "true")?,
            Formula::Or(gs) => nary("or", gs, "false")?,
            Formula::Implies(a, b) => format!("(=> {} {})", self.formula(a)?, self.formula(b)?),
            Formula::Iff(a, b) => format!("(= {} {})", self.formula(a)?, self.formula(b)?),
            Formula::Quant(q, v, body) => {
                let kw = match q {
                    Quantifier::Forall => "forall",
                    Quantifier::Exists => "exists",
                };
                format!("({kw} (({} {SORT})) {})", var_sym(v), self.formula(body)?)
            }
            Formula::SoQuant(..) => {
                return Err(Error::SmtLib(
                    "second-order quantifier inside the completion".into(),
                ))
            }
        })
    }

    fn line(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }
}

fn sort_list(k: usize) -> String {
    vec![SORT; k].join(" ")
}

/// Emits the completion as an SMT-LIB v2 script ending in `(check-sat)`.
///
/// The order symbols become free symbols, so the script is satisfiable iff
/// the existentially quantified completion has a model over the domain.
/// One-element domains use the singleton sentence instead, and an
/// uninterpreted sort gets the guarded disjunction of both.
pub fn emit_smtlib(r: &CompletionResult, domain: SmtDomain<'_>, opts: &SmtOptions) -> Result<String> {
    let size = match domain {
        SmtDomain::Structure(s) => Some(s.size()),
        SmtDomain::Size(n) => Some(n),
        SmtDomain::Uninterpreted => None,
    };
    let prec = r.scheme.prec.as_str();
    let mut e = Emitter {
        out: String::new(),
        prec,
        int_order: opts.int_order,
    };
    e.line("; ordered completion");
    e.line(&format!("(set-logic {})", if opts.int_order { "UFLIA" } else { "UF" }));
    match size {
        Some(n) => {
            if n == 0 {
                return Err(Error::SmtLib("empty domain".into()));
            }
            let cons: Vec<String> = (0..n).map(|i| format!("({})", elem_sym(i))).collect();
            e.line(&format!("(declare-datatypes (({SORT} 0)) (({})))", cons.join(" ")));
            if let SmtDomain::Structure(s) = domain {
                for (i, name) in s.domain().iter().enumerate() {
                    e.line(&format!("; {} = {}", elem_sym(i), name));
                }
            }
        }
        None => e.line(&format!("(declare-sort {SORT} 0)")),
    }

    let vocab = r.program.vocabulary();
    let mut preds: BTreeMap<&str, usize> = vocab.predicates().iter().map(|(p, &k)| (p.as_str(), k)).collect();
    let mut funs: BTreeMap<&str, usize> = vocab.functions().iter().map(|(f, &k)| (f.as_str(), k)).collect();
    for (f, &k) in r.aux.functions() {
        funs.insert(f, k);
    }
    if !opts.int_order {
        preds.insert(prec, 2);
    }
    for (p, k) in &preds {
        e.line(&format!("(declare-fun {} ({}) Bool)", pred_sym(p), sort_list(*k)));
    }
    for (f, k) in &funs {
        e.line(&format!("(declare-fun {} ({}) {SORT})", fun_sym(f), sort_list(*k)));
    }
    if opts.int_order {
        e.line(&format!("(declare-fun rank ({SORT}) Int)"));
    }

    if let SmtDomain::Structure(s) = domain {
        e.line("; interpretation fixed by the structure");
        for (p, &k) in vocab.predicates() {
            let Some(rel) = s.relation(p) else { continue };
            for tuple in all_tuples(s.size(), k) {
                let app = if k == 0 {
                    pred_sym(p)
                } else {
                    let args: Vec<String> = tuple.iter().map(|&a| elem_sym(a)).collect();
                    format!("({} {})", pred_sym(p), args.join(" "))
                };
                if rel.tuples.contains(&tuple) {
                    e.line(&format!("(assert {app})"));
                } else {
                    e.line(&format!("(assert (not {app}))"));
                }
            }
        }
        for (f, &k) in vocab.functions() {
            let Some(fun) = s.function(f) else { continue };
            for (i, tuple) in all_tuples(s.size(), k).enumerate() {
                let app = if k == 0 {
                    fun_sym(f)
                } else {
                    let args: Vec<String> = tuple.iter().map(|&a| elem_sym(a)).collect();
                    format!("({} {})", fun_sym(f), args.join(" "))
                };
                e.line(&format!("(assert (= {app} {}))", elem_sym(fun.table[i])));
            }
        }
    }

    let body = match size {
        Some(1) => singleton_sentence(&r.program)?,
        Some(_) => r.matrix.clone(),
        None => guard(singleton_sentence(&r.program)?, r.matrix.clone()),
    };
    e.line("; completion");
    let text = e.formula(&body)?;
    e.line(&format!("(assert {text})"));
    e.line("(check-sat)");
    Ok(e.out)
}

#[derive(Clone, Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' | ')' => {
                out.push(c.to_string());
                chars.next();
            }
            '|' => {
                let mut s = String::from("|");
                chars.next();
                loop {
                    match chars.next() {
                        Some('|') => break,
                        Some(c) => s.push(c),
                        None => return Err(Error::SmtLib("unterminated quoted symbol".into())),
                    }
                }
                s.push('|');
                out.push(s);
            }
            '"' => {
                let mut s = String::from("\"");
                chars.next();
                loop {
                    match chars.next() {
                        Some('"') if chars.peek() == Some(&'"') => {
                            chars.next();
                            s.push_str("\"\"");
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(Error::SmtLib("unterminated string".into())),
                    }
                }
                s.push('"');
                out.push(s);
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || "();|\"".contains(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push(s);
            }
        }
    }
    Ok(out)
}

fn parse_sexps(tokens: &[String]) -> Result<Vec<Sexp>> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    for t in tokens {
        match t.as_str() {
            "(" => stack.push(Vec::new()),
            ")" => {
                if stack.len() == 1 {
                    return Err(Error::SmtLib("unbalanced `)`".into()));
                }
                let list = stack.pop().unwrap();
                stack.last_mut().unwrap().push(Sexp::List(list));
            }
            _ => stack.last_mut().unwrap().push(Sexp::Atom(t.clone())),
        }
    }
    if stack.len() != 1 {
        return Err(Error::SmtLib("unbalanced `(`".into()));
    }
    Ok(stack.pop().unwrap())
}

#[derive(Default)]
struct Checker {
    sorts: BTreeSet<String>,
    /// Function symbol → (argument sorts, result sort).
    funs: HashMap<String, (Vec<String>, String)>,
}

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::SmtLib(msg.into()))
}

fn atom_of(s: &Sexp) -> Result<&str> {
    match s {
        Sexp::Atom(a) => Ok(a),
        Sexp::List(_) => err("expected a symbol"),
    }
}

fn is_symbol(s: &str) -> bool {
    if s.starts_with('|') {
        return true;
    }
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if !c.is_ascii_digit() && c != ':' && c != '"' => {}
        _ => return false,
    }
    s.chars()
        .all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c))
}

impl Checker {
    fn sort(&self, s: &Sexp) -> Result<String> {
        let name = atom_of(s)?;
        if name == "Bool" || name == "Int" || self.sorts.contains(name) {
            Ok(name.to_string())
        } else {
            err(format!("unknown sort `{name}`"))
        }
    }

    fn declare(&mut self, name: &str, args: Vec<String>, ret: String) -> Result<()> {
        if !is_symbol(name) {
            return err(format!("`{name}` is not a symbol"));
        }
        if self.funs.insert(name.to_string(), (args, ret)).is_some() {
            return err(format!("`{name}` declared twice"));
        }
        Ok(())
    }

    fn expr(&self, e: &Sexp, scope: &[(String, String)]) -> Result<String> {
        match e {
            Sexp::Atom(a) => {
                if let Some((_, s)) = scope.iter().rev().find(|(v, _)| v == a) {
                    return Ok(s.clone());
                }
                if a == "true" || a == "false" {
                    return Ok("Bool".into());
                }
                if a.chars().all(|c| c.is_ascii_digit()) {
                    return Ok("Int".into());
                }
                match self.funs.get(a.as_str()) {
                    Some((args, ret)) if args.is_empty() => Ok(ret.clone()),
                    Some(_) => err(format!("`{a}` used without arguments")),
                    None => err(format!("undeclared symbol `{a}`")),
                }
            }
            Sexp::List(items) => {
                let Some(head) = items.first() else {
                    return err("empty application");
                };
                let head = atom_of(head)?;
                let args = &items[1..];
                match head {
                    "forall" | "exists" => {
                        let [Sexp::List(binders), body] = args else {
                            return err(format!("malformed `{head}`"));
                        };
                        if binders.is_empty() {
                            return err(format!("`{head}` without variables"));
                        }
                        let mut inner = scope.to_vec();
                        for b in binders {
                            let Sexp::List(pair) = b else {
                                return err("malformed binder");
                            };
                            let [v, s] = pair.as_slice() else {
                                return err("malformed binder");
                            };
                            let v = atom_of(v)?;
                            if !is_symbol(v) {
                                return err(format!("`{v}` is not a symbol"));
                            }
                            inner.push((v.to_string(), self.sort(s)?));
                        }
                        self.expect(body, &inner, "Bool")?;
                        Ok("Bool".into())
                    }
                    "not" => {
                        if args.len() != 1 {
                            return err("`not` takes one argument");
                        }
                        self.expect(&args[0], scope, "Bool")?;
                        Ok("Bool".into())
                    }
                    "and" | "or" | "=>" | "xor" => {
                        if args.len() < 2 {
                            return err(format!("`{head}` needs at least two arguments"));
                        }
                        for a in args {
                            self.expect(a, scope, "Bool")?;
                        }
                        Ok("Bool".into())
                    }
                    "=" | "distinct" => {
                        if args.len() < 2 {
                            return err(format!("`{head}` needs at least two arguments"));
                        }
                        let first = self.expr(&args[0], scope)?;
                        for a in &args[1..] {
                            self.expect(a, scope, &first)?;
                        }
                        Ok("Bool".into())
                    }
                    "ite" => {
                        let [c, t, f] = args else {
                            return err("`ite` takes three arguments");
                        };
                        self.expect(c, scope, "Bool")?;
                        let s = self.expr(t, scope)?;
                        self.expect(f, scope, &s)?;
                        Ok(s)
                    }
                    "<" | "<=" | ">" | ">=" => {
                        if args.len() < 2 {
                            return err(format!("`{head}` needs at least two arguments"));
                        }
                        for a in args {
                            self.expect(a, scope, "Int")?;
                        }
                        Ok("Bool".into())
                    }
                    _ => {
                        let Some((sig, ret)) = self.funs.get(head) else {
                            return err(format!("undeclared symbol `{head}`"));
                        };
                        if sig.len() != args.len() {
                            return err(format!(
                                "`{head}` applied to {} arguments, expected {}",
                                args.len(),
                                sig.len()
                            ));
                        }
                        for (a, s) in args.iter().zip(sig) {
                            self.expect(a, scope, s)?;
                        }
                        Ok(ret.clone())
                    }
                }
            }
        }
    }

    fn expect(&self, e: &Sexp, scope: &[(String, String)], sort: &str) -> Result<()> {
        let got = self.expr(e, scope)?;
        if got != sort {
            return err(format!("expected sort {sort}, found {got}"));
        }
        Ok(())
    }

    fn command(&mut self, c: &Sexp) -> Result<()> {
        let Sexp::List(items) = c else {
            return err("top-level item is not a command");
        };
        let Some(head) = items.first() else {
            return err("empty command");
        };
        let args = &items[1..];
        match atom_of(head)? {
            "set-logic" | "set-option" | "set-info" => Ok(()),
            "check-sat" | "get-model" | "exit" => {
                if args.is_empty() {
                    Ok(())
                } else {
                    err("unexpected arguments")
                }
            }
            "declare-sort" => {
                let [name, arity] = args else {
                    return err("malformed declare-sort");
                };
                let name = atom_of(name)?;
                if atom_of(arity)? != "0" {
                    return err("only nullary sorts are supported");
                }
                if !self.sorts.insert(name.to_string()) {
                    return err(format!("sort `{name}` declared twice"));
                }
                Ok(())
            }
            "declare-datatypes" => {
                let [Sexp::List(heads), Sexp::List(bodies)] = args else {
                    return err("malformed declare-datatypes");
                };
                if heads.len() != bodies.len() {
                    return err("declare-datatypes arity mismatch");
                }
                for h in heads {
                    let Sexp::List(pair) = h else {
                        return err("malformed datatype name");
                    };
                    let [name, arity] = pair.as_slice() else {
                        return err("malformed datatype name");
                    };
                    if atom_of(arity)? != "0" {
                        return err("only non-parametric datatypes are supported");
                    }
                    if !self.sorts.insert(atom_of(name)?.to_string()) {
                        return err("datatype declared twice");
                    }
                }
                for (h, b) in heads.iter().zip(bodies) {
                    let Sexp::List(pair) = h else { unreachable!() };
                    let sort = atom_of(&pair[0])?.to_string();
                    let Sexp::List(cons) = b else {
                        return err("malformed constructor list");
                    };
                    if cons.is_empty() {
                        return err("datatype without constructors");
                    }
                    for k in cons {
                        let Sexp::List(parts) = k else {
                            return err("malformed constructor");
                        };
                        let Some(name) = parts.first() else {
                            return err("malformed constructor");
                        };
                        if parts.len() != 1 {
                            return err("constructor selectors are not supported");
                        }
                        self.declare(atom_of(name)?, vec![], sort.clone())?;
                    }
                }
                Ok(())
            }
            "declare-fun" => {
                let [name, Sexp::List(sig), ret] = args else {
                    return err("malformed declare-fun");
                };
                let sig: Result<Vec<String>> = sig.iter().map(|s| self.sort(s)).collect();
                let ret = self.sort(ret)?;
                self.declare(atom_of(name)?, sig?, ret)
            }
            "declare-const" => {
                let [name, ret] = args else {
                    return err("malformed declare-const");
                };
                let ret = self.sort(ret)?;
                self.declare(atom_of(name)?, vec![], ret)
            }
            "define-fun" => {
                let [name, Sexp::List(params), ret, body] = args else {
                    return err("malformed define-fun");
                };
                let mut scope = Vec::new();
                let mut sig = Vec::new();
                for p in params {
                    let Sexp::List(pair) = p else {
                        return err("malformed parameter");
                    };
                    let [v, s] = pair.as_slice() else {
                        return err("malformed parameter");
                    };
                    let s = self.sort(s)?;
                    scope.push((atom_of(v)?.to_string(), s.clone()));
                    sig.push(s);
                }
                let ret = self.sort(ret)?;
                self.expect(body, &scope, &ret)?;
                self.declare(atom_of(name)?, sig, ret)
            }
            "assert" => {
                let [e] = args else {
                    return err("`assert` takes one term");
                };
                self.expect(e, &[], "Bool")
            }
            other => err(format!("unknown command `{other}`")),
        }
    }
}

/// Checks that `text` parses as SMT-LIB v2 and that every assertion is a
/// well-sorted Boolean term over declared symbols.
pub fn check_smtlib(text: &str) -> Result<()> {
    let sexps = parse_sexps(&tokenize(text)?)?;
    let mut c = Checker::default();
    let mut saw_check = false;
    for (i, s) in sexps.iter().enumerate() {
        c.command(s).map_err(|e| match e {
            Error::SmtLib(m) => Error::SmtLib(format!("command {}: {m}", i + 1)),
            other => other,
        })?;
        if matches!(s, Sexp::List(v) if v.first() == Some(&Sexp::Atom("check-sat".into()))) {
            saw_check = true;
        }
    }
    if !saw_check {
        return err("no (check-sat)");
    }
    Ok(())
}
