use super::formula::{Formula, Quantifier, SoKind, SoVar};
use super::lexer::{tokenize, Spanned, Tok};
use super::{Atom, Literal, Program, Rule, Term, Vocabulary};
use crate::error::{Error, Result};

/// Program variables start with an uppercase letter or an underscore.
pub(crate) fn is_program_var(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
}

fn is_upper(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
}

struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Cursor> {
        Ok(Cursor {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }
}

// ---------------------------------------------------------------- programs

/// Parses a program in the rule format (`head | head :- body.`).
pub fn parse_program(text: &str) -> Result<Program> {
    let mut cur = Cursor::new(text)?;
    let mut rules = Vec::new();
    while *cur.peek() != Tok::Eof {
        rules.push(parse_rule(&mut cur)?);
    }
    Program::new(rules)
}

fn parse_rule(cur: &mut Cursor) -> Result<Rule> {
    let mut head = Vec::new();
    if *cur.peek() != Tok::If {
        loop {
            let (line, col) = cur.here();
            let lhs = parse_program_term(cur)?;
            if matches!(cur.peek(), Tok::Eq | Tok::Neq) {
                return Err(Error::EqualityInHead { line, col });
            }
            head.push(term_to_atom(lhs, line, col)?);
            if !cur.eat(&Tok::Bar) {
                break;
            }
        }
    }
    let mut body = Vec::new();
    if cur.eat(&Tok::If) && *cur.peek() != Tok::Dot {
        loop {
            body.push(parse_program_literal(cur)?);
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
    }
    cur.expect(&Tok::Dot)?;
    Ok(Rule { head, body })
}

fn parse_program_literal(cur: &mut Cursor) -> Result<Literal> {
    let negated = matches!(cur.peek(), Tok::Ident(s) if s == "not")
        && matches!(cur.peek_at(1), Tok::Ident(_));
    if negated {
        cur.bump();
    }
    let (line, col) = cur.here();
    let lhs = parse_program_term(cur)?;
    let lit = match cur.peek() {
        Tok::Eq => {
            cur.bump();
            Literal::pos(Atom::Eq(lhs, parse_program_term(cur)?))
        }
        Tok::Neq => {
            cur.bump();
            Literal::neg(Atom::Eq(lhs, parse_program_term(cur)?))
        }
        _ => Literal::pos(term_to_atom(lhs, line, col)?),
    };
    Ok(if negated {
        Literal {
            atom: lit.atom,
            positive: !lit.positive,
        }
    } else {
        lit
    })
}

fn term_to_atom(t: Term, line: usize, col: usize) -> Result<Atom> {
    match t {
        Term::App(p, args) => Ok(Atom::Pred { pred: p, args }),
        Term::Var(v) => Err(Error::Syntax {
            line,
            col,
            msg: format!("variable `{v}` used as an atom"),
        }),
    }
}

fn parse_program_term(cur: &mut Cursor) -> Result<Term> {
    let name = cur.ident()?;
    if is_program_var(&name) {
        if *cur.peek() == Tok::LParen {
            return cur.error(format!("variable `{name}` applied to arguments"));
        }
        return Ok(Term::Var(name));
    }
    let mut args = Vec::new();
    if cur.eat(&Tok::LParen) {
        loop {
            args.push(parse_program_term(cur)?);
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.expect(&Tok::RParen)?;
    }
    Ok(Term::App(name, args))
}

// ---------------------------------------------------------------- formulas

#[derive(Clone, Copy, PartialEq, Eq)]
enum Binding {
    Fo,
    So(SoKind, usize),
}

struct FormulaParser {
    cur: Cursor,
    scope: Vec<(String, Binding)>,
    free: Vocabulary,
}

/// Parses a formula in the keyword-quantifier format.
///
/// `EX` always binds a second-order variable, `SOME` a first-order one. `ALL`
/// binds a second-order variable when an arity (`ALL P/2`), the `fn` marker or
/// an uppercase name is given, and an individual variable otherwise.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = FormulaParser {
        cur: Cursor::new(text)?,
        scope: Vec::new(),
        free: Vocabulary::new(),
    };
    let f = p.iff()?;
    if *p.cur.peek() != Tok::Eof {
        return p.cur.error(format!("unexpected {}", p.cur.peek().describe()));
    }
    Ok(f)
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "EX" | "ALL" | "SOME" | "TRUE" | "FALSE" | "v")
}

impl FormulaParser {
    fn lookup(&self, name: &str) -> Option<Binding> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, b)| *b)
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.cur.eat(&Tok::DArrow) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.cur.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn is_or(&self) -> bool {
        match self.cur.peek() {
            Tok::Bar => true,
            Tok::Ident(s) => s == "v",
            _ => false,
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let first = self.conjunction()?;
        if !self.is_or() {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.is_or() {
            self.cur.bump();
            parts.push(self.conjunction()?);
        }
        Ok(Formula::Or(parts))
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let first = self.unary()?;
        if *self.cur.peek() != Tok::Amp {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.cur.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(Formula::And(parts))
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.cur.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if let Tok::Ident(kw) = self.cur.peek().clone() {
            match kw.as_str() {
                "EX" | "ALL" | "SOME" => return self.quantified(&kw),
                "TRUE" => {
                    self.cur.bump();
                    return Ok(Formula::True);
                }
                "FALSE" => {
                    self.cur.bump();
                    return Ok(Formula::False);
                }
                _ => {}
            }
        }
        if self.cur.eat(&Tok::LParen) {
            let f = self.iff()?;
            self.cur.expect(&Tok::RParen)?;
            return Ok(f);
        }
        self.atomic()
    }

    fn quantified(&mut self, kw: &str) -> Result<Formula> {
        self.cur.bump();
        let func = matches!(self.cur.peek(), Tok::Ident(s) if s == "fn")
            && matches!(self.cur.peek_at(1), Tok::Ident(_));
        if func {
            self.cur.bump();
        }
        let name = self.cur.ident()?;
        if is_keyword(&name) {
            return self.cur.error(format!("keyword `{name}` used as a variable"));
        }
        let arity = if self.cur.eat(&Tok::Slash) {
            let n = self.cur.ident()?;
            match n.parse::<usize>() {
                Ok(k) => Some(k),
                Err(_) => return self.cur.error(format!("bad arity `{n}`")),
            }
        } else {
            None
        };
        let second_order = match kw {
            "EX" => true,
            "SOME" => {
                if func || arity.is_some() {
                    return self.cur.error("SOME binds individual variables only");
                }
                false
            }
            _ => func || arity.is_some() || is_upper(&name),
        };
        self.cur.expect(&Tok::Dot)?;
        let q = if kw == "ALL" {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        if second_order {
            let kind = if func {
                SoKind::Function
            } else {
                SoKind::Predicate
            };
            let var = SoVar {
                name: name.clone(),
                arity: arity.unwrap_or(0),
                kind,
            };
            self.scope.push((name, Binding::So(kind, var.arity)));
            let body = self.iff();
            self.scope.pop();
            Ok(Formula::SoQuant(q, var, Box::new(body?)))
        } else {
            self.scope.push((name.clone(), Binding::Fo));
            let body = self.iff();
            self.scope.pop();
            Ok(Formula::Quant(q, name, Box::new(body?)))
        }
    }

    fn atomic(&mut self) -> Result<Formula> {
        let Raw { name, args } = self.application()?;
        match self.cur.peek() {
            Tok::Eq | Tok::Neq => {
                let neg = *self.cur.peek() == Tok::Neq;
                self.cur.bump();
                let lhs = self.resolve_term(Raw { name, args })?;
                let rhs = self.application()?;
                let rhs = self.resolve_term(rhs)?;
                let eq = Formula::eq(lhs, rhs);
                Ok(if neg { Formula::not(eq) } else { eq })
            }
            _ => {
                let arity = args.len();
                match self.lookup(&name) {
                    Some(Binding::So(SoKind::Predicate, k)) => {
                        if k != arity {
                            return Err(Error::ArityMismatch {
                                symbol: name,
                                expected: k,
                                found: arity,
                            });
                        }
                    }
                    Some(_) => return Err(Error::KindConflict(name)),
                    None => {
                        if is_upper(&name) || name.starts_with('_') {
                            return Err(Error::UnboundSecondOrder(name));
                        }
                        self.free.add_predicate(&name, arity)?;
                    }
                }
                let args = args
                    .into_iter()
                    .map(|a| self.resolve_term(a))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Formula::pred(name, args))
            }
        }
    }

    /// Raw `name(args…)` tree, resolved later once its position is known.
    fn application(&mut self) -> Result<Raw> {
        let name = self.cur.ident()?;
        if is_keyword(&name) {
            return self.cur.error(format!("unexpected keyword `{name}`"));
        }
        let mut args = Vec::new();
        if self.cur.eat(&Tok::LParen) {
            loop {
                args.push(self.application()?);
                if !self.cur.eat(&Tok::Comma) {
                    break;
                }
            }
            self.cur.expect(&Tok::RParen)?;
        }
        Ok(Raw { name, args })
    }

    fn resolve_term(&mut self, raw: Raw) -> Result<Term> {
        let Raw { name, args } = raw;
        let arity = args.len();
        match self.lookup(&name) {
            Some(Binding::Fo) => {
                if arity > 0 {
                    return Err(Error::KindConflict(name));
                }
                return Ok(Term::Var(name));
            }
            Some(Binding::So(SoKind::Function, k)) => {
                if k != arity {
                    return Err(Error::ArityMismatch {
                        symbol: name,
                        expected: k,
                        found: arity,
                    });
                }
            }
            Some(Binding::So(SoKind::Predicate, _)) => return Err(Error::KindConflict(name)),
            None => {
                if is_upper(&name) || name.starts_with('_') {
                    return Err(if arity == 0 {
                        Error::UnboundVariable(name)
                    } else {
                        Error::UnboundSecondOrder(name)
                    });
                }
                self.free.add_function(&name, arity)?;
            }
        }
        let args = args
            .into_iter()
            .map(|a| self.resolve_term(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Term::App(name, args))
    }
}

struct Raw {
    name: String,
    args: Vec<Raw>,
}
