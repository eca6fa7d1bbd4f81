use std::fmt::{self, Display, Formatter, Write};

use super::formula::{Formula, Quantifier, SoKind, SoVar};
use super::{Atom, Literal, Program, Rule, Term};

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{a}")?;
    }
    f.write_char(')')
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pred { pred, args } => {
                f.write_str(pred)?;
                write_args(f, args)
            }
            Atom::Eq(l, r) => write!(f, "{l} = {r}"),
        }
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match (&self.atom, self.positive) {
            (a, true) => write!(f, "{a}"),
            (Atom::Eq(l, r), false) => write!(f, "{l} != {r}"),
            (a, false) => write!(f, "not {a}"),
        }
    }
}

impl Display for Rule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, a) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.body.is_empty() || self.head.is_empty() {
            if self.head.is_empty() {
                f.write_str(":-")?;
            } else {
                f.write_str(" :-")?;
            }
            for (i, l) in self.body.iter().enumerate() {
                f.write_str(if i > 0 { ", " } else { " " })?;
                write!(f, "{l}")?;
            }
        }
        f.write_char('.')
    }
}

impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for r in self.rules() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl Display for SoVar {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.kind == SoKind::Function {
            f.write_str("fn ")?;
        }
        write!(f, "{}/{}", self.name, self.arity)
    }
}

const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const ATOM: u8 = 6;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Quant(..) | Formula::SoQuant(..) => QUANT,
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(fs) if fs.len() >= 2 => OR,
        Formula::And(fs) if fs.len() >= 2 => AND,
        Formula::Or(fs) | Formula::And(fs) if fs.len() == 1 => prec(&fs[0]),
        Formula::Not(_) => NOT,
        _ => ATOM,
    }
}

fn write_formula(out: &mut Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    let p = prec(f);
    if p < min {
        out.write_char('(')?;
        write_formula(out, f, QUANT)?;
        return out.write_char(')');
    }
    match f {
        Formula::True => out.write_str("TRUE"),
        Formula::False => out.write_str("FALSE"),
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(Atom::Eq(l, r)) => write!(out, "{l} != {r}"),
            _ => {
                out.write_char('~')?;
                write_formula(out, g, NOT)
            }
        },
        Formula::And(fs) | Formula::Or(fs) => {
            let (sep, child, empty) = if matches!(f, Formula::And(_)) {
                (" & ", AND + 1, "TRUE")
            } else {
                (" v ", OR + 1, "FALSE")
            };
            match fs.len() {
                0 => out.write_str(empty),
                1 => write_formula(out, &fs[0], min),
                _ => {
                    for (i, g) in fs.iter().enumerate() {
                        if i > 0 {
                            out.write_str(sep)?;
                        }
                        write_formula(out, g, child)?;
                    }
                    Ok(())
                }
            }
        }
        Formula::Implies(a, b) => {
            write_formula(out, a, IMP + 1)?;
            out.write_str(" -> ")?;
            write_formula(out, b, IMP)
        }
        Formula::Iff(a, b) => {
            write_formula(out, a, IFF)?;
            out.write_str(" <-> ")?;
            write_formula(out, b, IFF + 1)
        }
        Formula::Quant(q, v, body) => {
            let kw = match q {
                Quantifier::Forall => "ALL",
                Quantifier::Exists => "SOME",
            };
            write!(out, "{kw} {v} . ")?;
            write_formula(out, body, QUANT)
        }
        Formula::SoQuant(q, v, body) => {
            let kw = match q {
                Quantifier::Forall => "ALL",
                Quantifier::Exists => "EX",
            };
            write!(out, "{kw} {v} . ")?;
            write_formula(out, body, QUANT)
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self, QUANT)
    }
}
