//! Translations between disjunctive programs, normal programs and
//! second-order sentences.

mod d2n;
mod normal_form;
mod parity;
mod so2dlp;
mod successor;

pub use d2n::translate_d2n;
pub use normal_form::{normalize_forall_exists, DEFAULT_MAX_DISJUNCTS};
pub use parity::parity_sentence;
pub use so2dlp::{translate_so2dlp_arb, translate_so2dlp_fin, translate_so2dlp_suc};
pub use successor::{finiteness_program, successor_program, successor_vocabulary};

use crate::syntax::{Atom, Literal, Program, Term, Vocabulary};

/// A translated program with the symbols it adds to the source vocabulary.
#[derive(Clone, Debug)]
pub struct Translation {
    pub program: Program,
    /// Symbols introduced by the translation.
    pub aux: Vocabulary,
    /// Pairs (auxiliary symbol, what it stands for), in creation order.
    pub mapping: Vec<(String, String)>,
}

impl Translation {
    /// The mapping as printable lines.
    pub fn mapping_text(&self) -> String {
        let mut out = String::new();
        for (sym, role) in &self.mapping {
            out.push_str(sym);
            out.push_str(" : ");
            out.push_str(role);
            out.push('\n');
        }
        out
    }
}

pub(crate) fn var(name: &str) -> Term {
    Term::var(name)
}

pub(crate) fn vars(names: &[String]) -> Vec<Term> {
    names.iter().map(|n| Term::var(n.clone())).collect()
}

pub(crate) fn atom(pred: &str, args: Vec<Term>) -> Atom {
    Atom::pred(pred, args)
}

pub(crate) fn pos(pred: &str, args: Vec<Term>) -> Literal {
    Literal::pos(Atom::pred(pred, args))
}

pub(crate) fn neg(pred: &str, args: Vec<Term>) -> Literal {
    Literal::neg(Atom::pred(pred, args))
}

pub(crate) fn eq(l: Term, r: Term) -> Literal {
    Literal::pos(Atom::Eq(l, r))
}

pub(crate) fn neq(l: Term, r: Term) -> Literal {
    Literal::neg(Atom::Eq(l, r))
}
