use super::{FiniteStructure, DEFAULT_CAP_LOG2};
use crate::error::{Error, Result};
use crate::syntax::Vocabulary;

/// log₂ of the number of `extra`-expansions of a structure of size `n`.
pub fn expansion_count_log2(n: usize, extra: &Vocabulary) -> f64 {
    let n = n as f64;
    let preds: f64 = extra
        .predicates()
        .values()
        .map(|&k| n.powi(k as i32))
        .sum();
    let funs: f64 = extra
        .functions()
        .values()
        .map(|&k| n.powi(k as i32) * n.log2())
        .sum();
    preds + funs
}

struct Slot {
    name: String,
    arity: usize,
    is_pred: bool,
    offset: usize,
    len: usize,
}

/// Stream of all expansions of a structure by new symbols, in lexicographic
/// order of their tables (earlier symbols and entries vary slowest).
pub struct Expansions {
    base: FiniteStructure,
    slots: Vec<Slot>,
    digits: Vec<usize>,
    radix: Vec<usize>,
    done: bool,
}

/// All expansions of `s` interpreting `extra`, refusing enumerations with more
/// than 2^24 members.
pub fn expansions(s: &FiniteStructure, extra: &Vocabulary) -> Result<Expansions> {
    expansions_with_cap(s, extra, DEFAULT_CAP_LOG2)
}

pub fn expansions_with_cap(s: &FiniteStructure, extra: &Vocabulary, cap_log2: u32) -> Result<Expansions> {
    for name in extra.names() {
        if s.interprets(&name) {
            return Err(Error::VocabularyClash(name));
        }
    }
    let bits = expansion_count_log2(s.size(), extra);
    if bits > cap_log2 as f64 + 1e-9 {
        return Err(Error::ResourceLimit(format!(
            "2^{bits:.1} expansions exceed the cap of 2^{cap_log2}"
        )));
    }
    let n = s.size();
    let mut slots = Vec::new();
    let mut radix = Vec::new();
    let symbols = extra
        .predicates()
        .iter()
        .map(|(p, &k)| (p, k, true))
        .chain(extra.functions().iter().map(|(f, &k)| (f, k, false)));
    for (name, arity, is_pred) in symbols {
        let len = n.pow(arity as u32);
        slots.push(Slot {
            name: name.clone(),
            arity,
            is_pred,
            offset: radix.len(),
            len,
        });
        radix.extend(std::iter::repeat(if is_pred { 2 } else { n }).take(len));
    }
    Ok(Expansions {
        base: s.clone(),
        slots,
        digits: vec![0; radix.len()],
        radix,
        done: false,
    })
}

impl Expansions {
    fn build(&self) -> FiniteStructure {
        let mut out = self.base.clone();
        let n = out.size();
        for slot in &self.slots {
            let ds = &self.digits[slot.offset..slot.offset + slot.len];
            if slot.is_pred {
                let tuples = ds
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d == 1)
                    .map(|(i, _)| super::index_tuple(n, slot.arity, i));
                out.set_relation(&slot.name, slot.arity, tuples)
                    .expect("fresh symbol");
            } else {
                out.set_function(&slot.name, slot.arity, ds.to_vec())
                    .expect("fresh symbol");
            }
        }
        out
    }
}

impl Iterator for Expansions {
    type Item = FiniteStructure;

    fn next(&mut self) -> Option<FiniteStructure> {
        if self.done {
            return None;
        }
        let item = self.build();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.radix[i] {
                break;
            }
            self.digits[i] = 0;
        }
        Some(item)
    }
}
