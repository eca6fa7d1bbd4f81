//! A small DPLL satisfiability checker used for minimality tests.

/// Literal: variable index plus polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Lit {
        Lit {
            var,
            positive: false,
        }
    }
}

const UNSET: i8 = -1;

struct Solver<'a> {
    clauses: &'a [Vec<Lit>],
    occurs: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<usize>,
}

impl Solver<'_> {
    fn lit_value(&self, l: Lit) -> i8 {
        match self.value[l.var] {
            UNSET => UNSET,
            v => (v == 1) as i8 ^ (!l.positive) as i8,
        }
    }

    fn assign(&mut self, l: Lit) {
        self.value[l.var] = l.positive as i8;
        self.trail.push(l.var);
    }

    /// Unit propagation over clauses touching the assigned variables; false on conflict.
    fn propagate(&mut self, mut head: usize) -> bool {
        while head < self.trail.len() {
            let var = self.trail[head];
            head += 1;
            for k in 0..self.occurs[var].len() {
                let c = self.occurs[var][k];
                let mut unassigned = None;
                let mut count = 0;
                let mut sat = false;
                for &l in &self.clauses[c] {
                    match self.lit_value(l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        UNSET => {
                            count += 1;
                            unassigned = Some(l);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match count {
                    0 => return false,
                    1 => self.assign(unassigned.unwrap()),
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, to: usize) {
        while self.trail.len() > to {
            let v = self.trail.pop().unwrap();
            self.value[v] = UNSET;
        }
    }

    fn solve(&mut self) -> bool {
        let Some(var) = self.value.iter().position(|&v| v == UNSET) else {
            return true;
        };
        for positive in [false, true] {
            let mark = self.trail.len();
            self.assign(Lit { var, positive });
            if self.propagate(mark) && self.solve() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// Returns a satisfying assignment if one exists.
pub(crate) fn solve(nvars: usize, clauses: &[Vec<Lit>]) -> Option<Vec<bool>> {
    let mut occurs = vec![Vec::new(); nvars];
    for (i, c) in clauses.iter().enumerate() {
        for l in c {
            if occurs[l.var].last() != Some(&i) {
                occurs[l.var].push(i);
            }
        }
    }
    let mut s = Solver {
        clauses,
        occurs,
        value: vec![UNSET; nvars],
        trail: Vec::new(),
    };
    // initial units and empty clauses
    for c in clauses {
        if c.is_empty() {
            return None;
        }
    }
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unassigned = None;
            let mut count = 0;
            let mut sat = false;
            for &l in c {
                match s.lit_value(l) {
                    1 => sat = true,
                    UNSET => {
                        count += 1;
                        unassigned = Some(l);
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            match count {
                0 => return None,
                1 => {
                    let mark = s.trail.len();
                    s.assign(unassigned.unwrap());
                    if !s.propagate(mark) {
                        return None;
                    }
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if s.solve() {
        Some(s.value.iter().map(|&v| v == 1).collect())
    } else {
        None
    }
}
