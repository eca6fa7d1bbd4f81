use std::collections::BTreeSet;

/// Words the parsers reserve; never handed out.
const KEYWORDS: [&str; 7] = ["EX", "ALL", "SOME", "TRUE", "FALSE", "v", "not"];

impl Default for FreshNames {
    fn default() -> Self {
        FreshNames::new(std::iter::empty::<String>())
    }
}

/// Generator of names that avoid a growing set of taken names.
///
/// A requested base name is returned unchanged when it is free; otherwise a
/// numeric suffix is appended (`enc`, `enc1`, `enc2`, …; an underscore
/// separates the suffix when the base already ends in a digit).
#[derive(Clone, Debug)]
pub struct FreshNames {
    taken: BTreeSet<String>,
    counter: usize,
}

impl FreshNames {
    pub fn new<I, S>(taken: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut taken: BTreeSet<String> = taken.into_iter().map(Into::into).collect();
        taken.extend(KEYWORDS.iter().map(|k| k.to_string()));
        FreshNames { taken, counter: 0 }
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.taken.insert(name.into());
    }

    pub fn is_taken(&self, name: &str) -> bool {
        self.taken.contains(name)
    }

    pub fn fresh(&mut self, base: &str) -> String {
        if !self.taken.contains(base) {
            self.taken.insert(base.to_string());
            return base.to_string();
        }
        let sep = if base.ends_with(|c: char| c.is_ascii_digit()) {
            "_"
        } else {
            ""
        };
        let mut k = 1usize;
        loop {
            let cand = format!("{base}{sep}{k}");
            if !self.taken.contains(&cand) {
                self.taken.insert(cand.clone());
                return cand;
            }
            k += 1;
        }
    }

    /// A fresh program variable from the reserved `_v` family.
    pub fn var(&mut self) -> String {
        loop {
            self.counter += 1;
            let cand = format!("_v{}", self.counter);
            if !self.taken.contains(&cand) {
                self.taken.insert(cand.clone());
                return cand;
            }
        }
    }
}
