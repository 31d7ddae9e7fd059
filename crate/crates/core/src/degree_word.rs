//! Greatest sequences and degree words.
//!
//! The greatest sequence of a covering graph starts at 0 and always moves to
//! the largest out-neighbour; the degree word lists the out-degrees met along
//! the way. Successors give finite words ending in 0, limits give
//! ultimately periodic words.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::fundamental::{fund_seq, up_set};
use crate::ordinal::{classify, Ordinal, OrdinalKind};

pub const DEFAULT_ITERATION_CAP: usize = 10_000;

/// A finite word (empty period) or an ultimately periodic word `prefix period^w`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UPWord {
    pub prefix: Vec<u32>,
    pub period: Vec<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Termination {
    Finished,
    /// Indices of `a[0]`, `a[1]`, `a[2]` in the sequence.
    PeriodFound(usize, usize, usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GreatestSeq {
    pub entries: Vec<(Ordinal, u32)>,
    pub termination: Termination,
}

impl UPWord {
    pub fn finite(letters: Vec<u32>) -> Self {
        UPWord {
            prefix: letters,
            period: Vec::new(),
        }
    }

    pub fn periodic(prefix: Vec<u32>, period: Vec<u32>) -> Self {
        UPWord { prefix, period }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Letter at position `i`, `None` past the end of a finite word.
    pub fn letter(&self, i: usize) -> Option<u32> {
        if i < self.prefix.len() {
            return Some(self.prefix[i]);
        }
        if self.period.is_empty() {
            return None;
        }
        let j = (i - self.prefix.len()) % self.period.len();
        Some(self.period[j])
    }

    /// First `n` letters (fewer for a short finite word).
    pub fn expand(&self, n: usize) -> Vec<u32> {
        (0..n).map_while(|i| self.letter(i)).collect()
    }

    pub fn to_compact_string(&self) -> String {
        if self.prefix.iter().chain(&self.period).any(|&l| l > 9) {
            return self.to_string();
        }
        let digits = |v: &[u32]| v.iter().map(|l| l.to_string()).collect::<String>();
        if self.is_finite() {
            digits(&self.prefix)
        } else {
            format!("{}({})^w", digits(&self.prefix), digits(&self.period))
        }
    }
}

impl fmt::Display for UPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}", join(&self.prefix))?;
        if !self.period.is_empty() {
            write!(f, "({})^w", join(&self.period))?;
        }
        Ok(())
    }
}

/// Largest out-neighbour of `l` in the covering graph of `bound`.
pub fn greatest_step(l: &Ordinal, bound: &Ordinal) -> Option<Ordinal> {
    up_set(l, bound).pop()
}

/// Walks the greatest sequence of `a`. For a limit the walk stops at `a[2]`.
pub fn greatest_sequence(a: &Ordinal, cap: usize) -> Result<GreatestSeq> {
    let mut entries = Vec::new();
    match classify(a) {
        OrdinalKind::Zero => Ok(GreatestSeq {
            entries,
            termination: Termination::Finished,
        }),
        OrdinalKind::Successor(_) => {
            let mut cur = Ordinal::zero();
            loop {
                if entries.len() >= cap {
                    return Err(Error::IterationCapExceeded(cap));
                }
                let ups = up_set(&cur, a);
                entries.push((cur.clone(), ups.len() as u32));
                match ups.last() {
                    Some(next) => cur = next.clone(),
                    None => break,
                }
            }
            Ok(GreatestSeq {
                entries,
                termination: Termination::Finished,
            })
        }
        OrdinalKind::Limit => {
            let targets = [fund_seq(a, 0)?, fund_seq(a, 1)?, fund_seq(a, 2)?];
            let mut found = [0usize; 3];
            let mut next_target = 0;
            let mut cur = Ordinal::zero();
            loop {
                if entries.len() >= cap {
                    return Err(Error::IterationCapExceeded(cap));
                }
                let ups = up_set(&cur, a);
                entries.push((cur.clone(), ups.len() as u32));
                if cur == targets[next_target] {
                    found[next_target] = entries.len() - 1;
                    next_target += 1;
                    if next_target == 3 {
                        break;
                    }
                } else if cur > targets[next_target] {
                    // the sequence jumped over a[k]
                    return Err(Error::PeriodMismatch(a.to_string()));
                }
                cur = ups.last().expect("limit graphs have no sinks").clone();
            }
            Ok(GreatestSeq {
                entries,
                termination: Termination::PeriodFound(found[0], found[1], found[2]),
            })
        }
    }
}

/// Degree word of `a`, canonicalized.
pub fn degree_word(a: &Ordinal) -> Result<UPWord> {
    degree_word_capped(a, DEFAULT_ITERATION_CAP)
}

pub fn degree_word_capped(a: &Ordinal, cap: usize) -> Result<UPWord> {
    let seq = greatest_sequence(a, cap)?;
    let degrees: Vec<u32> = seq.entries.iter().map(|(_, d)| *d).collect();
    match seq.termination {
        Termination::Finished => Ok(UPWord::finite(degrees)),
        Termination::PeriodFound(i0, i1, i2) => {
            let period = &degrees[i0..i1];
            if degrees[i1..i2] != *period {
                return Err(Error::PeriodMismatch(a.to_string()));
            }
            Ok(canonicalize(&UPWord::periodic(degrees[..i0].to_vec(), period.to_vec())))
        }
    }
}

fn primitive_root(w: &[u32]) -> &[u32] {
    let n = w.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| &w[..d])
        .find(|root| w.chunks(root.len()).all(|c| c == *root))
        .unwrap_or(w)
}

/// Unique representative: primitive period, prefix rolled into the period as
/// far as possible.
pub fn canonicalize(w: &UPWord) -> UPWord {
    if w.period.is_empty() {
        return w.clone();
    }
    let mut prefix = w.prefix.clone();
    let mut period = primitive_root(&w.period).to_vec();
    while let (Some(&p), Some(&q)) = (prefix.last(), period.last()) {
        if p != q {
            break;
        }
        prefix.pop();
        period.rotate_right(1);
    }
    UPWord { prefix, period }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Lexicographic order on the denoted words; the end of a finite word sorts
/// below every letter.
pub fn lex_compare(u: &UPWord, v: &UPWord) -> Ordering {
    let pu = u.period.len().max(1);
    let pv = v.period.len().max(1);
    let horizon = u.prefix.len() + v.prefix.len() + pu / gcd(pu, pv) * pv + 1;
    for i in 0..horizon {
        match (u.letter(i), v.letter(i)) {
            (None, None) => return Ordering::Equal,
            (a, b) if a != b => return a.cmp(&b),
            _ => {}
        }
    }
    Ordering::Equal
}
