//! Ordinals below epsilon-zero in reduced Cantor normal form.
//!
//! An [`Ordinal`] is a list of `(exponent, coefficient)` terms with strictly
//! decreasing exponents and positive coefficients, so structural equality is
//! value equality. Only addition, natural multiples and powers of omega are
//! provided.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub exp: Ordinal,
    pub coef: u64,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrdinalKind {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exp: Ordinal::zero(),
                    coef: n,
                }],
            }
        }
    }

    /// `omega^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal {
            terms: vec![Term { exp: e, coef: 1 }],
        }
    }

    /// `omega^e * c`; zero when `c == 0`.
    pub fn monomial(e: Ordinal, c: u64) -> Self {
        if c == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term { exp: e, coef: c }],
        }
    }

    /// Builds an ordinal from terms, checking the RCNF invariants.
    pub fn from_terms(terms: Vec<Term>) -> Option<Self> {
        if terms.iter().any(|t| t.coef == 0) {
            return None;
        }
        if terms.windows(2).any(|w| w[0].exp <= w[1].exp) {
            return None;
        }
        Some(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exp.is_zero())
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coef),
            _ => None,
        }
    }

    pub fn leading_exp(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exp)
    }

    pub fn last_term(&self) -> Option<&Term> {
        self.terms.last()
    }

    /// Nesting depth: 0 for naturals, otherwise one more than the deepest exponent.
    pub fn depth(&self) -> usize {
        if self.is_finite() {
            0
        } else {
            1 + self.terms.iter().map(|t| t.exp.depth()).max().unwrap_or(0)
        }
    }

    /// Expanded Cantor normal form: one exponent per unit of coefficient.
    pub fn cnf_terms(&self) -> Vec<Ordinal> {
        self.terms
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.exp.clone(), t.coef as usize))
            .collect()
    }

    /// Inverse of [`Ordinal::cnf_terms`]; `None` if the exponents increase somewhere.
    pub fn from_cnf(exps: &[Ordinal]) -> Option<Self> {
        let mut terms: Vec<Term> = Vec::new();
        for e in exps {
            match terms.last_mut() {
                Some(t) if t.exp == *e => t.coef += 1,
                Some(t) if t.exp < *e => return None,
                _ => terms.push(Term {
                    exp: e.clone(),
                    coef: 1,
                }),
            }
        }
        Some(Ordinal { terms })
    }

    /// Splits `self = rest + omega^e * c` on its last RCNF block.
    pub fn split_last_block(&self) -> Option<(Ordinal, &Term)> {
        let (last, init) = self.terms.split_last()?;
        Some((Ordinal { terms: init.to_vec() }, last))
    }

    /// Splits `self = rest + omega^e` on its last CNF unit.
    pub fn split_last_unit(&self) -> Option<(Ordinal, Ordinal)> {
        let last = self.terms.last()?;
        let mut rest = self.terms.clone();
        let exp = last.exp.clone();
        let n = rest.len();
        if rest[n - 1].coef == 1 {
            rest.pop();
        } else {
            rest[n - 1].coef -= 1;
        }
        Some((Ordinal { terms: rest }, exp))
    }

    pub fn succ(&self) -> Ordinal {
        add(self, &Ordinal::one())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

/// Term-lexicographic comparison of RCNF lists.
pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    for (x, y) in a.terms.iter().zip(&b.terms) {
        match compare(&x.exp, &y.exp) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match x.coef.cmp(&y.coef) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

pub fn add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let Some(head) = b.terms.first() else {
        return a.clone();
    };
    let mut terms: Vec<Term> = a.terms.iter().take_while(|t| t.exp >= head.exp).cloned().collect();
    let mut rest = b.terms.iter();
    if let Some(last) = terms.last_mut() {
        if last.exp == head.exp {
            last.coef += head.coef;
            rest.next();
        }
    }
    terms.extend(rest.cloned());
    Ordinal { terms }
}

/// `a` added to itself `n` times.
pub fn mul_nat(a: &Ordinal, n: u64) -> Ordinal {
    if n == 0 || a.is_zero() {
        return Ordinal::zero();
    }
    // a*n = lead*n + tail where lead is the first block
    let mut terms = a.terms.clone();
    terms[0].coef *= n;
    let mut out = Ordinal {
        terms: vec![terms[0].clone()],
    };
    let tail = Ordinal {
        terms: a.terms[1..].to_vec(),
    };
    // (lead + tail) * n = lead*n + tail, since tail is absorbed by each following lead
    out = add(&out, &tail);
    out
}

pub fn omega_pow(e: &Ordinal) -> Ordinal {
    Ordinal::omega_pow(e.clone())
}

pub fn classify(a: &Ordinal) -> OrdinalKind {
    match a.terms.last() {
        None => OrdinalKind::Zero,
        Some(t) if t.exp.is_zero() => {
            let mut terms = a.terms.clone();
            let n = terms.len();
            if t.coef == 1 {
                terms.pop();
            } else {
                terms[n - 1].coef -= 1;
            }
            OrdinalKind::Successor(Ordinal { terms })
        }
        Some(_) => OrdinalKind::Limit,
    }
}

pub fn is_limit(a: &Ordinal) -> bool {
    matches!(classify(a), OrdinalKind::Limit)
}

/// `omega ^^ n`, with `tower(0) = 1`.
pub fn tower(n: usize) -> Ordinal {
    (0..n).fold(Ordinal::one(), |acc, _| Ordinal::omega_pow(acc))
}

/// Height-`n` tower of omegas topped with the natural `k`.
pub fn exp_tower_w(n: usize, k: u64) -> Ordinal {
    (0..n).fold(Ordinal::nat(k), |acc, _| Ordinal::omega_pow(acc))
}

/// Caps for [`enumerate_ordinals`].
#[derive(Clone, Copy, Debug)]
pub struct EnumConfig {
    pub coef_cap: u64,
    pub size_limit: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            coef_cap: 3,
            size_limit: 100_000,
        }
    }
}

/// All RCNF ordinals with at most `max_terms` terms, nesting at most
/// `max_depth`, coefficients at most the cap, strictly below `bound`.
/// Sorted ascending.
pub fn enumerate_ordinals(
    max_terms: usize,
    max_depth: usize,
    bound: &Ordinal,
    cfg: &EnumConfig,
) -> Result<Vec<Ordinal>> {
    let mut out = enumerate_inner(max_terms, max_depth, bound, cfg)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn enumerate_inner(max_terms: usize, max_depth: usize, bound: &Ordinal, cfg: &EnumConfig) -> Result<Vec<Ordinal>> {
    if bound.is_zero() {
        return Ok(Vec::new());
    }
    if max_depth == 0 {
        let top = match bound.as_finite() {
            Some(b) => b,
            None => cfg.coef_cap + 1,
        };
        if top as usize > cfg.size_limit {
            return Err(Error::CapExceeded { limit: cfg.size_limit });
        }
        return Ok((0..top).map(Ordinal::nat).collect());
    }
    let lead = bound.leading_exp().expect("nonzero bound");
    let exp_bound = lead.succ();
    let mut exps = enumerate_inner(max_terms, max_depth - 1, &exp_bound, cfg)?;
    exps.sort_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut stack = Vec::new();
    grow(&exps, 0, max_terms, bound, cfg, &mut stack, &mut out)?;
    Ok(out)
}

fn grow(
    exps: &[Ordinal],
    from: usize,
    terms_left: usize,
    bound: &Ordinal,
    cfg: &EnumConfig,
    stack: &mut Vec<Term>,
    out: &mut Vec<Ordinal>,
) -> Result<()> {
    let current = Ordinal { terms: stack.clone() };
    if current >= *bound {
        return Ok(());
    }
    out.push(current);
    if out.len() > cfg.size_limit {
        return Err(Error::CapExceeded { limit: cfg.size_limit });
    }
    if terms_left == 0 {
        return Ok(());
    }
    for (i, e) in exps.iter().enumerate().skip(from) {
        for c in 1..=cfg.coef_cap {
            stack.push(Term {
                exp: e.clone(),
                coef: c,
            });
            let before = out.len();
            grow(exps, i + 1, terms_left - 1, bound, cfg, stack, out)?;
            stack.pop();
            // a larger coefficient cannot fall back under the bound
            if out.len() == before {
                break;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coef)?;
                continue;
            }
            if t.exp == Ordinal::one() {
                write!(f, "w")?;
            } else if let Some(n) = t.exp.as_finite() {
                write!(f, "w^{n}")?;
            } else {
                write!(f, "w^({})", t.exp)?;
            }
            if t.coef > 1 {
                write!(f, "*{}", t.coef)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }
    fn wp(e: Ordinal) -> Ordinal {
        Ordinal::omega_pow(e)
    }
    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }

    #[test]
    fn compare_examples() {
        let w2 = wp(n(2));
        assert_eq!(compare(&w2, &add(&w2, &w())), Ordering::Less);
        assert_eq!(compare(&n(0), &n(0)), Ordering::Equal);
        let rhs = add(&mul_nat(&w2, 5), &n(3));
        assert_eq!(compare(&wp(w()), &rhs), Ordering::Greater);
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(&w(), &wp(n(2))), wp(n(2)));
        let a = add(&wp(n(2)), &w());
        assert_eq!(add(&a, &n(0)), a);
        let got = add(&a, &add(&w(), &n(1)));
        let want = add(&add(&wp(n(2)), &mul_nat(&w(), 2)), &n(1));
        assert_eq!(got, want);
        assert_eq!(got.to_string(), "w^2 + w*2 + 1");
    }

    #[test]
    fn mul_nat_examples() {
        assert_eq!(mul_nat(&w(), 2).to_string(), "w*2");
        assert_eq!(mul_nat(&w(), 0), n(0));
        let a = add(&w(), &n(1));
        let three = add(&add(&a, &a), &a);
        assert_eq!(mul_nat(&a, 3), three);
        assert_eq!(three.to_string(), "w*3 + 1");
    }

    #[test]
    fn omega_pow_and_classify() {
        assert_eq!(omega_pow(&n(0)), n(1));
        assert_eq!(omega_pow(&n(1)), w());
        assert_eq!(omega_pow(&w()).to_string(), "w^(w)");
        assert_eq!(classify(&n(0)), OrdinalKind::Zero);
        assert_eq!(classify(&w().succ()), OrdinalKind::Successor(w()));
        assert_eq!(classify(&wp(w())), OrdinalKind::Limit);
    }

    #[test]
    fn towers() {
        assert_eq!(exp_tower_w(0, 5), n(5));
        assert_eq!(exp_tower_w(1, 3), wp(n(3)));
        assert_eq!(tower(2), wp(w()));
        assert_eq!(tower(0), n(1));
    }

    #[test]
    fn enumerate_examples() {
        let cfg = EnumConfig::default();
        assert_eq!(
            enumerate_ordinals(1, 0, &n(4), &cfg).unwrap(),
            vec![n(0), n(1), n(2), n(3)]
        );
        let got = enumerate_ordinals(1, 1, &wp(n(2)), &cfg).unwrap();
        for x in [n(0), n(1), n(2), n(3), w(), mul_nat(&w(), 2), mul_nat(&w(), 3)] {
            assert!(got.contains(&x), "missing {x}");
        }
        assert!(got.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn enumerate_respects_size_limit() {
        let cfg = EnumConfig {
            coef_cap: 3,
            size_limit: 50,
        };
        let err = enumerate_ordinals(3, 2, &tower(3), &cfg).unwrap_err();
        assert_eq!(err, Error::CapExceeded { limit: 50 });
    }

    #[test]
    fn cnf_roundtrip() {
        let a = add(&mul_nat(&wp(n(3)), 2), &w());
        assert_eq!(Ordinal::from_cnf(&a.cnf_terms()), Some(a));
    }
}
