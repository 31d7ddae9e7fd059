//! Fundamental sequences and the covering relation.
//!
//! `x` covers-into `a` when `x + 1 = a` or `x = a[k]` for some `k`. The
//! relation is oriented from the smaller to the larger ordinal.

use crate::error::{Error, Result};
use crate::ordinal::{add, classify, is_limit, Ordinal, OrdinalKind};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoverWitness {
    SuccessorStep,
    FundIndex(u64),
}

/// `a[n]` for a limit ordinal `a = beta + omega^g`:
/// `beta + omega^g' * (n+1)` when `g = g' + 1`, else `beta + omega^(g[n])`.
pub fn fund_seq(a: &Ordinal, n: u64) -> Result<Ordinal> {
    if !is_limit(a) {
        return Err(Error::NotALimit(a.to_string()));
    }
    let (beta, g) = a.split_last_unit().expect("limit is nonzero");
    let tail = match classify(&g) {
        OrdinalKind::Successor(g1) => Ordinal::monomial(g1, n + 1),
        OrdinalKind::Limit => Ordinal::omega_pow(fund_seq(&g, n)?),
        OrdinalKind::Zero => unreachable!("limit has a positive last exponent"),
    };
    Ok(add(&beta, &tail))
}

/// Decides the covering relation without searching over indices: strip the
/// common prefix, then match the residue against the two sequence shapes.
pub fn covers(x: &Ordinal, a: &Ordinal) -> Option<CoverWitness> {
    if x.succ() == *a {
        return Some(CoverWitness::SuccessorStep);
    }
    fund_index(x, a).map(CoverWitness::FundIndex)
}

fn fund_index(x: &Ordinal, a: &Ordinal) -> Option<u64> {
    if !is_limit(a) {
        return None;
    }
    let (beta, g) = a.split_last_unit()?;
    let bt = beta.terms();
    let xt = x.terms();
    if xt.len() != bt.len() + 1 || xt[..bt.len()] != *bt {
        return None;
    }
    let residue = &xt[bt.len()];
    match classify(&g) {
        OrdinalKind::Successor(g1) if residue.exp == g1 => Some(residue.coef - 1),
        OrdinalKind::Limit if residue.coef == 1 => fund_index(&residue.exp, &g),
        _ => None,
    }
}

/// All limits `g` such that `l` lies in the fundamental sequence of `g`,
/// ascending.
pub fn up_fund(l: &Ordinal) -> Result<Vec<Ordinal>> {
    if l.is_zero() {
        return Err(Error::ZeroHasNoFundParents);
    }
    let mut out = Vec::new();
    let (delta, last) = l.split_last_block().expect("nonzero");
    out.push(add(&delta, &Ordinal::omega_pow(last.exp.succ())));

    let (delta, rho) = l.split_last_unit().expect("nonzero");
    if !rho.is_zero() {
        for parent in up_fund(&rho)? {
            // omega^parent must not absorb delta
            let fits = delta.last_term().is_none_or(|t| t.exp >= parent);
            if fits {
                out.push(add(&delta, &Ordinal::omega_pow(parent)));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Out-neighbourhood of `l` in the covering graph of `bound`, ascending.
pub fn up_set(l: &Ordinal, bound: &Ordinal) -> Vec<Ordinal> {
    let mut out = vec![l.succ()];
    if !l.is_zero() {
        out.extend(up_fund(l).expect("nonzero"));
    }
    out.retain(|m| m < bound);
    out.sort();
    out
}

/// A covering chain from `x` up to `y`, built by descending from `y`.
pub fn chain(x: &Ordinal, y: &Ordinal) -> Result<Vec<Ordinal>> {
    if x > y {
        return Err(Error::BadOrder(x.to_string(), y.to_string()));
    }
    let mut rev = vec![y.clone()];
    let mut cur = y.clone();
    while cur != *x {
        cur = match classify(&cur) {
            OrdinalKind::Successor(p) => p,
            OrdinalKind::Limit => {
                let mut n = 0;
                loop {
                    let f = fund_seq(&cur, n)?;
                    if f >= *x {
                        break f;
                    }
                    n += 1;
                }
            }
            OrdinalKind::Zero => unreachable!("x <= cur and x != cur"),
        };
        rev.push(cur.clone());
    }
    rev.reverse();
    Ok(rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::{mul_nat, tower};

    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }
    fn w() -> Ordinal {
        Ordinal::omega()
    }
    fn wp(e: Ordinal) -> Ordinal {
        Ordinal::omega_pow(e)
    }

    #[test]
    fn fund_seq_examples() {
        for k in 0..10 {
            assert_eq!(fund_seq(&w(), k).unwrap(), n(k + 1));
        }
        assert_eq!(fund_seq(&wp(w()), 1).unwrap(), wp(n(2)));
        let a = add(&wp(n(3)), &wp(n(2)));
        for k in 0..5 {
            let want = add(&wp(n(3)), &mul_nat(&w(), k + 1));
            assert_eq!(fund_seq(&a, k).unwrap(), want);
        }
    }

    #[test]
    fn fund_seq_rejects_non_limits() {
        assert!(matches!(fund_seq(&n(0), 0), Err(Error::NotALimit(_))));
        assert!(matches!(fund_seq(&w().succ(), 3), Err(Error::NotALimit(_))));
    }

    #[test]
    fn covers_examples() {
        assert_eq!(covers(&mul_nat(&w(), 2), &wp(n(2))), Some(CoverWitness::FundIndex(1)));
        assert_eq!(covers(&w(), &w().succ()), Some(CoverWitness::SuccessorStep));
        let a = add(&wp(n(2)), &w());
        assert_eq!(covers(&w(), &a), None);
        // brute force agreement on the same target
        for k in 0..=20 {
            assert_ne!(fund_seq(&a, k).unwrap(), w());
        }
    }

    #[test]
    fn covers_matches_fund_seq_indices() {
        let targets = [
            wp(w()),
            add(&wp(n(3)), &wp(n(2))),
            wp(add(&w(), &n(1))),
            tower(3),
            add(&mul_nat(&wp(w()), 2), &wp(wp(n(2)))),
        ];
        for a in &targets {
            for k in 0..6 {
                let f = fund_seq(a, k).unwrap();
                assert_eq!(covers(&f, a), Some(CoverWitness::FundIndex(k)), "{a}[{k}]");
            }
        }
    }

    #[test]
    fn up_fund_zero_is_error() {
        assert_eq!(up_fund(&n(0)), Err(Error::ZeroHasNoFundParents));
    }

    #[test]
    fn up_fund_small() {
        assert_eq!(up_fund(&n(1)).unwrap(), vec![w()]);
        assert_eq!(up_fund(&w()).unwrap(), vec![wp(n(2)), wp(w())]);
        assert_eq!(
            up_fund(&wp(w())).unwrap(),
            vec![wp(w().succ()), wp(wp(n(2))), wp(wp(w()))]
        );
    }

    #[test]
    fn up_set_examples() {
        let ww = wp(w());
        assert_eq!(up_set(&n(0), &ww), vec![n(1)]);
        assert_eq!(up_set(&w(), &ww), vec![w().succ(), wp(n(2))]);
        assert_eq!(up_set(&tower(1), &tower(3)).len(), 3);
    }

    fn assert_chain(c: &[Ordinal], x: &Ordinal, y: &Ordinal) {
        assert_eq!(c.first(), Some(x));
        assert_eq!(c.last(), Some(y));
        for p in c.windows(2) {
            assert!(covers(&p[0], &p[1]).is_some(), "{} -> {}", p[0], p[1]);
        }
    }

    #[test]
    fn chain_examples() {
        let ww = wp(w());
        let c = chain(&n(0), &ww).unwrap();
        assert_chain(&c, &n(0), &ww);
        let expected = vec![n(0), n(1), w(), w().succ(), mul_nat(&w(), 2), wp(n(2)), ww.clone()];
        // the descent picks the smallest fundamental member above x, which
        // differs from the listed chain but must validate the same way
        assert_chain(&expected, &n(0), &ww);
        assert_eq!(chain(&ww, &ww).unwrap(), vec![ww.clone()]);
        let c = chain(&n(2), &wp(n(2))).unwrap();
        assert_chain(&c, &n(2), &wp(n(2)));
        assert!(matches!(chain(&w(), &n(3)), Err(Error::BadOrder(_, _))));
    }
}
