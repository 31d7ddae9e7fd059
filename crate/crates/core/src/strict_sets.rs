//! Iterated exponentials, the sets `C^k_n`, the marked sets `S_a` and the
//! trees `T_n`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::degree_word::greatest_step;
use crate::error::{Error, Result};
use crate::fundamental::{covers, up_set};
use crate::ordinal::{add, exp_tower_w, mul_nat, tower, Ordinal};

pub const DEFAULT_C_CAP: u64 = 1 << 16;
pub const DEFAULT_S_CAP: usize = 4096;
pub const DEFAULT_WALK_CAP: usize = 100_000;

/// Tower of `n` twos topped by `k`.
pub fn exp2(n: u32, k: u64) -> Result<u64> {
    let mut v = k;
    for _ in 0..n {
        let e = u32::try_from(v).map_err(|_| Error::Overflow)?;
        v = 2u64.checked_pow(e).ok_or(Error::Overflow)?;
    }
    Ok(v)
}

/// `C^k_0 = {0..k-1}`; `C^k_n` collects `omega^g1 + ... + omega^gm` over
/// decreasing subsets of `C^k_{n-1}`. Ascending.
pub fn c_set(n: u32, k: u64) -> Result<Vec<Ordinal>> {
    c_set_capped(n, k, DEFAULT_C_CAP)
}

pub fn c_set_capped(n: u32, k: u64, cap: u64) -> Result<Vec<Ordinal>> {
    if exp2(n, k)? > cap {
        return Err(Error::Overflow);
    }
    let mut cur: Vec<Ordinal> = (0..k).map(Ordinal::nat).collect();
    for _ in 0..n {
        let desc: Vec<Ordinal> = cur.iter().rev().cloned().collect();
        let mut next = Vec::with_capacity(1 << desc.len());
        for mask in 0u64..(1u64 << desc.len()) {
            let sum = desc
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(Ordinal::zero(), |acc, (_, g)| add(&acc, &Ordinal::omega_pow(g.clone())));
            next.push(sum);
        }
        next.sort();
        cur = next;
    }
    Ok(cur)
}

/// Structural membership in `C^k_n`: unit coefficients above the bottom level
/// and bottom values below `k`.
pub fn has_c_shape(x: &Ordinal, n: u32, k: u64) -> bool {
    if n == 0 {
        return x.as_finite().is_some_and(|v| v < k);
    }
    x.terms().iter().all(|t| t.coef == 1 && has_c_shape(&t.exp, n - 1, k))
}

/// The greatest out-neighbour of `g` in the covering graph of `ambient`.
pub fn tau_max(g: &Ordinal, ambient: &Ordinal) -> Result<Ordinal> {
    up_set(g, ambient)
        .pop()
        .ok_or_else(|| Error::NoFundParentInBound(g.to_string()))
}

/// The ambient bound `omega^(exp(omega,n-1,k)+1) + 1` under which the
/// equality `S_a = a + C^k_n` holds for `a = exp(omega,n,k)`.
pub fn cnk_ambient(n: usize, k: u64) -> Ordinal {
    assert!(n >= 1, "n starts at 1");
    Ordinal::omega_pow(exp_tower_w(n - 1, k).succ()).succ()
}

/// `a` repeated twice plus omega: the smallest ambient named in the lemma
/// hypothesis.
pub fn doubled_ambient(a: &Ordinal) -> Ordinal {
    add(&mul_nat(a, 2), &Ordinal::omega())
}

/// Ascending fixpoint: seed `{a, a+1}`; every member `l > a` contributes each
/// `g` in its out-neighbourhood unless some member `l' <= l` covers `tau(g)`.
pub fn s_alpha(a: &Ordinal, ambient: &Ordinal, cap: usize) -> Result<BTreeSet<Ordinal>> {
    let mut set: BTreeSet<Ordinal> = [a.clone(), a.succ()].into_iter().collect();
    let mut cursor = a.clone();
    loop {
        let next = set
            .range((std::ops::Bound::Excluded(&cursor), std::ops::Bound::Unbounded))
            .next()
            .cloned();
        let Some(l) = next else { break };
        for g in up_set(&l, ambient) {
            if set.contains(&g) {
                continue;
            }
            let excluded = match tau_max(&g, ambient) {
                Ok(t) => set.range(..=&l).any(|m| covers(m, &t).is_some()),
                Err(_) => false,
            };
            if !excluded {
                set.insert(g);
                if set.len() > cap {
                    return Err(Error::CapExceeded { limit: cap });
                }
            }
        }
        cursor = l;
    }
    Ok(set)
}

/// The tree with trace `{a^k b^(<= f(k))}`, `f(k) = exp2(n, k)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceTree {
    pub n: u32,
    pub hang_lengths: Vec<u64>,
}

impl TraceTree {
    pub fn spine_length(&self) -> usize {
        self.hang_lengths.len()
    }

    pub fn vertex_count(&self) -> u64 {
        1 + self.hang_lengths.iter().map(|h| 1 + h).sum::<u64>()
    }

    /// Spine vertices are `s0..sK`, hang vertices `hK_j`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph T {\n");
        for k in 1..=self.hang_lengths.len() {
            let _ = writeln!(out, "  s{} -> s{} [label=\"a\"];", k - 1, k);
        }
        for (i, &h) in self.hang_lengths.iter().enumerate() {
            let k = i + 1;
            let mut prev = format!("s{k}");
            for j in 1..=h {
                let cur = format!("h{k}_{j}");
                let _ = writeln!(out, "  {prev} -> {cur} [label=\"b\"];");
                prev = cur;
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn trace_tree(n: u32, spine: usize) -> Result<TraceTree> {
    let hang_lengths = (1..=spine as u64)
        .map(|k| {
            let h = exp2(n, k)?;
            if h > DEFAULT_C_CAP {
                return Err(Error::Overflow);
            }
            Ok(h)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceTree { n, hang_lengths })
}

/// Whether the greatest sequence of the covering graph of `omega^^(n+1)`
/// passes through `exp(omega,n,k)` for `k = 1..=kmax`.
pub fn greatest_seq_tail_check(n: usize, kmax: u64) -> Result<bool> {
    greatest_seq_tail_check_capped(n, kmax, DEFAULT_WALK_CAP)
}

pub fn greatest_seq_tail_check_capped(n: usize, kmax: u64, cap: usize) -> Result<bool> {
    let bound = tower(n + 1);
    let targets: Vec<Ordinal> = (1..=kmax).map(|k| exp_tower_w(n, k)).collect();
    let mut cur = Ordinal::zero();
    let mut next = 0;
    for _ in 0..cap {
        if next == targets.len() {
            return Ok(true);
        }
        if cur == targets[next] {
            next += 1;
            continue;
        }
        if cur > targets[next] {
            return Ok(false);
        }
        cur = match greatest_step(&cur, &bound) {
            Some(c) => c,
            None => return Ok(false),
        };
    }
    Err(Error::IterationCapExceeded(cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }
    fn w() -> Ordinal {
        Ordinal::omega()
    }
    fn wp(e: Ordinal) -> Ordinal {
        Ordinal::omega_pow(e)
    }
    fn sum(xs: &[Ordinal]) -> Ordinal {
        xs.iter().fold(Ordinal::zero(), |a, x| add(&a, x))
    }

    #[test]
    fn exp2_values() {
        assert_eq!(exp2(0, 7), Ok(7));
        assert_eq!(exp2(3, 1), Ok(16));
        assert_eq!(exp2(1, 0), Ok(1));
        assert_eq!(exp2(2, 2), Ok(16));
        assert_eq!(exp2(3, 2), Ok(65536));
        assert_eq!(exp2(4, 2), Err(Error::Overflow));
        assert_eq!(exp2(1, 64), Err(Error::Overflow));
    }

    #[test]
    fn c_three_one() {
        let want = vec![
            n(0),
            n(1),
            w(),
            w().succ(),
            wp(n(2)),
            wp(n(2)).succ(),
            add(&wp(n(2)), &w()),
            add(&wp(n(2)), &w()).succ(),
        ];
        assert_eq!(c_set(1, 3).unwrap(), want);
    }

    #[test]
    fn c_two_two() {
        let c = c_set(2, 2).unwrap();
        assert_eq!(c.len(), 16);
        let top = sum(&[wp(w().succ()), wp(w()), w(), n(1)]);
        assert_eq!(c.last(), Some(&top));
        assert!(c.contains(&wp(n(1))));
        assert_eq!(c_set(2, 1).unwrap(), vec![n(0), n(1), w(), w().succ()]);
    }

    #[test]
    fn c_cardinality_and_shape() {
        for (nn, k) in [(0, 5), (1, 3), (2, 2), (3, 1), (1, 4), (2, 1)] {
            let c = c_set(nn, k).unwrap();
            assert_eq!(c.len() as u64, exp2(nn, k).unwrap(), "({nn},{k})");
            assert!(c.iter().all(|x| has_c_shape(x, nn, k)));
        }
        assert_eq!(c_set(4, 2), Err(Error::Overflow));
        assert_eq!(c_set_capped(2, 2, 8), Err(Error::Overflow));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_max(&w(), &wp(n(3))).unwrap(), wp(n(2)));
        assert_eq!(tau_max(&n(1), &wp(n(2))).unwrap(), w());
        let a2 = mul_nat(&wp(n(3)), 2);
        assert_eq!(tau_max(&a2, &wp(n(4))).unwrap(), a2.succ());
        assert_eq!(tau_max(&a2, &wp(n(4)).succ()).unwrap(), wp(n(4)));
        assert!(matches!(tau_max(&n(2), &n(3)), Err(Error::NoFundParentInBound(_))));
    }

    #[test]
    fn s_alpha_equality() {
        for (nn, k) in [(1usize, 1u64), (1, 2), (1, 3), (2, 1)] {
            let a = exp_tower_w(nn, k);
            let got = s_alpha(&a, &cnk_ambient(nn, k), 256).unwrap();
            let want: BTreeSet<Ordinal> = c_set(nn as u32, k).unwrap().iter().map(|x| add(&a, x)).collect();
            assert_eq!(got, want, "({nn},{k})");
        }
    }

    #[test]
    fn s_alpha_seed_and_cap() {
        let a = wp(n(2));
        let s = s_alpha(&a, &cnk_ambient(1, 2), 64).unwrap();
        assert!(s.contains(&a) && s.contains(&a.succ()));
        assert!(matches!(
            s_alpha(&wp(n(3)), &cnk_ambient(1, 3), 3),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn trace_trees() {
        assert_eq!(trace_tree(0, 4).unwrap().hang_lengths, vec![1, 2, 3, 4]);
        assert_eq!(trace_tree(1, 3).unwrap().hang_lengths, vec![2, 4, 8]);
        assert_eq!(trace_tree(3, 1).unwrap().hang_lengths, vec![16]);
        let t = trace_tree(1, 2).unwrap();
        assert_eq!(t.vertex_count(), 1 + 3 + 5);
        let dot = t.to_dot();
        assert!(dot.contains("s0 -> s1 [label=\"a\"]"));
        assert!(dot.contains("h2_3 -> h2_4 [label=\"b\"]"));
    }

    #[test]
    fn tail_sequences() {
        assert_eq!(greatest_seq_tail_check(1, 3), Ok(true));
        assert_eq!(greatest_seq_tail_check(2, 2), Ok(true));
    }

    #[test]
    fn towers_cover_upwards() {
        for nn in 1..=3 {
            for k in 1..=3 {
                let x = exp_tower_w(nn, k);
                let y = exp_tower_w(nn, k + 1);
                assert!(covers(&x, &y).is_some(), "{x} -> {y}");
            }
        }
    }
}
