//! Higher-order stacks over a one-letter alphabet and regular expressions over
//! stack operations.
//!
//! A level-1 stack is a natural number; a level-n stack is a non-empty list of
//! level-(n-1) stacks whose last element is the top. Regular expressions
//! over operations are compiled to an automaton and relations are decided by
//! breadth-first search over `(state, stack)` configurations.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::{add, tower, Ordinal};

pub const DEFAULT_BUDGET: usize = 100_000;
pub const MAX_LEVEL: usize = 4;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Stack {
    Nat(u64),
    Seq(Vec<Stack>),
}

impl Stack {
    /// `[]_n`: the level-n stack holding only empty stacks.
    pub fn empty(level: usize) -> Stack {
        assert!(level >= 1, "stack levels start at 1");
        if level == 1 {
            Stack::Nat(0)
        } else {
            Stack::Seq(vec![Stack::empty(level - 1)])
        }
    }

    pub fn level(&self) -> usize {
        match self {
            Stack::Nat(_) => 1,
            Stack::Seq(xs) => 1 + xs.first().map_or(0, Stack::level),
        }
    }

    /// Checks non-emptiness and uniform child levels.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Stack::Nat(_) => true,
            Stack::Seq(xs) => {
                !xs.is_empty() && xs.iter().all(Stack::is_well_formed) && xs.iter().all(|x| x.level() == xs[0].level())
            }
        }
    }

    fn top_mut(&mut self, level: usize) -> Option<&mut Stack> {
        let mut cur = self;
        loop {
            let l = cur.level();
            if l == level {
                return Some(cur);
            }
            if l < level {
                return None;
            }
            match cur {
                Stack::Seq(xs) => cur = xs.last_mut()?,
                Stack::Nat(_) => return None,
            }
        }
    }

    /// Entries are non-increasing at every level (the shape of a CNF).
    pub fn is_non_increasing(&self) -> bool {
        match self {
            Stack::Nat(_) => true,
            Stack::Seq(xs) => {
                xs.iter().all(Stack::is_non_increasing) && xs.windows(2).all(|w| decode_raw(&w[0]) >= decode_raw(&w[1]))
            }
        }
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stack::Nat(n) => write!(f, "{n}"),
            Stack::Seq(xs) => {
                write!(f, "[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OpAtom {
    Push1,
    Pop1,
    Copy(usize),
    PopK(usize),
    Id,
}

impl OpAtom {
    fn level(self) -> usize {
        match self {
            OpAtom::Push1 | OpAtom::Pop1 => 1,
            OpAtom::Copy(k) | OpAtom::PopK(k) => k,
            OpAtom::Id => 0,
        }
    }
}

impl fmt::Display for OpAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpAtom::Push1 => write!(f, "push1"),
            OpAtom::Pop1 => write!(f, "pop1"),
            OpAtom::Copy(k) => write!(f, "copy{k}"),
            OpAtom::PopK(k) => write!(f, "pop{k}"),
            OpAtom::Id => write!(f, "id"),
        }
    }
}

/// Applies `op` to the top-most sub-stack of its level; `None` when undefined.
pub fn apply_atom(op: OpAtom, s: &Stack) -> Option<Stack> {
    if op == OpAtom::Id {
        return Some(s.clone());
    }
    let mut out = s.clone();
    let target = out.top_mut(op.level())?;
    match (op, target) {
        (OpAtom::Push1, Stack::Nat(n)) => *n += 1,
        (OpAtom::Pop1, Stack::Nat(n)) => *n = n.checked_sub(1)?,
        (OpAtom::Copy(_), Stack::Seq(xs)) => {
            let top = xs.last()?.clone();
            xs.push(top);
        }
        (OpAtom::PopK(_), Stack::Seq(xs)) => {
            if xs.len() < 2 {
                return None;
            }
            xs.pop();
        }
        _ => return None,
    }
    Some(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OpExpr {
    Atom(OpAtom),
    Union(Box<OpExpr>, Box<OpExpr>),
    Concat(Box<OpExpr>, Box<OpExpr>),
    Star(Box<OpExpr>),
    Plus(Box<OpExpr>),
}

impl OpExpr {
    pub fn atom(a: OpAtom) -> Self {
        OpExpr::Atom(a)
    }
    pub fn union(a: OpExpr, b: OpExpr) -> Self {
        OpExpr::Union(Box::new(a), Box::new(b))
    }
    pub fn concat(a: OpExpr, b: OpExpr) -> Self {
        OpExpr::Concat(Box::new(a), Box::new(b))
    }
    pub fn star(a: OpExpr) -> Self {
        OpExpr::Star(Box::new(a))
    }
    pub fn plus(a: OpExpr) -> Self {
        OpExpr::Plus(Box::new(a))
    }

    fn precedence(&self) -> u8 {
        match self {
            OpExpr::Union(..) => 0,
            OpExpr::Concat(..) => 1,
            OpExpr::Star(_) | OpExpr::Plus(_) => 2,
            OpExpr::Atom(_) => 3,
        }
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &OpExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            OpExpr::Atom(a) => write!(f, "{a}"),
            OpExpr::Union(a, b) => {
                wrap(f, a, 0)?;
                write!(f, " + ")?;
                wrap(f, b, 1)
            }
            OpExpr::Concat(a, b) => {
                wrap(f, a, 1)?;
                write!(f, ".")?;
                wrap(f, b, 2)
            }
            OpExpr::Star(a) => {
                wrap(f, a, 3)?;
                write!(f, "*")
            }
            OpExpr::Plus(a) => {
                wrap(f, a, 3)?;
                write!(f, "^+")
            }
        }
    }
}

/// Domain, order and reverse-order expressions for `omega ^^ n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Exprs {
    pub level: usize,
    pub dom: OpExpr,
    pub inc: OpExpr,
    pub dec: OpExpr,
    /// The `copy_n.(id + dec)` block used at this level; absent at level 1.
    pub tail: Option<OpExpr>,
}

pub fn build_exprs(n: usize) -> Result<Exprs> {
    if n == 0 || n > MAX_LEVEL {
        return Err(Error::OutOfRange(format!("stack level {n} not in 1..={MAX_LEVEL}")));
    }
    use OpAtom::*;
    let a = OpExpr::atom;
    let mut e = Exprs {
        level: 1,
        dom: OpExpr::star(a(Push1)),
        inc: OpExpr::plus(a(Push1)),
        dec: OpExpr::plus(a(Pop1)),
        tail: None,
    };
    for level in 2..=n {
        let tail = OpExpr::concat(a(Copy(level)), OpExpr::union(a(Id), e.dec.clone()));
        let tails = OpExpr::star(tail.clone());
        let pops = OpExpr::star(a(PopK(level)));
        let dom = OpExpr::concat(e.dom, tails.clone());
        let inc = OpExpr::concat(
            OpExpr::union(OpExpr::concat(pops.clone(), e.inc), tail.clone()),
            tails.clone(),
        );
        let dec = OpExpr::concat(pops, OpExpr::union(a(PopK(level)), OpExpr::concat(e.dec, tails)));
        e = Exprs {
            level,
            dom,
            inc,
            dec,
            tail: Some(tail),
        };
    }
    Ok(e)
}

/// Thompson automaton over atoms; `None` labels are silent moves.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    trans: Vec<Vec<(Option<OpAtom>, usize)>>,
    start: usize,
    /// silent closure of each state
    closure: Vec<Vec<usize>>,
    accepting: Vec<bool>,
    /// atoms on some path from the state
    future: Vec<HashSet<OpAtom>>,
    /// atoms reachable before any copy or higher pop
    local: Vec<HashSet<OpAtom>>,
}

type Trans = Vec<Vec<(Option<OpAtom>, usize)>>;

impl CompiledExpr {
    pub fn new(e: &OpExpr) -> CompiledExpr {
        let mut trans = Vec::new();
        let (start, accept) = Self::build(e, &mut trans);
        let n = trans.len();
        let mut c = CompiledExpr {
            trans,
            start,
            closure: Vec::with_capacity(n),
            accepting: Vec::with_capacity(n),
            future: Vec::with_capacity(n),
            local: Vec::with_capacity(n),
        };
        for q in 0..n {
            let cl = c.silent_closure(q);
            c.accepting.push(cl.contains(&accept));
            c.closure.push(cl);
            c.future.push(c.collect(q, false));
            c.local.push(c.collect(q, true));
        }
        c
    }

    fn fresh(trans: &mut Trans) -> usize {
        trans.push(Vec::new());
        trans.len() - 1
    }

    fn build(e: &OpExpr, t: &mut Trans) -> (usize, usize) {
        match e {
            OpExpr::Atom(a) => {
                let s = Self::fresh(t);
                let f = Self::fresh(t);
                let label = if *a == OpAtom::Id { None } else { Some(*a) };
                t[s].push((label, f));
                (s, f)
            }
            OpExpr::Union(a, b) => {
                let (s1, f1) = Self::build(a, t);
                let (s2, f2) = Self::build(b, t);
                let s = Self::fresh(t);
                let f = Self::fresh(t);
                t[s].push((None, s1));
                t[s].push((None, s2));
                t[f1].push((None, f));
                t[f2].push((None, f));
                (s, f)
            }
            OpExpr::Concat(a, b) => {
                let (s1, f1) = Self::build(a, t);
                let (s2, f2) = Self::build(b, t);
                t[f1].push((None, s2));
                (s1, f2)
            }
            OpExpr::Star(a) | OpExpr::Plus(a) => {
                let (s1, f1) = Self::build(a, t);
                let s = Self::fresh(t);
                let f = Self::fresh(t);
                t[s].push((None, s1));
                t[f1].push((None, s1));
                t[f1].push((None, f));
                if matches!(e, OpExpr::Star(_)) {
                    t[s].push((None, f));
                }
                (s, f)
            }
        }
    }

    fn silent_closure(&self, q: usize) -> Vec<usize> {
        let mut seen = vec![false; self.trans.len()];
        let mut out = vec![q];
        seen[q] = true;
        let mut i = 0;
        while i < out.len() {
            for &(label, y) in &self.trans[out[i]] {
                if label.is_none() && !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    fn collect(&self, q: usize, stop_at_high: bool) -> HashSet<OpAtom> {
        let mut seen = vec![false; self.trans.len()];
        let mut atoms = HashSet::new();
        let mut stack = vec![q];
        seen[q] = true;
        while let Some(x) = stack.pop() {
            for &(label, y) in &self.trans[x] {
                if let Some(a) = label {
                    atoms.insert(a);
                    if stop_at_high && matches!(a, OpAtom::Copy(_) | OpAtom::PopK(_)) {
                        continue;
                    }
                }
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        atoms
    }

    /// Sound pruning: can `(q, s)` still reach the target stack `t`?
    fn may_reach(&self, q: usize, s: &Stack, t: &Stack) -> bool {
        let future = &self.future[q];
        let any_high_pop = future.iter().any(|a| matches!(a, OpAtom::PopK(_)));
        if !any_high_pop {
            // every position persists; only the top chain changes
            let leaf_may_drop = self.local[q].contains(&OpAtom::Pop1);
            return embeds(s, t, leaf_may_drop);
        }
        if let (Stack::Seq(xs), Stack::Seq(ys)) = (s, t) {
            if !future.contains(&OpAtom::PopK(s.level())) {
                let k = xs.len();
                return k <= ys.len() && xs[..k - 1] == ys[..k - 1];
            }
        }
        true
    }

    fn successors<'a>(&'a self, q: usize, s: &'a Stack) -> impl Iterator<Item = (usize, Stack)> + 'a {
        self.closure[q].iter().flat_map(move |&p| {
            self.trans[p].iter().filter_map(move |&(label, r)| {
                let a = label?;
                apply_atom(a, s).map(|next| (r, next))
            })
        })
    }

    /// Decides `(s, t) ∈ R(e)`. One expansion applies every atom leaving the
    /// silent closure of a configuration.
    pub fn contains(&self, s: &Stack, t: &Stack, budget: usize) -> Membership {
        if s.level() != t.level() {
            return Membership::No;
        }
        if self.accepting[self.start] && s == t {
            return Membership::Yes;
        }
        let mut seen: HashSet<(usize, Stack)> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert((self.start, s.clone()));
        queue.push_back((self.start, s.clone()));
        let mut expansions = 0;
        while let Some((q, st)) = queue.pop_front() {
            if expansions == budget {
                return Membership::BudgetExhausted;
            }
            expansions += 1;
            for (r, next) in self.successors(q, &st) {
                if !self.may_reach(r, &next, t) {
                    continue;
                }
                if self.accepting[r] && next == *t {
                    return Membership::Yes;
                }
                let key = (r, next);
                if !seen.contains(&key) {
                    seen.insert(key.clone());
                    queue.push_back(key);
                }
            }
        }
        Membership::No
    }

    /// Stacks reachable from `start`, in discovery order, within `budget`
    /// expansions. Stacks whose values or lengths exceed `max_size` are
    /// dropped.
    pub fn image(&self, start: &Stack, budget: usize, max_size: u64) -> Vec<Stack> {
        let mut seen: HashSet<(usize, Stack)> = HashSet::new();
        let mut found: HashSet<Stack> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        if self.accepting[self.start] {
            found.insert(start.clone());
            out.push(start.clone());
        }
        seen.insert((self.start, start.clone()));
        queue.push_back((self.start, start.clone()));
        let mut expansions = 0;
        while let Some((q, st)) = queue.pop_front() {
            if expansions == budget {
                break;
            }
            expansions += 1;
            for (r, next) in self.successors(q, &st) {
                if size(&next) > max_size {
                    continue;
                }
                if self.accepting[r] && !found.contains(&next) {
                    found.insert(next.clone());
                    out.push(next.clone());
                }
                let key = (r, next);
                if !seen.contains(&key) {
                    seen.insert(key.clone());
                    queue.push_back(key);
                }
            }
        }
        out
    }
}

fn embeds(s: &Stack, t: &Stack, leaf_may_drop: bool) -> bool {
    match (s, t) {
        (Stack::Nat(a), Stack::Nat(b)) => leaf_may_drop || a <= b,
        (Stack::Seq(xs), Stack::Seq(ys)) => {
            let k = xs.len();
            k <= ys.len() && xs[..k - 1] == ys[..k - 1] && embeds(&xs[k - 1], &ys[k - 1], leaf_may_drop)
        }
        _ => false,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Membership {
    Yes,
    No,
    BudgetExhausted,
}

/// Decides `(s, t) ∈ R(e)` by search over `(state, stack)` pairs.
pub fn in_relation(s: &Stack, t: &Stack, e: &OpExpr, budget: usize) -> Membership {
    CompiledExpr::new(e).contains(s, t, budget)
}

/// `e(start)`, see [`CompiledExpr::image`].
pub fn image(e: &OpExpr, start: &Stack, budget: usize, max_size: u64) -> Vec<Stack> {
    CompiledExpr::new(e).image(start, budget, max_size)
}
fn size(s: &Stack) -> u64 {
    match s {
        Stack::Nat(n) => *n,
        Stack::Seq(xs) => xs.iter().map(size).max().unwrap_or(0).max(xs.len() as u64),
    }
}

/// `S(e) = e([]_level)`, explored breadth-first within `budget` expansions.
pub fn enumerate_domain(e: &OpExpr, level: usize, budget: usize) -> Vec<Stack> {
    image(e, &Stack::empty(level), budget, u64::MAX)
}

/// `[s_0, ..., s_k] -> omega^(s_0) + ... + omega^(s_k)`, recursively.
pub fn decode_raw(s: &Stack) -> Ordinal {
    match s {
        Stack::Nat(n) => Ordinal::nat(*n),
        Stack::Seq(xs) => xs
            .iter()
            .fold(Ordinal::zero(), |acc, x| add(&acc, &Ordinal::omega_pow(decode_raw(x)))),
    }
}

/// Like [`decode_raw`] but shifted at every level `>= 2` by the isomorphism
/// `[1, omega^^m) -> [0, omega^^m)` that lowers finite values by one, so that
/// the empty stack decodes to 0 and the map is onto.
pub fn decode_iso(s: &Stack) -> Ordinal {
    match s {
        Stack::Nat(n) => Ordinal::nat(*n),
        Stack::Seq(xs) => {
            let raw = xs
                .iter()
                .fold(Ordinal::zero(), |acc, x| add(&acc, &Ordinal::omega_pow(decode_iso(x))));
            match raw.as_finite() {
                Some(k) => Ordinal::nat(k - 1),
                None => raw,
            }
        }
    }
}

/// Inverse of [`decode_iso`]; requires `a < omega ^^ level`.
pub fn encode_iso(a: &Ordinal, level: usize) -> Result<Stack> {
    if level == 0 || *a >= tower(level) {
        return Err(Error::OutOfRange(format!("{a} is not below omega^^{level}")));
    }
    if level == 1 {
        return Ok(Stack::Nat(a.as_finite().expect("below omega")));
    }
    let raw = match a.as_finite() {
        Some(k) => Ordinal::nat(k + 1),
        None => a.clone(),
    };
    let xs = raw
        .cnf_terms()
        .iter()
        .map(|e| encode_iso(e, level - 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(Stack::Seq(xs))
}
