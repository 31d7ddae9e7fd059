//! Monadic second-order logic over finite digraphs: formulas, two
//! independent evaluators and the macro library used to describe degree
//! words.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::covering_graph::GraphPrefix;
use crate::degree_word::UPWord;
use crate::error::{Error, Result};

/// Largest vertex count accepted when a formula quantifies over sets.
pub const SO_VERTEX_CAP: usize = 14;
pub const MAX_DEGREE_MACRO: usize = 5;

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Formula {
    True,
    False,
    In(String, String),
    Eq(String, String),
    Edge(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
    /// Quantification over infinite sets; finite evaluation refuses it.
    ExistsInfiniteSet(String, Box<Formula>),
}

pub fn in_set(x: &str, s: &str) -> Formula {
    Formula::In(x.into(), s.into())
}
pub fn eq(x: &str, y: &str) -> Formula {
    Formula::Eq(x.into(), y.into())
}
pub fn edge(x: &str, y: &str) -> Formula {
    Formula::Edge(x.into(), y.into())
}
pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}
pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}
pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}
pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}
pub fn exists(x: &str, f: Formula) -> Formula {
    Formula::Exists(x.into(), Box::new(f))
}
pub fn forall(x: &str, f: Formula) -> Formula {
    Formula::Forall(x.into(), Box::new(f))
}
pub fn exists_set(x: &str, f: Formula) -> Formula {
    Formula::ExistsSet(x.into(), Box::new(f))
}
pub fn forall_set(x: &str, f: Formula) -> Formula {
    Formula::ForallSet(x.into(), Box::new(f))
}

/// Conjunction of all parts; `True` when empty.
pub fn all(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = parts.into_iter();
    match it.next() {
        None => Formula::True,
        Some(first) => it.fold(first, and),
    }
}

/// Disjunction of all parts; `False` when empty.
pub fn any(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = parts.into_iter();
    match it.next() {
        None => Formula::False,
        Some(first) => it.fold(first, or),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum VarKind {
    Vertex,
    Set,
}

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) => 3,
            Formula::Exists(..)
            | Formula::Forall(..)
            | Formula::ExistsSet(..)
            | Formula::ForallSet(..)
            | Formula::ExistsInfiniteSet(..) => 0,
            _ => 4,
        }
    }

    /// Free variables with their sorts.
    pub fn free_vars(&self) -> BTreeMap<String, VarKind> {
        let mut out = BTreeMap::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeMap<String, VarKind>) {
        let mut note = |v: &String, k: VarKind, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone(), k);
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::In(x, s) => {
                note(x, VarKind::Vertex, bound);
                note(s, VarKind::Set, bound);
            }
            Formula::Eq(x, y) | Formula::Edge(x, y) => {
                note(x, VarKind::Vertex, bound);
                note(y, VarKind::Vertex, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f)
            | Formula::Forall(v, f)
            | Formula::ExistsSet(v, f)
            | Formula::ForallSet(v, f)
            | Formula::ExistsInfiniteSet(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_set_quantifier(&self) -> bool {
        match self {
            Formula::ExistsSet(..) | Formula::ForallSet(..) | Formula::ExistsInfiniteSet(..) => true,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.has_set_quantifier(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_set_quantifier() || b.has_set_quantifier()
            }
            _ => false,
        }
    }

    pub fn is_infinite_only(&self) -> bool {
        match self {
            Formula::ExistsInfiniteSet(..) => true,
            Formula::Not(f)
            | Formula::Exists(_, f)
            | Formula::Forall(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallSet(_, f) => f.is_infinite_only(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_infinite_only() || b.is_infinite_only()
            }
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Not(f)
            | Formula::Exists(_, f)
            | Formula::Forall(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallSet(_, f)
            | Formula::ExistsInfiniteSet(_, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, g: &Formula, min: u8| {
            if g.precedence() < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            Formula::True => write!(f, "((E t. t = t) | ~(E t. t = t))"),
            Formula::False => write!(f, "((E t. t = t) & ~(E t. t = t))"),
            Formula::In(x, s) => write!(f, "{x} in {s}"),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Edge(x, y) => write!(f, "{x} -> {y}"),
            Formula::Not(g) => {
                write!(f, "~")?;
                wrap(f, g, 3)
            }
            Formula::And(a, b) => {
                wrap(f, a, 2)?;
                write!(f, " & ")?;
                wrap(f, b, 3)
            }
            Formula::Or(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " | ")?;
                wrap(f, b, 2)
            }
            Formula::Implies(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " => ")?;
                wrap(f, b, 0)
            }
            Formula::Exists(v, g) | Formula::ExistsSet(v, g) => write!(f, "E {v}. {g}"),
            Formula::Forall(v, g) | Formula::ForallSet(v, g) => write!(f, "A {v}. {g}"),
            Formula::ExistsInfiniteSet(v, g) => write!(f, "E inf {v}. {g}"),
        }
    }
}

/// Standard satisfaction by exhaustive enumeration of quantified values.
pub fn eval(g: &GraphPrefix, f: &Formula) -> Result<bool> {
    check_closed(f)?;
    if f.is_infinite_only() {
        return Err(Error::InfiniteOnly);
    }
    if f.has_set_quantifier() && g.n > SO_VERTEX_CAP {
        return Err(Error::TooLarge(g.n));
    }
    let mut env = Env::default();
    Ok(sat(g, f, &mut env))
}

fn check_closed(f: &Formula) -> Result<()> {
    match f.free_vars().into_keys().next() {
        Some(v) => Err(Error::FreeVariable(v)),
        None => Ok(()),
    }
}

#[derive(Default)]
struct Env {
    vertex: HashMap<String, Vec<usize>>,
    set: HashMap<String, Vec<u64>>,
}

impl Env {
    fn v(&self, x: &str) -> usize {
        *self.vertex[x].last().expect("bound")
    }
    fn s(&self, x: &str) -> u64 {
        *self.set[x].last().expect("bound")
    }
}

fn sat(g: &GraphPrefix, f: &Formula, env: &mut Env) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::In(x, s) => env.s(s) >> env.v(x) & 1 == 1,
        Formula::Eq(x, y) => env.v(x) == env.v(y),
        Formula::Edge(x, y) => g.has_edge(env.v(x), env.v(y)),
        Formula::Not(a) => !sat(g, a, env),
        Formula::And(a, b) => sat(g, a, env) && sat(g, b, env),
        Formula::Or(a, b) => sat(g, a, env) || sat(g, b, env),
        Formula::Implies(a, b) => !sat(g, a, env) || sat(g, b, env),
        Formula::Exists(x, a) | Formula::Forall(x, a) => {
            let want = matches!(f, Formula::Exists(..));
            let mut result = !want;
            for v in 0..g.n {
                env.vertex.entry(x.clone()).or_default().push(v);
                let r = sat(g, a, env);
                env.vertex.get_mut(x).expect("pushed").pop();
                if r == want {
                    result = want;
                    break;
                }
            }
            result
        }
        Formula::ExistsSet(x, a) | Formula::ForallSet(x, a) => {
            let want = matches!(f, Formula::ExistsSet(..));
            let mut result = !want;
            for m in 0u64..(1u64 << g.n) {
                env.set.entry(x.clone()).or_default().push(m);
                let r = sat(g, a, env);
                env.set.get_mut(x).expect("pushed").pop();
                if r == want {
                    result = want;
                    break;
                }
            }
            result
        }
        Formula::ExistsInfiniteSet(..) => unreachable!("rejected before evaluation"),
    }
}

/// A set of assignments over an ordered list of variables.
struct Relation {
    vars: Vec<(String, VarKind)>,
    rows: HashSet<Vec<u64>>,
}

fn domain(g: &GraphPrefix, k: VarKind) -> u64 {
    match k {
        VarKind::Vertex => g.n as u64,
        VarKind::Set => 1u64 << g.n,
    }
}

fn all_rows(g: &GraphPrefix, vars: &[(String, VarKind)]) -> Vec<Vec<u64>> {
    let mut rows = vec![Vec::new()];
    for (_, k) in vars {
        let d = domain(g, *k);
        rows = rows
            .into_iter()
            .flat_map(|r| {
                (0..d).map(move |v| {
                    let mut r = r.clone();
                    r.push(v);
                    r
                })
            })
            .collect();
    }
    rows
}

fn relation(g: &GraphPrefix, f: &Formula) -> Relation {
    let vars: Vec<(String, VarKind)> = f.free_vars().into_iter().collect();
    let pos = |name: &str, vars: &[(String, VarKind)]| vars.iter().position(|(v, _)| v == name).expect("free");
    let filter = |vars: Vec<(String, VarKind)>, keep: &dyn Fn(&[u64]) -> bool| {
        let rows = all_rows(g, &vars).into_iter().filter(|r| keep(r)).collect();
        Relation { vars, rows }
    };
    match f {
        Formula::True => filter(vars, &|_| true),
        Formula::False => filter(vars, &|_| false),
        Formula::In(x, s) => {
            let (i, j) = (pos(x, &vars), pos(s, &vars));
            filter(vars, &|r| r[j] >> r[i] & 1 == 1)
        }
        Formula::Eq(x, y) => {
            let (i, j) = (pos(x, &vars), pos(y, &vars));
            filter(vars, &|r| r[i] == r[j])
        }
        Formula::Edge(x, y) => {
            let (i, j) = (pos(x, &vars), pos(y, &vars));
            filter(vars, &|r| g.edges.contains(&(r[i] as usize, r[j] as usize)))
        }
        Formula::Not(a) => {
            let ra = extend(g, relation(g, a), &vars);
            filter(vars, &|r| !ra.rows.contains(r))
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let ra = extend(g, relation(g, a), &vars);
            let rb = extend(g, relation(g, b), &vars);
            let keep = |r: &[u64]| {
                let (x, y) = (ra.rows.contains(r), rb.rows.contains(r));
                match f {
                    Formula::And(..) => x && y,
                    Formula::Or(..) => x || y,
                    _ => !x || y,
                }
            };
            filter(vars, &keep)
        }
        Formula::Exists(v, a) | Formula::Forall(v, a) | Formula::ExistsSet(v, a) | Formula::ForallSet(v, a) => {
            let kind = if matches!(f, Formula::Exists(..) | Formula::Forall(..)) {
                VarKind::Vertex
            } else {
                VarKind::Set
            };
            let mut inner_vars = vars.clone();
            inner_vars.push((v.clone(), kind));
            let ra = extend(g, relation(g, a), &inner_vars);
            let d = domain(g, kind);
            let universal = matches!(f, Formula::Forall(..) | Formula::ForallSet(..));
            let keep = |r: &[u64]| {
                let mut hits = (0..d).map(|x| {
                    let mut full = r.to_vec();
                    full.push(x);
                    ra.rows.contains(&full)
                });
                if universal {
                    hits.all(|h| h)
                } else {
                    hits.any(|h| h)
                }
            };
            filter(vars, &keep)
        }
        Formula::ExistsInfiniteSet(..) => filter(vars, &|_| false),
    }
}

/// Re-expresses `r` over `vars`, a superset of its variables, in that order.
fn extend(g: &GraphPrefix, r: Relation, vars: &[(String, VarKind)]) -> Relation {
    let map: Vec<Option<usize>> = r
        .vars
        .iter()
        .map(|(v, _)| vars.iter().position(|(w, _)| w == v))
        .collect();
    let rows = all_rows(g, vars)
        .into_iter()
        .filter(|row| {
            let proj: Vec<u64> = map.iter().map(|i| row[i.expect("superset")]).collect();
            r.rows.contains(&proj)
        })
        .collect();
    Relation {
        vars: vars.to_vec(),
        rows,
    }
}

/// Independent evaluator: computes the satisfying assignments of every
/// subformula bottom-up. Meant for tiny graphs.
pub fn eval_relational(g: &GraphPrefix, f: &Formula) -> Result<bool> {
    check_closed(f)?;
    if f.is_infinite_only() {
        return Err(Error::InfiniteOnly);
    }
    if f.has_set_quantifier() && g.n > SO_VERTEX_CAP {
        return Err(Error::TooLarge(g.n));
    }
    Ok(!relation(g, f).rows.is_empty())
}

/// Fresh-name source for macro expansion.
#[derive(Default, Debug)]
pub struct Macros {
    counter: usize,
}

impl Macros {
    pub fn new() -> Self {
        Macros::default()
    }

    fn fresh(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{base}{}", self.counter)
    }

    /// `Y` contains `x` and is closed under edges that stay inside `within`
    /// (the whole graph when `None`).
    fn closed(&mut self, y: &str, within: Option<&str>, backwards: bool) -> Formula {
        let a = self.fresh("a");
        let b = self.fresh("b");
        let step = if backwards { edge(&b, &a) } else { edge(&a, &b) };
        let guard = match within {
            Some(x) => and(step, in_set(&b, x)),
            None => step,
        };
        forall(&a, forall(&b, implies(and(in_set(&a, y), guard), in_set(&b, y))))
    }

    /// `closed(Y)` for `Y` under forward edges inside `X`.
    pub fn closed_f(&mut self, y: &str, x: &str) -> Formula {
        self.closed(y, Some(x), false)
    }

    /// `p ->* q`.
    pub fn reach(&mut self, p: &str, q: &str) -> Formula {
        let y = self.fresh("Y");
        let closed = self.closed(&y, None, false);
        forall_set(&y, implies(and(in_set(p, &y), closed), in_set(q, &y)))
    }

    /// `q` is the greatest out-neighbour of `p`.
    pub fn tau(&mut self, p: &str, q: &str) -> Formula {
        let r = self.fresh("r");
        let reach = self.reach(&r, q);
        and(edge(p, q), forall(&r, implies(edge(p, &r), reach)))
    }

    /// Out-degree of `p` is at least `k`.
    pub fn delta_k(&mut self, k: usize, p: &str) -> Formula {
        let qs: Vec<String> = (0..k).map(|_| self.fresh("q")).collect();
        let mut body: Vec<Formula> = qs.iter().map(|q| edge(p, q)).collect();
        for i in 0..k {
            for j in i + 1..k {
                body.push(not(eq(&qs[i], &qs[j])));
            }
        }
        qs.iter().rev().fold(all(body), |f, q| exists(q, f))
    }

    /// Out-degree of `p` is exactly `k`.
    pub fn degree(&mut self, k: usize, p: &str) -> Formula {
        if k == 0 {
            return not(self.delta_k(1, p));
        }
        let at_least = self.delta_k(k, p);
        let more = self.delta_k(k + 1, p);
        and(at_least, not(more))
    }

    fn subset(&mut self, y: &str, x: &str) -> Formula {
        let z = self.fresh("z");
        forall(&z, implies(in_set(&z, y), in_set(&z, x)))
    }

    fn anchor(&mut self, x: &str, p: &str, backwards: bool) -> Formula {
        let q = self.fresh("q");
        let y = self.fresh("Y");
        let sub = self.subset(&y, x);
        let closed = self.closed(&y, Some(x), backwards);
        forall(
            &q,
            implies(
                in_set(&q, x),
                forall_set(&y, implies(and(and(sub, in_set(p, &y)), closed), in_set(&q, &y))),
            ),
        )
    }

    /// Every vertex of `X` is reachable from `p` along a path inside `X`.
    pub fn root_f(&mut self, x: &str, p: &str) -> Formula {
        self.anchor(x, p, false)
    }

    /// `p` is reachable from every vertex of `X` along a path inside `X`.
    pub fn end_f(&mut self, x: &str, p: &str) -> Formula {
        self.anchor(x, p, true)
    }

    /// `p` is a root of the whole graph.
    pub fn root_g(&mut self, p: &str) -> Formula {
        let q = self.fresh("q");
        let reach = self.reach(p, &q);
        forall(&q, reach)
    }

    /// `|X| = k`.
    pub fn size_k(&mut self, k: usize, x: &str) -> Formula {
        let qs: Vec<String> = (0..k).map(|_| self.fresh("q")).collect();
        let q = self.fresh("q");
        let mut body: Vec<Formula> = qs.iter().map(|qi| in_set(qi, x)).collect();
        for i in 0..k {
            for j in i + 1..k {
                body.push(not(eq(&qs[i], &qs[j])));
            }
        }
        body.push(forall(&q, implies(in_set(&q, x), any(qs.iter().map(|qi| eq(&q, qi))))));
        qs.iter().rev().fold(all(body), |f, qi| exists(qi, f))
    }

    /// At most one `y` in `X` with `edge(y)`.
    fn at_most_one(&mut self, x: &str, edge_to: impl Fn(&str) -> Formula) -> Formula {
        let a = self.fresh("u");
        let b = self.fresh("u");
        forall(
            &a,
            forall(
                &b,
                implies(
                    all([in_set(&a, x), in_set(&b, x), edge_to(&a), edge_to(&b)]),
                    eq(&a, &b),
                ),
            ),
        )
    }

    /// `X` is the vertex set of a finite directed path: a root with no
    /// predecessor in `X` reaching all of `X`, at most one successor per
    /// vertex, exactly one predecessor for every other vertex.
    pub fn inline_f(&mut self, x: &str) -> Formula {
        let r = self.fresh("r");
        let p = self.fresh("p");
        let q = self.fresh("q");
        let root = self.root_f(x, &r);
        let no_pred = not(exists(&q, and(in_set(&q, x), edge(&q, &r))));
        let one_pred = exists(&q, and(in_set(&q, x), edge(&q, &p)));
        let pred_unique = self.at_most_one(x, |u| edge(u, &p));
        let succ_unique = self.at_most_one(x, |u| edge(&p, u));
        exists(
            &r,
            all([
                in_set(&r, x),
                root,
                no_pred,
                forall(
                    &p,
                    implies(
                        in_set(&p, x),
                        and(or(eq(&p, &r), and(one_pred, pred_unique)), succ_unique),
                    ),
                ),
            ]),
        )
    }

    /// Characteristic formula of a degree word. Finite words give a chain of
    /// greatest steps from the root with the listed exact degrees; ultimately
    /// periodic words give the infinite-set form, which only infinite graphs
    /// can satisfy.
    pub fn phi_u(&mut self, u: &UPWord) -> Formula {
        if u.is_finite() {
            self.phi_finite(&u.prefix)
        } else {
            self.phi_periodic(u)
        }
    }

    fn phi_finite(&mut self, word: &[u32]) -> Formula {
        if word.is_empty() {
            return not(exists("x", eq("x", "x")));
        }
        let ps: Vec<String> = (0..word.len()).map(|_| self.fresh("p")).collect();
        // innermost first: exists p_i (link_i & deg_i & rest)
        let mut body = Formula::True;
        for i in (0..word.len()).rev() {
            let link = if i == 0 {
                self.root_g(&ps[0])
            } else {
                self.tau(&ps[i - 1], &ps[i])
            };
            let deg = self.degree(word[i] as usize, &ps[i]);
            let inner = if i + 1 == word.len() {
                and(link, deg)
            } else {
                all([link, deg, body])
            };
            body = exists(&ps[i], inner);
        }
        body
    }

    fn phi_periodic(&mut self, u: &UPWord) -> Formula {
        let n = u.prefix.iter().chain(&u.period).copied().max().unwrap_or(0) as usize;
        let ps: Vec<String> = (0..u.prefix.len()).map(|_| self.fresh("p")).collect();
        let qs: Vec<String> = (0..u.period.len()).map(|_| self.fresh("q")).collect();
        let v = self.fresh("V");
        let mut parts = Vec::new();
        let first = ps.first().unwrap_or(&qs[0]).clone();
        parts.push(self.root_g(&first));
        for (i, &d) in u.prefix.iter().enumerate() {
            let next = ps.get(i + 1).unwrap_or(&qs[0]).clone();
            parts.push(self.tau(&ps[i], &next));
            parts.push(self.degree(d as usize, &ps[i]));
        }
        parts.push(self.root_f(&v, &qs[0]));
        for (i, &d) in u.period.iter().enumerate() {
            if i + 1 < qs.len() {
                parts.push(self.tau(&qs[i], &qs[i + 1]));
            }
            parts.push(self.degree(d as usize, &qs[i]));
        }
        parts.push(self.inline_f(&v));
        let q = self.fresh("q");
        let x = self.fresh("X");
        let q2 = self.fresh("q");
        let sub = self.subset(&x, &v);
        let window = all([
            sub,
            in_set(&q2, &x),
            self.inline_f(&x),
            self.size_k(u.period.len() + 1, &x),
            self.root_f(&x, &q),
            self.end_f(&x, &q2),
            all((1..=n).map(|k| {
                let a = self.delta_k(k, &q);
                let b = self.delta_k(k, &q2);
                implies(a, b)
            })),
        ]);
        parts.push(forall(&q, implies(in_set(&q, &v), exists_set(&x, exists(&q2, window)))));
        let members = all(qs.iter().map(|qi| in_set(qi, &v)));
        let body = and(members, all(parts));
        let body = qs.iter().rev().fold(body, |f, qi| exists(qi, f));
        let body = Formula::ExistsInfiniteSet(v, Box::new(body));
        ps.iter().rev().fold(body, |f, p| exists(p, f))
    }
}

/// `eval(G, phi_u(u))`; ultimately periodic words are refused.
pub fn eval_phi_u(g: &GraphPrefix, u: &UPWord) -> Result<bool> {
    let f = Macros::new().phi_u(u);
    eval(g, &f)
}

/// Vertex sets of `g` (as bit masks) inducing a directed path.
pub fn induces_path(g: &GraphPrefix, mask: u64) -> bool {
    let vs: Vec<usize> = (0..g.n).filter(|&v| mask >> v & 1 == 1).collect();
    if vs.is_empty() {
        return false;
    }
    let inside: BTreeSet<usize> = vs.iter().copied().collect();
    let ins = |v: usize| inside.iter().filter(|&&u| g.has_edge(u, v)).count();
    let outs = |v: usize| inside.iter().filter(|&&w| g.has_edge(v, w)).count();
    let roots: Vec<usize> = vs.iter().copied().filter(|&v| ins(v) == 0).collect();
    if roots.len() != 1 || vs.iter().any(|&v| ins(v) > 1 || outs(v) > 1) {
        return false;
    }
    let mut cur = roots[0];
    let mut seen = 1;
    while let Some(&next) = inside.iter().find(|&&w| g.has_edge(cur, w)) {
        cur = next;
        seen += 1;
        if seen > vs.len() {
            return false;
        }
    }
    seen == vs.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering_graph::{build_prefix, reach_greatest};
    use crate::degree_word::degree_word;
    use crate::ordinal::Ordinal;

    fn finite(m: u64) -> GraphPrefix {
        build_prefix(&Ordinal::nat(m), m as usize + 1).unwrap()
    }

    /// Evaluates `f` with its free variables fixed by wrapping it in
    /// quantifiers guarded by equalities against named constants.
    fn at(g: &GraphPrefix, f: &Formula, vs: &[(&str, usize)], sets: &[(&str, u64)]) -> bool {
        let mut env = Env::default();
        for (x, v) in vs {
            env.vertex.insert(x.to_string(), vec![*v]);
        }
        for (x, m) in sets {
            env.set.insert(x.to_string(), vec![*m]);
        }
        sat(g, f, &mut env)
    }

    #[test]
    fn nonempty() {
        let f = exists("x", eq("x", "x"));
        assert_eq!(eval(&finite(3), &f), Ok(true));
        assert_eq!(eval(&finite(0), &f), Ok(false));
    }

    #[test]
    fn errors() {
        assert_eq!(eval(&finite(2), &eq("x", "x")), Err(Error::FreeVariable("x".into())));
        let big = GraphPrefix::from_edges(15, []);
        let f = exists_set("X", Formula::True);
        assert_eq!(eval(&big, &f), Err(Error::TooLarge(15)));
        assert_eq!(eval(&big, &exists("x", eq("x", "x"))), Ok(true));
    }

    #[test]
    fn well_order_of_reachability() {
        let g = finite(4);
        let mut m = Macros::new();
        let lt = |m: &mut Macros, x: &str, y: &str| and(m.reach(x, y), not(eq(x, y)));
        let irreflexive = forall("x", not(lt(&mut m, "x", "x")));
        let transitive = forall(
            "x",
            forall(
                "y",
                forall(
                    "z",
                    implies(and(lt(&mut m, "x", "y"), lt(&mut m, "y", "z")), lt(&mut m, "x", "z")),
                ),
            ),
        );
        let total = forall(
            "x",
            forall("y", any([lt(&mut m, "x", "y"), eq("x", "y"), lt(&mut m, "y", "x")])),
        );
        let least = forall_set(
            "X",
            implies(
                exists("x", in_set("x", "X")),
                exists(
                    "x",
                    and(
                        in_set("x", "X"),
                        forall("y", implies(in_set("y", "X"), not(lt(&mut m, "y", "x")))),
                    ),
                ),
            ),
        );
        for f in [irreflexive, transitive, total, least] {
            assert_eq!(eval(&g, &f), Ok(true), "{f}");
        }
    }

    #[test]
    fn degree_at_zero() {
        let g = finite(3);
        let mut m = Macros::new();
        let f = exists("p", and(not(exists("q", edge("q", "p"))), m.degree(1, "p")));
        assert_eq!(eval(&g, &f), Ok(true));
    }

    #[test]
    fn delta_matches_out_degree() {
        let g = build_prefix(&crate::ordinal::tower(2), 3).unwrap();
        assert!(g.n <= SO_VERTEX_CAP);
        let mut m = Macros::new();
        for k in 0..=3 {
            let exact = m.degree(k, "p");
            let ge = m.delta_k(k, "p");
            for v in 0..g.n {
                let d = g.out_degree(v);
                assert_eq!(at(&g, &ge, &[("p", v)], &[]), d >= k);
                assert_eq!(at(&g, &exact, &[("p", v)], &[]), d == k);
            }
        }
    }

    #[test]
    fn tau_matches_reach_greatest() {
        let g = build_prefix(&crate::ordinal::tower(2), 3).unwrap();
        let mut m = Macros::new();
        let tau = m.tau("p", "q");
        for p in g.interior.iter().copied() {
            let got: Vec<usize> = (0..g.n).filter(|&q| at(&g, &tau, &[("p", p), ("q", q)], &[])).collect();
            match reach_greatest(&g, p).unwrap() {
                Some(q) => assert_eq!(got, vec![q]),
                None => assert!(got.len() <= 1),
            }
        }
    }

    #[test]
    fn set_macros_match_semantics() {
        let graphs = [
            finite(5),
            GraphPrefix::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]),
            GraphPrefix::from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 4)]),
        ];
        let mut m = Macros::new();
        let inline = m.inline_f("X");
        let size2 = m.size_k(2, "X");
        let root = m.root_f("X", "p");
        for g in &graphs {
            for mask in 0u64..(1 << g.n) {
                assert_eq!(at(g, &inline, &[], &[("X", mask)]), induces_path(g, mask), "{mask:b}");
                assert_eq!(at(g, &size2, &[], &[("X", mask)]), mask.count_ones() == 2);
                for p in 0..g.n {
                    let want = mask >> p & 1 == 1 && {
                        // reachability inside X from p
                        let mut seen = 1u64 << p;
                        loop {
                            let next = (0..g.n).fold(seen, |acc, v| {
                                if seen >> v & 1 == 1 {
                                    g.out(v).filter(|w| mask >> w & 1 == 1).fold(acc, |a, w| a | 1 << w)
                                } else {
                                    acc
                                }
                            });
                            if next == seen {
                                break seen & mask == mask;
                            }
                            seen = next;
                        }
                    };
                    // root_f only constrains members of X; p outside X is
                    // vacuous when X is empty
                    if mask >> p & 1 == 1 {
                        assert_eq!(at(g, &root, &[("p", p)], &[("X", mask)]), want);
                    }
                }
            }
        }
    }

    #[test]
    fn phi_u_identity_matrix() {
        for a in 1..=6u64 {
            for b in 1..=6u64 {
                let u = degree_word(&Ordinal::nat(b)).unwrap();
                assert_eq!(eval_phi_u(&finite(a), &u), Ok(a == b), "G_{a} vs u({b})");
            }
        }
        let empty = degree_word(&Ordinal::zero()).unwrap();
        assert_eq!(eval_phi_u(&finite(0), &empty), Ok(true));
    }

    #[test]
    fn periodic_words_are_infinite_only() {
        let u = degree_word(&Ordinal::omega()).unwrap();
        let f = Macros::new().phi_u(&u);
        assert!(f.is_infinite_only());
        assert!(f.free_vars().is_empty());
        assert_eq!(eval(&finite(3), &f), Err(Error::InfiniteOnly));
        let u = degree_word(&crate::ordinal::tower(2)).unwrap();
        assert!(Macros::new().phi_u(&u).free_vars().is_empty());
    }

    #[test]
    fn evaluators_agree_on_fixed_formulas() {
        let g = GraphPrefix::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let mut m = Macros::new();
        let fs = [
            exists("x", forall("y", not(edge("y", "x")))),
            forall_set("X", exists("x", or(in_set("x", "X"), not(in_set("x", "X"))))),
            exists("p", m.degree(2, "p")),
            exists("p", exists("q", m.tau("p", "q"))),
            exists_set("X", m.inline_f("X")),
        ];
        for f in &fs {
            assert_eq!(eval(&g, f), eval_relational(&g, f), "{f}");
        }
    }
}
