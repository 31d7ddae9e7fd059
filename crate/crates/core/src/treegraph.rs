//! The treegraph of a finite graph, path expressions with maximal runs and
//! successor shortcuts, and the interpretation that rebuilds the covering
//! graph of `omega^a` from the treegraph of the covering graph of `a`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::covering_graph::{build_prefix, GraphPrefix};
use crate::error::{Error, Result};
use crate::fundamental::covers;
use crate::ordinal::{add, Ordinal};

pub const DEFAULT_TREE_CAP: usize = 200_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum EdgeLabel {
    Rel,
    Hash,
}

/// A finite edge-labelled graph with forward and backward adjacency.
#[derive(Clone, Debug, Default)]
pub struct LabeledGraph {
    pub out: Vec<Vec<(EdgeLabel, usize)>>,
    pub inc: Vec<Vec<(EdgeLabel, usize)>>,
}

impl LabeledGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, EdgeLabel, usize)>) -> Self {
        let mut g = LabeledGraph {
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
        };
        for (u, l, v) in edges {
            g.out[u].push((l, v));
            g.inc[v].push((l, u));
        }
        g
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    /// Every edge of `g` labelled `Rel`.
    pub fn from_prefix(g: &GraphPrefix) -> Self {
        LabeledGraph::new(g.n, g.edges.iter().map(|&(u, v)| (u, EdgeLabel::Rel, v)))
    }

    fn rel_closure(&self, x: usize) -> HashSet<usize> {
        let mut seen: HashSet<usize> = [x].into_iter().collect();
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for &(l, z) in &self.out[y] {
                if l == EdgeLabel::Rel && seen.insert(z) {
                    stack.push(z);
                }
            }
        }
        seen
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Token {
    Fwd(EdgeLabel),
    Bwd(EdgeLabel),
    /// A longest run of the inner token.
    Maximal(Box<Token>),
    /// The immediate rel-successor.
    SStep,
}

impl Token {
    fn step(&self, g: &LabeledGraph, x: usize) -> Vec<usize> {
        match self {
            Token::Fwd(l) => g.out[x].iter().filter(|e| e.0 == *l).map(|e| e.1).collect(),
            Token::Bwd(l) => g.inc[x].iter().filter(|e| e.0 == *l).map(|e| e.1).collect(),
            Token::Maximal(t) => {
                let mut seen: BTreeSet<usize> = [x].into_iter().collect();
                let mut stack = vec![x];
                let mut ends = Vec::new();
                while let Some(y) = stack.pop() {
                    let next = t.step(g, y);
                    if next.is_empty() {
                        ends.push(y);
                    }
                    for z in next {
                        if seen.insert(z) {
                            stack.push(z);
                        }
                    }
                }
                ends.sort();
                ends
            }
            Token::SStep => {
                let succ: Vec<usize> = Token::Fwd(EdgeLabel::Rel).step(g, x);
                let closures: Vec<HashSet<usize>> = succ.iter().map(|&r| g.rel_closure(r)).collect();
                succ.iter()
                    .enumerate()
                    .filter(|&(i, r)| closures.iter().enumerate().all(|(j, c)| j == i || !c.contains(r)))
                    .map(|(_, &r)| r)
                    .collect()
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PathExpr {
    Tok(Token),
    Concat(Vec<PathExpr>),
    Union(Vec<PathExpr>),
    Star(Box<PathExpr>),
}

impl PathExpr {
    pub fn tok(t: Token) -> Self {
        PathExpr::Tok(t)
    }
    pub fn fwd(l: EdgeLabel) -> Self {
        PathExpr::Tok(Token::Fwd(l))
    }
    pub fn bwd(l: EdgeLabel) -> Self {
        PathExpr::Tok(Token::Bwd(l))
    }
    pub fn maximal(t: Token) -> Self {
        PathExpr::Tok(Token::Maximal(Box::new(t)))
    }
    pub fn star(e: PathExpr) -> Self {
        PathExpr::Star(Box::new(e))
    }
}

/// Automaton over tokens; `None` labels are silent.
struct TokenNfa {
    trans: Vec<Vec<(Option<Token>, usize)>>,
    start: usize,
    accept: usize,
}

impl TokenNfa {
    fn compile(e: &PathExpr) -> Self {
        let mut trans = Vec::new();
        let (start, accept) = Self::build(e, &mut trans);
        TokenNfa { trans, start, accept }
    }

    fn fresh(t: &mut Vec<Vec<(Option<Token>, usize)>>) -> usize {
        t.push(Vec::new());
        t.len() - 1
    }

    fn build(e: &PathExpr, t: &mut Vec<Vec<(Option<Token>, usize)>>) -> (usize, usize) {
        match e {
            PathExpr::Tok(tok) => {
                let s = Self::fresh(t);
                let f = Self::fresh(t);
                t[s].push((Some(tok.clone()), f));
                (s, f)
            }
            PathExpr::Concat(parts) => {
                let s = Self::fresh(t);
                let mut cur = s;
                for p in parts {
                    let (ps, pf) = Self::build(p, t);
                    t[cur].push((None, ps));
                    cur = pf;
                }
                (s, cur)
            }
            PathExpr::Union(parts) => {
                let s = Self::fresh(t);
                let f = Self::fresh(t);
                for p in parts {
                    let (ps, pf) = Self::build(p, t);
                    t[s].push((None, ps));
                    t[pf].push((None, f));
                }
                (s, f)
            }
            PathExpr::Star(inner) => {
                let (is, ifin) = Self::build(inner, t);
                let s = Self::fresh(t);
                let f = Self::fresh(t);
                t[s].push((None, is));
                t[s].push((None, f));
                t[ifin].push((None, is));
                t[ifin].push((None, f));
                (s, f)
            }
        }
    }
}

/// All vertices `q` joined to `p` by a path matching `e`, ascending.
pub fn eval_path(g: &LabeledGraph, e: &PathExpr, p: usize) -> Vec<usize> {
    let nfa = TokenNfa::compile(e);
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = BTreeSet::new();
    seen.insert((nfa.start, p));
    queue.push_back((nfa.start, p));
    while let Some((q, x)) = queue.pop_front() {
        if q == nfa.accept {
            out.insert(x);
        }
        for (label, r) in &nfa.trans[q] {
            let targets = match label {
                None => vec![x],
                Some(tok) => tok.step(g, x),
            };
            for y in targets {
                if seen.insert((*r, y)) {
                    queue.push_back((*r, y));
                }
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Closure {
    /// Sequences reached from the root by following edges forwards.
    Forward,
    /// Every sequence over the base vertices, i.e. whole copies of the base.
    Full,
}

#[derive(Clone, Debug)]
pub struct TreeGraphPrefix {
    pub base: GraphPrefix,
    pub depth: usize,
    /// Vertex id to base-vertex sequence.
    pub seqs: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
    pub rel: BTreeSet<(usize, usize)>,
    pub hash: BTreeSet<(usize, usize)>,
    pub root: usize,
}

impl TreeGraphPrefix {
    pub fn vertex_count(&self) -> usize {
        self.seqs.len()
    }

    pub fn labeled(&self) -> LabeledGraph {
        LabeledGraph::new(
            self.seqs.len(),
            self.rel
                .iter()
                .map(|&(u, v)| (u, EdgeLabel::Rel, v))
                .chain(self.hash.iter().map(|&(u, v)| (u, EdgeLabel::Hash, v))),
        )
    }

    fn name(&self, v: usize) -> String {
        self.seqs[v].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
    }

    /// Rel edges solid, hash edges dotted.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph treegraph {\n");
        for v in 0..self.seqs.len() {
            let _ = writeln!(out, "  v{v} [label=\"{}\"];", self.name(v));
        }
        for &(u, v) in &self.rel {
            let _ = writeln!(out, "  v{u} -> v{v};");
        }
        for &(u, v) in &self.hash {
            let _ = writeln!(out, "  v{u} -> v{v} [style=dotted];");
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_treegraph(g: &GraphPrefix, depth: usize) -> Result<TreeGraphPrefix> {
    build_treegraph_with(g, depth, Closure::Full, DEFAULT_TREE_CAP)
}

pub fn build_treegraph_with(g: &GraphPrefix, depth: usize, closure: Closure, cap: usize) -> Result<TreeGraphPrefix> {
    let mut seqs: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut push = |s: Vec<usize>, seqs: &mut Vec<Vec<usize>>| -> Result<bool> {
        if index.contains_key(&s) {
            return Ok(false);
        }
        if seqs.len() >= cap {
            return Err(Error::CapExceeded { limit: cap });
        }
        index.insert(s.clone(), seqs.len());
        seqs.push(s);
        Ok(true)
    };
    if depth > 0 && g.n > 0 {
        match closure {
            Closure::Forward => {
                push(vec![g.root], &mut seqs)?;
                let mut i = 0;
                while i < seqs.len() {
                    let s = seqs[i].clone();
                    let (w, u) = s.split_at(s.len() - 1);
                    for v in g.out(u[0]) {
                        let mut t = w.to_vec();
                        t.push(v);
                        push(t, &mut seqs)?;
                    }
                    if s.len() < depth {
                        let mut t = s.clone();
                        t.push(u[0]);
                        push(t, &mut seqs)?;
                    }
                    i += 1;
                }
            }
            Closure::Full => {
                let mut layer: Vec<Vec<usize>> = vec![vec![]];
                for _ in 0..depth {
                    let mut next = Vec::new();
                    for w in &layer {
                        for u in 0..g.n {
                            let mut t = w.clone();
                            t.push(u);
                            push(t.clone(), &mut seqs)?;
                            next.push(t);
                        }
                    }
                    layer = next;
                }
            }
        }
    }
    let index: HashMap<Vec<usize>, usize> = seqs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut rel = BTreeSet::new();
    let mut hash = BTreeSet::new();
    for (i, s) in seqs.iter().enumerate() {
        let (w, u) = s.split_at(s.len() - 1);
        for v in g.out(u[0]) {
            let mut t = w.to_vec();
            t.push(v);
            if let Some(&j) = index.get(&t) {
                rel.insert((i, j));
            }
        }
        let mut t = s.clone();
        t.push(u[0]);
        if let Some(&j) = index.get(&t) {
            hash.insert((i, j));
        }
    }
    let root = index.get(&vec![g.root]).copied().unwrap_or(0);
    Ok(TreeGraphPrefix {
        base: g.clone(),
        depth,
        seqs,
        index,
        rel,
        hash,
        root,
    })
}

/// `rel* # (rel~* #)*`: the marked vertices, seen from the root.
pub fn marking_expr() -> PathExpr {
    use EdgeLabel::*;
    PathExpr::Concat(vec![
        PathExpr::star(PathExpr::fwd(Rel)),
        PathExpr::fwd(Hash),
        PathExpr::star(PathExpr::Concat(vec![
            PathExpr::star(PathExpr::bwd(Rel)),
            PathExpr::fwd(Hash),
        ])),
    ])
}

/// The three edge clauses: `rel~. #`, `#~. S #` and `#~ rel #`.
pub fn edge_clauses() -> [PathExpr; 3] {
    use EdgeLabel::*;
    [
        PathExpr::Concat(vec![PathExpr::maximal(Token::Bwd(Rel)), PathExpr::fwd(Hash)]),
        PathExpr::Concat(vec![
            PathExpr::maximal(Token::Bwd(Hash)),
            PathExpr::tok(Token::SStep),
            PathExpr::fwd(Hash),
        ]),
        PathExpr::Concat(vec![PathExpr::bwd(Hash), PathExpr::fwd(Rel), PathExpr::fwd(Hash)]),
    ]
}

/// The interpreted graph: one vertex per marked treegraph vertex.
#[derive(Clone, Debug)]
pub struct Interpretation {
    pub graph: GraphPrefix,
    /// Decoded exponent sequence, as base-vertex ids.
    pub exps: Vec<Vec<usize>>,
    /// Interpreted vertex to treegraph vertex.
    pub tree_vertex: Vec<usize>,
}

fn check_rooted(g: &GraphPrefix) -> Result<()> {
    if g.n == 0 || g.edges.iter().any(|&(_, v)| v == g.root) {
        return Err(Error::BaseNotRooted);
    }
    if !g.reachable_from(g.root).iter().all(|&r| r) {
        return Err(Error::BaseNotRooted);
    }
    Ok(())
}

pub fn interpret_phi(t: &TreeGraphPrefix) -> Result<Interpretation> {
    check_rooted(&t.base)?;
    let lg = t.labeled();
    let marked = eval_path(&lg, &marking_expr(), t.root);
    let pos: HashMap<usize, usize> = marked.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let clauses = PathExpr::Union(edge_clauses().to_vec());
    let mut edges = BTreeSet::new();
    for (i, &v) in marked.iter().enumerate() {
        for q in eval_path(&lg, &clauses, v) {
            if let Some(&j) = pos.get(&q) {
                edges.insert((i, j));
            }
        }
    }
    let exps: Vec<Vec<usize>> = marked
        .iter()
        .map(|&v| {
            let s = &t.seqs[v];
            s[..s.len() - 1].to_vec()
        })
        .collect();
    let meta = t.base.meta.as_ref().map(|m| {
        exps.iter()
            .map(|e| {
                e.iter()
                    .fold(Ordinal::zero(), |acc, &u| add(&acc, &Ordinal::omega_pow(m[u].clone())))
            })
            .collect::<Vec<_>>()
    });
    let mut graph = GraphPrefix::from_edges(marked.len(), edges);
    graph.meta = meta;
    graph.bound = t.base.bound.as_ref().map(|b| Ordinal::omega_pow(b.clone()));
    Ok(Interpretation {
        graph,
        exps,
        tree_vertex: marked,
    })
}

/// Outcome of comparing the interpretation against the direct construction.
#[derive(Clone, Debug)]
pub struct PhiReport {
    pub safe: usize,
    pub pairs: usize,
    /// `(source, target, interpreted, direct)` for each disagreement.
    pub mismatches: Vec<(Ordinal, Ordinal, bool, bool)>,
}

/// Builds `treegraph(G_a)` from a prefix of the given depth, interprets it and
/// compares induced edges on the safe region with a direct prefix of
/// `G_(omega^a)`. Safe vertices decode to sequences over interior base
/// vertices of length below `depth`.
pub fn check_phi(alpha: &Ordinal, prefix: usize, depth: usize) -> Result<PhiReport> {
    let base = build_prefix(alpha, prefix)?;
    let tree = build_treegraph(&base, depth)?;
    let interp = interpret_phi(&tree)?;
    let meta = interp.graph.meta.as_ref().ok_or(Error::MetaMissing)?;
    let safe: Vec<usize> = (0..interp.exps.len())
        .filter(|&i| {
            let e = &interp.exps[i];
            e.len() < depth && e.iter().all(|u| base.interior.contains(u))
        })
        .collect();
    let bound = Ordinal::omega_pow(alpha.clone());
    let wanted: Vec<&Ordinal> = safe.iter().map(|&i| &meta[i]).collect();
    let mut d = 1;
    let direct = loop {
        let g = build_prefix(&bound, d)?;
        if wanted.iter().all(|x| g.vertex_of(x).is_some()) {
            break g;
        }
        d += 1;
    };
    let mut pairs = 0;
    let mut mismatches = Vec::new();
    for &i in &safe {
        for &j in &safe {
            let x = &meta[i];
            let y = &meta[j];
            let got = interp.graph.has_edge(i, j);
            let dx = direct.vertex_of(x).expect("present");
            let dy = direct.vertex_of(y).expect("present");
            let want = direct.has_edge(dx, dy);
            debug_assert_eq!(want, covers(x, y).is_some());
            pairs += 1;
            if got != want {
                mismatches.push((x.clone(), y.clone(), got, want));
            }
        }
    }
    Ok(PhiReport {
        safe: safe.len(),
        pairs,
        mismatches,
    })
}
