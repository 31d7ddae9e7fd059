//! Finite prefixes of covering graphs.
//!
//! A prefix is the breadth-first truncation of the covering graph from 0.
//! Vertices strictly inside the truncation depth are *interior*: their whole
//! out-neighbourhood is present, so label-free reasoning about them is exact.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::degree_word::UPWord;
use crate::error::{Error, Result};
use crate::fundamental::{covers, up_set, CoverWitness};
use crate::ordinal::Ordinal;

pub const DEFAULT_VERTEX_CAP: usize = 50_000;

/// Rooted digraph on vertices `0..n`, optionally labelled by ordinals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPrefix {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
    pub root: usize,
    pub meta: Option<Vec<Ordinal>>,
    pub interior: BTreeSet<usize>,
    pub bound: Option<Ordinal>,
    pub depth: usize,
}

impl GraphPrefix {
    /// Plain graph without ordinal labels; every vertex is interior.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        GraphPrefix {
            n,
            edges: edges.into_iter().collect(),
            root: 0,
            meta: None,
            interior: (0..n).collect(),
            bound: None,
            depth: 0,
        }
    }

    pub fn out(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((v, 0)..(v + 1, 0)).map(|&(_, w)| w)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out(v).count()
    }

    pub fn ordinal(&self, v: usize) -> Option<&Ordinal> {
        self.meta.as_ref().map(|m| &m[v])
    }

    pub fn vertex_of(&self, a: &Ordinal) -> Option<usize> {
        self.meta.as_ref()?.iter().position(|x| x == a)
    }

    /// Vertices reachable from `v` (including `v`).
    pub fn reachable_from(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(x) = queue.pop_front() {
            for y in self.out(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn reaches(&self, from: usize, to: usize) -> bool {
        self.reachable_from(from)[to]
    }

    /// Keeps the marked vertices and renumbers them in order.
    fn induced(&self, keep: &[bool], edges: impl Fn(usize, usize) -> bool) -> GraphPrefix {
        let ids: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let index: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        GraphPrefix {
            n: ids.len(),
            edges: self
                .edges
                .iter()
                .filter(|&&(u, v)| keep[u] && keep[v] && edges(u, v))
                .map(|(u, v)| (index[u], index[v]))
                .collect(),
            root: index.get(&self.root).copied().unwrap_or(0),
            meta: self.meta.as_ref().map(|m| ids.iter().map(|&v| m[v].clone()).collect()),
            interior: self.interior.iter().filter_map(|v| index.get(v).copied()).collect(),
            bound: self.bound.clone(),
            depth: self.depth,
        }
    }

    pub fn to_dot(&self, annotate: bool) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 0..self.n {
            let label = match self.ordinal(v) {
                Some(a) => a.to_string(),
                None => v.to_string(),
            };
            let _ = writeln!(s, "  n{v} [label=\"{label}\"];");
        }
        for &(u, v) in &self.edges {
            let attr = match (annotate, &self.meta) {
                (true, Some(m)) => {
                    let kind = edge_kind(&m[u], &m[v]);
                    format!(" [label=\"{kind}\"]")
                }
                _ => String::new(),
            };
            let _ = writeln!(s, "  n{u} -> n{v}{attr};");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Result<String> {
        let meta = self.meta.as_ref().ok_or(Error::MetaMissing)?;
        let text: Vec<String> = meta.iter().map(|a| a.to_string()).collect();
        let doc = GraphJson {
            bound: self.bound.as_ref().map(|b| b.to_string()).unwrap_or_default(),
            depth: self.depth,
            vertices: text.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| [text[u].clone(), text[v].clone()])
                .collect(),
            interior: self.interior.iter().map(|&v| text[v].clone()).collect(),
        };
        Ok(serde_json::to_string(&doc).expect("plain strings serialize"))
    }
}

#[derive(Serialize)]
struct GraphJson {
    bound: String,
    depth: usize,
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
    interior: Vec<String>,
}

fn edge_kind(x: &Ordinal, a: &Ordinal) -> &'static str {
    let s = x.succ() == *a;
    let f = matches!(covers(x, a), Some(CoverWitness::FundIndex(_)));
    match (s, f) {
        (true, true) => "sf",
        (true, false) => "s",
        (false, true) => "f",
        (false, false) => "",
    }
}

/// Breadth-first prefix of the covering graph of `a`, `depth` steps from 0.
pub fn build_prefix(a: &Ordinal, depth: usize) -> Result<GraphPrefix> {
    build_prefix_capped(a, depth, DEFAULT_VERTEX_CAP)
}

pub fn build_prefix_capped(a: &Ordinal, depth: usize, cap: usize) -> Result<GraphPrefix> {
    let mut dist: BTreeMap<Ordinal, usize> = BTreeMap::new();
    if !a.is_zero() {
        let mut queue = VecDeque::new();
        dist.insert(Ordinal::zero(), 0);
        queue.push_back(Ordinal::zero());
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d == depth {
                continue;
            }
            for y in up_set(&x, a) {
                if !dist.contains_key(&y) {
                    if dist.len() >= cap {
                        return Err(Error::CapExceeded { limit: cap });
                    }
                    dist.insert(y.clone(), d + 1);
                    queue.push_back(y);
                }
            }
        }
    }
    // BTreeMap order gives ids in ascending ordinal order
    let meta: Vec<Ordinal> = dist.keys().cloned().collect();
    let index: HashMap<&Ordinal, usize> = meta.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut edges = BTreeSet::new();
    let mut interior = BTreeSet::new();
    for (i, x) in meta.iter().enumerate() {
        for y in up_set(x, a) {
            if let Some(&j) = index.get(&y) {
                edges.insert((i, j));
            }
        }
        if dist[x] < depth {
            interior.insert(i);
        }
    }
    Ok(GraphPrefix {
        n: meta.len(),
        edges,
        root: 0,
        meta: Some(meta),
        interior,
        bound: Some(a.clone()),
        depth,
    })
}

/// Out-neighbours of `p` sorted so that earlier ones reach later ones.
fn reach_ordered_out(g: &GraphPrefix, p: usize) -> Vec<usize> {
    let outs: Vec<usize> = g.out(p).collect();
    let reach: Vec<Vec<bool>> = outs.iter().map(|&r| g.reachable_from(r)).collect();
    // rank = number of other out-neighbours reaching this one
    let mut ranked: Vec<(usize, usize)> = outs
        .iter()
        .map(|&q| {
            let rank = (0..outs.len()).filter(|&i| outs[i] != q && reach[i][q]).count();
            (rank, q)
        })
        .collect();
    ranked.sort();
    ranked.into_iter().map(|(_, q)| q).collect()
}

/// The out-neighbour of `p` that every other out-neighbour reaches.
pub fn reach_greatest(g: &GraphPrefix, p: usize) -> Result<Option<usize>> {
    if !g.interior.contains(&p) {
        return Err(Error::NotInterior(p));
    }
    let outs: Vec<usize> = g.out(p).collect();
    Ok(outs
        .iter()
        .copied()
        .find(|&q| outs.iter().all(|&r| r == q || g.reaches(r, q))))
}

/// Marks the greatest sequence prescribed by `u` (each letter picks that
/// many out-neighbours in reachability order and moves to the last), then
/// keeps the edges whose target can still reach a marked vertex.
pub fn restrict_by_degree_word(g: &GraphPrefix, u: &UPWord) -> Result<GraphPrefix> {
    let mut marked = vec![false; g.n];
    if g.n == 0 {
        return Ok(g.clone());
    }
    let needed = u.prefix.len() + u.period.len();
    let mut p = g.root;
    for i in 0.. {
        let Some(letter) = u.letter(i) else { break };
        marked[p] = true;
        if letter == 0 {
            break;
        }
        if !g.interior.contains(&p) {
            if !u.is_finite() && i >= needed {
                break;
            }
            return Err(Error::WalkLeftInterior(i));
        }
        let outs = reach_ordered_out(g, p);
        let l = letter as usize;
        if l > outs.len() {
            return Err(Error::OutOfRange(format!(
                "letter {letter} at step {i} exceeds out-degree {}",
                outs.len()
            )));
        }
        p = outs[l - 1];
    }
    if u.is_finite() && u.letter(u.prefix.len().saturating_sub(1)).is_some_and(|l| l != 0) {
        // a finite word without a final 0 leaves its last vertex unvisited
        marked[p] = true;
    }
    // co-accessibility to the marked set
    let mut coacc = marked.clone();
    let mut queue: VecDeque<usize> = (0..g.n).filter(|&v| marked[v]).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    for &(a, b) in &g.edges {
        preds[b].push(a);
    }
    while let Some(v) = queue.pop_front() {
        for &w in &preds[v] {
            if !coacc[w] {
                coacc[w] = true;
                queue.push_back(w);
            }
        }
    }
    Ok(g.induced(&coacc, |_, _| true))
}

/// True iff both graphs have the same edges among the ordinals interior to both.
pub fn graphs_equal_on_shared(g: &GraphPrefix, h: &GraphPrefix) -> Result<bool> {
    let gm = g.meta.as_ref().ok_or(Error::MetaMissing)?;
    let hm = h.meta.as_ref().ok_or(Error::MetaMissing)?;
    let gi: BTreeSet<&Ordinal> = g.interior.iter().map(|&v| &gm[v]).collect();
    let hi: BTreeSet<&Ordinal> = h.interior.iter().map(|&v| &hm[v]).collect();
    let shared: BTreeSet<&Ordinal> = gi.intersection(&hi).copied().collect();
    let restrict = |edges: &BTreeSet<(usize, usize)>, m: &[Ordinal]| -> BTreeSet<(Ordinal, Ordinal)> {
        edges
            .iter()
            .filter(|&&(u, v)| shared.contains(&m[u]) && shared.contains(&m[v]))
            .map(|&(u, v)| (m[u].clone(), m[v].clone()))
            .collect()
    };
    Ok(restrict(&g.edges, gm) == restrict(&h.edges, hm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_word::{degree_word, greatest_step};
    use crate::ordinal::{add, tower};

    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }
    fn w() -> Ordinal {
        Ordinal::omega()
    }
    fn wp(e: Ordinal) -> Ordinal {
        Ordinal::omega_pow(e)
    }

    fn edge(g: &GraphPrefix, a: &Ordinal, b: &Ordinal) -> bool {
        match (g.vertex_of(a), g.vertex_of(b)) {
            (Some(u), Some(v)) => g.has_edge(u, v),
            _ => false,
        }
    }

    #[test]
    fn figure_arcs_of_omega_omega() {
        let g = build_prefix(&tower(2), 4).unwrap();
        assert!(edge(&g, &n(0), &n(1)));
        assert!(edge(&g, &n(1), &n(2)));
        assert!(edge(&g, &n(1), &w()));
        assert!(edge(&g, &w(), &w().succ()));
        assert!(edge(&g, &w(), &wp(n(2))));
        assert!(!edge(&g, &n(0), &w()));
    }

    #[test]
    fn finite_ordinals_give_paths() {
        let g = build_prefix(&n(3), 10).unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, BTreeSet::from([(0, 1), (1, 2)]));
        for d in 0..6 {
            assert_eq!(build_prefix(&w(), d).unwrap().n, d + 1);
        }
    }

    #[test]
    fn vertex_cap() {
        assert_eq!(
            build_prefix_capped(&tower(3), 12, 20),
            Err(Error::CapExceeded { limit: 20 })
        );
    }

    #[test]
    fn reach_greatest_examples() {
        let g = build_prefix(&tower(2), 4).unwrap();
        let one = g.vertex_of(&n(1)).unwrap();
        assert_eq!(reach_greatest(&g, one).unwrap(), g.vertex_of(&w()));
        let p3 = build_prefix(&n(3), 5).unwrap();
        assert_eq!(reach_greatest(&p3, 1).unwrap(), Some(2));
        let last = *g.interior.iter().max().unwrap() + 1;
        if last < g.n {
            assert_eq!(reach_greatest(&g, last), Err(Error::NotInterior(last)));
        }
    }

    fn distances(g: &GraphPrefix) -> Vec<usize> {
        let mut dist = vec![usize::MAX; g.n];
        let mut queue = VecDeque::from([g.root]);
        dist[g.root] = 0;
        while let Some(x) = queue.pop_front() {
            for y in g.out(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    #[test]
    fn reach_greatest_agrees_with_greatest_step() {
        for bound in [tower(2), add(&wp(n(3)), &wp(n(2))), wp(add(&w(), &n(1)))] {
            let depth = 9;
            let g = build_prefix(&bound, depth).unwrap();
            let m = g.meta.clone().unwrap();
            let dist = distances(&g);
            for &p in &g.interior {
                let want = greatest_step(&m[p], &bound);
                match reach_greatest(&g, p).unwrap() {
                    Some(q) => assert_eq!(Some(m[q].clone()), want, "vertex {}", m[p]),
                    None => {
                        // a deeper prefix witnesses the missing reachability
                        let deep = build_prefix(&bound, dist[p] + 10).unwrap();
                        let dp = deep.vertex_of(&m[p]).unwrap();
                        let q = reach_greatest(&deep, dp).unwrap().expect("deep prefix");
                        assert_eq!(Some(deep.meta.as_ref().unwrap()[q].clone()), want);
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let g = build_prefix(&tower(2), 5).unwrap();
        let r = restrict_by_degree_word(&g, &degree_word(&wp(n(2))).unwrap()).unwrap();
        let direct = build_prefix(&wp(n(2)), 5).unwrap();
        assert!(graphs_equal_on_shared(&r, &direct).unwrap());

        let g = build_prefix(&wp(n(2)), 6).unwrap();
        let target = add(&w(), &n(2));
        let r = restrict_by_degree_word(&g, &degree_word(&target).unwrap()).unwrap();
        let direct = build_prefix(&target, 6).unwrap();
        assert!(graphs_equal_on_shared(&r, &direct).unwrap());
        assert!(r.meta.as_ref().unwrap().iter().all(|x| *x < target));
    }

    #[test]
    fn self_restriction_keeps_coaccessible_edges() {
        let a = add(&w(), &n(3));
        let g = build_prefix(&a, 8).unwrap();
        let r = restrict_by_degree_word(&g, &degree_word(&a).unwrap()).unwrap();
        assert_eq!(r.edges.len(), g.edges.len());
    }

    #[test]
    fn shared_equality() {
        let g = build_prefix(&w(), 3).unwrap();
        assert!(graphs_equal_on_shared(&g, &g).unwrap());
        let h = build_prefix(&wp(n(2)), 3).unwrap();
        assert!(graphs_equal_on_shared(&g, &h).unwrap());
        let meta = Some(vec![n(0), n(1), n(2)]);
        let mut path = GraphPrefix::from_edges(3, [(0, 1), (1, 2)]);
        path.meta = meta.clone();
        let mut extra = GraphPrefix::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        extra.meta = meta;
        assert!(!graphs_equal_on_shared(&path, &extra).unwrap());
        let bare = GraphPrefix::from_edges(2, [(0, 1)]);
        assert_eq!(graphs_equal_on_shared(&bare, &path), Err(Error::MetaMissing));
    }

    #[test]
    fn exports() {
        let g = build_prefix(&n(3), 4).unwrap();
        let dot = g.to_dot(true);
        assert!(dot.contains("n0 -> n1 [label=\"s\"]"));
        let json = g.to_json().unwrap();
        assert_eq!(
            json,
            r#"{"bound":"3","depth":4,"vertices":["0","1","2"],"edges":[["0","1"],["1","2"]],"interior":["0","1","2"]}"#
        );
    }
}
