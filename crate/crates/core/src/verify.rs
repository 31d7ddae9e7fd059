//! Property suites over enumerated samples. Each suite is deterministic for
//! fixed parameters and returns a report with one line per finding.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::covering_graph::{build_prefix, graphs_equal_on_shared, restrict_by_degree_word};
use crate::degree_word::{degree_word, greatest_sequence, lex_compare, Termination, UPWord, DEFAULT_ITERATION_CAP};
use crate::error::{Error, Result};
use crate::fundamental::{chain, covers, up_set};
use crate::hopda::{build_exprs, decode_raw, enumerate_domain, CompiledExpr, Membership, Stack};
use crate::mso::eval_phi_u;
use crate::ordinal::{add, classify, enumerate_ordinals, exp_tower_w, tower, EnumConfig, Ordinal, OrdinalKind};
use crate::strict_sets::{c_set, cnk_ambient, exp2, greatest_seq_tail_check, s_alpha, DEFAULT_C_CAP};
use crate::syntax::parse_ordinal;
use crate::treegraph::check_phi;

pub const SUITES: [&str; 12] = [
    "transitive",
    "crossing-free",
    "degree",
    "periodic",
    "lex",
    "phi-u-matrix",
    "restriction",
    "treegraph-phi",
    "hopda-order",
    "c-cardinality",
    "cnk",
    "tail-sequence",
];

/// Optional knobs; every suite documents its defaults.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub n: Option<usize>,
    pub k: Option<u64>,
    pub samples: Option<usize>,
    pub level: Option<usize>,
    pub budget: Option<usize>,
    pub max: Option<u64>,
    pub alpha: Option<Ordinal>,
    pub prefix: Option<usize>,
    pub depth: Option<usize>,
    pub seed: Option<u64>,
    pub seconds: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub details: Vec<String>,
    pub summary: String,
}

impl Report {
    fn new(name: &str) -> Self {
        Report {
            name: name.to_string(),
            passed: true,
            checked: 0,
            details: Vec::new(),
            summary: String::new(),
        }
    }

    fn fail(&mut self, msg: String) {
        self.passed = false;
        if self.details.len() < 50 {
            self.details.push(msg);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.details {
            writeln!(f, "  {d}")?;
        }
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.summary)
    }
}

/// Enumeration sample below `bound`: up to 3 terms, nesting 2,
/// coefficients up to 2.
pub fn sample_below(bound: &Ordinal) -> Result<Vec<Ordinal>> {
    let cfg = EnumConfig {
        coef_cap: 2,
        ..EnumConfig::default()
    };
    enumerate_ordinals(3, 2, bound, &cfg)
}

fn rng(p: &Params) -> StdRng {
    StdRng::seed_from_u64(p.seed.unwrap_or(1))
}

pub fn run(name: &str, p: &Params) -> Result<Vec<Report>> {
    Ok(match name {
        "transitive" => vec![transitive(p)?],
        "crossing-free" => vec![crossing_free(p)?],
        "degree" => match p.n {
            Some(n) => vec![degree(n)?],
            None => (1..=3).map(degree).collect::<Result<_>>()?,
        },
        "periodic" => vec![periodic(p)?],
        "lex" => vec![lex(p)?],
        "phi-u-matrix" => vec![phi_u_matrix(p)?],
        "restriction" => vec![restriction(p)?],
        "treegraph-phi" => vec![treegraph_phi(p)?],
        "hopda-order" => vec![hopda_order(p)?],
        "c-cardinality" => vec![c_cardinality(p)?],
        "cnk" => vec![cnk(p)?],
        "tail-sequence" => vec![tail_sequence(p)?],
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run(s, &Params::default())?);
            }
            out
        }
        other => return Err(Error::OutOfRange(format!("unknown suite '{other}'"))),
    })
}

/// Chains between sampled pairs validate; out-neighbourhoods agree with
/// the covering test in both directions.
pub fn transitive(p: &Params) -> Result<Report> {
    let mut r = Report::new("transitive");
    let bound = tower(3);
    let sample = sample_below(&bound)?;
    let pairs = p.samples.unwrap_or(2000);
    let mut rng = rng(p);
    let mut steps = 0;
    for _ in 0..pairs {
        let i = rng.random_range(0..sample.len());
        let j = rng.random_range(i..sample.len());
        let (x, y) = (&sample[i], &sample[j]);
        let c = chain(x, y)?;
        steps += c.len();
        let ok = c.first() == Some(x)
            && c.last() == Some(y)
            && c.windows(2).all(|w| w[0] < w[1] && covers(&w[0], &w[1]).is_some());
        if !ok {
            r.fail(format!("chain {x} .. {y} does not validate"));
        }
        r.checked += 1;
        let ups = up_set(x, &bound);
        for m in &ups {
            if !(x < m && covers(x, m).is_some()) {
                r.fail(format!("{m} in up_set({x}) but not covered"));
            }
        }
        if covers(x, y).is_some() && !ups.contains(y) {
            r.fail(format!("{x} covers {y} but {y} missing from up_set"));
        }
    }
    r.summary = format!(
        "{} pairs over a sample of {}, {} chain vertices validated",
        r.checked,
        sample.len(),
        steps
    );
    Ok(r)
}

/// No quadruple `a1 < l1 < a2` with `a1 -> a2`, `l1 -> l2` and `l2 > a2`.
pub fn crossing_free(p: &Params) -> Result<Report> {
    let mut r = Report::new("crossing-free");
    let bound = tower(3);
    let sample = sample_below(&bound)?;
    let target = p.samples.unwrap_or(10_000);
    let mut rng = rng(p);
    let mut edges = 0;
    let mut attempts = 0;
    while r.checked < target {
        attempts += 1;
        if attempts > 100 * target {
            r.fail(format!("only {} quadruples found", r.checked));
            break;
        }
        let a1 = &sample[rng.random_range(0..sample.len())];
        let ups = up_set(a1, &bound);
        let a2 = &ups[rng.random_range(0..ups.len())];
        let lo = sample.partition_point(|x| x <= a1);
        let hi = sample.partition_point(|x| x < a2);
        if lo >= hi {
            continue;
        }
        edges += 1;
        let l1 = &sample[rng.random_range(lo..hi)];
        for l2 in up_set(l1, &bound) {
            r.checked += 1;
            if l2 > *a2 {
                r.fail(format!("{a1} -> {a2} crossed by {l1} -> {l2}"));
            }
        }
    }
    r.summary = format!("{} quadruples from {} edge/vertex draws", r.checked, edges);
    Ok(r)
}

/// Largest out-degree below `omega^^n` is exactly `n`.
pub fn degree(n: usize) -> Result<Report> {
    let mut r = Report::new(&format!("degree n={n}"));
    let bound = tower(n);
    let sample = sample_below(&bound)?;
    let mut best: Option<(usize, &Ordinal)> = None;
    for l in &sample {
        let d = up_set(l, &bound).len();
        if d > n {
            r.fail(format!("out-degree {d} at {l}"));
        }
        if best.is_none_or(|(b, _)| d > b) {
            best = Some((d, l));
        }
        r.checked += 1;
    }
    let (max, at) = best.ok_or(Error::OutOfRange("empty sample".into()))?;
    if max != n {
        r.fail(format!("maximum out-degree {max}, expected {n}"));
    }
    r.summary = format!("max out-degree {max} (first at {at}) over {} ordinals", r.checked);
    Ok(r)
}

fn pick(rng: &mut StdRng, n: usize, count: usize) -> Vec<usize> {
    let mut chosen = BTreeSet::new();
    while chosen.len() < count.min(n) {
        chosen.insert(rng.random_range(0..n));
    }
    chosen.into_iter().collect()
}

/// Successors give finite words ending in 0; limits give periodic words over
/// `[1,3]` whose `a[1] -> a[2]` block repeats the `a[0] -> a[1]` block.
pub fn periodic(p: &Params) -> Result<Report> {
    let mut r = Report::new("periodic");
    let top = tower(3);
    let mut pool = sample_below(&top)?;
    pool.push(top);
    let mut rng = rng(p);
    let (mut succ, mut lim) = (0, 0);
    for i in pick(&mut rng, pool.len(), p.samples.unwrap_or(100)) {
        let a = &pool[i];
        r.checked += 1;
        let seq = greatest_sequence(a, DEFAULT_ITERATION_CAP)?;
        let degs: Vec<u32> = seq.entries.iter().map(|e| e.1).collect();
        match (classify(a), seq.termination) {
            (OrdinalKind::Zero, _) => {}
            (OrdinalKind::Successor(_), Termination::Finished) => {
                succ += 1;
                if degs.last() != Some(&0) || degs.iter().any(|&d| d > 3) {
                    r.fail(format!("{a}: finite word {degs:?}"));
                }
            }
            (OrdinalKind::Limit, Termination::PeriodFound(i0, i1, i2)) => {
                lim += 1;
                let word = degree_word(a)?;
                let letters_ok = word.prefix.iter().chain(&word.period).all(|&d| (1..=3).contains(&d));
                if degs[i1..i2] != degs[i0..i1] || word.is_finite() || !letters_ok {
                    r.fail(format!("{a}: period block mismatch or bad letters in {word}"));
                }
            }
            (k, t) => r.fail(format!("{a}: {k:?} ended with {t:?}")),
        }
    }
    r.summary = format!("{} ordinals: {succ} successors, {lim} limits", r.checked);
    Ok(r)
}

/// `a < b` implies `u(a) <lex u(b)` on sampled pairs.
pub fn lex(p: &Params) -> Result<Report> {
    let n = p.n.unwrap_or(3);
    let mut r = Report::new(&format!("lex n={n}"));
    let top = tower(n);
    let mut pool = sample_below(&top)?;
    pool.push(top);
    let mut rng = rng(p);
    let mut words: HashMap<usize, UPWord> = HashMap::new();
    let mut word = |i: usize| -> Result<UPWord> {
        if let Some(w) = words.get(&i) {
            return Ok(w.clone());
        }
        let w = degree_word(&pool[i])?;
        words.insert(i, w.clone());
        Ok(w)
    };
    let target = p.samples.unwrap_or(400);
    while r.checked < target {
        let i = rng.random_range(0..pool.len());
        let j = rng.random_range(0..pool.len());
        if i == j {
            continue;
        }
        let (i, j) = (i.min(j), i.max(j));
        let (u, v) = (word(i)?, word(j)?);
        r.checked += 1;
        if lex_compare(&u, &v) != std::cmp::Ordering::Less {
            r.fail(format!("{} < {} but {u} !< {v}", pool[i], pool[j]));
        }
    }
    r.summary = format!("{} pairs, all strictly lex-increasing", r.checked);
    if !r.passed {
        r.summary = format!("{} pairs, {} violations", r.checked, r.details.len());
    }
    Ok(r)
}

/// `eval(G_a, phi_u(u(b)))` is the identity matrix for `a, b in 1..=max`.
pub fn phi_u_matrix(p: &Params) -> Result<Report> {
    let max = p.max.unwrap_or(6);
    let mut r = Report::new(&format!("phi-u-matrix max={max}"));
    let words: Vec<UPWord> = (1..=max)
        .map(|b| degree_word(&Ordinal::nat(b)))
        .collect::<Result<_>>()?;
    for a in 1..=max {
        let g = build_prefix(&Ordinal::nat(a), a as usize + 1)?;
        let mut row = String::new();
        for (bi, u) in words.iter().enumerate() {
            let b = bi as u64 + 1;
            let got = eval_phi_u(&g, u)?;
            row.push(if got { '1' } else { '0' });
            r.checked += 1;
            if got != (a == b) {
                r.fail(format!("G_{a} |= phi(u({b})) is {got}"));
            }
        }
        r.details.push(format!("G_{a}: {row}"));
    }
    r.summary = format!("{max}x{max} matrix, {} cells", r.checked);
    Ok(r)
}

/// Restricting a prefix of `G_a'` along `u(a)` reproduces the prefix of
/// `G_a` on the shared interior.
pub fn restriction(p: &Params) -> Result<Report> {
    let mut r = Report::new("restriction");
    let cases = [("w^w", "w^2", 5), ("w^2", "w+2", 6), ("w^3", "w^2+w", 6)];
    for (big, small, depth) in cases {
        let depth = p.depth.unwrap_or(depth);
        let (big, small) = (parse_ordinal(big)?, parse_ordinal(small)?);
        let g = build_prefix(&big, depth)?;
        let restricted = restrict_by_degree_word(&g, &degree_word(&small)?)?;
        let direct = build_prefix(&small, depth)?;
        let rm = restricted.meta.as_ref().ok_or(Error::MetaMissing)?;
        let edges_ok = graphs_equal_on_shared(&restricted, &direct)?;
        let below = rm.iter().all(|x| *x < small);
        let gm = g.meta.as_ref().ok_or(Error::MetaMissing)?;
        let dm = direct.meta.as_ref().ok_or(Error::MetaMissing)?;
        let kept: BTreeSet<&Ordinal> = rm.iter().collect();
        let missing: Vec<&Ordinal> = direct
            .interior
            .iter()
            .map(|&v| &dm[v])
            .filter(|x| g.vertex_of(x).is_some_and(|v| g.interior.contains(&v)) && !kept.contains(x))
            .collect();
        r.checked += 1;
        let line = format!(
            "{big} -> {small} at depth {depth}: {} of {} vertices kept, {} edges",
            restricted.n,
            gm.len(),
            restricted.edges.len()
        );
        if edges_ok && below && missing.is_empty() {
            r.details.push(line);
        } else {
            r.fail(format!(
                "{line}; edges agree: {edges_ok}, all below: {below}, missing: {}",
                missing.len()
            ));
        }
    }
    r.summary = format!("{} pairs", r.checked);
    Ok(r)
}

/// Interpreting the treegraph of `G_a` gives `G_(omega^a)` on the safe region.
pub fn treegraph_phi(p: &Params) -> Result<Report> {
    let alpha = p.alpha.clone().unwrap_or_else(Ordinal::omega);
    let prefix = p.prefix.unwrap_or(4);
    let depth = p.depth.unwrap_or(4);
    let mut r = Report::new(&format!("treegraph-phi alpha={alpha} prefix={prefix} depth={depth}"));
    let rep = check_phi(&alpha, prefix, depth)?;
    r.checked = rep.pairs;
    for (x, y, got, want) in &rep.mismatches {
        r.fail(format!("{x} -> {y}: interpreted {got}, direct {want}"));
    }
    if rep.safe < 15 {
        r.fail(format!("only {} safe vertices", rep.safe));
    }
    r.summary = format!(
        "{} safe vertices, {} ordered pairs, {} mismatches",
        rep.safe,
        rep.pairs,
        rep.mismatches.len()
    );
    Ok(r)
}

fn stack_size(s: &Stack) -> u64 {
    match s {
        Stack::Nat(n) => *n,
        Stack::Seq(xs) => xs.iter().map(stack_size).max().unwrap_or(0).max(xs.len() as u64),
    }
}

/// Order correspondence of `inc`/`dec` with decoded ordinals and closure of
/// the domain under `dec`.
pub fn hopda_order(p: &Params) -> Result<Report> {
    let level = p.level.unwrap_or(2);
    let budget = p.budget.unwrap_or(100_000);
    let count = p.samples.unwrap_or(200);
    let mut r = Report::new(&format!("hopda-order level={level}"));
    let e = build_exprs(level)?;
    let domain: Vec<Stack> = enumerate_domain(&e.dom, level, budget)
        .into_iter()
        .take(count)
        .collect();
    if domain.len() < count {
        r.fail(format!("domain enumeration gave {} < {count} stacks", domain.len()));
    }
    let decoded: Vec<Ordinal> = domain.iter().map(decode_raw).collect();
    let distinct: BTreeSet<&Ordinal> = decoded.iter().collect();
    if distinct.len() != decoded.len() {
        r.fail("decode_raw is not injective on the domain".into());
    }
    let inc = CompiledExpr::new(&e.inc);
    let dec = CompiledExpr::new(&e.dec);
    let dom = CompiledExpr::new(&e.dom);
    let mut exhausted = 0;
    for (i, s) in domain.iter().enumerate() {
        for (j, t) in domain.iter().enumerate() {
            for (rel, want, name) in [
                (&inc, decoded[i] < decoded[j], "inc"),
                (&dec, decoded[i] > decoded[j], "dec"),
            ] {
                r.checked += 1;
                match rel.contains(s, t, budget) {
                    Membership::BudgetExhausted => exhausted += 1,
                    m if (m == Membership::Yes) != want => r.fail(format!(
                        "{name}({s}, {t}) = {m:?}, decoded {} vs {}",
                        decoded[i], decoded[j]
                    )),
                    _ => {}
                }
            }
        }
    }
    // closure: bounded images under dec stay in the domain
    let size = domain.iter().map(stack_size).max().unwrap_or(0);
    let empty = Stack::empty(level);
    let mut images = 0;
    for s in &domain {
        for t in dec.image(s, 2_000, size) {
            images += 1;
            match dom.contains(&empty, &t, budget) {
                Membership::Yes => {}
                Membership::No => r.fail(format!("dec({s}) reaches {t} outside the domain")),
                Membership::BudgetExhausted => exhausted += 1,
            }
        }
    }
    if exhausted > 0 {
        r.fail(format!("{exhausted} searches exhausted the budget"));
    }
    r.summary = format!(
        "{} stacks, {} relation queries, {} dec images in the domain, {} budget exhaustions",
        domain.len(),
        r.checked,
        images,
        exhausted
    );
    Ok(r)
}

/// The listed sets `C^3_1` and `C^2_2`, and `|C^k_n| = exp2(n,k)` whenever
/// `exp2(n,k) <= 2^16`, swept within a wall-clock budget (default 10 s).
pub fn c_cardinality(p: &Params) -> Result<Report> {
    let mut r = Report::new("c-cardinality");
    let listed = [
        (1, 3, "0; 1; w; w+1; w^2; w^2+1; w^2+w; w^2+w+1"),
        (
            2,
            2,
            "0; 1; w; w+1; w^w; w^w+1; w^w+w; w^w+w+1; \
             w^(w+1); w^(w+1)+1; w^(w+1)+w; w^(w+1)+w+1; \
             w^(w+1)+w^w; w^(w+1)+w^w+1; w^(w+1)+w^w+w; w^(w+1)+w^w+w+1",
        ),
    ];
    for (n, k, text) in listed {
        let want: Vec<Ordinal> = text.split(';').map(parse_ordinal).collect::<Result<_>>()?;
        let got = c_set(n, k)?;
        r.checked += 1;
        let shown: Vec<String> = got.iter().map(|x| x.to_string()).collect();
        let line = format!("C^{k}_{n} = {{{}}} ({} elements)", shown.join(", "), got.len());
        if got == want {
            r.details.push(line);
        } else {
            r.fail(format!("{line} differs from the listed set"));
        }
    }
    let limit = Duration::from_secs(p.seconds.unwrap_or(10));
    let start = Instant::now();
    let mut targets = Vec::new();
    for n in 0u32.. {
        let ks: Vec<u64> = (0u64..)
            .take_while(|&k| exp2(n, k).is_ok_and(|v| v <= DEFAULT_C_CAP))
            .collect();
        if ks.is_empty() {
            break;
        }
        targets.extend(ks.into_iter().map(|k| (n, k)));
    }
    // cheap levels first so a timeout only cuts the n = 0 tail
    targets.sort_by_key(|&(n, k)| (n == 0, k));
    let total = targets.len();
    let mut pairs = 0;
    for (n, k) in targets {
        if start.elapsed() > limit {
            r.fail(format!(
                "time budget {:?} spent after {pairs} of {total} (n,k) pairs; next was n={n}, k={k}",
                limit
            ));
            break;
        }
        let size = c_set(n, k)?.len() as u64;
        pairs += 1;
        if size != exp2(n, k)? {
            r.fail(format!("|C^{k}_{n}| = {size}, expected {}", exp2(n, k)?));
        }
    }
    r.checked += pairs;
    r.summary = format!(
        "2 listed sets, {pairs} of {total} (n,k) cardinalities in {:?}",
        start.elapsed()
    );
    Ok(r)
}

/// `S_a = a + C^k_n` for `a = exp(omega,n,k)`.
pub fn cnk(_p: &Params) -> Result<Report> {
    let mut r = Report::new("cnk");
    for (n, k) in [(1usize, 3u64), (1, 1), (1, 2), (2, 1)] {
        let a = exp_tower_w(n, k);
        let ambient = cnk_ambient(n, k);
        let got = s_alpha(&a, &ambient, 4096)?;
        let want: BTreeSet<Ordinal> = c_set(n as u32, k)?.iter().map(|x| add(&a, x)).collect();
        r.checked += 1;
        let shown: Vec<String> = got.iter().map(|x| x.to_string()).collect();
        let line = format!("S_{a} in G_({ambient}) = {{{}}}", shown.join(", "));
        if got == want {
            r.details.push(line);
        } else {
            r.fail(format!("{line} differs from {a} + C^{k}_{n}"));
        }
    }
    r.summary = format!("{} instances", r.checked);
    Ok(r)
}

/// The greatest sequence of `G_(omega^^(n+1))` passes `exp(omega,n,k)`.
pub fn tail_sequence(p: &Params) -> Result<Report> {
    let n = p.n.unwrap_or(2);
    let k = p.k.unwrap_or(2);
    let mut r = Report::new(&format!("tail-sequence n={n} K={k}"));
    r.checked = k as usize;
    if !greatest_seq_tail_check(n, k)? {
        r.fail(format!("some exp(w,{n},k) with k <= {k} is skipped"));
    }
    let listed: Vec<String> = (1..=k).map(|i| exp_tower_w(n, i).to_string()).collect();
    r.summary = format!("greatest sequence of {} visits {}", tower(n + 1), listed.join(", "));
    Ok(r)
}
