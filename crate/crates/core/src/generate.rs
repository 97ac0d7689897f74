//! Instance generators from four hardness constructions. Each output comes
//! with metadata describing the source and, for small sources, the answer
//! obtained by solving the source directly.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::instance::{EdgeSpec, Instance, Variant};
use crate::solve::Answer;

/// Largest source (vertices or items) solved directly for the metadata.
pub const SOURCE_SOLVE_LIMIT: usize = 24;

#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: Instance,
    /// Answer of the source problem, when it was small enough to solve.
    pub expected: Option<Answer>,
    pub metadata: Value,
}

impl Generated {
    pub fn to_json(&self) -> String {
        self.instance.to_json_with_metadata(self.metadata.clone())
    }
}

fn answer(b: bool) -> Answer {
    if b {
        Answer::Yes
    } else {
        Answer::No
    }
}

fn vertex_list(names: &[String]) -> Vec<String> {
    let mut out = names.to_vec();
    out.push("s".into());
    out.push("t".into());
    out
}

fn graph_json(g: &SimpleGraph) -> Value {
    json!({ "vertices": g.vertex_count(), "edges": g.edges() })
}

/// Independent set of size `k` from an `r`-regular graph.
pub fn gen_regular_is(g: &SimpleGraph, k: u64) -> Result<Generated> {
    let n = g.vertex_count();
    let r = if n == 0 { 0 } else { g.degree(0) };
    if (0..n).any(|v| g.degree(v) != r) {
        return Err(Error::Source("graph is not regular".into()));
    }
    let heavy = k + 1;
    let v = |i: usize| format!("v:{}", i + 1);
    let vp = |i: usize| format!("v':{}", i + 1);
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for i in 0..n {
        names.push(v(i));
        names.push(vp(i));
        edges.push(EdgeSpec::new("s", v(i), 1, 1));
        edges.push(EdgeSpec::new(v(i), vp(i), heavy, 1));
        edges.push(EdgeSpec::new(vp(i), "t", heavy, 1));
    }
    for (x, y) in g.edges() {
        let w = format!("w:{}-{}", x + 1, y + 1);
        names.push(w.clone());
        edges.push(EdgeSpec::new(v(x), w.clone(), heavy, 1));
        edges.push(EdgeSpec::new(v(y), w.clone(), heavy, 1));
        edges.push(EdgeSpec::new(w, "t", heavy, 1));
    }
    let d = k;
    let a = (n as u64 + k * r as u64)
        .checked_sub(1)
        .ok_or_else(|| Error::Source("empty graph with k = 0".into()))?;
    let instance = Instance::new(Variant::Wmcp, vertex_list(&names), edges, "s", "t", d, a)?;
    let expected = (n <= SOURCE_SOLVE_LIMIT).then(|| answer(has_independent_set(g, k as usize)));
    let metadata = json!({
        "family": "is",
        "source": { "graph": graph_json(g), "k": k, "r": r },
        "expected": expected,
        "params": { "d": d, "a": a },
    });
    Ok(Generated {
        instance,
        expected,
        metadata,
    })
}

/// Knapsack with item sizes `f`, values `g`, size bound `b` and value target `c`.
pub fn gen_knapsack(f: &[u64], g: &[u64], b: u64, c: u64) -> Result<Generated> {
    if f.is_empty() || f.len() != g.len() {
        return Err(Error::Source(
            "need equally many sizes and values, at least one".into(),
        ));
    }
    if f.contains(&0) {
        return Err(Error::Source("item sizes must be positive".into()));
    }
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for (i, (&fi, &gi)) in f.iter().zip(g).enumerate() {
        let u = format!("u:{}", i + 1);
        names.push(u.clone());
        edges.push(EdgeSpec::new("s", u.clone(), fi, 1));
        edges.push(EdgeSpec::new(u, "t", b + 1, gi + 1));
    }
    let a = (f.len() as u64 + c) - 1;
    let instance = Instance::new(Variant::Wmcp, vertex_list(&names), edges, "s", "t", b, a)?;
    let expected = (f.len() <= SOURCE_SOLVE_LIMIT).then(|| answer(knapsack_feasible(f, g, b, c)));
    let metadata = json!({
        "family": "knapsack",
        "source": { "sizes": f, "values": g, "B": b, "C": c },
        "expected": expected,
        "params": { "d": b, "a": a },
    });
    Ok(Generated {
        instance,
        expected,
        metadata,
    })
}

/// Bin packing of items `f` into `k` bins of size `b`. If the sizes do not
/// sum to `b * k` the source is a trivial NO; the instance is still emitted
/// but carries no expected answer.
pub fn gen_binpacking(f: &[u64], b: u64, k: usize) -> Result<Generated> {
    if f.is_empty() || k == 0 || b == 0 || f.contains(&0) {
        return Err(Error::Source(
            "need items, bins and sizes that are positive".into(),
        ));
    }
    let items = f.len() as u64;
    // 2·B·|U| alone lets the cut {s,t} plus all {s,u} stay within `a` once
    // k >= 2B; any lambda above |U|·k keeps the reduction exact
    let lambda = (2 * b * items).max(items * k as u64 + 1);
    let d = items;
    let a = items * k as u64 + lambda * (b * k as u64 - 1);
    let heavy = d + 1;
    let u = |i: usize| format!("u:{}", i + 1);
    let bin = |j: usize| format!("b:{}", j + 1);
    let mut names = Vec::new();
    let mut edges = vec![EdgeSpec::new("s", "t", heavy, 1)];
    for (i, &fi) in f.iter().enumerate() {
        names.push(u(i));
        edges.push(EdgeSpec::new("s", u(i), heavy, lambda * fi));
    }
    for j in 0..k {
        names.push(bin(j));
        edges.push(EdgeSpec::new(bin(j), "t", heavy, lambda * b));
        for i in 0..f.len() {
            edges.push(EdgeSpec::new(u(i), bin(j), 1, 1));
        }
    }
    let instance = Instance::new(Variant::Wmcp, vertex_list(&names), edges, "s", "t", d, a)?;
    // the construction only encodes sources whose sizes sum to b * k; for
    // other sources the instance answer says nothing about the source
    let trivial_no = f.iter().sum::<u64>() != b * k as u64;
    let expected = (!trivial_no && f.len() <= SOURCE_SOLVE_LIMIT)
        .then(|| answer(bin_packing_feasible(f, b, k)));
    let source_answer = if trivial_no {
        Some(Answer::No)
    } else {
        expected
    };
    let metadata = json!({
        "family": "binpacking",
        "source": { "sizes": f, "B": b, "k": k },
        "expected": expected,
        "source_answer": source_answer,
        "trivial_no": trivial_no,
        "params": { "d": d, "a": a, "lambda": lambda },
    });
    Ok(Generated {
        instance,
        expected,
        metadata,
    })
}

/// `(k,k)`-biclique in a bipartite graph. Side X is the color-false class
/// of the graph's two-coloring.
pub fn gen_biclique_zwmcp(g: &SimpleGraph, k: u64) -> Result<Generated> {
    let Some(color) = g.bipartition() else {
        return Err(Error::Source("graph is not bipartite".into()));
    };
    if k == 0 {
        return Err(Error::Source("k must be positive".into()));
    }
    let d = (2 * k + 1) * k * k + 2 * k;
    let a = k * k - 1;
    let x = |i: usize| format!("x:{}", i + 1);
    let y = |i: usize| format!("y:{}", i + 1);
    let side = |i: usize| if color[i] { y(i) } else { x(i) };
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for (i, &c) in color.iter().enumerate() {
        names.push(side(i));
        if c {
            edges.push(EdgeSpec::new(y(i), "t", 1, 0));
        } else {
            edges.push(EdgeSpec::new("s", x(i), 1, 0));
        }
    }
    for (p, q) in g.edges() {
        let (xi, yi) = if color[p] { (q, p) } else { (p, q) };
        let w = format!("w:{}-{}", xi + 1, yi + 1);
        names.push(w.clone());
        edges.push(EdgeSpec::new(x(xi), w.clone(), d + 1, 1));
        edges.push(EdgeSpec::new(w, y(yi), 2 * k + 1, 0));
    }
    let instance = Instance::new(Variant::Zwmcp, vertex_list(&names), edges, "s", "t", d, a)?;
    let expected =
        (g.vertex_count() <= SOURCE_SOLVE_LIMIT).then(|| answer(has_biclique(g, k as usize)));
    let metadata = json!({
        "family": "biclique",
        "source": { "graph": graph_json(g), "k": k },
        "expected": expected,
        "params": { "d": d, "a": a },
    });
    Ok(Generated {
        instance,
        expected,
        metadata,
    })
}

/// Whether `g` has an independent set of size `k`.
pub fn has_independent_set(g: &SimpleGraph, k: usize) -> bool {
    fn go(g: &SimpleGraph, v: usize, blocked: &mut Vec<u32>, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if v == g.vertex_count() || g.vertex_count() - v < need {
            return false;
        }
        if blocked[v] == 0 {
            for &w in g.neighbors(v) {
                blocked[w] += 1;
            }
            let found = go(g, v + 1, blocked, need - 1);
            for &w in g.neighbors(v) {
                blocked[w] -= 1;
            }
            if found {
                return true;
            }
        }
        go(g, v + 1, blocked, need)
    }
    go(g, 0, &mut vec![0; g.vertex_count()], k)
}

/// Whether some subset has total size at most `b` and total value at least `c`.
pub fn knapsack_feasible(f: &[u64], g: &[u64], b: u64, c: u64) -> bool {
    // Pareto frontier of (size, value), sorted by size with rising value
    let mut frontier: Vec<(u64, u64)> = vec![(0, 0)];
    for (&fi, &gi) in f.iter().zip(g) {
        let mut next: Vec<(u64, u64)> = frontier
            .iter()
            .filter(|&&(s, _)| s + fi <= b)
            .map(|&(s, v)| (s + fi, v + gi))
            .chain(frontier.iter().copied())
            .collect();
        next.sort_unstable_by(|p, q| p.0.cmp(&q.0).then(q.1.cmp(&p.1)));
        frontier.clear();
        for p in next {
            if frontier.last().is_none_or(|l| p.1 > l.1) {
                frontier.push(p);
            }
        }
    }
    frontier.last().is_some_and(|&(_, v)| v >= c)
}

/// Whether the items fill `k` bins of size `b` exactly.
pub fn bin_packing_feasible(f: &[u64], b: u64, k: usize) -> bool {
    fn go(items: &[u64], i: usize, load: &mut Vec<u64>, b: u64) -> bool {
        if i == items.len() {
            return load.iter().all(|&l| l == b);
        }
        for j in 0..load.len() {
            // bins with equal load are interchangeable
            if load[..j].contains(&load[j]) || load[j] + items[i] > b {
                continue;
            }
            load[j] += items[i];
            let ok = go(items, i + 1, load, b);
            load[j] -= items[i];
            if ok {
                return true;
            }
        }
        false
    }
    if f.iter().sum::<u64>() != b * k as u64 {
        return false;
    }
    let mut items = f.to_vec();
    items.sort_unstable_by(|x, y| y.cmp(x));
    go(&items, 0, &mut vec![0; k], b)
}

/// Whether the bipartite `g` contains `K_{k,k}`.
pub fn has_biclique(g: &SimpleGraph, k: usize) -> bool {
    let Some(color) = g.bipartition() else {
        return false;
    };
    let left: Vec<usize> = (0..g.vertex_count()).filter(|&v| !color[v]).collect();
    fn go(
        g: &SimpleGraph,
        left: &[usize],
        from: usize,
        common: Vec<usize>,
        need: usize,
        k: usize,
    ) -> bool {
        if common.len() < k {
            return false;
        }
        if need == 0 {
            return true;
        }
        (from..left.len()).any(|i| {
            let next = common
                .iter()
                .copied()
                .filter(|&y| g.has_edge(left[i], y))
                .collect();
            go(g, left, i + 1, next, need - 1, k)
        })
    }
    let right: Vec<usize> = (0..g.vertex_count()).filter(|&v| color[v]).collect();
    k == 0 || go(g, &left, 0, right, k, k)
}

/// Random `r`-regular graph on `n` vertices by the pairing model.
pub fn random_regular_graph(n: usize, r: usize, rng: &mut impl Rng) -> Result<SimpleGraph> {
    if r >= n.max(1) || (n * r) % 2 == 1 {
        return Err(Error::Source(format!(
            "no {r}-regular graph on {n} vertices"
        )));
    }
    for _ in 0..10_000 {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, r)).collect();
        points.shuffle(rng);
        let mut g = SimpleGraph::new(n);
        let ok = points.chunks(2).all(|p| {
            let simple = p[0] != p[1] && !g.has_edge(p[0], p[1]);
            g.add_edge(p[0], p[1]);
            simple
        });
        if ok {
            return Ok(g);
        }
    }
    Err(Error::Source(format!(
        "pairing model failed for n={n}, r={r}"
    )))
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random tiny sources, small enough for every exact solver.
pub fn random_is(seed: u64) -> Generated {
    let mut rng = rng_for(seed);
    loop {
        let n = rng.gen_range(3..=6);
        let r = rng.gen_range(0..=3.min(n - 1));
        if let Ok(g) = random_regular_graph(n, r, &mut rng) {
            let k = rng.gen_range(1..=3);
            return gen_regular_is(&g, k).expect("regular source");
        }
    }
}

pub fn random_knapsack(seed: u64) -> Generated {
    let mut rng = rng_for(seed);
    let items = rng.gen_range(1..=4);
    let f: Vec<u64> = (0..items).map(|_| rng.gen_range(1..=4)).collect();
    let g: Vec<u64> = (0..items).map(|_| rng.gen_range(1..=4)).collect();
    let b = rng.gen_range(0..=6);
    let c = rng.gen_range(0..=8);
    gen_knapsack(&f, &g, b, c).expect("valid knapsack source")
}

pub fn random_binpacking(seed: u64) -> Generated {
    let mut rng = rng_for(seed);
    loop {
        let k = rng.gen_range(1..=3);
        let b = rng.gen_range(1..=3);
        // split every bin into parts, so most sources sum to b * k
        let mut f = Vec::new();
        for _ in 0..k {
            let mut left = b;
            while left > 0 {
                let part = rng.gen_range(1..=left);
                f.push(part);
                left -= part;
            }
        }
        if rng.gen_bool(0.3) {
            let i = rng.gen_range(0..f.len());
            f[i] += 1;
        }
        f.shuffle(&mut rng);
        if f.len() <= 4 {
            return gen_binpacking(&f, b, k).expect("valid bin packing source");
        }
    }
}

pub fn random_biclique(seed: u64) -> Generated {
    let mut rng = rng_for(seed);
    let nx = rng.gen_range(1..=3);
    let ny = rng.gen_range(1..=3);
    let mut g = SimpleGraph::new(nx + ny);
    for x in 0..nx {
        for y in 0..ny {
            if rng.gen_bool(0.6) {
                g.add_edge(x, nx + y);
            }
        }
    }
    let k = rng.gen_range(1..=2);
    gen_biclique_zwmcp(&g, k).expect("bipartite source")
}
