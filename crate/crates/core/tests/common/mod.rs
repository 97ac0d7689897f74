//! Independent oracles and random instance sources shared by the
//! integration tests. Nothing here calls the library's solvers or flow code.

#![allow(dead_code)]

use mcp_core::graph::SimpleGraph;
use mcp_core::solve::Answer;
use mcp_core::{EdgeSpec, Instance, Variant};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub min_n: usize,
    pub max_n: usize,
    pub max_m: usize,
    pub cost: (u64, u64),
    pub cap: (u64, u64),
    pub max_d: u64,
    pub max_a: u64,
}

impl Shape {
    pub fn small(variant: Variant) -> Shape {
        let (cost, cap) = match variant {
            Variant::Mcp => ((1, 1), (1, 1)),
            Variant::Wmcp => ((1, 3), (1, 3)),
            Variant::Zwmcp => ((1, 3), (0, 3)),
        };
        Shape {
            min_n: 2,
            max_n: 8,
            max_m: 14,
            cost,
            cap,
            max_d: 6,
            max_a: 5,
        }
    }
}

/// Random connected instance: a random spanning tree plus extra edges.
/// Vertex `0` is `s` and the last vertex is `t`.
/// MCP instances always get unit weights and WMCP capacities at least 1.
pub fn random_instance(rng: &mut impl Rng, variant: Variant, shape: Shape) -> Instance {
    let shape = match variant {
        Variant::Mcp => Shape {
            cost: (1, 1),
            cap: (1, 1),
            ..shape
        },
        Variant::Wmcp => Shape {
            cap: (shape.cap.0.max(1), shape.cap.1.max(1)),
            ..shape
        },
        Variant::Zwmcp => shape,
    };
    let n = rng.gen_range(shape.min_n..=shape.max_n);
    let max_m = shape.max_m.min(n * (n - 1) / 2).max(n - 1);
    let m = rng.gen_range(n - 1..=max_m);
    let name = |i: usize| match i {
        0 => "s".to_string(),
        i if i == n - 1 => "t".to_string(),
        i => format!("v{i}"),
    };
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    let mut tries = 0;
    while pairs.len() < m && tries < 1000 {
        tries += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let p = (u.min(v), u.max(v));
        if u != v && !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            EdgeSpec::new(
                name(u),
                name(v),
                rng.gen_range(shape.cost.0..=shape.cost.1),
                rng.gen_range(shape.cap.0..=shape.cap.1),
            )
        })
        .collect();
    let d = rng.gen_range(0..=shape.max_d);
    let a = rng.gen_range(0..=shape.max_a);
    Instance::new(variant, (0..n).map(name).collect(), edges, "s", "t", d, a).unwrap()
}

/// Edge masks of all `(s,t)`-cuts `E(S, V - S)` whose capacity is at most `a`,
/// one per vertex bipartition.
pub fn small_cut_masks(inst: &Instance) -> Vec<u64> {
    let n = inst.vertex_count();
    let (s, t) = (inst.s(), inst.t());
    let free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << free.len()) {
        let mut side = vec![false; n];
        side[s] = true;
        for (i, &v) in free.iter().enumerate() {
            side[v] = bits >> i & 1 == 1;
        }
        let mut mask = 0u64;
        let mut cap = 0u64;
        for (i, e) in inst.edges().iter().enumerate() {
            if side[e.u] != side[e.v] {
                mask |= 1 << i;
                cap += e.cap;
            }
        }
        if cap <= inst.a() {
            out.push(mask);
        }
    }
    out
}

/// Minimum cost of an edge set meeting every small cut, ignoring `d`.
/// `None` when some small cut is empty (s and t disconnected).
pub fn oracle_min_cost(inst: &Instance) -> Option<u64> {
    let m = inst.edge_count();
    assert!(m <= 20, "oracle limited to 20 edges");
    let cuts = small_cut_masks(inst);
    if cuts.contains(&0) {
        return None;
    }
    let costs: Vec<u64> = inst.edges().iter().map(|e| e.cost).collect();
    let mut best: Option<u64> = None;
    for d in 0u64..(1 << m) {
        let cost: u64 = (0..m).filter(|&i| d >> i & 1 == 1).map(|i| costs[i]).sum();
        if best.is_some_and(|b| cost >= b) {
            continue;
        }
        if cuts.iter().all(|&c| c & d != 0) {
            best = Some(cost);
        }
    }
    best
}

pub fn oracle_answer(inst: &Instance) -> Answer {
    match oracle_min_cost(inst) {
        Some(c) if c <= inst.d() => Answer::Yes,
        _ => Answer::No,
    }
}

/// Whether the edge ids in `defense` meet every small cut within budget.
pub fn oracle_valid(inst: &Instance, defense: &[usize]) -> bool {
    let mask = defense.iter().fold(0u64, |m, &e| m | 1 << e);
    let cost: u64 = defense.iter().map(|&e| inst.edge(e).cost).sum();
    cost <= inst.d() && small_cut_masks(inst).iter().all(|&c| c & mask != 0)
}

/// Maximum flow value between `x` and `y` as the minimum over all
/// bipartitions.
pub fn oracle_min_cut(inst: &Instance, caps: &[u64], x: usize, y: usize) -> u64 {
    let n = inst.vertex_count();
    let free: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
    let mut best = u64::MAX;
    for bits in 0u64..(1 << free.len()) {
        let mut side = vec![false; n];
        side[x] = true;
        for (i, &v) in free.iter().enumerate() {
            side[v] = bits >> i & 1 == 1;
        }
        let cap = inst
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| side[e.u] != side[e.v])
            .map(|(i, _)| caps[i])
            .sum();
        best = best.min(cap);
    }
    best
}

/// Minimum vertex cover size by trying all subsets.
pub fn oracle_vertex_cover(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u64..(1 << n))
        .filter(|&c| {
            edges
                .iter()
                .all(|&(u, v)| c >> u & 1 == 1 || c >> v & 1 == 1)
        })
        .map(|c| c.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Brute-force table entry of the decomposition DP: the least cost of
/// `D ⊆ E_x` with `D ∩ E(bag) = dx` such that, for every partition `P` of
/// the bag, every partition-cut for `P` in `G[vx]` avoiding `D` has
/// capacity at least `f(P)`. Partitions are given as block labels over the
/// sorted `bag`.
pub fn oracle_table_entry(
    inst: &Instance,
    vx: &[usize],
    bag: &[usize],
    partitions: &[Vec<u8>],
    f: &[u64],
    dx: &[usize],
) -> Option<u64> {
    let inside = |v: usize| vx.contains(&v);
    let in_bag = |v: usize| bag.contains(&v);
    let ex: Vec<usize> = (0..inst.edge_count())
        .filter(|&e| inside(inst.edge(e).u) && inside(inst.edge(e).v))
        .collect();
    let bag_edges: Vec<usize> = ex
        .iter()
        .copied()
        .filter(|&e| in_bag(inst.edge(e).u) && in_bag(inst.edge(e).v))
        .collect();
    let free_edges: Vec<usize> = ex
        .iter()
        .copied()
        .filter(|e| !bag_edges.contains(e))
        .collect();
    let outer: Vec<usize> = vx.iter().copied().filter(|&v| !in_bag(v)).collect();
    // every labeling of V_x extending P yields a minimal-form partition-cut
    let labelings = |p: &[u8]| -> Vec<Vec<usize>> {
        let blocks = p.iter().copied().max().map_or(0, |b| b as usize + 1);
        let mut out = Vec::new();
        let total = blocks.pow(outer.len() as u32);
        for mut code in 0..total {
            let mut label = vec![usize::MAX; inst.vertex_count()];
            for (i, &v) in bag.iter().enumerate() {
                label[v] = p[i] as usize;
            }
            for &v in &outer {
                label[v] = code % blocks;
                code /= blocks;
            }
            let cut = ex
                .iter()
                .copied()
                .filter(|&e| label[inst.edge(e).u] != label[inst.edge(e).v])
                .collect();
            out.push(cut);
        }
        out
    };
    let cuts: Vec<Vec<Vec<usize>>> = partitions.iter().map(|p| labelings(p)).collect();
    let mut best: Option<u64> = None;
    for bits in 0u64..(1 << free_edges.len()) {
        let mut d: Vec<usize> = dx.to_vec();
        d.extend(
            (0..free_edges.len())
                .filter(|&i| bits >> i & 1 == 1)
                .map(|i| free_edges[i]),
        );
        let ok = cuts.iter().zip(f).all(|(family, &need)| {
            family
                .iter()
                .filter(|cut| cut.iter().all(|e| !d.contains(e)))
                .all(|cut| cut.iter().map(|&e| inst.edge(e).cap).sum::<u64>() >= need)
        });
        if ok {
            let cost = d.iter().map(|&e| inst.edge(e).cost).sum();
            best = Some(best.map_or(cost, |b: u64| b.min(cost)));
        }
    }
    best
}

// Source-side enumerators for the generator families.

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |b| (0..n).filter(|&i| b >> i & 1 == 1).collect())
}

pub fn answer(b: bool) -> Answer {
    if b {
        Answer::Yes
    } else {
        Answer::No
    }
}

pub fn source_graph(meta: &serde_json::Value) -> SimpleGraph {
    let n = meta["source"]["graph"]["vertices"].as_u64().unwrap() as usize;
    let edges: Vec<(usize, usize)> =
        serde_json::from_value(meta["source"]["graph"]["edges"].clone()).unwrap();
    SimpleGraph::from_edges(n, edges)
}

pub fn is_answer(g: &SimpleGraph, k: usize) -> Answer {
    answer(
        subsets(g.vertex_count())
            .any(|s| s.len() == k && s.iter().all(|&u| s.iter().all(|&v| !g.has_edge(u, v)))),
    )
}

pub fn knapsack_answer(f: &[u64], g: &[u64], b: u64, c: u64) -> Answer {
    answer(subsets(f.len()).any(|s| {
        s.iter().map(|&i| f[i]).sum::<u64>() <= b && s.iter().map(|&i| g[i]).sum::<u64>() >= c
    }))
}

pub fn binpacking_answer(f: &[u64], b: u64, k: usize) -> Answer {
    // every assignment of items to bins
    let total = k.pow(f.len() as u32);
    answer((0..total).any(|mut code| {
        let mut load = vec![0; k];
        for &x in f {
            load[code % k] += x;
            code /= k;
        }
        load.iter().all(|&l| l == b)
    }))
}

pub fn biclique_answer(g: &SimpleGraph, k: usize) -> Answer {
    let color = g.bipartition().unwrap();
    answer(subsets(g.vertex_count()).any(|s| {
        let xs: Vec<usize> = s.iter().copied().filter(|&v| !color[v]).collect();
        let ys: Vec<usize> = s.iter().copied().filter(|&v| color[v]).collect();
        xs.len() == k && ys.len() == k && xs.iter().all(|&x| ys.iter().all(|&y| g.has_edge(x, y)))
    }))
}
