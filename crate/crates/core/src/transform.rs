//! Answer-preserving rewrites: vertex merging, Reduction Rule 1, weight
//! expansions and the subcubic expansion. Also hosts the inclusion-minimal
//! cut enumerator that backs Rule 1.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::instance::{CutSet, DefenseSet, EdgeSpec, FreshNames, Instance, Variant};

/// Default node budget for minimal-cut enumeration.
pub const DEFAULT_ENUM_BUDGET: u64 = 200_000;

/// Upper bound on vertices created by a single weight expansion.
const EXPANSION_LIMIT: u64 = 5_000_000;

/// Name the merged vertex of `u` and `w` receives: a terminal keeps its
/// name, otherwise the lexicographically smaller name survives.
pub fn merged_name(inst: &Instance, u: usize, w: usize) -> &str {
    if inst.is_terminal(u) {
        inst.name(u)
    } else if inst.is_terminal(w) {
        inst.name(w)
    } else {
        inst.name(u.min(w))
    }
}

/// Identify `u` and `w`. Parallel edges collapse to the minimum cost and the
/// summed capacity; an edge between `u` and `w` disappears.
pub fn merge(inst: &Instance, u: usize, w: usize) -> Result<Instance> {
    if u == w {
        return Err(Error::SameEndpoints);
    }
    if inst.is_terminal(u) && inst.is_terminal(w) {
        return Err(Error::MergeTerminals);
    }
    let keep = merged_name(inst, u, w).to_string();
    let gone = if inst.name(u) == keep { w } else { u };

    let mut plain = Vec::new();
    let mut collapsed: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for e in inst.edges() {
        let hits_u = e.touches(u);
        let hits_w = e.touches(w);
        match (hits_u, hits_w) {
            (true, true) => {}
            (false, false) => {
                plain.push(EdgeSpec::new(inst.name(e.u), inst.name(e.v), e.cost, e.cap))
            }
            _ => {
                let x = if hits_u { e.other(u) } else { e.other(w) };
                let slot = collapsed.entry(x).or_insert((u64::MAX, 0));
                slot.0 = slot.0.min(e.cost);
                slot.1 += e.cap;
            }
        }
    }
    for (x, (cost, cap)) in collapsed {
        plain.push(EdgeSpec::new(keep.clone(), inst.name(x), cost, cap));
    }
    let vertices: Vec<String> = (0..inst.vertex_count())
        .filter(|&v| v != gone)
        .map(|v| inst.name(v).to_string())
        .collect();
    let widened =
        if inst.variant() == Variant::Mcp && plain.iter().any(|e| e.cost != 1 || e.cap != 1) {
            Variant::Wmcp
        } else {
            inst.variant()
        };
    Instance::new(
        widened,
        vertices,
        plain,
        inst.name(inst.s()),
        inst.name(inst.t()),
        inst.d(),
        inst.a(),
    )
}

pub fn merge_by_names(inst: &Instance, u: &str, w: &str) -> Result<Instance> {
    let ui = inst
        .vertex_index(u)
        .ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
    let wi = inst
        .vertex_index(w)
        .ok_or_else(|| Error::UnknownVertex(w.to_string()))?;
    merge(inst, ui, wi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeStep {
    pub u: String,
    pub w: String,
    pub into: String,
}

/// Sequence of merges, by vertex name, that turns an instance into its
/// reduced form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MergeTrace {
    pub steps: Vec<MergeStep>,
}

impl MergeTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn replay(&self, inst: &Instance) -> Result<Instance> {
        let mut cur = inst.clone();
        for step in &self.steps {
            cur = merge_by_names(&cur, &step.u, &step.w)?;
        }
        Ok(cur)
    }

    /// Map every original vertex name to the reduced vertex it ended up in.
    pub fn representatives(&self, original: &Instance) -> HashMap<String, String> {
        let mut alias: HashMap<String, String> = HashMap::new();
        for step in &self.steps {
            for x in [&step.u, &step.w] {
                if *x != step.into {
                    alias.insert(x.clone(), step.into.clone());
                }
            }
        }
        original
            .names()
            .iter()
            .map(|n| {
                let mut cur = n;
                while let Some(next) = alias.get(cur) {
                    cur = next;
                }
                (n.clone(), cur.clone())
            })
            .collect()
    }

    /// Pull a defense of the reduced instance back to `original`: each
    /// reduced edge is replaced by the cheapest original edge it absorbed.
    pub fn lift_defense(
        &self,
        original: &Instance,
        reduced: &Instance,
        defense: &DefenseSet,
    ) -> Result<DefenseSet> {
        let rep = self.representatives(original);
        let mut best: HashMap<usize, usize> = HashMap::new();
        for (i, e) in original.edges().iter().enumerate() {
            let x = &rep[original.name(e.u)];
            let y = &rep[original.name(e.v)];
            if x == y {
                continue;
            }
            let Ok(r) = reduced.edge_by_names(x, y) else {
                continue;
            };
            let slot = best.entry(r).or_insert(i);
            if original.edge(i).cost < original.edge(*slot).cost {
                *slot = i;
            }
        }
        let mut lifted = Vec::with_capacity(defense.len());
        for &r in defense.edges() {
            let (x, y) = reduced.edge_names(r);
            let i = best.get(&r).ok_or_else(|| {
                Error::Internal(format!("reduced edge {{{x}, {y}}} has no preimage"))
            })?;
            lifted.push(*i);
        }
        Ok(DefenseSet::new(original, lifted))
    }
}

/// Depth-first enumeration of connected vertex sets `S` with `s ∈ S`,
/// `t ∉ S` whose boundary `δ(S)` is an inclusion-minimal `(s,t)`-cut of
/// capacity at most `bound`.
struct CutEnumerator<'a> {
    inst: &'a Instance,
    bound: u64,
    budget: u64,
    nodes: u64,
    in_s: Vec<bool>,
    excluded: Vec<bool>,
}

impl<'a> CutEnumerator<'a> {
    fn new(inst: &'a Instance, bound: u64, budget: u64) -> Self {
        let n = inst.vertex_count();
        let mut in_s = vec![false; n];
        let mut excluded = vec![false; n];
        in_s[inst.s()] = true;
        excluded[inst.t()] = true;
        CutEnumerator {
            inst,
            bound,
            budget,
            nodes: 0,
            in_s,
            excluded,
        }
    }

    /// Capacity of the edges between `S` and excluded vertices; these are
    /// in `δ(S)` for every extension of `S`.
    fn fixed_capacity(&self) -> u64 {
        self.inst
            .edges()
            .iter()
            .filter(|e| {
                (self.in_s[e.u] && self.excluded[e.v]) || (self.in_s[e.v] && self.excluded[e.u])
            })
            .map(|e| e.cap)
            .sum()
    }

    /// Every excluded neighbor of `S` must still reach `t` outside `S`.
    fn boundary_reaches_t(&self) -> bool {
        let n = self.inst.vertex_count();
        let mut seen = vec![false; n];
        let t = self.inst.t();
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(x) = stack.pop() {
            for &(y, _) in self.inst.neighbors(x) {
                if !seen[y] && !self.in_s[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..n).all(|v| {
            !(self.excluded[v] && !seen[v])
                || !self.inst.neighbors(v).iter().any(|&(y, _)| self.in_s[y])
        })
    }

    /// Calls `emit` with each qualifying `S`; stops early when `emit`
    /// returns true. Returns whether it stopped early.
    fn run(&mut self, emit: &mut dyn FnMut(&[bool]) -> bool) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "minimal cut enumeration",
                limit: self.budget,
            });
        }
        if self.fixed_capacity() > self.bound || !self.boundary_reaches_t() {
            return Ok(false);
        }
        let frontier = (0..self.inst.vertex_count()).find(|&v| {
            !self.in_s[v]
                && !self.excluded[v]
                && self.inst.neighbors(v).iter().any(|&(y, _)| self.in_s[y])
        });
        let Some(v) = frontier else {
            return Ok(emit(&self.in_s));
        };
        self.in_s[v] = true;
        let stop = self.run(emit);
        self.in_s[v] = false;
        if stop? {
            return Ok(true);
        }
        self.excluded[v] = true;
        let stop = self.run(emit);
        self.excluded[v] = false;
        stop
    }
}

fn boundary(inst: &Instance, side: &[bool]) -> CutSet {
    let crossing = inst
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| side[e.u] != side[e.v])
        .map(|(i, _)| i);
    CutSet::new(crossing, &inst.capacities())
}

/// All inclusion-minimal `(s,t)`-cuts of capacity at most `cap_bound`, each
/// exactly once.
pub fn enumerate_minimal_cuts(inst: &Instance, cap_bound: u64, budget: u64) -> Result<Vec<CutSet>> {
    let mut out = Vec::new();
    let mut en = CutEnumerator::new(inst, cap_bound, budget);
    en.run(&mut |side| {
        out.push(boundary(inst, side));
        false
    })?;
    Ok(out)
}

/// Min cut separating the vertex sets `xs` and `ys` in the instance graph
/// without edge `skip`; `None` if the sets intersect.
fn set_min_cut(
    inst: &Instance,
    skip: usize,
    xs: &[usize],
    ys: &[usize],
    limit: u64,
) -> Option<u64> {
    if xs.iter().any(|x| ys.contains(x)) {
        return None;
    }
    let n = inst.vertex_count();
    let (src, snk) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    for (i, e) in inst.edges().iter().enumerate() {
        if i != skip {
            net.add_undirected(e.u, e.v, e.cap);
        }
    }
    for &x in xs {
        net.add_directed(src, x, u64::MAX / 4);
    }
    for &y in ys {
        net.add_directed(y, snk, u64::MAX / 4);
    }
    Some(net.max_flow(src, snk, limit))
}

/// Necessary condition for edge `e` to lie in a minimal cut of capacity at
/// most `a`: some orientation `(u, w)` admits a cut separating `{s,u}` from
/// `{w,t}` in `G - e` of capacity at most `a - ω(e)`.
pub fn membership_filter(inst: &Instance, e: usize) -> bool {
    let edge = inst.edge(e);
    let Some(rest) = inst.a().checked_sub(edge.cap) else {
        return false;
    };
    let (s, t) = (inst.s(), inst.t());
    [(edge.u, edge.v), (edge.v, edge.u)]
        .iter()
        .any(|&(u, w)| set_min_cut(inst, e, &[s, u], &[w, t], rest + 1).is_some_and(|v| v <= rest))
}

/// Whether edge `e` lies in some inclusion-minimal `(s,t)`-cut of capacity
/// at most `a`.
pub fn minimal_cut_membership(inst: &Instance, e: usize, budget: u64) -> Result<bool> {
    if !membership_filter(inst, e) {
        return Ok(false);
    }
    let edge = *inst.edge(e);
    let mut en = CutEnumerator::new(inst, inst.a(), budget);
    en.run(&mut |side| side[edge.u] != side[edge.v])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule1Outcome {
    Reduced {
        instance: Instance,
        trace: MergeTrace,
    },
    /// A merge would identify `s` and `t`: no cut of capacity at most `a`
    /// exists, so the empty defense works.
    TriviallyYes { trace: MergeTrace },
}

impl Rule1Outcome {
    pub fn trace(&self) -> &MergeTrace {
        match self {
            Rule1Outcome::Reduced { trace, .. } | Rule1Outcome::TriviallyYes { trace } => trace,
        }
    }
}

/// Merge endpoints of edges that lie in no inclusion-minimal cut of
/// capacity at most `a` until none remain.
///
/// Merging such an edge leaves the family of small minimal cuts unchanged,
/// so a single enumeration identifies every edge to contract. If that
/// enumeration runs out of budget, edges are tested one by one and edges
/// whose test runs out of budget are kept.
pub fn rule1_exhaust(inst: &Instance, budget: u64) -> Rule1Outcome {
    match enumerate_minimal_cuts(inst, inst.a(), budget) {
        Ok(cuts) => {
            let mut member = vec![false; inst.edge_count()];
            for c in &cuts {
                for &e in c.edges() {
                    member[e] = true;
                }
            }
            let pairs: Vec<(String, String)> = (0..inst.edge_count())
                .filter(|&e| !member[e])
                .map(|e| {
                    let (x, y) = inst.edge_names(e);
                    (x.to_string(), y.to_string())
                })
                .collect();
            contract_pairs(inst, &pairs)
        }
        Err(_) => rule1_per_edge(inst, budget),
    }
}

fn contract_pairs(inst: &Instance, pairs: &[(String, String)]) -> Rule1Outcome {
    let mut cur = inst.clone();
    let mut trace = MergeTrace::default();
    let mut alias: HashMap<String, String> = HashMap::new();
    let resolve = |alias: &HashMap<String, String>, name: &str| {
        let mut n = name.to_string();
        while let Some(next) = alias.get(&n) {
            n = next.clone();
        }
        n
    };
    for (x, y) in pairs {
        let cx = resolve(&alias, x);
        let cy = resolve(&alias, y);
        if cx == cy {
            continue;
        }
        let ui = cur.vertex_index(&cx).expect("current vertex");
        let wi = cur.vertex_index(&cy).expect("current vertex");
        if cur.is_terminal(ui) && cur.is_terminal(wi) {
            return Rule1Outcome::TriviallyYes { trace };
        }
        let into = merged_name(&cur, ui, wi).to_string();
        cur = merge(&cur, ui, wi).expect("merge of non-terminal pair");
        for c in [&cx, &cy] {
            if *c != into {
                alias.insert(c.clone(), into.clone());
            }
        }
        trace.steps.push(MergeStep { u: cx, w: cy, into });
    }
    Rule1Outcome::Reduced {
        instance: cur,
        trace,
    }
}

fn rule1_per_edge(inst: &Instance, budget: u64) -> Rule1Outcome {
    let mut cur = inst.clone();
    let mut trace = MergeTrace::default();
    let mut skipped: Vec<(String, String)> = Vec::new();
    'scan: loop {
        for e in 0..cur.edge_count() {
            let (x, y) = cur.edge_names(e);
            let key = (x.to_string(), y.to_string());
            if skipped.contains(&key) {
                continue;
            }
            let member = match minimal_cut_membership(&cur, e, budget) {
                Ok(m) => m,
                Err(_) => {
                    skipped.push(key);
                    continue;
                }
            };
            if member {
                continue;
            }
            let edge = *cur.edge(e);
            if cur.is_terminal(edge.u) && cur.is_terminal(edge.v) {
                return Rule1Outcome::TriviallyYes { trace };
            }
            let into = merged_name(&cur, edge.u, edge.v).to_string();
            trace.steps.push(MergeStep {
                u: key.0,
                w: key.1,
                into,
            });
            cur = merge(&cur, edge.u, edge.v).expect("merge of non-terminal pair");
            // skip marks refer to edges whose endpoints may have changed
            skipped.clear();
            continue 'scan;
        }
        break;
    }
    Rule1Outcome::Reduced {
        instance: cur,
        trace,
    }
}

/// Replace every edge of cost `c > 1` by a path of `c` unit-cost edges with
/// the original capacity.
pub fn to_unit_cost(inst: &Instance) -> Result<Instance> {
    let extra: u64 = inst.edges().iter().map(|e| e.cost - 1).sum();
    if extra > EXPANSION_LIMIT {
        return Err(Error::Budget {
            what: "unit-cost expansion",
            limit: EXPANSION_LIMIT,
        });
    }
    let mut fresh = FreshNames::new(inst.names(), "e");
    let mut vertices = inst.names().to_vec();
    let mut edges = Vec::new();
    for e in inst.edges() {
        let (u, v) = (inst.name(e.u), inst.name(e.v));
        let mut prev = u.to_string();
        for _ in 1..e.cost {
            let mid = fresh.fresh();
            vertices.push(mid.clone());
            edges.push(EdgeSpec::new(prev, mid.clone(), 1, e.cap));
            prev = mid;
        }
        edges.push(EdgeSpec::new(prev, v, 1, e.cap));
    }
    Instance::new(
        inst.variant(),
        vertices,
        edges,
        inst.name(inst.s()),
        inst.name(inst.t()),
        inst.d(),
        inst.a(),
    )
}

/// Give every edge capacity 1, adding `ω - 1` parallel two-edge detours of
/// the same cost for an edge of capacity `ω`.
pub fn to_unit_capacity(inst: &Instance) -> Result<Instance> {
    if inst.variant() == Variant::Zwmcp {
        return Err(Error::inapplicable(
            "to_unit_capacity",
            "zero-capacity edges have no unit-capacity equivalent",
        ));
    }
    let extra: u64 = inst.edges().iter().map(|e| e.cap - 1).sum();
    if extra > EXPANSION_LIMIT {
        return Err(Error::Budget {
            what: "unit-capacity expansion",
            limit: EXPANSION_LIMIT,
        });
    }
    let mut fresh = FreshNames::new(inst.names(), "e");
    let mut vertices = inst.names().to_vec();
    let mut edges = Vec::new();
    for e in inst.edges() {
        let (u, v) = (inst.name(e.u), inst.name(e.v));
        edges.push(EdgeSpec::new(u, v, e.cost, 1));
        for _ in 1..e.cap {
            let mid = fresh.fresh();
            vertices.push(mid.clone());
            edges.push(EdgeSpec::new(u, mid.clone(), e.cost, 1));
            edges.push(EdgeSpec::new(mid, v, e.cost, 1));
        }
    }
    Instance::new(
        inst.variant(),
        vertices,
        edges,
        inst.name(inst.s()),
        inst.name(inst.t()),
        inst.d(),
        inst.a(),
    )
}

/// Weighted to unweighted: unit capacities first, then unit costs.
pub fn to_mcp(inst: &Instance) -> Result<Instance> {
    if inst.variant() == Variant::Mcp {
        return Ok(inst.clone());
    }
    to_unit_cost(&to_unit_capacity(inst)?)?.retagged(Variant::Mcp)
}

/// Name of the `i`-th (1-based) port of vertex `u` in [`subcubify`].
pub fn port_name(u: &str, i: usize) -> String {
    format!("{u}@{i}")
}

/// Replace each vertex by a path of ports, one per incident edge, so that
/// the result has maximum degree at most 3. Path edges get capacity `a+1`.
pub fn subcubify(inst: &Instance) -> Result<Instance> {
    if inst.variant() != Variant::Mcp {
        return Err(Error::inapplicable(
            "subcubify",
            "input must be an MCP instance",
        ));
    }
    let n = inst.vertex_count();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let big = inst.a() + 1;
    for u in 0..n {
        let ports = inst.degree(u).max(1);
        for i in 1..=ports {
            vertices.push(port_name(inst.name(u), i));
            if i > 1 {
                edges.push(EdgeSpec::new(
                    port_name(inst.name(u), i - 1),
                    port_name(inst.name(u), i),
                    1,
                    big,
                ));
            }
        }
    }
    let port_of = |u: usize, v: usize| -> String {
        let pos = inst
            .neighbors(u)
            .iter()
            .position(|&(x, _)| x == v)
            .expect("adjacent");
        port_name(inst.name(u), pos + 1)
    };
    for e in inst.edges() {
        edges.push(EdgeSpec::new(port_of(e.u, e.v), port_of(e.v, e.u), 1, 1));
    }
    let variant = if big == 1 {
        Variant::Mcp
    } else {
        Variant::Wmcp
    };
    Instance::new(
        variant,
        vertices,
        edges,
        &port_name(inst.name(inst.s()), 1),
        &port_name(inst.name(inst.t()), 1),
        inst.d(),
        inst.a(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(variant: Variant, edges: &[(&str, &str, u64, u64)], d: u64, a: u64) -> Instance {
        let mut names: Vec<String> = edges
            .iter()
            .flat_map(|e| [e.0.to_string(), e.1.to_string()])
            .chain(["s".to_string(), "t".to_string()])
            .collect();
        names.sort();
        names.dedup();
        let specs = edges
            .iter()
            .map(|&(u, v, c, w)| EdgeSpec::new(u, v, c, w))
            .collect();
        Instance::new(variant, names, specs, "s", "t", d, a).unwrap()
    }

    fn path(a: u64) -> Instance {
        build(Variant::Mcp, &[("s", "v", 1, 1), ("v", "t", 1, 1)], 2, a)
    }

    fn diamond(a: u64) -> Instance {
        build(
            Variant::Mcp,
            &[
                ("s", "v", 1, 1),
                ("v", "t", 1, 1),
                ("s", "w", 1, 1),
                ("w", "t", 1, 1),
            ],
            2,
            a,
        )
    }

    #[test]
    fn merge_triangle_collapses_parallel_edges() {
        let g = build(
            Variant::Wmcp,
            &[
                ("u", "w", 1, 1),
                ("u", "x", 1, 1),
                ("w", "x", 2, 1),
                ("s", "u", 1, 1),
                ("x", "t", 1, 1),
            ],
            1,
            1,
        );
        let m = merge_by_names(&g, "u", "w").unwrap();
        let e = m.edge(m.edge_by_names("u", "x").unwrap());
        assert_eq!((e.cost, e.cap), (1, 2));
        assert!(m.vertex_index("w").is_none());
    }

    #[test]
    fn merge_of_isolated_pair_only_drops_a_vertex() {
        let mut g = path(1);
        g = Instance::new(
            Variant::Mcp,
            g.names()
                .iter()
                .cloned()
                .chain(["x".into(), "y".into()])
                .collect(),
            g.edge_specs(),
            "s",
            "t",
            2,
            1,
        )
        .unwrap();
        let m = merge_by_names(&g, "x", "y").unwrap();
        assert_eq!(m.vertex_count(), g.vertex_count() - 1);
        assert_eq!(m.edge_specs(), g.edge_specs());
    }

    #[test]
    fn merge_diamond_middle() {
        let m = merge_by_names(&diamond(2), "v", "w").unwrap();
        assert_eq!(m.variant(), Variant::Wmcp);
        for (x, y) in [("s", "v"), ("t", "v")] {
            let e = m.edge(m.edge_by_names(x, y).unwrap());
            assert_eq!((e.cost, e.cap), (1, 2));
        }
    }

    #[test]
    fn merge_terminals_is_error() {
        let g = path(1);
        assert!(matches!(
            merge(&g, g.s(), g.t()),
            Err(Error::MergeTerminals)
        ));
    }

    #[test]
    fn minimal_cut_examples() {
        assert_eq!(enumerate_minimal_cuts(&path(1), 1, 1000).unwrap().len(), 2);
        assert!(enumerate_minimal_cuts(&diamond(1), 1, 1000)
            .unwrap()
            .is_empty());
        let cuts = enumerate_minimal_cuts(&diamond(2), 2, 1000).unwrap();
        assert_eq!(cuts.len(), 4);
        assert!(cuts.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn membership_examples() {
        let p = path(1);
        assert!(minimal_cut_membership(&p, 0, 1000).unwrap());
        let g = diamond(1);
        for e in 0..4 {
            assert!(!minimal_cut_membership(&g, e, 1000).unwrap());
        }
        let g = diamond(2);
        let sv = g.edge_by_names("s", "v").unwrap();
        assert!(minimal_cut_membership(&g, sv, 1000).unwrap());
    }

    #[test]
    fn rule1_on_path_with_zero_budget_is_trivially_yes() {
        assert!(matches!(
            rule1_exhaust(&path(0), 1000),
            Rule1Outcome::TriviallyYes { .. }
        ));
    }

    #[test]
    fn rule1_fixpoint_on_diamond() {
        match rule1_exhaust(&diamond(2), 1000) {
            Rule1Outcome::Reduced { instance, trace } => {
                assert!(trace.is_empty());
                assert_eq!(instance, diamond(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rule1_per_edge_matches_global() {
        let g = build(
            Variant::Wmcp,
            &[
                ("s", "x", 1, 3),
                ("x", "y", 2, 1),
                ("y", "t", 1, 1),
                ("s", "y", 1, 1),
                ("x", "t", 1, 2),
            ],
            2,
            2,
        );
        let global = rule1_exhaust(&g, 1000);
        let local = rule1_per_edge(&g, 1000);
        match (global, local) {
            (
                Rule1Outcome::Reduced { instance: a, .. },
                Rule1Outcome::Reduced { instance: b, .. },
            ) => {
                assert_eq!(a, b)
            }
            (x, y) => assert_eq!(
                matches!(x, Rule1Outcome::TriviallyYes { .. }),
                matches!(y, Rule1Outcome::TriviallyYes { .. })
            ),
        }
    }

    #[test]
    fn trace_replays() {
        let g = build(
            Variant::Wmcp,
            &[
                ("s", "x", 1, 5),
                ("x", "t", 1, 1),
                ("s", "y", 1, 1),
                ("y", "t", 1, 1),
            ],
            1,
            2,
        );
        if let Rule1Outcome::Reduced { instance, trace } = rule1_exhaust(&g, 1000) {
            assert!(!trace.is_empty());
            assert_eq!(trace.replay(&g).unwrap(), instance);
        } else {
            panic!("expected reduction");
        }
    }

    #[test]
    fn unit_cost_expands_to_path() {
        let g = build(Variant::Wmcp, &[("s", "t", 3, 2)], 1, 1);
        let u = to_unit_cost(&g).unwrap();
        assert_eq!(u.edge_count(), 3);
        assert!(u.edges().iter().all(|e| e.cost == 1 && e.cap == 2));
        let unit = build(Variant::Wmcp, &[("s", "t", 1, 2)], 1, 1);
        assert_eq!(to_unit_cost(&unit).unwrap(), unit);
    }

    #[test]
    fn unit_capacity_adds_detours() {
        let g = build(Variant::Wmcp, &[("s", "t", 2, 3)], 1, 1);
        let u = to_unit_capacity(&g).unwrap();
        assert_eq!(u.edge_count(), 5);
        assert_eq!(u.vertex_count(), 4);
        assert!(u.edges().iter().all(|e| e.cost == 2 && e.cap == 1));
        let z = build(Variant::Zwmcp, &[("s", "t", 1, 0)], 1, 1);
        assert!(to_unit_capacity(&z).is_err());
    }

    #[test]
    fn to_mcp_is_identity_on_mcp() {
        assert_eq!(to_mcp(&diamond(2)).unwrap(), diamond(2));
        let g = build(Variant::Wmcp, &[("s", "t", 2, 2)], 1, 1);
        assert_eq!(to_mcp(&g).unwrap().variant(), Variant::Mcp);
    }

    #[test]
    fn subcubify_path() {
        let p = path(1);
        let c = subcubify(&p).unwrap();
        assert!(c.max_degree() <= 3);
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(c.name(c.s()), "s@1");
        assert_eq!(c.name(c.t()), "t@1");
    }
}
