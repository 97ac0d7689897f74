//! Decision solvers with certificates.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{avoiding_min_cut, bipartite_min_cost_vertex_cover};
use crate::instance::{DefenseSet, Instance, Normalized, Variant};
use crate::transform::{rule1_exhaust, Rule1Outcome, DEFAULT_ENUM_BUDGET};
use crate::twdp::{self, DpConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub nodes_expanded: u64,
    pub table_entries: u64,
    pub oracle_calls: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub answer: Answer,
    /// Present on YES for certifying solvers.
    pub defense: Option<DefenseSet>,
    pub stats: Stats,
    pub solver: &'static str,
}

impl SolveOutcome {
    pub fn yes(solver: &'static str, defense: DefenseSet, stats: Stats) -> Self {
        SolveOutcome {
            answer: Answer::Yes,
            defense: Some(defense),
            stats,
            solver,
        }
    }

    pub fn no(solver: &'static str, stats: Stats) -> Self {
        SolveOutcome {
            answer: Answer::No,
            defense: None,
            stats,
            solver,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteMode {
    DefenderOnly,
    /// Also enumerate all bipartitions for the attacker side and check the
    /// flow oracle against it.
    Double,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub brute_edges: usize,
    pub brute_double_edges: usize,
    pub search_nodes: u64,
    pub vc_budget: u64,
    /// Largest vertex cover for which `auto` tries the vertex-cover solver.
    pub auto_vc_limit: usize,
    pub vc_candidate_sets: u64,
    pub enum_budget: u64,
    /// `auto` runs the search tree before Rule 1 and the DP when its node
    /// bound is at most this.
    pub search_first_bound: u64,
    pub dp: DpConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            brute_edges: 16,
            brute_double_edges: 12,
            search_nodes: 20_000_000,
            vc_budget: 1_000_000,
            auto_vc_limit: 4,
            vc_candidate_sets: 5_000_000,
            enum_budget: DEFAULT_ENUM_BUDGET,
            search_first_bound: 10_000,
            dp: DpConfig::default(),
        }
    }
}

/// A defense is valid if it is affordable and leaves no avoiding cut of
/// capacity at most `a`.
pub fn verify_defense(inst: &Instance, defense: &DefenseSet) -> bool {
    defense.edges().iter().all(|&e| e < inst.edge_count())
        && defense.total_cost() <= inst.d()
        && avoiding_min_cut(inst, defense).is_none()
}

struct SubsetSearch<'a> {
    inst: &'a Instance,
    chosen: Vec<usize>,
    cost: u64,
    best: Option<(u64, Vec<usize>)>,
    stats: Stats,
    small_cuts: Option<Vec<u64>>,
}

impl SubsetSearch<'_> {
    fn accepts(&mut self) -> Result<bool> {
        self.stats.oracle_calls += 1;
        let defense = DefenseSet::new(self.inst, self.chosen.iter().copied());
        let by_flow = avoiding_min_cut(self.inst, &defense).is_none();
        if let Some(cuts) = &self.small_cuts {
            let mask = self.chosen.iter().fold(0u64, |m, &e| m | 1 << e);
            let by_enum = cuts.iter().all(|&c| c & mask != 0);
            if by_enum != by_flow {
                return Err(Error::Internal(format!(
                    "flow oracle and cut enumeration disagree on defense {:?}",
                    defense.names(self.inst)
                )));
            }
        }
        Ok(by_flow)
    }

    fn run(&mut self, next: usize) -> Result<()> {
        self.stats.nodes_expanded += 1;
        if let Some((best, _)) = &self.best {
            if self.cost >= *best {
                return Ok(());
            }
        }
        if self.accepts()? {
            self.best = Some((self.cost, self.chosen.clone()));
            return Ok(());
        }
        for e in next..self.inst.edge_count() {
            let c = self.inst.edge(e).cost;
            if self.cost + c > self.inst.d() {
                continue;
            }
            self.chosen.push(e);
            self.cost += c;
            let r = self.run(e + 1);
            self.cost -= c;
            self.chosen.pop();
            r?;
        }
        Ok(())
    }
}

/// Edge masks of all inclusion-minimal `(s,t)`-cuts with capacity at most
/// `a`, found by enumerating every bipartition of the `s` component.
fn small_cut_masks(inst: &Instance) -> Result<Vec<u64>> {
    let reach = inst.graph().component_of(inst.s());
    if !reach[inst.t()] {
        return Ok(vec![0]);
    }
    let free: Vec<usize> = (0..inst.vertex_count())
        .filter(|&v| reach[v] && !inst.is_terminal(v))
        .collect();
    if free.len() > 24 {
        return Err(Error::Budget {
            what: "bipartition enumeration vertices",
            limit: 24,
        });
    }
    let mut side = vec![false; inst.vertex_count()];
    let mut masks = HashSet::new();
    for bits in 0u64..(1 << free.len()) {
        side.iter_mut().for_each(|x| *x = false);
        side[inst.s()] = true;
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
            masks.insert(mask);
        }
    }
    let all: Vec<u64> = masks.into_iter().collect();
    let mut minimal: Vec<u64> = all
        .iter()
        .copied()
        .filter(|&m| !all.iter().any(|&o| o != m && o & m == o))
        .collect();
    minimal.sort_unstable();
    Ok(minimal)
}

/// Exhaustive search over defenses; returns a minimum-cost defense on YES.
pub fn brute_force(inst: &Instance, mode: BruteMode, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let limit = match mode {
        BruteMode::DefenderOnly => cfg.brute_edges,
        BruteMode::Double => cfg.brute_double_edges,
    };
    if inst.edge_count() > limit.min(63) {
        return Err(Error::Budget {
            what: "brute-force edge count",
            limit: limit as u64,
        });
    }
    let small_cuts = match mode {
        BruteMode::Double => Some(small_cut_masks(inst)?),
        BruteMode::DefenderOnly => None,
    };
    let mut search = SubsetSearch {
        inst,
        chosen: Vec::new(),
        cost: 0,
        best: None,
        stats: Stats::default(),
        small_cuts,
    };
    search.run(0)?;
    let name = match mode {
        BruteMode::DefenderOnly => "brute",
        BruteMode::Double => "brute-double",
    };
    Ok(match search.best {
        Some((_, edges)) => SolveOutcome::yes(name, DefenseSet::new(inst, edges), search.stats),
        None => SolveOutcome::no(name, search.stats),
    })
}

/// Branch on the edges of an avoiding cut: some edge of every such cut must
/// be protected. Node count is at most `1 + a + ... + a^d`.
pub fn search_tree(inst: &Instance, cfg: &SolverConfig) -> Result<SolveOutcome> {
    if inst.variant() == Variant::Zwmcp {
        return Err(Error::inapplicable(
            "search tree",
            "search tree requires capacities >= 1",
        ));
    }
    struct Search<'a> {
        inst: &'a Instance,
        chosen: Vec<usize>,
        cost: u64,
        stats: Stats,
        limit: u64,
    }
    impl Search<'_> {
        fn run(&mut self) -> Result<Option<Vec<usize>>> {
            self.stats.nodes_expanded += 1;
            if self.stats.nodes_expanded > self.limit {
                return Err(Error::Budget {
                    what: "search tree nodes",
                    limit: self.limit,
                });
            }
            self.stats.oracle_calls += 1;
            let defense = DefenseSet::new(self.inst, self.chosen.iter().copied());
            let Some(cut) = avoiding_min_cut(self.inst, &defense) else {
                return Ok(Some(self.chosen.clone()));
            };
            for &e in cut.edges() {
                let c = self.inst.edge(e).cost;
                if self.cost + c > self.inst.d() {
                    continue;
                }
                self.chosen.push(e);
                self.cost += c;
                let found = self.run();
                self.cost -= c;
                self.chosen.pop();
                if let Some(d) = found? {
                    return Ok(Some(d));
                }
            }
            Ok(None)
        }
    }
    let mut s = Search {
        inst,
        chosen: Vec::new(),
        cost: 0,
        stats: Stats::default(),
        limit: cfg.search_nodes,
    };
    Ok(match s.run()? {
        Some(edges) => SolveOutcome::yes("search", DefenseSet::new(inst, edges), s.stats),
        None => SolveOutcome::no("search", s.stats),
    })
}

/// Upper bound on search-tree nodes: `sum_{i=0}^{d} a^i`, saturating.
pub fn search_tree_bound(d: u64, a: u64) -> u64 {
    match a {
        0 => return 1,
        1 => return d.saturating_add(1),
        _ => {}
    }
    let mut total: u64 = 0;
    let mut term: u64 = 1;
    for _ in 0..=d {
        total = total.saturating_add(term);
        if total == u64::MAX {
            break;
        }
        term = term.saturating_mul(a);
    }
    total
}

/// Edge ids of a shortest `s`-`t` path (by edge count), if any.
pub fn shortest_path_edges(inst: &Instance) -> Option<Vec<usize>> {
    let n = inst.vertex_count();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[inst.s()] = true;
    let mut queue = VecDeque::from([inst.s()]);
    while let Some(x) = queue.pop_front() {
        if x == inst.t() {
            break;
        }
        for &(y, e) in inst.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    if !seen[inst.t()] {
        return None;
    }
    let mut edges = Vec::new();
    let mut cur = inst.t();
    while let Some((p, e)) = parent[cur] {
        edges.push(e);
        cur = p;
    }
    edges.reverse();
    Some(edges)
}

/// Walk from `from` along edges not yet used until `to` is reached.
fn walk(inst: &Instance, from: usize, first: usize, to: usize) -> Vec<usize> {
    let mut edges = vec![first];
    let mut prev_edge = first;
    let mut cur = inst.edge(first).other(from);
    while cur != to {
        let &(next, e) = inst
            .neighbors(cur)
            .iter()
            .find(|&&(_, e)| e != prev_edge)
            .expect("degree two inside a cycle");
        edges.push(e);
        prev_edge = e;
        cur = next;
    }
    edges
}

/// Polynomial algorithm for graphs of maximum degree two (a path or a
/// cycle).
pub fn degree2(inst: &Instance) -> Result<SolveOutcome> {
    if inst.max_degree() > 2 {
        return Err(Error::inapplicable("degree2", "maximum degree exceeds 2"));
    }
    if !inst.graph().is_connected() {
        return Err(Error::inapplicable("degree2", "graph is disconnected"));
    }
    let mut stats = Stats {
        oracle_calls: 1,
        ..Stats::default()
    };
    let a = inst.a();
    if inst.edge_count() + 1 == inst.vertex_count() {
        let path = shortest_path_edges(inst).expect("connected");
        let forced: Vec<usize> = path
            .into_iter()
            .filter(|&e| inst.edge(e).cap <= a)
            .collect();
        let defense = DefenseSet::new(inst, forced);
        stats.nodes_expanded = 1;
        return Ok(if defense.total_cost() <= inst.d() {
            SolveOutcome::yes("deg2", defense, stats)
        } else {
            SolveOutcome::no("deg2", stats)
        });
    }
    // cycle: split into the two s-t paths
    let s = inst.s();
    let t = inst.t();
    let starts = inst.neighbors(s);
    let p1 = walk(inst, s, starts[0].1, t);
    let p2 = walk(inst, s, starts[1].1, t);
    let mut pairs = Vec::new();
    for (i, &e1) in p1.iter().enumerate() {
        for (j, &e2) in p2.iter().enumerate() {
            if inst.edge(e1).cap + inst.edge(e2).cap <= a {
                pairs.push((i, j));
            }
        }
    }
    let left: Vec<u64> = p1.iter().map(|&e| inst.edge(e).cost).collect();
    let right: Vec<u64> = p2.iter().map(|&e| inst.edge(e).cost).collect();
    let cover = bipartite_min_cost_vertex_cover(&left, &right, &pairs);
    stats.nodes_expanded = pairs.len() as u64;
    if cover.value <= inst.d() {
        let edges = cover
            .left
            .iter()
            .map(|&i| p1[i])
            .chain(cover.right.iter().map(|&j| p2[j]));
        Ok(SolveOutcome::yes(
            "deg2",
            DefenseSet::new(inst, edges),
            stats,
        ))
    } else {
        Ok(SolveOutcome::no("deg2", stats))
    }
}

/// Candidate edges for the vertex-cover algorithm: edges inside the cover,
/// edges at `s` or `t`, and for each neighborhood class of independent
/// vertices the edges of its first `|X|` members.
pub fn vc_candidate_edges(inst: &Instance, cover: &[usize]) -> Vec<usize> {
    let n = inst.vertex_count();
    let mut in_cover = vec![false; n];
    for &v in cover {
        in_cover[v] = true;
    }
    let mut keep = vec![false; inst.edge_count()];
    for (i, e) in inst.edges().iter().enumerate() {
        if (in_cover[e.u] && in_cover[e.v]) || inst.is_terminal(e.u) || inst.is_terminal(e.v) {
            keep[i] = true;
        }
    }
    let mut classes: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for v in 0..n {
        if in_cover[v] || inst.is_terminal(v) {
            continue;
        }
        let nbrs: Vec<usize> = inst.neighbors(v).iter().map(|&(x, _)| x).collect();
        classes.entry(nbrs).or_default().push(v);
    }
    for (x, members) in classes {
        for &v in members.iter().take(x.len()) {
            for &(_, e) in inst.neighbors(v) {
                keep[e] = true;
            }
        }
    }
    (0..inst.edge_count()).filter(|&e| keep[e]).collect()
}

fn binomial_sum(n: u64, k: u64, cap: u64) -> u64 {
    let mut total: u64 = 0;
    let mut term: u64 = 1;
    for i in 0..=k.min(n) {
        total = total.saturating_add(term);
        if total > cap {
            return total;
        }
        term = term.saturating_mul(n - i) / (i + 1);
    }
    total
}

/// Exact algorithm for MCP parameterized by vertex cover number.
pub fn vc_fpt(inst: &Instance, cfg: &SolverConfig) -> Result<SolveOutcome> {
    if inst.variant() != Variant::Mcp {
        return Err(Error::inapplicable(
            "vc",
            "vertex-cover solver requires MCP",
        ));
    }
    let cover = inst.graph().min_vertex_cover(cfg.vc_budget)?;
    let mut stats = Stats::default();
    if inst.d() >= 2 * cover.len() as u64 {
        if let Some(path) = shortest_path_edges(inst) {
            stats.nodes_expanded = 1;
            return Ok(SolveOutcome::yes("vc", DefenseSet::new(inst, path), stats));
        }
        return Ok(SolveOutcome::no("vc", stats));
    }
    let cand = vc_candidate_edges(inst, &cover);
    let k = inst.d().min(cand.len() as u64);
    if binomial_sum(cand.len() as u64, k, cfg.vc_candidate_sets) > cfg.vc_candidate_sets {
        return Err(Error::Budget {
            what: "vertex-cover candidate sets",
            limit: cfg.vc_candidate_sets,
        });
    }
    fn combos(
        inst: &Instance,
        cand: &[usize],
        size: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        stats: &mut Stats,
    ) -> Option<Vec<usize>> {
        if chosen.len() == size {
            stats.nodes_expanded += 1;
            stats.oracle_calls += 1;
            let d = DefenseSet::new(inst, chosen.iter().copied());
            return avoiding_min_cut(inst, &d).is_none().then(|| chosen.clone());
        }
        for i in start..cand.len() {
            if cand.len() - i < size - chosen.len() {
                break;
            }
            chosen.push(cand[i]);
            let found = combos(inst, cand, size, i + 1, chosen, stats);
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    for size in 0..=k as usize {
        if let Some(d) = combos(inst, &cand, size, 0, &mut Vec::new(), &mut stats) {
            return Ok(SolveOutcome::yes("vc", DefenseSet::new(inst, d), stats));
        }
    }
    Ok(SolveOutcome::no("vc", stats))
}

/// MCP solver for parameter `d` plus maximum degree: short paths are
/// protected outright, a large attacker budget is a certain NO, otherwise
/// the search tree decides.
pub fn mcp_degree_wrapper(inst: &Instance, cfg: &SolverConfig) -> Result<SolveOutcome> {
    if inst.variant() != Variant::Mcp {
        return Err(Error::inapplicable("mcp-degree", "wrapper requires MCP"));
    }
    let stats = Stats {
        nodes_expanded: 1,
        ..Stats::default()
    };
    let Some(path) = shortest_path_edges(inst) else {
        return Ok(SolveOutcome::no("mcp-degree", stats));
    };
    if path.len() as u64 <= inst.d() {
        return Ok(SolveOutcome::yes(
            "mcp-degree",
            DefenseSet::new(inst, path),
            stats,
        ));
    }
    let delta = inst.max_degree() as u128;
    if 2 * inst.a() as u128 >= (inst.d() as u128 + 2) * delta {
        return Ok(SolveOutcome::no("mcp-degree", stats));
    }
    let mut out = search_tree(inst, cfg)?;
    out.solver = "mcp-degree";
    Ok(out)
}

/// Dispatch to the cheapest applicable exact solver.
pub fn auto(inst: &Instance, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let norm = match inst.normalize() {
        Normalized::Disconnected => return Ok(SolveOutcome::no("normalize", Stats::default())),
        Normalized::Ready(n) => n,
    };
    let outcome = auto_normalized(&norm, cfg)?;
    let Some(defense) = outcome.defense else {
        return Ok(outcome);
    };
    let lifted = defense.transfer(&norm, inst)?;
    if !verify_defense(inst, &lifted) {
        return Err(Error::Internal(format!(
            "{} produced a defense that fails verification",
            outcome.solver
        )));
    }
    Ok(SolveOutcome {
        defense: Some(lifted),
        ..outcome
    })
}

fn soft<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(e) if e.is_budget_or_inapplicable() => Ok(None),
        Err(e) => Err(e),
    }
}

fn auto_normalized(inst: &Instance, cfg: &SolverConfig) -> Result<SolveOutcome> {
    if avoiding_min_cut(inst, &DefenseSet::empty()).is_none() {
        return Ok(SolveOutcome::yes(
            "min-cut",
            DefenseSet::empty(),
            Stats::default(),
        ));
    }
    if inst.max_degree() <= 2 {
        return degree2(inst);
    }
    if inst.variant() == Variant::Mcp {
        let small = inst.graph().min_vertex_cover(cfg.vc_budget.min(100_000));
        if matches!(&small, Ok(c) if c.len() <= cfg.auto_vc_limit) {
            if let Some(out) = soft(vc_fpt(inst, cfg))? {
                return Ok(out);
            }
        }
    }
    if inst.variant() != Variant::Zwmcp
        && search_tree_bound(inst.d(), inst.a()) <= cfg.search_first_bound
    {
        if let Some(out) = soft(search_tree(inst, cfg))? {
            return Ok(out);
        }
    }
    match rule1_exhaust(inst, cfg.enum_budget) {
        Rule1Outcome::TriviallyYes { .. } => {
            return Ok(SolveOutcome::yes(
                "rule1",
                DefenseSet::empty(),
                Stats::default(),
            ));
        }
        Rule1Outcome::Reduced { instance, trace } => {
            if let Some(out) = soft(twdp::dp_solve(&instance, &cfg.dp))? {
                let defense = match &out.defense {
                    Some(d) => Some(trace.lift_defense(inst, &instance, d)?),
                    None => None,
                };
                return Ok(SolveOutcome { defense, ..out });
            }
        }
    }
    if inst.variant() != Variant::Zwmcp {
        if let Some(out) = soft(search_tree(inst, cfg))? {
            return Ok(out);
        }
    }
    if let Some(out) = soft(brute_force(inst, BruteMode::DefenderOnly, cfg))? {
        return Ok(out);
    }
    Err(Error::inapplicable(
        "auto",
        "no applicable solver within budgets",
    ))
}
