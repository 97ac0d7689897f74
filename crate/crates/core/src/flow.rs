//! Max-flow / min-cut engine (Dinic) and the cut oracles built on it.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::instance::{CutSet, DefenseSet, Instance};

/// Flow network with integer capacities. Arcs are stored in pairs so that
/// `arc ^ 1` is the reverse of `arc`.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.head.len()
    }

    pub fn add_directed(&mut self, u: usize, v: usize, cap: u64) {
        self.push_pair(u, v, cap, 0);
    }

    pub fn add_undirected(&mut self, u: usize, v: usize, cap: u64) {
        self.push_pair(u, v, cap, cap);
    }

    fn push_pair(&mut self, u: usize, v: usize, forward: u64, backward: u64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(forward);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(backward);
    }

    /// Maximum flow from `s` to `t`, stopping early once it reaches `limit`.
    /// The residual network is left in place for [`FlowNetwork::reachable`].
    pub fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let n = self.head.len();
        let mut total = 0u64;
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        while total < limit {
            level.iter_mut().for_each(|l| *l = usize::MAX);
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &arc in &self.head[x] {
                    let y = self.to[arc];
                    if self.cap[arc] > 0 && level[y] == usize::MAX {
                        level[y] = level[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            if level[t] == usize::MAX {
                break;
            }
            next.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.augment(s, t, limit - total, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
                if total >= limit {
                    break;
                }
            }
        }
        total
    }

    fn augment(
        &mut self,
        x: usize,
        t: usize,
        want: u64,
        level: &[usize],
        next: &mut [usize],
    ) -> u64 {
        if x == t {
            return want;
        }
        while next[x] < self.head[x].len() {
            let arc = self.head[x][next[x]];
            let y = self.to[arc];
            if self.cap[arc] > 0 && level[y] == level[x] + 1 {
                let got = self.augment(y, t, want.min(self.cap[arc]), level, next);
                if got > 0 {
                    self.cap[arc] -= got;
                    self.cap[arc ^ 1] += got;
                    return got;
                }
            }
            next[x] += 1;
        }
        0
    }

    /// Vertices reachable from `s` in the residual network.
    pub fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &arc in &self.head[x] {
                let y = self.to[arc];
                if self.cap[arc] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCut {
    pub value: u64,
    pub cut: CutSet,
    /// Residual-reachable side of `x`.
    pub x_side: Vec<bool>,
}

fn network(inst: &Instance, caps: &[u64]) -> FlowNetwork {
    let mut net = FlowNetwork::new(inst.vertex_count());
    for (e, edge) in inst.edges().iter().enumerate() {
        net.add_undirected(edge.u, edge.v, caps[e]);
    }
    net
}

/// Minimum `(x, y)`-cut of the instance graph under `caps`.
pub fn min_cut(inst: &Instance, caps: &[u64], x: usize, y: usize) -> Result<MinCut> {
    if x == y {
        return Err(Error::SameEndpoints);
    }
    let mut net = network(inst, caps);
    let value = net.max_flow(x, y, u64::MAX);
    let x_side = net.reachable(x);
    let crossing = inst
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| x_side[e.u] != x_side[e.v])
        .map(|(i, _)| i);
    let cut = CutSet::new(crossing, caps);
    debug_assert_eq!(cut.total_capacity(), value);
    Ok(MinCut { value, cut, x_side })
}

/// Min-cut value between `x` and `y`, capped at `limit`.
pub fn min_cut_value(inst: &Instance, caps: &[u64], x: usize, y: usize, limit: u64) -> u64 {
    if x == y {
        return limit;
    }
    network(inst, caps).max_flow(x, y, limit)
}

/// Protected edges get capacity `a + 1`; any cut of capacity at most `a`
/// then avoids them.
pub fn protected_capacities(inst: &Instance, defense: &DefenseSet) -> Vec<u64> {
    let mut caps = inst.capacities();
    for &e in defense.edges() {
        caps[e] = inst.a() + 1;
    }
    caps
}

/// An `(s,t)`-cut disjoint from `defense` with capacity at most `a`, or
/// `None` if the defense blocks every such cut.
pub fn avoiding_min_cut(inst: &Instance, defense: &DefenseSet) -> Option<CutSet> {
    let caps = protected_capacities(inst, defense);
    let mut net = network(inst, &caps);
    let bound = inst.a() + 1;
    if net.max_flow(inst.s(), inst.t(), bound) >= bound {
        return None;
    }
    let side = net.reachable(inst.s());
    let crossing = inst
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| side[e.u] != side[e.v])
        .map(|(i, _)| i);
    Some(CutSet::new(crossing, &inst.capacities()))
}

/// Exact min-cut value under the instance capacities for every unordered
/// vertex pair `(u, v)` with `u < v`.
pub fn all_pairs_min_cut(inst: &Instance) -> BTreeMap<(usize, usize), u64> {
    let caps = inst.capacities();
    let n = inst.vertex_count();
    let mut out = BTreeMap::new();
    for u in 0..n {
        for v in u + 1..n {
            out.insert((u, v), network(inst, &caps).max_flow(u, v, u64::MAX));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteCover {
    pub value: u64,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Minimum-cost vertex cover of a bipartite graph given by `pairs`
/// `(left index, right index)`, via a source-left-right-sink flow network.
pub fn bipartite_min_cost_vertex_cover(
    left_cost: &[u64],
    right_cost: &[u64],
    pairs: &[(usize, usize)],
) -> BipartiteCover {
    let nl = left_cost.len();
    let nr = right_cost.len();
    let source = nl + nr;
    let sink = source + 1;
    let mut net = FlowNetwork::new(nl + nr + 2);
    let uncuttable = left_cost
        .iter()
        .chain(right_cost)
        .fold(1u64, |acc, &c| acc.saturating_add(c));
    for (i, &c) in left_cost.iter().enumerate() {
        net.add_directed(source, i, c);
    }
    for (j, &c) in right_cost.iter().enumerate() {
        net.add_directed(nl + j, sink, c);
    }
    for &(i, j) in pairs {
        net.add_directed(i, nl + j, uncuttable);
    }
    let value = net.max_flow(source, sink, u64::MAX);
    let side = net.reachable(source);
    let left = (0..nl).filter(|&i| !side[i]).collect();
    let right = (0..nr).filter(|&j| side[nl + j]).collect();
    BipartiteCover { value, left, right }
}
