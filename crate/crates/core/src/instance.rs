//! Instance model for the MCP / WMCP / ZWMCP family.
//!
//! An [`Instance`] is always held in canonical form: vertices sorted
//! lexicographically by name, every edge stored as `(u, v)` with `u < v` in
//! that order, and the edge list sorted by `(u, v)`. Vertex and edge indices
//! are therefore stable for a given instance, but they are never part of the
//! serialized form, which refers to vertices by name only.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Variant {
    /// Unit costs and unit capacities.
    Mcp,
    /// Arbitrary costs >= 1, capacities >= 1.
    Wmcp,
    /// Capacities may be zero.
    Zwmcp,
}

impl Variant {
    /// Smallest variant that is at least as general as `self` and admits all
    /// `edges`. MCP widens to WMCP as soon as a weight leaves 1.
    pub fn widened_for(self, edges: &[Edge]) -> Variant {
        match self {
            Variant::Mcp if edges.iter().any(|e| e.cost != 1 || e.cap != 1) => {
                if edges.iter().any(|e| e.cap == 0) {
                    Variant::Zwmcp
                } else {
                    Variant::Wmcp
                }
            }
            Variant::Wmcp if edges.iter().any(|e| e.cap == 0) => Variant::Zwmcp,
            v => v,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Mcp => "MCP",
            Variant::Wmcp => "WMCP",
            Variant::Zwmcp => "ZWMCP",
        })
    }
}

/// An edge between vertex indices `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: u64,
    pub cap: u64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// Edge given by endpoint names, used to build instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub u: String,
    pub v: String,
    pub cost: u64,
    pub cap: u64,
}

impl EdgeSpec {
    pub fn new(u: impl Into<String>, v: impl Into<String>, cost: u64, cap: u64) -> Self {
        EdgeSpec {
            u: u.into(),
            v: v.into(),
            cost,
            cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    variant: Variant,
    names: Vec<String>,
    edges: Vec<Edge>,
    s: usize,
    t: usize,
    d: u64,
    a: u64,
    adj: Vec<Vec<(usize, usize)>>,
}

/// Largest weight or budget accepted; keeps every value representable in the
/// signed JSON integers of the external format.
const MAX_VALUE: u64 = i64::MAX as u64;

impl Instance {
    pub fn new(
        variant: Variant,
        vertices: Vec<String>,
        edges: Vec<EdgeSpec>,
        s: &str,
        t: &str,
        d: u64,
        a: u64,
    ) -> Result<Instance> {
        let mut names = vertices;
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let index = |name: &str| -> Result<usize> {
            names
                .binary_search_by(|n| n.as_str().cmp(name))
                .map_err(|_| Error::UnknownVertex(name.to_string()))
        };
        let s = index(s)?;
        let t = index(t)?;
        if s == t {
            return Err(Error::TerminalsEqual);
        }
        if d > MAX_VALUE || a > MAX_VALUE {
            return Err(Error::Overflow("budget"));
        }

        let mut canon = Vec::with_capacity(edges.len());
        for spec in &edges {
            let x = index(&spec.u)?;
            let y = index(&spec.v)?;
            if x == y {
                return Err(Error::SelfLoop(spec.u.clone()));
            }
            if spec.cost == 0 {
                return Err(Error::VariantMismatch {
                    u: spec.u.clone(),
                    v: spec.v.clone(),
                    reason: "cost must be at least 1".into(),
                });
            }
            let bad = match variant {
                Variant::Mcp if spec.cost != 1 || spec.cap != 1 => {
                    Some("MCP requires cost = cap = 1")
                }
                Variant::Wmcp if spec.cap == 0 => Some("WMCP requires cap >= 1"),
                _ => None,
            };
            if let Some(reason) = bad {
                return Err(Error::VariantMismatch {
                    u: spec.u.clone(),
                    v: spec.v.clone(),
                    reason: reason.into(),
                });
            }
            canon.push(Edge {
                u: x.min(y),
                v: x.max(y),
                cost: spec.cost,
                cap: spec.cap,
            });
        }
        canon.sort_by_key(|e| (e.u, e.v));
        for w in canon.windows(2) {
            if (w[0].u, w[0].v) == (w[1].u, w[1].v) {
                return Err(Error::ParallelEdge(
                    names[w[0].u].clone(),
                    names[w[0].v].clone(),
                ));
            }
        }
        let mut cost_total: u64 = 0;
        let mut cap_total: u64 = 0;
        for e in &canon {
            cost_total = cost_total
                .checked_add(e.cost)
                .filter(|&x| x <= MAX_VALUE)
                .ok_or(Error::Overflow("total cost"))?;
            cap_total = cap_total
                .checked_add(e.cap)
                .filter(|&x| x <= MAX_VALUE)
                .ok_or(Error::Overflow("total capacity"))?;
        }

        let mut adj = vec![Vec::new(); names.len()];
        for (i, e) in canon.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Instance {
            variant,
            names,
            edges: canon,
            s,
            t,
            d,
            a,
            adj,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        v == self.s || v == self.t
    }

    /// `(neighbor, edge id)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn edge_between(&self, x: usize, y: usize) -> Option<usize> {
        let key = (x.min(y), x.max(y));
        self.edges.binary_search_by_key(&key, |e| (e.u, e.v)).ok()
    }

    pub fn edge_by_names(&self, x: &str, y: &str) -> Result<usize> {
        let missing = || Error::UnknownEdge(x.to_string(), y.to_string());
        let xi = self.vertex_index(x).ok_or_else(missing)?;
        let yi = self.vertex_index(y).ok_or_else(missing)?;
        self.edge_between(xi, yi).ok_or_else(missing)
    }

    pub fn edge_names(&self, id: usize) -> (&str, &str) {
        let e = &self.edges[id];
        (&self.names[e.u], &self.names[e.v])
    }

    pub fn total_cost(&self) -> u64 {
        self.edges.iter().map(|e| e.cost).sum()
    }

    pub fn total_cap(&self) -> u64 {
        self.edges.iter().map(|e| e.cap).sum()
    }

    pub fn capacities(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.cap).collect()
    }

    pub fn graph(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.names.len(), self.edges.iter().map(|e| (e.u, e.v)))
    }

    pub fn is_connected(&self) -> bool {
        self.graph().component_of(self.s).iter().all(|&x| x)
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges
            .iter()
            .map(|e| EdgeSpec::new(&self.names[e.u], &self.names[e.v], e.cost, e.cap))
            .collect()
    }

    pub fn with_budgets(&self, d: u64, a: u64) -> Instance {
        Instance {
            d,
            a,
            ..self.clone()
        }
    }

    /// Same graph and weights under a different variant tag.
    pub fn retagged(&self, variant: Variant) -> Result<Instance> {
        Instance::new(
            variant,
            self.names.clone(),
            self.edge_specs(),
            self.name(self.s),
            self.name(self.t),
            self.d,
            self.a,
        )
    }

    /// Instance with the listed edges removed; vertices are kept.
    pub fn without_edges(&self, removed: &[usize]) -> Instance {
        let drop: HashSet<usize> = removed.iter().copied().collect();
        let specs = self
            .edge_specs()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, e)| e)
            .collect();
        Instance::new(
            self.variant,
            self.names.clone(),
            specs,
            self.name(self.s),
            self.name(self.t),
            self.d,
            self.a,
        )
        .expect("removing edges keeps an instance valid")
    }

    /// Clamp weights and budgets to their answer-preserving maxima and drop
    /// every component other than the one holding `s`.
    pub fn normalize(&self) -> Normalized {
        let reach = self.graph().component_of(self.s);
        if !reach[self.t] {
            return Normalized::Disconnected;
        }
        let vertices: Vec<String> = (0..self.vertex_count())
            .filter(|&v| reach[v])
            .map(|v| self.names[v].clone())
            .collect();
        let cost_cap = self.d.saturating_add(1);
        let cap_cap = self.a.saturating_add(1);
        let edges: Vec<EdgeSpec> = self
            .edges
            .iter()
            .filter(|e| reach[e.u])
            .map(|e| {
                EdgeSpec::new(
                    &self.names[e.u],
                    &self.names[e.v],
                    e.cost.min(cost_cap),
                    e.cap.min(cap_cap),
                )
            })
            .collect();
        let cost_total: u64 = edges.iter().map(|e| e.cost).sum();
        let cap_total: u64 = edges.iter().map(|e| e.cap).sum();
        let inst = Instance::new(
            self.variant,
            vertices,
            edges,
            self.name(self.s),
            self.name(self.t),
            self.d.min(cost_total),
            self.a.min(cap_total),
        )
        .expect("normalizing keeps an instance valid");
        Normalized::Ready(inst)
    }

    pub fn from_json(text: &[u8]) -> Result<Instance> {
        let raw: RawInstance = serde_json::from_slice(text)?;
        raw.into_instance()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw(None)).expect("instance serializes")
    }

    /// Canonical JSON with an extra `metadata` object attached.
    pub fn to_json_with_metadata(&self, metadata: serde_json::Value) -> String {
        serde_json::to_string(&self.to_raw(Some(metadata))).expect("instance serializes")
    }

    fn to_raw(&self, metadata: Option<serde_json::Value>) -> RawInstance {
        RawInstance {
            variant: self.variant,
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    u: self.names[e.u].clone(),
                    v: self.names[e.v].clone(),
                    cost: Some(e.cost as i64),
                    cap: Some(e.cap as i64),
                })
                .collect(),
            s: self.names[self.s].clone(),
            t: self.names[self.t].clone(),
            d: self.d as i64,
            a: self.a as i64,
            metadata,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Ready(Instance),
    /// `s` and `t` lie in different components: the empty cut has capacity
    /// 0 and avoids every defense, so the answer is NO.
    Disconnected,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    variant: Variant,
    vertices: Vec<String>,
    edges: Vec<RawEdge>,
    s: String,
    t: String,
    d: i64,
    a: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    u: String,
    v: String,
    #[serde(default)]
    cost: Option<i64>,
    #[serde(default)]
    cap: Option<i64>,
}

impl RawInstance {
    fn into_instance(self) -> Result<Instance> {
        if self.d < 0 {
            return Err(Error::Negative("d"));
        }
        if self.a < 0 {
            return Err(Error::Negative("a"));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in self.edges {
            let (cost, cap) = match (e.cost, e.cap, self.variant) {
                (Some(c), Some(w), _) => (c, w),
                (c, w, Variant::Mcp) => (c.unwrap_or(1), w.unwrap_or(1)),
                _ => return Err(Error::MissingWeight(e.u, e.v)),
            };
            if cost < 0 {
                return Err(Error::Negative("cost"));
            }
            if cap < 0 {
                return Err(Error::Negative("cap"));
            }
            edges.push(EdgeSpec::new(e.u, e.v, cost as u64, cap as u64));
        }
        Instance::new(
            self.variant,
            self.vertices,
            edges,
            &self.s,
            &self.t,
            self.d as u64,
            self.a as u64,
        )
    }
}

/// A defender's choice of protected edges.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DefenseSet {
    edges: Vec<usize>,
    total_cost: u64,
}

impl DefenseSet {
    pub fn new(inst: &Instance, edges: impl IntoIterator<Item = usize>) -> DefenseSet {
        let mut edges: Vec<usize> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let total_cost = edges.iter().map(|&e| inst.edge(e).cost).sum();
        DefenseSet { edges, total_cost }
    }

    pub fn empty() -> DefenseSet {
        DefenseSet::default()
    }

    pub fn from_names<S: AsRef<str>>(inst: &Instance, pairs: &[(S, S)]) -> Result<DefenseSet> {
        let ids = pairs
            .iter()
            .map(|(x, y)| inst.edge_by_names(x.as_ref(), y.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(DefenseSet::new(inst, ids))
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn total_cost(&self) -> u64 {
        self.total_cost
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn mask(&self, m: usize) -> Vec<bool> {
        let mut mask = vec![false; m];
        for &e in &self.edges {
            mask[e] = true;
        }
        mask
    }

    pub fn names(&self, inst: &Instance) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&e| {
                let (x, y) = inst.edge_names(e);
                (x.to_string(), y.to_string())
            })
            .collect()
    }

    /// Re-express this defense (given over `from`) in terms of `to`, matching
    /// edges by endpoint names.
    pub fn transfer(&self, from: &Instance, to: &Instance) -> Result<DefenseSet> {
        DefenseSet::from_names(to, &self.names(from))
    }
}

/// An attacker's edge cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSet {
    edges: Vec<usize>,
    total_capacity: u64,
}

impl CutSet {
    /// `total_capacity` is summed under `caps`, which need not be the
    /// instance capacities.
    pub fn new(edges: impl IntoIterator<Item = usize>, caps: &[u64]) -> CutSet {
        let mut edges: Vec<usize> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let total_capacity = edges.iter().map(|&e| caps[e]).sum();
        CutSet {
            edges,
            total_capacity,
        }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn total_capacity(&self) -> u64 {
        self.total_capacity
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Whether removing the cut edges leaves no `s`-`t` path.
    pub fn separates(&self, inst: &Instance) -> bool {
        let removed = {
            let mut m = vec![false; inst.edge_count()];
            for &e in &self.edges {
                m[e] = true;
            }
            m
        };
        let mut seen = vec![false; inst.vertex_count()];
        let mut stack = vec![inst.s()];
        seen[inst.s()] = true;
        while let Some(x) = stack.pop() {
            for &(y, e) in inst.neighbors(x) {
                if !removed[e] && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        !seen[inst.t()]
    }
}

/// Deterministic generator of vertex names that are unused in an instance.
pub(crate) struct FreshNames {
    used: HashSet<String>,
    prefix: String,
    next: usize,
}

impl FreshNames {
    pub(crate) fn new<'a>(used: impl IntoIterator<Item = &'a String>, prefix: &str) -> Self {
        FreshNames {
            used: used.into_iter().cloned().collect(),
            prefix: prefix.to_string(),
            next: 0,
        }
    }

    pub(crate) fn fresh(&mut self) -> String {
        loop {
            let name = format!("{}#{}", self.prefix, self.next);
            self.next += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_json() -> &'static str {
        r#"{"variant":"MCP","vertices":["s","v","t"],"edges":[{"u":"s","v":"v"},{"u":"v","v":"t"}],"s":"s","t":"t","d":2,"a":1}"#
    }

    #[test]
    fn parses_minimal_path() {
        let inst = Instance::from_json(path_json().as_bytes()).unwrap();
        assert_eq!(inst.vertex_count(), 3);
        assert_eq!(inst.edge_count(), 2);
        assert_eq!(inst.d(), 2);
        assert_eq!(inst.a(), 1);
        assert_eq!(inst.name(inst.s()), "s");
    }

    #[test]
    fn rejects_parallel_edge() {
        let text = r#"{"variant":"MCP","vertices":["s","v","t"],"edges":[{"u":"s","v":"v"},{"u":"v","v":"s"},{"u":"v","v":"t"}],"s":"s","t":"t","d":2,"a":1}"#;
        assert!(matches!(
            Instance::from_json(text.as_bytes()),
            Err(Error::ParallelEdge(..))
        ));
    }

    #[test]
    fn rejects_mcp_with_cost_two() {
        let text = r#"{"variant":"MCP","vertices":["s","v","t"],"edges":[{"u":"s","v":"v","cost":2},{"u":"v","v":"t"}],"s":"s","t":"t","d":2,"a":1}"#;
        assert!(matches!(
            Instance::from_json(text.as_bytes()),
            Err(Error::VariantMismatch { .. })
        ));
    }

    #[test]
    fn rejects_structural_errors() {
        let cases = [
            (
                r#"{"variant":"MCP","vertices":["s","t"],"edges":[{"u":"s","v":"x"}],"s":"s","t":"t","d":0,"a":0}"#,
                "unknown",
            ),
            (
                r#"{"variant":"MCP","vertices":["s","t"],"edges":[],"s":"s","t":"s","d":0,"a":0}"#,
                "equal",
            ),
            (
                r#"{"variant":"MCP","vertices":["s","t"],"edges":[],"s":"s","t":"t","d":-1,"a":0}"#,
                "negative",
            ),
            (
                r#"{"variant":"WMCP","vertices":["s","t"],"edges":[{"u":"s","v":"t","cost":1,"cap":0}],"s":"s","t":"t","d":0,"a":0}"#,
                "mismatch",
            ),
            (
                r#"{"variant":"WMCP","vertices":["s","t"],"edges":[{"u":"s","v":"t"}],"s":"s","t":"t","d":0,"a":0}"#,
                "missing",
            ),
            (
                r#"{"variant":"MCP","vertices":["s","t"],"edges":[{"u":"s","v":"s"}],"s":"s","t":"t","d":0,"a":0}"#,
                "loop",
            ),
            (
                r#"{"variant":"MCP","vertices":["s","t"],"edges":[],"s":"s","t":"t","d":0,"a":0,"extra":1}"#,
                "syntax",
            ),
            (r#"{"variant":"MCP","vertices":["s","t""#, "syntax"),
        ];
        for (text, what) in cases {
            let err = Instance::from_json(text.as_bytes()).unwrap_err();
            let ok = match what {
                "unknown" => matches!(err, Error::UnknownVertex(_)),
                "equal" => matches!(err, Error::TerminalsEqual),
                "negative" => matches!(err, Error::Negative("d")),
                "mismatch" => matches!(err, Error::VariantMismatch { .. }),
                "missing" => matches!(err, Error::MissingWeight(..)),
                "loop" => matches!(err, Error::SelfLoop(_)),
                _ => matches!(err, Error::Syntax(_)),
            };
            assert!(ok, "{what}: got {err}");
        }
    }

    #[test]
    fn overflowing_totals_are_rejected() {
        let big = i64::MAX as u64;
        let r = Instance::new(
            Variant::Wmcp,
            vec!["s".into(), "v".into(), "t".into()],
            vec![
                EdgeSpec::new("s", "v", 1, big),
                EdgeSpec::new("v", "t", 1, big),
            ],
            "s",
            "t",
            0,
            0,
        );
        assert!(matches!(r, Err(Error::Overflow(_))));
    }

    #[test]
    fn serializes_canonically() {
        let inst = Instance::new(
            Variant::Mcp,
            vec!["t".into(), "v".into(), "s".into()],
            vec![EdgeSpec::new("t", "v", 1, 1), EdgeSpec::new("v", "s", 1, 1)],
            "s",
            "t",
            2,
            1,
        )
        .unwrap();
        assert_eq!(
            inst.to_json(),
            r#"{"variant":"MCP","vertices":["s","t","v"],"edges":[{"u":"s","v":"v","cost":1,"cap":1},{"u":"t","v":"v","cost":1,"cap":1}],"s":"s","t":"t","d":2,"a":1}"#
        );
        assert_eq!(
            Instance::from_json(inst.to_json().as_bytes()).unwrap(),
            inst
        );
    }

    #[test]
    fn metadata_is_accepted_and_ignored() {
        let inst = Instance::from_json(path_json().as_bytes()).unwrap();
        let text = inst.to_json_with_metadata(serde_json::json!({"family": "test"}));
        assert_eq!(Instance::from_json(text.as_bytes()).unwrap(), inst);
    }

    #[test]
    fn normalize_clamps_weights() {
        let inst = Instance::new(
            Variant::Wmcp,
            vec!["s".into(), "v".into(), "t".into()],
            vec![
                EdgeSpec::new("s", "v", 100, 10),
                EdgeSpec::new("v", "t", 1, 1),
            ],
            "s",
            "t",
            3,
            2,
        )
        .unwrap();
        let Normalized::Ready(n) = inst.normalize() else {
            panic!("connected")
        };
        let e = n.edge(n.edge_by_names("s", "v").unwrap());
        assert_eq!(e.cost, 4);
        assert_eq!(e.cap, 3);
        assert_eq!(n.d(), 3);
        assert_eq!(n.a(), 2);
        assert_eq!(n.normalize(), Normalized::Ready(n.clone()));
    }

    #[test]
    fn normalize_clamps_budgets_and_drops_stray_components() {
        let inst = Instance::new(
            Variant::Mcp,
            vec!["s".into(), "v".into(), "t".into(), "x".into(), "y".into()],
            vec![
                EdgeSpec::new("s", "v", 1, 1),
                EdgeSpec::new("v", "t", 1, 1),
                EdgeSpec::new("x", "y", 1, 1),
            ],
            "s",
            "t",
            10,
            10,
        )
        .unwrap();
        let Normalized::Ready(n) = inst.normalize() else {
            panic!("connected")
        };
        assert_eq!(n.vertex_count(), 3);
        assert_eq!(n.d(), 2);
        assert_eq!(n.a(), 2);
    }

    #[test]
    fn normalize_flags_disconnected_terminals() {
        let inst = Instance::new(
            Variant::Mcp,
            vec!["s".into(), "t".into(), "v".into()],
            vec![EdgeSpec::new("s", "v", 1, 1)],
            "s",
            "t",
            1,
            1,
        )
        .unwrap();
        assert_eq!(inst.normalize(), Normalized::Disconnected);
    }

    #[test]
    fn fresh_names_skip_used() {
        let used = vec!["e#0".to_string(), "e#2".to_string()];
        let mut f = FreshNames::new(&used, "e");
        assert_eq!(f.fresh(), "e#1");
        assert_eq!(f.fresh(), "e#3");
    }
}
