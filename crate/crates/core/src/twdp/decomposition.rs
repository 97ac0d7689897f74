//! Tree decompositions of `G - {s,t}`: heuristic construction, conversion
//! to nice form with `{s,t}` added to every bag, and validation.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Rooted tree decomposition with arbitrary bags. Node `root` has no parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn root(&self) -> usize {
        self.parent
            .iter()
            .position(Option::is_none)
            .expect("a rooted decomposition has a root")
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(i);
            }
        }
        ch
    }

    pub fn width(&self) -> isize {
        self.bags
            .iter()
            .map(|b| b.len() as isize)
            .max()
            .unwrap_or(0)
            - 1
    }

    /// Check the decomposition properties for `G - {s,t}`. The message of
    /// the returned error names the violated property.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        let n = inst.vertex_count();
        let inner = |v: usize| !inst.is_terminal(v);
        let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(Error::Decomposition(format!(
                        "bag {} names unknown vertex",
                        i + 1
                    )));
                }
                occurs[v].push(i);
            }
        }
        for v in (0..n).filter(|&v| inner(v)) {
            if occurs[v].is_empty() {
                return Err(Error::Decomposition(format!(
                    "vertex cover property violated: `{}` is in no bag",
                    inst.name(v)
                )));
            }
        }
        for e in inst.edges() {
            if !(inner(e.u) && inner(e.v)) {
                continue;
            }
            let covered = occurs[e.u].iter().any(|&i| self.bags[i].contains(&e.v));
            if !covered {
                return Err(Error::Decomposition(format!(
                    "edge cover property violated: {{{}, {}}} is in no bag",
                    inst.name(e.u),
                    inst.name(e.v)
                )));
            }
        }
        for v in (0..n).filter(|&v| inner(v)) {
            // bags containing v must form a connected subtree: exactly one of
            // them has a parent bag without v
            let tops = occurs[v]
                .iter()
                .filter(|&&i| match self.parent[i] {
                    Some(p) => !self.bags[p].contains(&v),
                    None => true,
                })
                .count();
            if tops != 1 {
                return Err(Error::Decomposition(format!(
                    "connectivity property violated: bags containing `{}` are not connected",
                    inst.name(v)
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    MinDegree,
    MinFill,
}

/// Elimination ordering of `G - {s,t}` and the bags it induces.
fn eliminate(inst: &Instance, heuristic: Heuristic) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = inst.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in inst.edges() {
        if !inst.is_terminal(e.u) && !inst.is_terminal(e.v) {
            adj[e.u].insert(e.v);
            adj[e.v].insert(e.u);
        }
    }
    let mut alive: Vec<bool> = (0..n).map(|v| !inst.is_terminal(v)).collect();
    let mut order = Vec::new();
    let mut bags = vec![Vec::new(); n];
    loop {
        let score = |v: usize| -> usize {
            match heuristic {
                Heuristic::MinDegree => adj[v].len(),
                Heuristic::MinFill => {
                    let nb: Vec<usize> = adj[v].iter().copied().collect();
                    let mut fill = 0;
                    for i in 0..nb.len() {
                        for j in i + 1..nb.len() {
                            if !adj[nb[i]].contains(&nb[j]) {
                                fill += 1;
                            }
                        }
                    }
                    fill
                }
            }
        };
        let Some(v) = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (score(v), adj[v].len(), v))
        else {
            break;
        };
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                adj[nb[i]].insert(nb[j]);
                adj[nb[j]].insert(nb[i]);
            }
        }
        for &x in &nb {
            adj[x].remove(&v);
        }
        let mut bag = nb;
        bag.push(v);
        bag.sort_unstable();
        bags[v] = bag;
        alive[v] = false;
        order.push(v);
    }
    (order, bags)
}

/// Decomposition from an elimination ordering; components hang below an
/// extra root with an empty bag.
pub fn elimination_decomposition(inst: &Instance, heuristic: Heuristic) -> TreeDecomposition {
    let (order, vbags) = eliminate(inst, heuristic);
    let mut pos = vec![usize::MAX; inst.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let root = order.len();
    let mut bags: Vec<Vec<usize>> = order.iter().map(|&v| vbags[v].clone()).collect();
    bags.push(Vec::new());
    let mut parent: Vec<Option<usize>> = order
        .iter()
        .map(|&v| {
            vbags[v]
                .iter()
                .filter(|&&u| u != v)
                .map(|&u| pos[u])
                .min()
                .or(Some(root))
        })
        .collect();
    parent.push(None);
    TreeDecomposition { bags, parent }
}

/// Path decomposition from a greedy vertex-separation ordering.
pub fn path_decomposition(inst: &Instance) -> TreeDecomposition {
    let n = inst.vertex_count();
    let inner: Vec<usize> = (0..n).filter(|&v| !inst.is_terminal(v)).collect();
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            inst.neighbors(v)
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| !inst.is_terminal(u))
                .collect()
        })
        .collect();
    let mut placed = vec![false; n];
    let mut active: Vec<usize> = Vec::new();
    let mut bags = Vec::new();
    for _ in 0..inner.len() {
        let after = |v: usize, placed: &[bool], active: &[usize]| -> usize {
            let open = |x: usize| nbrs[x].iter().any(|&y| !placed[y] && y != v);
            active.iter().filter(|&&x| open(x)).count() + usize::from(open(v))
        };
        let v = inner
            .iter()
            .copied()
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let touches = active.iter().any(|&x| nbrs[x].contains(&v));
                (after(v, &placed, &active), !touches, v)
            })
            .expect("unplaced vertex");
        let mut bag = active.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        placed[v] = true;
        active.push(v);
        active.retain(|&x| nbrs[x].iter().any(|&y| !placed[y]));
    }
    let k = bags.len();
    bags.push(Vec::new());
    let parent = (0..=k)
        .map(|i| if i == k { None } else { Some(i + 1) })
        .collect();
    TreeDecomposition { bags, parent }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted vertex ids; always contains `s` and `t`.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    nodes: Vec<NiceNode>,
    root: usize,
}

impl NiceDecomposition {
    /// Nice form of `td` with `s` and `t` added to every bag. Terminals that
    /// already occur in `td` are ignored.
    pub fn from_tree(td: &TreeDecomposition, inst: &Instance) -> NiceDecomposition {
        let children = td.children();
        let strip = |bag: &[usize]| -> Vec<usize> {
            let mut b: Vec<usize> = bag
                .iter()
                .copied()
                .filter(|&v| !inst.is_terminal(v))
                .collect();
            b.sort_unstable();
            b.dedup();
            b
        };
        let mut nodes: Vec<NiceNode> = Vec::new();
        let push = |nodes: &mut Vec<NiceNode>, kind, bag: Vec<usize>, children| {
            nodes.push(NiceNode {
                kind,
                bag,
                children,
            });
            nodes.len() - 1
        };
        // iterative post-order over td
        let root = td.root();
        let mut built: Vec<Option<usize>> = vec![None; td.bags.len()];
        let mut stack = vec![(root, false)];
        while let Some((x, expanded)) = stack.pop() {
            if !expanded {
                stack.push((x, true));
                for &c in &children[x] {
                    stack.push((c, false));
                }
                continue;
            }
            let target = strip(&td.bags[x]);
            let mut subs = Vec::new();
            let sources: Vec<(usize, Vec<usize>)> = if children[x].is_empty() {
                let leaf = push(&mut nodes, NodeKind::Leaf, Vec::new(), Vec::new());
                vec![(leaf, Vec::new())]
            } else {
                children[x]
                    .iter()
                    .map(|&c| (built[c].expect("child built"), strip(&td.bags[c])))
                    .collect()
            };
            for (mut id, mut bag) in sources {
                for v in bag.clone() {
                    if !target.contains(&v) {
                        bag.retain(|&u| u != v);
                        id = push(&mut nodes, NodeKind::Forget(v), bag.clone(), vec![id]);
                    }
                }
                for &v in &target {
                    if !bag.contains(&v) {
                        bag.push(v);
                        bag.sort_unstable();
                        id = push(&mut nodes, NodeKind::Introduce(v), bag.clone(), vec![id]);
                    }
                }
                subs.push(id);
            }
            let mut cur = subs[0];
            for &next in &subs[1..] {
                cur = push(&mut nodes, NodeKind::Join, target.clone(), vec![cur, next]);
            }
            built[x] = Some(cur);
        }
        let mut top = built[root].expect("root built");
        let mut bag = nodes[top].bag.clone();
        for v in bag.clone() {
            bag.retain(|&u| u != v);
            top = push(&mut nodes, NodeKind::Forget(v), bag.clone(), vec![top]);
        }
        for node in &mut nodes {
            node.bag.push(inst.s());
            node.bag.push(inst.t());
            node.bag.sort_unstable();
        }
        NiceDecomposition { nodes, root: top }
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NiceNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_bag(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    /// Width of the decomposition including the terminals.
    pub fn width(&self) -> usize {
        self.max_bag().saturating_sub(1)
    }

    pub fn max_join_bag(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Join)
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
    }

    /// Vertices occurring in the subtree of every node.
    pub fn subtree_vertices(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Option<Vec<usize>>> = vec![None; self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((x, expanded)) = stack.pop() {
            if !expanded {
                stack.push((x, true));
                for &c in &self.nodes[x].children {
                    stack.push((c, false));
                }
                continue;
            }
            let mut vs: BTreeSet<usize> = self.nodes[x].bag.iter().copied().collect();
            for &c in &self.nodes[x].children {
                vs.extend(out[c].as_ref().unwrap().iter().copied());
            }
            out[x] = Some(vs.into_iter().collect());
        }
        out.into_iter().map(|v| v.unwrap_or_default()).collect()
    }

    /// Check the nice-form invariants and the decomposition properties for
    /// the instance graph (the edge `{s,t}` is exempt).
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        let bad = |msg: String| Err(Error::Decomposition(msg));
        let st = {
            let mut v = vec![inst.s(), inst.t()];
            v.sort_unstable();
            v
        };
        if self.nodes[self.root].bag != st {
            return bad("root bag must be exactly {s,t}".into());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if !node.bag.contains(&inst.s()) || !node.bag.contains(&inst.t()) {
                return bad(format!("node {i} misses a terminal"));
            }
            let child_bag = |j: usize| &self.nodes[node.children[j]].bag;
            let ok = match node.kind {
                NodeKind::Leaf => node.children.is_empty() && node.bag == st,
                NodeKind::Introduce(v) => {
                    node.children.len() == 1 && {
                        let mut b = child_bag(0).clone();
                        !b.contains(&v) && {
                            b.push(v);
                            b.sort_unstable();
                            b == node.bag
                        }
                    }
                }
                NodeKind::Forget(v) => {
                    node.children.len() == 1 && {
                        let mut b = node.bag.clone();
                        !b.contains(&v) && {
                            b.push(v);
                            b.sort_unstable();
                            &b == child_bag(0)
                        }
                    }
                }
                NodeKind::Join => {
                    node.children.len() == 2
                        && child_bag(0) == &node.bag
                        && child_bag(1) == &node.bag
                }
            };
            if !ok {
                return bad(format!("node {i} violates the {:?} shape", node.kind));
            }
        }
        let mut parent = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(i);
            }
        }
        let raw = TreeDecomposition {
            bags: self.nodes.iter().map(|n| n.bag.clone()).collect(),
            parent,
        };
        raw.validate(inst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Tree decomposition unless it has join bags above the join cap, then
    /// a path decomposition.
    Auto,
    Tree,
    Path,
}

/// Heuristic nice decomposition of `G - {s,t}` with terminals added.
pub fn build_decomposition(
    inst: &Instance,
    strategy: Strategy,
    join_bag_cap: usize,
) -> NiceDecomposition {
    let tree = || {
        let a = elimination_decomposition(inst, Heuristic::MinDegree);
        let b = elimination_decomposition(inst, Heuristic::MinFill);
        let td = if b.width() < a.width() { b } else { a };
        NiceDecomposition::from_tree(&td, inst)
    };
    let path = || NiceDecomposition::from_tree(&path_decomposition(inst), inst);
    match strategy {
        Strategy::Tree => tree(),
        Strategy::Path => path(),
        Strategy::Auto => {
            let t = tree();
            if t.max_join_bag() <= join_bag_cap {
                t
            } else {
                path()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{EdgeSpec, Variant};

    fn build(edges: &[(&str, &str)]) -> Instance {
        let mut names: Vec<String> = edges
            .iter()
            .flat_map(|e| [e.0.to_string(), e.1.to_string()])
            .chain(["s".to_string(), "t".to_string()])
            .collect();
        names.sort();
        names.dedup();
        let specs = edges
            .iter()
            .map(|&(u, v)| EdgeSpec::new(u, v, 1, 1))
            .collect();
        Instance::new(Variant::Mcp, names, specs, "s", "t", 1, 1).unwrap()
    }

    #[test]
    fn path_graph_bags_are_small() {
        let g = build(&[("s", "v1"), ("v1", "v2"), ("v2", "t")]);
        for strategy in [Strategy::Tree, Strategy::Path] {
            let nd = build_decomposition(&g, strategy, 3);
            nd.validate(&g).unwrap();
            assert!(nd.max_bag() <= 4);
        }
    }

    #[test]
    fn star_bags_have_size_three() {
        let g = build(&[
            ("s", "a"),
            ("a", "t"),
            ("s", "b"),
            ("b", "t"),
            ("s", "c"),
            ("c", "t"),
        ]);
        let nd = build_decomposition(&g, Strategy::Tree, 3);
        nd.validate(&g).unwrap();
        assert_eq!(nd.max_bag(), 3);
    }

    #[test]
    fn grid_decompositions_validate() {
        let g = build(&[
            ("s", "a"),
            ("a", "b"),
            ("b", "c"),
            ("a", "d"),
            ("b", "e"),
            ("c", "f"),
            ("d", "e"),
            ("e", "f"),
            ("f", "t"),
            ("d", "t"),
        ]);
        for strategy in [Strategy::Tree, Strategy::Path, Strategy::Auto] {
            build_decomposition(&g, strategy, 3).validate(&g).unwrap();
        }
    }

    #[test]
    fn broken_decomposition_is_rejected() {
        let g = build(&[("s", "a"), ("a", "b"), ("b", "t")]);
        let a = g.vertex_index("a").unwrap();
        let b = g.vertex_index("b").unwrap();
        let td = TreeDecomposition {
            bags: vec![vec![a], vec![b]],
            parent: vec![None, Some(0)],
        };
        let err = td.validate(&g).unwrap_err().to_string();
        assert!(err.contains("edge cover"), "{err}");
        let td = TreeDecomposition {
            bags: vec![vec![a, b], vec![], vec![a]],
            parent: vec![None, Some(0), Some(1)],
        };
        let err = td.validate(&g).unwrap_err().to_string();
        assert!(err.contains("connectivity"), "{err}");
    }
}
