//! Plain undirected graph helpers: connectivity, bipartiteness and exact
//! minimum vertex cover.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list; duplicate edges and loops are ignored.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = SimpleGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v || self.adj[u].contains(&v) {
            return;
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Membership mask of the connected component containing `v`.
    pub fn component_of(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.component_of(0).iter().all(|&x| x)
    }

    /// Two-coloring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.adj.len();
        let mut color: Vec<Option<bool>> = vec![None; n];
        for root in 0..n {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(false);
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                let cx = color[x].unwrap();
                for &y in &self.adj[x] {
                    match color[y] {
                        None => {
                            color[y] = Some(!cx);
                            stack.push(y);
                        }
                        Some(cy) if cy == cx => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn is_vertex_cover(&self, cover: &[usize]) -> bool {
        let mut inside = vec![false; self.adj.len()];
        for &v in cover {
            inside[v] = true;
        }
        self.edges().iter().all(|&(u, v)| inside[u] || inside[v])
    }

    /// Exact minimum vertex cover by branching on a maximum-degree vertex
    /// (take it, or take all of its neighbors). `budget` bounds the number of
    /// search nodes.
    pub fn min_vertex_cover(&self, budget: u64) -> Result<Vec<usize>> {
        let n = self.adj.len();
        let mut search = VcSearch {
            adj: &self.adj,
            removed: vec![false; n],
            chosen: Vec::new(),
            best: (0..n).filter(|&v| !self.adj[v].is_empty()).collect(),
            nodes: 0,
            budget,
        };
        search.run()?;
        let mut best = search.best;
        best.sort_unstable();
        Ok(best)
    }
}

struct VcSearch<'a> {
    adj: &'a [Vec<usize>],
    removed: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl VcSearch<'_> {
    fn live_degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&u| !self.removed[u]).count()
    }

    fn take(&mut self, v: usize) {
        self.removed[v] = true;
        self.chosen.push(v);
    }

    fn untake(&mut self, mark: usize) {
        while self.chosen.len() > mark {
            let v = self.chosen.pop().unwrap();
            self.removed[v] = false;
        }
    }

    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "vertex cover branching",
                limit: self.budget,
            });
        }
        if self.chosen.len() >= self.best.len() {
            return Ok(());
        }
        let mark = self.chosen.len();

        // Degree-one vertices: taking the neighbor is always safe.
        loop {
            let pendant =
                (0..self.adj.len()).find(|&v| !self.removed[v] && self.live_degree(v) == 1);
            match pendant {
                Some(v) => {
                    let u = *self.adj[v].iter().find(|&&u| !self.removed[u]).unwrap();
                    self.take(u);
                }
                None => break,
            }
        }

        let pick = (0..self.adj.len())
            .filter(|&v| !self.removed[v])
            .map(|v| (self.live_degree(v), v))
            .max();
        let (deg, v) = match pick {
            Some((deg, v)) if deg > 0 => (deg, v),
            _ => {
                if self.chosen.len() < self.best.len() {
                    self.best = self.chosen.clone();
                }
                self.untake(mark);
                return Ok(());
            }
        };
        // Lower bound: each chosen vertex covers at most `deg` remaining edges.
        let live_edges: usize = (0..self.adj.len())
            .filter(|&x| !self.removed[x])
            .map(|x| self.live_degree(x))
            .sum::<usize>()
            / 2;
        if self.chosen.len() + live_edges.div_ceil(deg) >= self.best.len() {
            self.untake(mark);
            return Ok(());
        }

        let inner = self.chosen.len();
        self.take(v);
        let r = self.run();
        self.untake(inner);
        r?;

        let nbrs: Vec<usize> = self.adj[v]
            .iter()
            .copied()
            .filter(|&u| !self.removed[u])
            .collect();
        for u in nbrs {
            self.take(u);
        }
        let r = self.run();
        self.untake(mark);
        r
    }
}
