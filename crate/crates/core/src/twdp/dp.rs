//! Memoized top-down evaluation of the decomposition table.
//!
//! `T[x, f, D_x]` is the minimum cost of a set `D ⊆ E_x` with
//! `D ∩ E(β(x)) = D_x` such that, for every partition `P` of the bag, every
//! edge set of `G_x` avoiding `D` that separates the blocks of `P` has
//! capacity at least `f(P)`. `D_x` is a bit mask over the bag edges of `x`
//! and `f` is indexed by the partition table of the bag size.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::instance::Instance;

use super::decomposition::{NiceDecomposition, NodeKind};
use super::partition::{extensions, remove, PartitionTable};
use super::DpConfig;

pub const INF: u64 = u64::MAX;

/// Largest bag the engine accepts regardless of configuration.
pub const HARD_MAX_BAG: usize = 11;

enum Info {
    Leaf,
    Introduce {
        child: usize,
        /// Bag edges of `x` incident to the introduced vertex.
        new_mask: u64,
        /// `(bit in x, bit in child)` for the child's bag edges.
        to_child: Vec<(u32, u32)>,
        /// Per child partition `P`: every `P' ∈ P + v` with the mask of
        /// `E(v, β(y) \ P'(v))` and its capacity.
        ext: Vec<Vec<(u32, u64, u64)>>,
    },
    Forget {
        child: usize,
        /// Child bit of each bag edge of `x`.
        embed: Vec<u32>,
        /// Child bits of the edges between the forgotten vertex and the bag.
        v_bits: Vec<u32>,
        /// Child partition index to `x` partition index (`P' - v`).
        fmap: Vec<u32>,
    },
    Join {
        left: usize,
        right: usize,
        /// Per partition: mask and capacity of bag edges between blocks.
        crossing: Vec<(u64, u64)>,
    },
}

struct NodeData {
    bag_edges: Vec<usize>,
    info: Info,
}

type Key = (usize, u64, Box<[u64]>);

/// Immutable precomputed structure of one DP run.
struct Plan<'a> {
    inst: &'a Instance,
    cap: u64,
    tables: Vec<PartitionTable>,
    nodes: Vec<NodeData>,
    bag_sizes: Vec<usize>,
    cfg: DpConfig,
}

pub struct DpEngine<'a> {
    plan: Plan<'a>,
    td: &'a NiceDecomposition,
    memo: HashMap<Key, u64>,
}

fn bag_edges(inst: &Instance, bag: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &u) in bag.iter().enumerate() {
        for &v in &bag[i + 1..] {
            if let Some(e) = inst.edge_between(u, v) {
                out.push(e);
            }
        }
    }
    out.sort_unstable();
    out
}

fn bit_of(list: &[usize], e: usize) -> u32 {
    list.binary_search(&e).expect("edge in bag") as u32
}

impl<'a> DpEngine<'a> {
    pub fn new(inst: &'a Instance, td: &'a NiceDecomposition, cfg: &DpConfig) -> Result<Self> {
        let max_bag = td.max_bag();
        let limit = cfg.max_bag.min(HARD_MAX_BAG);
        if max_bag > limit {
            return Err(Error::Budget {
                what: "decomposition bag size",
                limit: limit as u64,
            });
        }
        if td.max_join_bag() > cfg.join_bag_cap {
            return Err(Error::Budget {
                what: "join bag size",
                limit: cfg.join_bag_cap as u64,
            });
        }
        if inst.edge_between(inst.s(), inst.t()).is_some() {
            return Err(Error::Internal(
                "edge {s,t} must be removed before the table DP".into(),
            ));
        }
        let tables: Vec<PartitionTable> = (0..=max_bag).map(PartitionTable::new).collect();
        let mut nodes = Vec::with_capacity(td.len());
        for node in td.nodes() {
            let be = bag_edges(inst, &node.bag);
            let info = match node.kind {
                NodeKind::Leaf => Info::Leaf,
                NodeKind::Introduce(v) => {
                    let child = node.children[0];
                    let cbag = &td.node(child).bag;
                    let cbe = bag_edges(inst, cbag);
                    let to_child = cbe
                        .iter()
                        .enumerate()
                        .map(|(j, &e)| (bit_of(&be, e), j as u32))
                        .collect();
                    let mut new_mask = 0u64;
                    for (i, &e) in be.iter().enumerate() {
                        if inst.edge(e).touches(v) {
                            new_mask |= 1 << i;
                        }
                    }
                    let pos = node
                        .bag
                        .binary_search(&v)
                        .expect("introduced vertex in bag");
                    let ctable = &tables[cbag.len()];
                    let ptable = &tables[node.bag.len()];
                    let mut ext = vec![Vec::new(); ctable.len()];
                    for (pi, p) in ctable.iter().enumerate() {
                        for q in extensions(p, pos) {
                            let mut amask = 0u64;
                            let mut w = 0u64;
                            for (i, &e) in be.iter().enumerate() {
                                let edge = inst.edge(e);
                                if !edge.touches(v) {
                                    continue;
                                }
                                let other = edge.other(v);
                                let opos = node.bag.binary_search(&other).unwrap();
                                if q[opos] != q[pos] {
                                    amask |= 1 << i;
                                    w += edge.cap;
                                }
                            }
                            ext[pi].push((ptable.index_of(&q) as u32, amask, w));
                        }
                    }
                    Info::Introduce {
                        child,
                        new_mask,
                        to_child,
                        ext,
                    }
                }
                NodeKind::Forget(v) => {
                    let child = node.children[0];
                    let cbag = &td.node(child).bag;
                    let cbe = bag_edges(inst, cbag);
                    let embed = be.iter().map(|&e| bit_of(&cbe, e)).collect();
                    let v_bits = cbe
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| inst.edge(e).touches(v))
                        .map(|(j, _)| j as u32)
                        .collect();
                    let pos = cbag
                        .binary_search(&v)
                        .expect("forgotten vertex in child bag");
                    let ptable = &tables[node.bag.len()];
                    let fmap = tables[cbag.len()]
                        .iter()
                        .map(|p| ptable.index_of(&remove(p, pos)) as u32)
                        .collect();
                    Info::Forget {
                        child,
                        embed,
                        v_bits,
                        fmap,
                    }
                }
                NodeKind::Join => {
                    let crossing = tables[node.bag.len()]
                        .iter()
                        .map(|p| {
                            let mut mask = 0u64;
                            let mut w = 0u64;
                            for (i, &e) in be.iter().enumerate() {
                                let edge = inst.edge(e);
                                let pu = node.bag.binary_search(&edge.u).unwrap();
                                let pv = node.bag.binary_search(&edge.v).unwrap();
                                if p[pu] != p[pv] {
                                    mask |= 1 << i;
                                    w += edge.cap;
                                }
                            }
                            (mask, w)
                        })
                        .collect();
                    Info::Join {
                        left: node.children[0],
                        right: node.children[1],
                        crossing,
                    }
                }
            };
            nodes.push(NodeData {
                bag_edges: be,
                info,
            });
        }
        Ok(DpEngine {
            plan: Plan {
                inst,
                cap: inst.a() + 1,
                tables,
                nodes,
                bag_sizes: td.nodes().iter().map(|n| n.bag.len()).collect(),
                cfg: cfg.clone(),
            },
            td,
            memo: HashMap::new(),
        })
    }

    pub fn decomposition(&self) -> &NiceDecomposition {
        self.td
    }

    pub fn bag(&self, x: usize) -> &[usize] {
        &self.td.node(x).bag
    }

    /// Edges with both endpoints in the bag of `x`, in bit order.
    pub fn bag_edges(&self, x: usize) -> &[usize] {
        &self.plan.nodes[x].bag_edges
    }

    /// Partition table for the bag of `x`; positions refer to [`Self::bag`].
    pub fn partitions(&self, x: usize) -> &PartitionTable {
        &self.plan.tables[self.plan.bag_sizes[x]]
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Table entry `T[x, f, D_x]`, `None` for infinity. `f` is indexed like
    /// [`Self::partitions`] and `dx` lists edge ids from [`Self::bag_edges`].
    pub fn entry(&mut self, x: usize, f: &[u64], dx: &[usize]) -> Result<Option<u64>> {
        let be = &self.plan.nodes[x].bag_edges;
        let mut mask = 0u64;
        for &e in dx {
            let i = be
                .binary_search(&e)
                .map_err(|_| Error::Internal("D_x must consist of bag edges".into()))?;
            mask |= 1 << i;
        }
        let v = self.plan.value(&mut self.memo, x, f, mask)?;
        Ok((v != INF).then_some(v))
    }

    /// Root query: `{{s,t}} -> 0`, `{{s},{t}} -> a+1`, `D = ∅`.
    fn root_f(&self) -> Vec<u64> {
        vec![0, self.plan.cap]
    }

    pub fn root_value(&mut self) -> Result<Option<u64>> {
        let f = self.root_f();
        let root = self.td.root();
        let v = self.plan.value(&mut self.memo, root, &f, 0)?;
        Ok((v != INF).then_some(v))
    }

    /// Edges of a defense attaining the root value.
    pub fn traceback(&mut self) -> Result<Vec<usize>> {
        let f = self.root_f();
        let root = self.td.root();
        let mut out = Vec::new();
        self.plan.trace(&mut self.memo, root, &f, 0, &mut out)?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

fn map_bits(mask: u64, pairs: &[(u32, u32)]) -> u64 {
    pairs
        .iter()
        .filter(|(from, _)| mask >> from & 1 == 1)
        .fold(0, |m, &(_, to)| m | 1 << to)
}

impl Plan<'_> {
    fn mask_cost(&self, x: usize, mask: u64) -> u64 {
        self.nodes[x]
            .bag_edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| self.inst.edge(e).cost)
            .sum()
    }

    fn introduce_child(
        &self,
        f: &[u64],
        dmask: u64,
        to_child: &[(u32, u32)],
        ext: &[Vec<(u32, u64, u64)>],
    ) -> (Vec<u64>, u64) {
        let fy = ext
            .iter()
            .map(|list| {
                list.iter()
                    .filter(|&&(_, amask, _)| amask & dmask == 0)
                    .map(|&(q, _, w)| f[q as usize].saturating_sub(w))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        (fy, map_bits(dmask, to_child))
    }

    fn forget_child(&self, f: &[u64], dmask: u64, embed: &[u32], fmap: &[u32]) -> (Vec<u64>, u64) {
        let fy = fmap.iter().map(|&p| f[p as usize]).collect();
        let base = embed
            .iter()
            .enumerate()
            .filter(|(i, _)| dmask >> i & 1 == 1)
            .fold(0u64, |m, (_, &b)| m | 1 << b);
        (fy, base)
    }

    /// Candidate values of `f_y(P)` per partition at a join.
    fn join_options(&self, f: &[u64], dmask: u64, crossing: &[(u64, u64)]) -> Vec<Vec<u64>> {
        crossing
            .iter()
            .zip(f)
            .map(|(&(cmask, wc), &fx)| {
                if cmask & dmask != 0 {
                    // no separating set avoids D, any requirement holds
                    return vec![0];
                }
                if self.cfg.exhaustive_join {
                    return (0..=self.cap).collect();
                }
                let ub = self.cap.min(fx.saturating_add(wc));
                (wc.min(ub)..=ub).collect()
            })
            .collect()
    }

    fn join_partner(&self, f: &[u64], fy: &[u64], crossing: &[(u64, u64)]) -> Vec<u64> {
        f.iter()
            .zip(fy)
            .zip(crossing)
            .map(|((&fx, &y), &(_, wc))| fx.saturating_add(wc).saturating_sub(y).min(self.cap))
            .collect()
    }

    fn for_each_choice(
        &self,
        options: &[Vec<u64>],
        mut visit: impl FnMut(&[u64]) -> Result<bool>,
    ) -> Result<()> {
        let total = options
            .iter()
            .fold(1u64, |acc, o| acc.saturating_mul(o.len() as u64));
        if total > self.cfg.join_candidates {
            return Err(Error::Budget {
                what: "join candidates",
                limit: self.cfg.join_candidates,
            });
        }
        let mut idx = vec![0usize; options.len()];
        let mut fy: Vec<u64> = options.iter().map(|o| o[0]).collect();
        loop {
            if visit(&fy)? {
                return Ok(());
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(());
                }
                idx[k] += 1;
                if idx[k] < options[k].len() {
                    fy[k] = options[k][idx[k]];
                    break;
                }
                idx[k] = 0;
                fy[k] = options[k][0];
                k += 1;
            }
        }
    }

    fn value(&self, memo: &mut HashMap<Key, u64>, x: usize, f: &[u64], dmask: u64) -> Result<u64> {
        let key: Key = (x, dmask, f.into());
        if let Some(&v) = memo.get(&key) {
            return Ok(v);
        }
        let v = match &self.nodes[x].info {
            Info::Leaf => {
                if f.iter().all(|&v| v == 0) {
                    0
                } else {
                    INF
                }
            }
            Info::Introduce {
                child,
                new_mask,
                to_child,
                ext,
            } => {
                let (fy, dy) = self.introduce_child(f, dmask, to_child, ext);
                match self.value(memo, *child, &fy, dy)? {
                    INF => INF,
                    c => c + self.mask_cost(x, dmask & new_mask),
                }
            }
            Info::Forget {
                child,
                embed,
                v_bits,
                fmap,
            } => {
                let (fy, base) = self.forget_child(f, dmask, embed, fmap);
                let mut best = INF;
                for sub in 0u64..(1 << v_bits.len()) {
                    let extra = v_bits
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| sub >> i & 1 == 1)
                        .fold(0u64, |m, (_, &b)| m | 1 << b);
                    best = best.min(self.value(memo, *child, &fy, base | extra)?);
                }
                best
            }
            Info::Join {
                left,
                right,
                crossing,
            } => {
                let options = self.join_options(f, dmask, crossing);
                let shared = self.mask_cost(x, dmask);
                let mut best = INF;
                self.for_each_choice(&options, |fy| {
                    let ty = self.value(memo, *left, fy, dmask)?;
                    if ty == INF || ty >= best {
                        return Ok(false);
                    }
                    let fz = self.join_partner(f, fy, crossing);
                    let tz = self.value(memo, *right, &fz, dmask)?;
                    if tz != INF {
                        best = best.min(ty + tz - shared);
                    }
                    Ok(false)
                })?;
                best
            }
        };
        if memo.len() as u64 >= self.cfg.state_budget {
            return Err(Error::Budget {
                what: "table states",
                limit: self.cfg.state_budget,
            });
        }
        memo.insert(key, v);
        Ok(v)
    }

    fn trace(
        &self,
        memo: &mut HashMap<Key, u64>,
        x: usize,
        f: &[u64],
        dmask: u64,
        out: &mut Vec<usize>,
    ) -> Result<()> {
        let target = self.value(memo, x, f, dmask)?;
        if target == INF {
            return Err(Error::Internal(
                "traceback through an infeasible entry".into(),
            ));
        }
        match &self.nodes[x].info {
            Info::Leaf => Ok(()),
            Info::Introduce {
                child,
                new_mask,
                to_child,
                ext,
            } => {
                let be = &self.nodes[x].bag_edges;
                for (i, &e) in be.iter().enumerate() {
                    if (dmask & new_mask) >> i & 1 == 1 {
                        out.push(e);
                    }
                }
                let (fy, dy) = self.introduce_child(f, dmask, to_child, ext);
                self.trace(memo, *child, &fy, dy, out)
            }
            Info::Forget {
                child,
                embed,
                v_bits,
                fmap,
            } => {
                let (fy, base) = self.forget_child(f, dmask, embed, fmap);
                for sub in 0u64..(1 << v_bits.len()) {
                    let extra = v_bits
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| sub >> i & 1 == 1)
                        .fold(0u64, |m, (_, &b)| m | 1 << b);
                    if self.value(memo, *child, &fy, base | extra)? == target {
                        return self.trace(memo, *child, &fy, base | extra, out);
                    }
                }
                Err(Error::Internal(
                    "forget traceback found no minimizer".into(),
                ))
            }
            Info::Join {
                left,
                right,
                crossing,
            } => {
                let options = self.join_options(f, dmask, crossing);
                let shared = self.mask_cost(x, dmask);
                let mut pick: Option<(Vec<u64>, Vec<u64>)> = None;
                self.for_each_choice(&options, |fy| {
                    let ty = self.value(memo, *left, fy, dmask)?;
                    if ty == INF {
                        return Ok(false);
                    }
                    let fz = self.join_partner(f, fy, crossing);
                    let tz = self.value(memo, *right, &fz, dmask)?;
                    if tz != INF && ty + tz - shared == target {
                        pick = Some((fy.to_vec(), fz));
                        return Ok(true);
                    }
                    Ok(false)
                })?;
                let (fy, fz) = pick
                    .ok_or_else(|| Error::Internal("join traceback found no minimizer".into()))?;
                self.trace(memo, *left, &fy, dmask, out)?;
                self.trace(memo, *right, &fz, dmask, out)
            }
        }
    }
}
