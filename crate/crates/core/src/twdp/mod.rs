//! Dynamic program over a nice tree decomposition of `G - {s,t}` in which
//! every bag additionally holds `s` and `t`. Works for all variants,
//! including zero capacities.

pub mod decomposition;
pub mod dp;
pub mod partition;
pub mod td;

use crate::error::{Error, Result};
use crate::instance::{DefenseSet, Instance};
use crate::solve::{SolveOutcome, Stats};

pub use decomposition::{
    build_decomposition, NiceDecomposition, NodeKind, Strategy, TreeDecomposition,
};
pub use dp::DpEngine;
pub use td::{parse_td, write_td};

#[derive(Clone, Debug)]
pub struct DpConfig {
    /// Largest bag (terminals included) the table may be built for.
    pub max_bag: usize,
    /// Largest join bag; joins enumerate `f_y` over all partitions.
    pub join_bag_cap: usize,
    /// Cap on `f_y` candidates enumerated for one join entry.
    pub join_candidates: u64,
    /// Cap on memoized table entries.
    pub state_budget: u64,
    /// Enumerate `f_y` over all of `[0, a+1]` at joins instead of the
    /// pruned range.
    pub exhaustive_join: bool,
    /// Report a minimum-cost defense even when the edge `{s,t}` alone is
    /// affordable.
    pub minimize: bool,
    pub strategy: Strategy,
    pub stack_size: usize,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig {
            max_bag: 8,
            join_bag_cap: 3,
            join_candidates: 200_000,
            state_budget: 400_000,
            exhaustive_join: false,
            minimize: false,
            strategy: Strategy::Auto,
            stack_size: 512 << 20,
        }
    }
}

/// Canonical partition of a bag: blocks sorted internally and by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BagPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl BagPartition {
    /// Decode a restricted-growth string over the sorted `bag`.
    pub fn from_rgs(bag: &[usize], rgs: &[u8]) -> Self {
        BagPartition {
            blocks: partition::blocks(rgs)
                .into_iter()
                .map(|b| b.into_iter().map(|i| bag[i]).collect())
                .collect(),
        }
    }

    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&v))
    }
}

/// Capacity of the bag edges whose endpoints lie in different blocks.
pub fn partition_cut_capacity(inst: &Instance, bag: &[usize], p: &BagPartition) -> u64 {
    let mut total = 0;
    for (i, &u) in bag.iter().enumerate() {
        for &v in &bag[i + 1..] {
            if let Some(e) = inst.edge_between(u, v) {
                if p.block_of(u) != p.block_of(v) {
                    total += inst.edge(e).cap;
                }
            }
        }
    }
    total
}

fn on_big_stack<T: Send>(size: usize, f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(size)
            .spawn_scoped(scope, f)
            .expect("spawn solver thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

/// Where the decomposition comes from.
enum Source<'a> {
    Heuristic,
    Pace(&'a str),
}

pub fn dp_solve(inst: &Instance, cfg: &DpConfig) -> Result<SolveOutcome> {
    solve_with(inst, cfg, Source::Heuristic)
}

/// Solve with a user-supplied PACE `.td` decomposition of `G - {s,t}`.
pub fn dp_solve_with_td(inst: &Instance, td_text: &str, cfg: &DpConfig) -> Result<SolveOutcome> {
    solve_with(inst, cfg, Source::Pace(td_text))
}

fn solve_with(inst: &Instance, cfg: &DpConfig, source: Source<'_>) -> Result<SolveOutcome> {
    let st = inst.edge_between(inst.s(), inst.t());
    let mut shortcut: Option<DefenseSet> = None;
    let reduced = match st {
        None => inst.clone(),
        Some(e) => {
            let edge = *inst.edge(e);
            if edge.cost <= inst.d() {
                let only = DefenseSet::new(inst, [e]);
                if !cfg.minimize {
                    return Ok(SolveOutcome::yes("dp", only, Stats::default()));
                }
                shortcut = Some(only);
            }
            if edge.cap > inst.a() {
                // every cut contains the unprotected edge {s,t}
                return Ok(SolveOutcome::yes(
                    "dp",
                    DefenseSet::empty(),
                    Stats::default(),
                ));
            }
            inst.without_edges(&[e])
                .with_budgets(inst.d(), inst.a() - edge.cap)
        }
    };
    let td = match source {
        Source::Heuristic => build_decomposition(&reduced, cfg.strategy, cfg.join_bag_cap),
        Source::Pace(text) => NiceDecomposition::from_tree(&parse_td(text, &reduced)?, &reduced),
    };
    let (value, edges, entries) = on_big_stack(cfg.stack_size, || -> Result<_> {
        let mut engine = DpEngine::new(&reduced, &td, cfg)?;
        let value = engine.root_value()?;
        let edges = match value {
            Some(v) if v <= inst.d() || cfg.minimize => Some(engine.traceback()?),
            _ => None,
        };
        Ok((value, edges, engine.memo_len()))
    })?;
    let stats = Stats {
        nodes_expanded: td.len() as u64,
        table_entries: entries as u64,
        oracle_calls: 0,
    };
    let found = match (value, edges) {
        (Some(v), Some(edges)) => {
            let d = DefenseSet::new(&reduced, edges);
            if d.total_cost() != v {
                return Err(Error::Internal(format!(
                    "traceback cost {} differs from table value {v}",
                    d.total_cost()
                )));
            }
            Some(d.transfer(&reduced, inst)?)
        }
        _ => None,
    };
    let best = match (found, shortcut) {
        (Some(d), Some(s)) => Some(if s.total_cost() < d.total_cost() {
            s
        } else {
            d
        }),
        (a, b) => a.or(b),
    };
    Ok(match best {
        Some(d) if d.total_cost() <= inst.d() => SolveOutcome::yes("dp", d, stats),
        _ => SolveOutcome::no("dp", stats),
    })
}
