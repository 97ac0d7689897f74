//! Kernelization for the combined parameter vertex cover plus attacker
//! budget.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::min_cut_value;
use crate::instance::{EdgeSpec, Instance, Normalized, Variant};
use crate::solve::Answer;
use crate::transform::{merge, to_mcp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleOutcome {
    Unchanged,
    Changed(Instance),
    /// The instance was decided.
    Decided(Answer),
}

/// Remove terminal `x` (with single neighbor `w`) and make `w` the new
/// terminal, charging the forced edge to the defender.
fn shift_terminal(inst: &Instance, x: usize) -> RuleOutcome {
    let (w, e) = inst.neighbors(x)[0];
    let edge = *inst.edge(e);
    let Some(d) = inst.d().checked_sub(edge.cost) else {
        return RuleOutcome::Decided(Answer::No);
    };
    if inst.is_terminal(w) {
        // protecting the single edge separates nothing anymore
        return RuleOutcome::Decided(Answer::Yes);
    }
    let vertices = (0..inst.vertex_count())
        .filter(|&v| v != x)
        .map(|v| inst.name(v).to_string())
        .collect();
    let edges: Vec<EdgeSpec> = inst
        .edge_specs()
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, s)| s)
        .collect();
    let name = |v: usize| if v == x { inst.name(w) } else { inst.name(v) };
    let next = Instance::new(
        inst.variant(),
        vertices,
        edges,
        name(inst.s()),
        name(inst.t()),
        d,
        inst.a(),
    )
    .expect("shifting a terminal keeps the instance valid");
    RuleOutcome::Changed(next)
}

/// A terminal with a single incident edge of capacity at most `a` forces
/// that edge into every defense.
pub fn rule_st_deg_one(inst: &Instance) -> RuleOutcome {
    for x in [inst.s(), inst.t()] {
        if inst.degree(x) == 1 {
            let (_, e) = inst.neighbors(x)[0];
            if inst.edge(e).cap <= inst.a() {
                return shift_terminal(inst, x);
            }
        }
    }
    RuleOutcome::Unchanged
}

/// A non-terminal of degree one lies on no inclusion-minimal cut.
pub fn rule_delete_deg_one(inst: &Instance) -> RuleOutcome {
    let Some(v) = (0..inst.vertex_count()).find(|&v| !inst.is_terminal(v) && inst.degree(v) == 1)
    else {
        return RuleOutcome::Unchanged;
    };
    let (_, e) = inst.neighbors(v)[0];
    let vertices = (0..inst.vertex_count())
        .filter(|&x| x != v)
        .map(|x| inst.name(x).to_string())
        .collect();
    let edges = inst
        .edge_specs()
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, s)| s)
        .collect();
    RuleOutcome::Changed(
        Instance::new(
            inst.variant(),
            vertices,
            edges,
            inst.name(inst.s()),
            inst.name(inst.t()),
            inst.d(),
            inst.a(),
        )
        .expect("deleting a pendant keeps the instance valid"),
    )
}

/// Merge the first pair (in canonical order, `{s,t}` first) whose minimum
/// cut exceeds `a`. If that pair is `{s,t}`, no small cut exists at all.
pub fn rule_merge_big_cut(inst: &Instance) -> RuleOutcome {
    let caps = inst.capacities();
    let big = inst.a() + 1;
    if min_cut_value(inst, &caps, inst.s(), inst.t(), big) >= big {
        return RuleOutcome::Decided(Answer::Yes);
    }
    let n = inst.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            if inst.is_terminal(u) && inst.is_terminal(v) {
                continue;
            }
            if min_cut_value(inst, &caps, u, v, big) >= big {
                return RuleOutcome::Changed(merge(inst, u, v).expect("non-terminal pair"));
            }
        }
    }
    RuleOutcome::Unchanged
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RulesFired {
    pub st_deg_one: u64,
    pub delete_deg_one: u64,
    pub merge_big_cut: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub rounds: u64,
    pub rules_fired: RulesFired,
    pub kernel_edges: usize,
    pub kernel_vc: usize,
    pub bound_2vca: u64,
    pub bound_holds: bool,
    /// Set when the rules decided the instance outright.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Answer>,
    /// Edge count of the unweighted image of the kernel (MCP input only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mcp_edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_4vca2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mcp_bound_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kernel {
    Reduced(Instance),
    Decided(Answer),
}

/// Apply st-deg-one, delete-deg-one and merge-big-cut until none fires.
/// `vc_budget` bounds the exact vertex cover computation of the report.
pub fn kernelize(inst: &Instance, vc_budget: u64) -> Result<(Kernel, KernelReport)> {
    if inst.variant() == Variant::Zwmcp {
        return Err(Error::inapplicable(
            "kernelize",
            "kernelization requires capacities >= 1",
        ));
    }
    let mut fired = RulesFired::default();
    let mut rounds = 0u64;
    let decided = |answer, fired, rounds| {
        let report = KernelReport {
            rounds,
            rules_fired: fired,
            kernel_edges: 0,
            kernel_vc: 0,
            bound_2vca: 0,
            bound_holds: true,
            verdict: Some(answer),
            mcp_edges: None,
            bound_4vca2: None,
            mcp_bound_holds: None,
        };
        Ok((Kernel::Decided(answer), report))
    };
    let mut cur = match inst.normalize() {
        Normalized::Ready(n) => n,
        Normalized::Disconnected => return decided(Answer::No, fired, rounds),
    };
    loop {
        rounds += 1;
        let mut changed = false;
        loop {
            match rule_st_deg_one(&cur) {
                RuleOutcome::Unchanged => break,
                RuleOutcome::Changed(next) => {
                    fired.st_deg_one += 1;
                    changed = true;
                    cur = next;
                }
                RuleOutcome::Decided(a) => {
                    fired.st_deg_one += 1;
                    return decided(a, fired, rounds);
                }
            }
        }
        while let RuleOutcome::Changed(next) = rule_delete_deg_one(&cur) {
            fired.delete_deg_one += 1;
            changed = true;
            cur = next;
        }
        match rule_merge_big_cut(&cur) {
            RuleOutcome::Unchanged => {}
            RuleOutcome::Changed(next) => {
                fired.merge_big_cut += 1;
                changed = true;
                cur = next;
            }
            RuleOutcome::Decided(a) => {
                fired.merge_big_cut += 1;
                return decided(a, fired, rounds);
            }
        }
        if !changed {
            break;
        }
    }
    let vc = cur.graph().min_vertex_cover(vc_budget)?.len();
    let bound = 2 * vc as u64 * cur.a();
    let mut report = KernelReport {
        rounds,
        rules_fired: fired,
        kernel_edges: cur.edge_count(),
        kernel_vc: vc,
        bound_2vca: bound,
        bound_holds: cur.edge_count() as u64 <= bound,
        verdict: None,
        mcp_edges: None,
        bound_4vca2: None,
        mcp_bound_holds: None,
    };
    if inst.variant() == Variant::Mcp {
        let image = to_mcp(&cur)?;
        let bound4 = 4 * vc as u64 * cur.a() * cur.a();
        report.mcp_edges = Some(image.edge_count());
        report.bound_4vca2 = Some(bound4);
        report.mcp_bound_holds = Some(image.edge_count() as u64 <= bound4);
    }
    Ok((Kernel::Reduced(cur), report))
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
    fn st_deg_one_on_path() {
        let p = build(Variant::Mcp, &[("s", "v", 1, 1), ("v", "t", 1, 1)], 2, 1);
        let RuleOutcome::Changed(q) = rule_st_deg_one(&p) else {
            panic!("rule should fire")
        };
        assert_eq!(q.name(q.s()), "v");
        assert_eq!(q.d(), 1);
        assert_eq!(rule_st_deg_one(&q), RuleOutcome::Decided(Answer::Yes));
        let poor = p.with_budgets(1, 1);
        let RuleOutcome::Changed(q) = rule_st_deg_one(&poor) else {
            panic!("rule should fire")
        };
        // both edges are forced but only one is affordable
        assert_eq!(rule_st_deg_one(&q), RuleOutcome::Decided(Answer::No));
    }

    #[test]
    fn st_deg_one_conditions() {
        assert_eq!(rule_st_deg_one(&diamond(2)), RuleOutcome::Unchanged);
        let heavy = build(
            Variant::Wmcp,
            &[
                ("s", "v", 1, 2),
                ("v", "t", 1, 1),
                ("t", "w", 1, 1),
                ("w", "v", 1, 1),
            ],
            2,
            1,
        );
        assert_eq!(rule_st_deg_one(&heavy), RuleOutcome::Unchanged);
    }

    #[test]
    fn pendant_chain_is_removed() {
        let g = build(
            Variant::Mcp,
            &[
                ("s", "v", 1, 1),
                ("v", "t", 1, 1),
                ("v", "x1", 1, 1),
                ("x1", "x2", 1, 1),
            ],
            2,
            1,
        );
        let RuleOutcome::Changed(g1) = rule_delete_deg_one(&g) else {
            panic!()
        };
        assert!(g1.vertex_index("x2").is_none());
        let RuleOutcome::Changed(g2) = rule_delete_deg_one(&g1) else {
            panic!()
        };
        assert!(g2.vertex_index("x1").is_none());
        assert_eq!(rule_delete_deg_one(&g2), RuleOutcome::Unchanged);
    }

    #[test]
    fn merge_big_cut_examples() {
        assert_eq!(rule_merge_big_cut(&diamond(2)), RuleOutcome::Unchanged);
        assert_eq!(
            rule_merge_big_cut(&diamond(1)),
            RuleOutcome::Decided(Answer::Yes)
        );
        let g = build(
            Variant::Wmcp,
            &[
                ("s", "u", 1, 1),
                ("u", "v", 1, 3),
                ("v", "t", 1, 1),
                ("s", "t", 1, 1),
            ],
            1,
            2,
        );
        let RuleOutcome::Changed(m) = rule_merge_big_cut(&g) else {
            panic!("u,v should merge")
        };
        assert_eq!(m.vertex_count(), 3);
    }

    #[test]
    fn kernel_of_k4_plus_path() {
        let g = build(
            Variant::Mcp,
            &[
                ("s", "a", 1, 1),
                ("s", "b", 1, 1),
                ("a", "b", 1, 1),
                ("a", "t", 1, 1),
                ("b", "t", 1, 1),
                ("t", "p", 1, 1),
                ("p", "q", 1, 1),
            ],
            2,
            2,
        );
        let (k, report) = kernelize(&g, 10_000).unwrap();
        assert!(report.rules_fired.delete_deg_one >= 2);
        if let Kernel::Reduced(k) = k {
            assert!(report.bound_holds);
            assert_eq!(report.mcp_bound_holds, Some(true));
            assert_eq!(k.edge_count(), report.kernel_edges);
        }
    }

    #[test]
    fn kernel_rejects_zero_capacities() {
        let z = build(Variant::Zwmcp, &[("s", "t", 1, 0)], 1, 0);
        assert!(kernelize(&z, 100).is_err());
    }
}
