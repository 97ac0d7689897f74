//! PACE `.td` text format. Vertices are numbered `1..=n` following the
//! canonical (sorted-name) vertex order of the instance.

use crate::error::{Error, Result};
use crate::instance::Instance;

use super::decomposition::TreeDecomposition;

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Decomposition(msg.into()))
}

/// Parse and validate a decomposition of `G - {s,t}`. Terminals may occur
/// in bags and are ignored. The result is rooted at bag 1 below an extra
/// empty root.
pub fn parse_td(text: &str, inst: &Instance) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let nums = |from: usize| -> Result<Vec<usize>> {
            toks[from..]
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .or_else(|_| bad(format!("line {}: `{t}` is not a number", lineno + 1)))
                })
                .collect()
        };
        match toks[0] {
            "s" => {
                if header.is_some() {
                    return bad("duplicate header line");
                }
                if toks.len() != 5 || toks[1] != "td" {
                    return bad("header must read `s td <bags> <width+1> <vertices>`");
                }
                let v = nums(2)?;
                header = Some((v[0], v[1], v[2]));
                bags = vec![None; v[0]];
            }
            "b" => {
                let Some((_, max_size, n)) = header else {
                    return bad("bag line before header");
                };
                let v = nums(1)?;
                let Some((&id, members)) = v.split_first() else {
                    return bad(format!("line {}: bag line without id", lineno + 1));
                };
                if id == 0 || id > bags.len() {
                    return bad(format!("bag id {id} out of range"));
                }
                if bags[id - 1].is_some() {
                    return bad(format!("bag {id} defined twice"));
                }
                if members.len() > max_size {
                    return bad(format!("bag {id} exceeds the declared width"));
                }
                let mut b = Vec::with_capacity(members.len());
                for &m in members {
                    if m == 0 || m > n {
                        return bad(format!("bag {id} names vertex {m} outside 1..={n}"));
                    }
                    b.push(m - 1);
                }
                bags[id - 1] = Some(b);
            }
            _ => {
                if header.is_none() {
                    return bad("tree edge before header");
                }
                let v = nums(0)?;
                if v.len() != 2 || v[0] == 0 || v[1] == 0 || v[0] > bags.len() || v[1] > bags.len()
                {
                    return bad(format!("line {}: malformed tree edge", lineno + 1));
                }
                edges.push((v[0] - 1, v[1] - 1));
            }
        }
    }
    let Some((count, _, n)) = header else {
        return bad("missing header line");
    };
    if n != inst.vertex_count() {
        return bad(format!(
            "header declares {n} vertices but the instance has {}",
            inst.vertex_count()
        ));
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::Decomposition(format!("bag {} is missing", i + 1))))
        .collect::<Result<_>>()?;
    if count == 0 {
        if (0..n).any(|v| !inst.is_terminal(v)) {
            return bad("vertex cover property violated: no bags");
        }
        return Ok(TreeDecomposition {
            bags: vec![Vec::new()],
            parent: vec![None],
        });
    }
    if edges.len() != count - 1 {
        return bad("tree property violated: expected exactly bags-1 tree edges");
    }
    let mut adj = vec![Vec::new(); count];
    for &(x, y) in &edges {
        adj[x].push(y);
        adj[y].push(x);
    }
    // root at bag 1, extra empty root at index `count`
    let mut parent: Vec<Option<usize>> = vec![None; count + 1];
    let mut seen = vec![false; count];
    seen[0] = true;
    parent[0] = Some(count);
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                stack.push(y);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return bad("tree property violated: tree edges do not connect all bags");
    }
    let mut bags = bags;
    bags.push(Vec::new());
    let td = TreeDecomposition { bags, parent };
    td.validate(inst)?;
    Ok(td)
}

/// Write a decomposition in PACE format.
pub fn write_td(td: &TreeDecomposition, inst: &Instance) -> String {
    let mut out = format!(
        "s td {} {} {}\n",
        td.bags.len(),
        td.bags.iter().map(Vec::len).max().unwrap_or(0),
        inst.vertex_count()
    );
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for &v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for (i, p) in td.parent.iter().enumerate() {
        if let Some(p) = p {
            out.push_str(&format!("{} {}\n", p + 1, i + 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{EdgeSpec, Variant};
    use crate::twdp::decomposition::{elimination_decomposition, Heuristic, NiceDecomposition};

    fn path4() -> Instance {
        // vertices sorted: a=1, b=2, s=3, t=4
        Instance::new(
            Variant::Mcp,
            vec!["s".into(), "a".into(), "b".into(), "t".into()],
            vec![
                EdgeSpec::new("s", "a", 1, 1),
                EdgeSpec::new("a", "b", 1, 1),
                EdgeSpec::new("b", "t", 1, 1),
            ],
            "s",
            "t",
            1,
            1,
        )
        .unwrap()
    }

    #[test]
    fn accepts_valid_file() {
        let g = path4();
        let td = parse_td("c comment\ns td 2 2 4\nb 1 1 2\nb 2 2 3\n1 2\n", &g).unwrap();
        NiceDecomposition::from_tree(&td, &g).validate(&g).unwrap();
    }

    #[test]
    fn names_the_violated_property() {
        let g = path4();
        let cases = [
            ("s td 2 1 4\nb 1 1\nb 2 2\n1 2\n", "edge cover"),
            ("s td 1 1 4\nb 1 1\n", "vertex cover"),
            (
                "s td 3 2 4\nb 1 1 2\nb 2 3\nb 3 1\n1 2\n2 3\n",
                "connectivity",
            ),
            ("s td 2 2 4\nb 1 1 2\nb 2 2\n", "tree property"),
            ("s td 1 2 5\nb 1 1 2\n", "vertices"),
            ("b 1 1 2\n", "before header"),
        ];
        for (text, want) in cases {
            let err = parse_td(text, &g).unwrap_err().to_string();
            assert!(err.contains(want), "{want}: {err}");
        }
    }

    #[test]
    fn write_then_parse_round_trips() {
        let g = path4();
        let td = elimination_decomposition(&g, Heuristic::MinDegree);
        let text = write_td(&td, &g);
        let back = parse_td(&text, &g).unwrap();
        NiceDecomposition::from_tree(&back, &g)
            .validate(&g)
            .unwrap();
    }
}
