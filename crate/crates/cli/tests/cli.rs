use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const PATH: &str = r#"{"variant":"MCP","vertices":["s","v","t"],"edges":[{"u":"s","v":"v"},{"u":"v","v":"t"}],"s":"s","t":"t","d":2,"a":1}"#;
const DIAMOND: &str = r#"{"variant":"MCP","vertices":["s","v","w","t"],"edges":[{"u":"s","v":"v"},{"u":"v","v":"t"},{"u":"s","v":"w"},{"u":"w","v":"t"},{"u":"v","v":"w"}],"s":"s","t":"t","d":1,"a":2}"#;
const ZW: &str = r#"{"variant":"ZWMCP","vertices":["s","u","t"],"edges":[{"u":"s","v":"u","cost":1,"cap":0},{"u":"u","v":"t","cost":1,"cap":0}],"s":"s","t":"t","d":1,"a":0}"#;
const WEIGHTED: &str = r#"{"variant":"WMCP","vertices":["s","a","b","t"],"edges":[{"u":"s","v":"a","cost":2,"cap":2},{"u":"a","v":"t","cost":1,"cap":1},{"u":"s","v":"b","cost":1,"cap":2},{"u":"b","v":"t","cost":2,"cap":1},{"u":"a","v":"b","cost":1,"cap":1}],"s":"s","t":"t","d":3,"a":2}"#;

fn mcp(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mcp"))
        .args(args)
        .env_remove("MCP_SEARCH_NODES")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn solve_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "path.json", PATH);
    let out = mcp(
        &["solve", "--algo", "deg2", "--certificate", "--stats", &path],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let r = &json_lines(&out)[0];
    assert_eq!(r["answer"], "yes");
    assert_eq!(r["defense"].as_array().unwrap().len(), 2);
    assert!(r["stats"]["nodes_expanded"].is_u64());

    let diamond = write(dir.path(), "diamond.json", DIAMOND);
    assert_eq!(mcp(&["solve", &diamond], None).status.code(), Some(1));

    let zw = write(dir.path(), "zw.json", ZW);
    let out = mcp(&["solve", "--algo", "search", &zw], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("search tree requires capacities >= 1"));
    assert_eq!(
        mcp(&["solve", "--algo", "dp", &zw], None).status.code(),
        Some(1)
    );
}

#[test]
fn every_algorithm_agrees() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in [PATH, DIAMOND, WEIGHTED].iter().enumerate() {
        let file = write(dir.path(), &format!("{i}.json"), text);
        let algos: &[&str] = if i < 2 {
            &["auto", "brute", "search", "vc", "dp"]
        } else {
            &["auto", "brute", "search", "dp"]
        };
        let codes: Vec<Option<i32>> = algos
            .iter()
            .map(|a| mcp(&["solve", "--algo", a, &file], None).status.code())
            .collect();
        assert!(
            codes.iter().all(|c| *c == codes[0] && *c != Some(2)),
            "{i}: {codes:?}"
        );
    }
}

#[test]
fn stdin_and_transform_pipeline() {
    let t = mcp(&["transform", "--to-mcp", "-"], Some(WEIGHTED));
    assert_eq!(t.status.code(), Some(0));
    let unit = String::from_utf8(t.stdout).unwrap();
    assert!(unit.contains(r#""variant":"MCP""#));
    let a = mcp(&["solve", "--algo", "brute", "-"], Some(&unit))
        .status
        .code();
    let b = mcp(&["solve", "--algo", "brute", "-"], Some(WEIGHTED))
        .status
        .code();
    assert_eq!(a, b);
    for flag in ["--rule1", "--to-unit-cost", "--to-unit-capacity"] {
        assert_eq!(
            mcp(&["transform", flag, "-"], Some(WEIGHTED)).status.code(),
            Some(0),
            "{flag}"
        );
    }
    assert_eq!(
        mcp(&["transform", "--subcubify", "-"], Some(DIAMOND))
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        mcp(&["transform", "--to-unit-capacity", "-"], Some(ZW))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn kernelize_reports_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("kernel.json");
    let out = mcp(
        &["kernelize", "--out", out_file.to_str().unwrap(), "-"],
        Some(WEIGHTED),
    );
    assert_eq!(out.status.code(), Some(0));
    let r = &json_lines(&out)[0];
    assert!(r["rounds"].is_u64());
    if r.get("verdict").is_none() {
        assert_eq!(r["bound_holds"], true);
        assert!(out_file.exists());
    }
}

#[test]
fn generate_and_verify() {
    let out = mcp(
        &[
            "generate", "knapsack", "--items", "2,3", "--values", "5,4", "--B", "2", "--C", "5",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let inst = &json_lines(&out)[0];
    assert_eq!((inst["d"].as_u64(), inst["a"].as_u64()), (Some(2), Some(6)));
    assert_eq!(inst["metadata"]["expected"], "yes");

    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "k.json", &String::from_utf8_lossy(&out.stdout));
    let good = write(dir.path(), "good.json", r#"[["s","u:1"]]"#);
    assert_eq!(
        mcp(&["verify", "--defense", &good, &file], None)
            .status
            .code(),
        Some(0)
    );
    let bad = write(dir.path(), "bad.json", "[]");
    assert_eq!(
        mcp(&["verify", "--defense", &bad, &file], None)
            .status
            .code(),
        Some(1)
    );

    let solved = mcp(&["solve", "--certificate", &file], None);
    let report = write(
        dir.path(),
        "report.json",
        &String::from_utf8_lossy(&solved.stdout),
    );
    assert_eq!(
        mcp(&["verify", "--defense", &report, &file], None)
            .status
            .code(),
        Some(0)
    );

    for family in ["is", "knapsack", "binpacking", "biclique"] {
        let a = mcp(&["generate", family, "--seed", "4"], None);
        let b = mcp(&["generate", family, "--seed", "4"], None);
        assert_eq!(a.status.code(), Some(0), "{family}");
        assert_eq!(a.stdout, b.stdout);
    }
    let is = mcp(
        &[
            "generate",
            "is",
            "--n",
            "3",
            "--edges",
            "1-2,2-3,1-3",
            "--k",
            "1",
        ],
        None,
    );
    assert_eq!(json_lines(&is)[0]["a"], 4);
    assert_eq!(mcp(&["generate", "is"], None).status.code(), Some(2));
}

#[test]
fn batch_directory_in_name_order() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", PATH);
    write(dir.path(), "b.json", DIAMOND);
    write(dir.path(), "c.json", "{ not json");
    let out = mcp(
        &["solve", "--jobs", "3", dir.path().to_str().unwrap()],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["answer"], "yes");
    assert_eq!(lines[1]["answer"], "no");
    assert!(lines[2]["error"].is_string());
}

#[test]
fn budgets_come_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mcp"))
        .args(["solve", "--algo", "search", "-"])
        .env("MCP_SEARCH_NODES", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(WEIGHTED.as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
