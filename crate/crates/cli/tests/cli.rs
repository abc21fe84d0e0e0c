use std::fs;
use std::path::Path;
use std::process::Command;

use zlab_cli::{run_with, EXIT_CACHE, EXIT_CAP, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn run<S: AsRef<str>>(args: &[S]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zlab").chain(args.iter().map(AsRef::as_ref));
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn body(out: &str) -> Vec<&str> {
    out.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn expand_example() {
    let (code, out, _) = run(&["cf", "expand", "--frac", "5/7"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(body(&out), ["[0;1,2,2]"]);
}

#[test]
fn eval_example() {
    let (code, out, _) = run(&["cf", "eval", "--cf", "[0;1,2,2]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(body(&out), ["5/7"]);
}

#[test]
fn inventory_example() {
    let (code, out, _) = run(&["rep", "inventory", "--q", "5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(*body(&out).last().unwrap(), "120 = 120 OK");
}

#[test]
fn minq_example_as_csv() {
    let (code, out, err) = run(&["search", "minq", "--p", "7", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "p,M,q,a,cf,exponent,nodes_explored\n7,2,7,5,\"[0;1,2,2]\",1.000000,14\n"
    );
    assert!(err.contains("seed="));
}

#[test]
fn minq_as_json_lines() {
    let (_, out, _) = run(&["search", "minq", "--p", "11", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["q"], 11);
    assert_eq!(v["a"], 8);
}

#[test]
fn text_header_names_the_seed() {
    let (_, out, _) = run(&["--seed", "42", "cf", "expand", "--frac", "1/2"]);
    assert_eq!(out.lines().next().unwrap(), "# zlab cf expand seed=42");
}

#[test]
fn cap_exhaustion_gives_header_only_csv() {
    let (code, out, _) = run(&["zset", "enum", "--M", "2", "--Q", "1000", "--cap", "10", "--format", "csv"]);
    assert_eq!(code, EXIT_CAP);
    assert_eq!(out, "u,v\n");
}

#[test]
fn search_cap_exhaustion() {
    let (code, out, _) = run(&["search", "minq", "--p", "101", "--cap", "50"]);
    assert_eq!(code, EXIT_CAP);
    assert!(out.contains("no q <= 50"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["cf", "expand", "--frac", "7/5"]).0, EXIT_USAGE);
    assert_eq!(run(&["search", "minq", "--p", "8"]).0, EXIT_USAGE);
    assert_eq!(run(&["search", "power", "--p", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["--from-cache", "cf", "expand", "--frac", "1/2"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn failed_check_exits_one() {
    // the whole Borel subgroup meets a single Borel far above the bound
    let (code, out, _) = run(&["sl2", "borel", "--p", "13", "--source", "borel"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(out.contains("FAIL"));
}

#[test]
fn randomized_output_is_deterministic() {
    let args = ["--seed", "7", "sl2", "helfgott", "--p", "7", "--size", "30", "--count", "5", "--format", "csv"];
    let (c1, o1, _) = run(&args);
    let (c2, o2, _) = run(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(o1, o2);
    assert_eq!(o1.lines().count(), 6);
    let (_, o3, _) = run(&["--seed", "8", "sl2", "helfgott", "--p", "7", "--size", "30", "--count", "5", "--format", "csv"]);
    assert_ne!(o1, o3);
}

fn cache_arg(path: &Path) -> String {
    path.to_str().unwrap().to_string()
}

#[test]
fn cache_replay_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cache = cache_arg(&dir.path().join("runs.jsonl"));
    let args = |extra: &[&str]| {
        let mut v = vec!["--cache", cache.as_str(), "sl2", "tripling", "--p", "7", "--source", "random", "--size", "20"];
        v.extend_from_slice(extra);
        v.into_iter().map(String::from).collect::<Vec<_>>()
    };

    let fresh = args(&[]);
    let (code, out, _) = run(&fresh);
    assert_eq!(code, EXIT_OK);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 1);

    let replay = args(&["--from-cache"]);
    let (code, replayed, _) = run(&replay);
    assert_eq!(code, EXIT_OK);
    assert_eq!(body(&replayed), body(&out));

    let verify = args(&["--verify-cache"]);
    let (code, _, err) = run(&verify);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("match"));

    // a different seed is a different key
    let mut other = args(&["--from-cache"]);
    other.extend(["--seed".into(), "1".into()]);
    assert_eq!(run(&other).0, EXIT_CACHE);
}

#[test]
fn cache_divergence_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.jsonl");
    let cache = cache_arg(&path);
    run(&["--cache", &cache, "cf", "expand", "--frac", "5/7"]);
    let tampered = fs::read_to_string(&path).unwrap().replace("[0;1,2,2]", "[0;1,2,3]");
    fs::write(&path, tampered).unwrap();
    let (code, _, err) = run(&["--cache", &cache, "--verify-cache", "cf", "expand", "--frac", "5/7"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(err.contains("divergence"));
}

#[test]
fn malformed_cache_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.jsonl");
    fs::write(&path, "{not json\n").unwrap();
    let cache = cache_arg(&path);
    let (code, _, err) = run(&["--cache", &cache, "--from-cache", "cf", "expand", "--frac", "5/7"]);
    assert_eq!(code, EXIT_CACHE);
    assert!(err.contains("line 1"));

    fs::write(&path, "{\"schema_version\": 99}\n").unwrap();
    assert_eq!(run(&["--cache", &cache, "--from-cache", "cf", "expand", "--frac", "5/7"]).0, EXIT_CACHE);
}

#[test]
fn binary_exit_code_and_stdout() {
    let out = Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(["cf", "expand", "--frac", "5/7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[0;1,2,2]"));

    let out = Command::new(env!("CARGO_BIN_EXE_zlab")).args(["zset", "count"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
