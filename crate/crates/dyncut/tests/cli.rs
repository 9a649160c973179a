use std::path::PathBuf;

use clap::Parser;
use dyncut::cli::{main_with, run, Cli, EXIT_OK, EXIT_USAGE};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn report(args: &[&str]) -> (serde_json::Value, String, i32) {
    let cli = Cli::try_parse_from(std::iter::once("dyncut").chain(args.iter().copied())).unwrap();
    let o = run(&cli.command).unwrap();
    let text = o.report.to_json();
    (serde_json::from_str(&text).unwrap(), text, o.code)
}

#[test]
fn sparsifying_a_tree_echoes_it() {
    let g = fixture("tree.graph");
    let (r, _, code) = report(&["sparsify", "--graph", &g, "--strict"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["summary"]["output_equals_input"], true);
    assert_eq!(r["summary"]["update_recourse"], 0);
}

#[test]
fn msf_suite_on_bundled_fixtures_has_no_diffs() {
    let (g, s) = (fixture("demo.graph"), fixture("demo.upd"));
    let (r, _, code) = report(&["verify", "--suite", "msf", "--graph", &g, "--stream", &s]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(r["mismatches"].as_array().unwrap().len(), 0);
    assert!(r["summary"]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn demo_replay_is_byte_identical() {
    let (g, s) = (fixture("demo.graph"), fixture("demo.upd"));
    let args = ["hierarchy", "--graph", &g, "--stream", &s, "--levels", "2", "--j", "3", "--seed", "5", "--strict"];
    let (r, a, code) = report(&args);
    let (_, b, _) = report(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(a, b);
    assert_eq!(r["seed"], 5);
    assert_eq!(r["queries"].as_array().unwrap().len(), 7);
    for q in r["queries"].as_array().unwrap() {
        if let Some(ratio) = q["ratio"].as_f64() {
            if q["query"].as_str().unwrap().starts_with("ST") {
                assert!(ratio >= 1.0);
            }
        }
    }
}

#[test]
fn bad_input_exits_with_usage_code() {
    let dir = std::env::temp_dir().join(format!("dyncut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.graph");
    std::fs::write(&bad, "3 2\n0 1 1\n1 1 2\n").unwrap();
    let out = dir.join("r.json");
    let code = main_with(["dyncut", "sparsify", "--graph", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(main_with(["dyncut", "jtrees", "--no-such-flag"]), EXIT_USAGE);
    assert_eq!(main_with(["dyncut", "sparsify"]), EXIT_USAGE);
}
