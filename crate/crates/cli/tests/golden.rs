// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use revlogic::netlist::parse_netlist;
use revlogic::seq::{claims_ledger, design_source, ClaimRecord, Verdict};
use revlogic_cli::{
    render_report, run, Format, Outcome, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, NO_RECORDS,
};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("revlogic").chain(args.iter().copied()))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("revlogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn design_path(id: &str) -> String {
    format!("{}/../core/designs/{id}.net", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn sam_truth_table() {
    let out = cli(&["gates", "table", "sam"]);
    assert_eq!(out.code, EXIT_OK);
    let expected = "\
A B C | P Q R
0 0 0 | 1 0 0
0 0 1 | 1 0 1
0 1 0 | 1 1 0
0 1 1 | 1 1 1
1 0 0 | 0 1 0
1 0 1 | 0 0 0
1 1 0 | 0 1 1
1 1 1 | 0 0 1
";
    assert_eq!(out.stdout, expected);
}

#[test]
fn gate_checks() {
    assert_eq!(cli(&["gates", "check", "MPG"]).code, EXIT_OK);
    assert!(cli(&["gates", "list"]).stdout.lines().count() == 9);
    assert_eq!(cli(&["gates", "table", "XYZ"]).code, EXIT_USAGE);
}

#[test]
fn registry_verification_exit_codes() {
    let all = cli(&["qc", "verify"]);
    assert_eq!(all.code, EXIT_MISMATCH);
    let frg: Vec<&str> = all
        .stdout
        .lines()
        .find(|l| l.starts_with("FRG"))
        .unwrap()
        .split_whitespace()
        .collect();
    assert_eq!(&frg[..5], ["FRG", "yes", "7", "7", "5"]);
    let tg = cli(&["qc", "verify", "TG"]);
    assert_eq!(tg.code, EXIT_OK);
    assert!(tg
        .stdout
        .contains("circuit: CV(1->2) CX(0->1) CVDG(1->2) CX(0->1) CV(0->2)"));
}

#[test]
fn synthesis_from_snapshot_and_file() {
    let dir_atlas = std::env::temp_dir().join(format!("revlogic-cli-{}-atlas", std::process::id()));
    let atlas_arg = dir_atlas.to_str().unwrap();
    let built = cli(&[
        "qc",
        "atlas",
        "--width",
        "2",
        "--max-cost",
        "5",
        "--out",
        atlas_arg,
    ]);
    assert_eq!(built.code, EXIT_OK, "{}", built.stderr);
    assert!(built.stdout.contains("24 permutations"));

    let perm = scratch("swap.perm", "[0,2,1,3]\n");
    let out = cli(&[
        "qc",
        "synth",
        "--perm",
        perm.to_str().unwrap(),
        "--atlas",
        atlas_arg,
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(
        out.stdout,
        "permutation: [0,2,1,3]\ncost: 3\ncircuit: CX(0->1) CX(1->0) CX(0->1)\n"
    );
    assert!(out.stderr.is_empty());

    let fg = cli(&["qc", "synth", "FG"]);
    assert!(fg.stderr.contains("building"));
    assert!(fg.stdout.contains("cost: 1"));

    let bad = scratch("bad.perm", "0 0 1\n");
    assert_eq!(
        cli(&["qc", "synth", "--perm", bad.to_str().unwrap()]).code,
        EXIT_USAGE
    );
}

#[test]
fn synthesis_beyond_the_atlas() {
    let out = cli(&["qc", "synth", "SAM", "--max-cost", "7"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("cost: 7"));
    assert_eq!(
        cli(&["qc", "synth", "SAM", "--max-cost", "9"]).code,
        EXIT_USAGE
    );
}

#[test]
fn analyze_matches_library() {
    let out = cli(&["analyze", &design_path("gated_d")]);
    assert_eq!(out.code, EXIT_OK);
    let m = parse_netlist(design_source("gated_d").unwrap())
        .unwrap()
        .metrics()
        .unwrap();
    assert!(out
        .stdout
        .contains(&format!("quantum cost: {}\n", m.quantum_cost)));
    assert!(out.stdout.contains(&format!("garbage: {} [", m.garbage)));
}

#[test]
fn simulation_trace() {
    let stim = scratch("sr.stim", "R=0 S=1\nS=0\nR=1\nR=0\n");
    let out = cli(&[
        "sim",
        &design_path("sr"),
        "--stimulus",
        stim.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let q: Vec<&str> = out
        .stdout
        .lines()
        .map(|l| {
            l.split_whitespace()
                .find_map(|t| t.strip_prefix("Q="))
                .unwrap()
        })
        .collect();
    assert_eq!(q, ["1", "1", "0", "0"]);

    let race = scratch("jk.stim", "J=1 K=1\n");
    let out = cli(&[
        "sim",
        &design_path("jk"),
        "--stimulus",
        race.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_MISMATCH);
    assert!(out.stdout.contains("no fixed point"));
}

#[test]
fn flip_flop_verification() {
    let out = cli(&["ff", "verify", "all"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(
        out.stdout.lines().filter(|l| l.ends_with(" pass")).count(),
        8
    );
    assert_eq!(cli(&["ff", "verify", "t_latch"]).code, EXIT_USAGE);
}

#[test]
fn claims_report_matches_library() {
    let ledger = claims_ledger().unwrap();
    let text = cli(&["report", "claims"]);
    assert_eq!(text.code, EXIT_MISMATCH);
    assert_eq!(text.stdout, render_report(&ledger, Format::Text));
    let row = text
        .stdout
        .lines()
        .find(|l| l.starts_with("gated_sr ") && l.contains(" quantum_cost "))
        .unwrap();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(&cells[2..4], ["10", "11"]);

    let json = cli(&["report", "claims", "--json"]);
    let parsed: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(parsed, serde_json::to_value(&ledger).unwrap());
    let keys: Vec<&str> = parsed[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(
        keys,
        [
            "achieved",
            "design",
            "metric",
            "table_claim",
            "text_claim",
            "verdict"
        ]
    );
    assert!(json.stdout.find("\"design\"").unwrap() < json.stdout.find("\"verdict\"").unwrap());

    assert_eq!(cli(&["report", "claims"]), text);
}

#[test]
fn claims_filter_and_sentinel() {
    let none = cli(&["report", "claims", "--design", "nothing"]);
    assert_eq!((none.code, none.stdout.trim()), (EXIT_OK, NO_RECORDS));
    let gsr = cli(&["report", "claims", "--design", "gated_sr"]);
    assert!(gsr
        .stdout
        .lines()
        .skip(1)
        .all(|l| l.starts_with("gated_sr")));
}

#[test]
fn single_record_rendering() {
    let r = ClaimRecord::new("sr", "garbage", Some(1), Some(1), 1);
    assert_eq!(r.verdict, Verdict::Match);
    let text = render_report(&[r], Format::Text);
    assert_eq!(
        text.lines().nth(1).unwrap().split_whitespace().last(),
        Some("match")
    );
    assert_eq!(render_report(&[], Format::Text), format!("{NO_RECORDS}\n"));
}

#[test]
fn improvements_report() {
    let out = cli(&["report", "improvements"]);
    assert_eq!(out.stdout.lines().count(), 1 + 14 * 3);
    assert_eq!(
        out.stdout
            .lines()
            .filter(|l| l.ends_with("differs"))
            .count(),
        1
    );
}

#[test]
fn usage_errors() {
    let out = cli(&["frobnicate"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stdout.is_empty() && !out.stderr.is_empty());
    assert_eq!(cli(&["qc", "synth"]).code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
    assert_eq!(cli(&["analyze", "/nonexistent.net"]).code, EXIT_USAGE);
}
