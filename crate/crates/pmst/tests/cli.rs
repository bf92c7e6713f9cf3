// Copyright 2026 The pmst Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The `pmst` binary: exit statuses and JSON reports.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn pmst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmst")).args(args).env_remove("PMST_EXPLOSION_CAP").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn wf_flags_unreachable_outer_set() {
    let out = pmst(&["wf", &fixture("ga_unreachable.gty")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("{talk: [0,1], quit: [19/20,1]}: proper, not reachable"), "{text}");
    let j = json(&pmst(&["wf", &fixture("ga_unreachable.gty"), "--format", "json"]));
    let sets = j["unreachable_interval_sets"].as_array().unwrap();
    assert_eq!(sets.len(), 1);
    assert_eq!(sets[0]["path"], serde_json::json!([]));
    assert_eq!(sets[0]["branches"][1]["delta"], serde_json::json!(["19/20", "1/1"]));
    assert_eq!(pmst(&["wf", &fixture("ga_all01.gty")]).status.code(), Some(0));
}

#[test]
fn check_reports_typing() {
    let out = pmst(&["check", &fixture("system_simple.mps")]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&pmst(&["check", &fixture("system_simple.mps"), "--format", "json"]));
    assert_eq!(j["ok"], true);
    assert!(j["endpoints"]["s[rA]"].as_str().unwrap().starts_with("rec t . rB &"));
    let strict = json(&pmst(&["check", &fixture("system_simple.mps"), "--mode", "strict", "--format", "json"]));
    assert_eq!(strict["error"]["kind"], "LabelSetMismatch");
    let bad = json(&pmst(&["check", &fixture("system_simple_badquit.mps"), "--format", "json"]));
    assert_eq!(bad["error"]["kind"], "ProbOutsideInterval");
    assert_eq!(bad["error"]["rules"][0], "TRes");
}

#[test]
fn check_with_open_typing() {
    let typing = format!("s[rB]={}", fixture("bob_rB.lty"));
    assert_eq!(pmst(&["check", &fixture("bob_open.mps"), "--typing", &typing]).status.code(), Some(0));
    assert_eq!(pmst(&["check", &fixture("bob_open.mps")]).status.code(), Some(1));
    assert_eq!(pmst(&["check", &fixture("bob_open.mps"), "--typing", "s=x"]).status.code(), Some(2));
}

#[test]
fn reach_total_is_exact() {
    let out = pmst(&["reach", &fixture("system_simple.mps"), "-k", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["total"], "1/1");
    assert!(!j["entries"].as_array().unwrap().is_empty());
    for e in j["entries"].as_array().unwrap() {
        let mass = e["mass"].as_str().unwrap();
        assert!(mass.split_once('/').is_some(), "{mass}");
    }
}

#[test]
fn explosion_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pmst"))
        .args(["reach", &fixture("system_simple.mps"), "-k", "6", "--format", "json"])
        .env("PMST_EXPLOSION_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["error"].as_str().unwrap().contains('1'));
}

#[test]
fn steps_paths_and_simulation() {
    let j = json(&pmst(&["step", &fixture("com_two_branch.mps"), "--format", "json"]));
    let probs: Vec<&str> = j["steps"].as_array().unwrap().iter().map(|s| s["prob"].as_str().unwrap()).collect();
    assert_eq!(probs, ["2/5", "3/5"]);
    let j = json(&pmst(&["paths", &fixture("com_two_branch.mps"), "--depth", "1", "--format", "json"]));
    assert_eq!(j["paths"].as_array().unwrap().len(), 2);
    let args = ["simulate", &fixture("com_two_branch.mps"), "-n", "2000", "--seed", "7", "--format", "json"];
    let a = pmst(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, pmst(&args).stdout);
}

#[test]
fn parse_echoes_a_reparsable_form() {
    let dir = std::env::temp_dir().join(format!("pmst-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for f in ["system_full.mps", "ga_variant_b.gty", "bob_rB.lty"] {
        let out = pmst(&["parse", &fixture(f)]);
        assert_eq!(out.status.code(), Some(0), "{f}");
        let copy = dir.join(f);
        std::fs::write(&copy, &out.stdout).unwrap();
        let again = pmst(&["parse", copy.to_str().unwrap()]);
        assert_eq!(again.stdout, out.stdout, "{f}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(pmst(&[]).status.code(), Some(2));
    assert_eq!(pmst(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pmst(&["reach", &fixture("com_two_branch.mps"), "-k", "0"]).status.code(), Some(2));
    let missing = pmst(&["check", "no/such/file.mps"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8(missing.stderr).unwrap().contains("no/such/file.mps"));
    assert_eq!(pmst(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_errors_carry_file_line_and_column() {
    let dir = std::env::temp_dir().join(format!("pmst-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.gty");
    std::fs::write(&bad, "rA -> rB {\n  [0.5,0.4]: l(nat). end }").unwrap();
    let out = pmst(&["wf", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains(&format!("{}:2:", bad.display())), "{msg}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_passes_on_the_corpus() {
    let out = pmst(&["verify", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert!(j["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn schema_names_every_command() {
    let schema: Value =
        serde_json::from_str(include_str!("../../../docs/report-schema.json")).unwrap();
    let mut named: Vec<String> = schema["oneOf"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|v| v["properties"]["command"]["const"].as_str().map(String::from))
        .collect();
    named.sort();
    assert_eq!(named, ["check", "parse", "paths", "project", "reach", "simulate", "step", "verify", "wf"]);
}
