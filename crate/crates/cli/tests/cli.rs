//! End-to-end runs of the binary: file round trips and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_profile-lab"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("profile-lab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> (i32, serde_json::Value, Output) {
    let out = cmd.output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let json = serde_json::from_str(&text).unwrap_or(serde_json::Value::Null);
    (out.status.code().unwrap(), json, out)
}

#[test]
fn grid_round_trip_through_subcommands() {
    let dir = scratch("grid");
    let g = dir.join("g");
    let (code, info, _) = run(bin().args(["gen", "grid", "-w", "5", "--h", "4", "-o"]).arg(&g));
    assert_eq!(code, 0);
    assert_eq!(info["n"], 20);
    std::fs::write(dir.join("a"), "1 5 20\n").unwrap();

    let (code, info, _) =
        run(bin().args(["profiles", "-r", "2", "--traces", "--graph"]).arg(&g).arg("--targets").arg(dir.join("a")));
    assert_eq!(code, 0);
    assert!(info["profiles"].as_u64().unwrap() >= 1);

    let mut emb = g.clone().into_os_string();
    emb.push(".emb");
    let (code, info, _) = run(bin().args(["tripod", "-r", "4", "--graph"]).arg(&g).arg("--embedding").arg(&emb));
    assert_eq!(code, 0);
    assert_eq!(info["report"]["violations"].as_array().unwrap().len(), 0);

    let mut td = g.clone().into_os_string();
    td.push(".td");
    let (code, info, _) = run(bin()
        .args(["guard", "--method", "td", "-r", "3", "--validate", "--graph"])
        .arg(&g)
        .arg("--td")
        .arg(&td)
        .arg("--targets")
        .arg(dir.join("a")));
    assert_eq!(code, 0);
    assert_eq!(info["valid"], true);

    let (code, info, _) = run(bin().args(["metricdim", "--graph"]).arg(&g));
    assert_eq!(code, 0);
    assert_eq!(info["metric_dimension"], 2);
}

#[test]
fn usage_and_input_errors_exit_with_1() {
    let (code, _, _) = run(bin().arg("no-such-command"));
    assert_eq!(code, 1);
    let (code, _, out) = run(bin().args(["profiles", "--graph", "/nonexistent", "--targets", "/nonexistent", "-r", "1"]));
    assert_eq!(code, 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let dir = scratch("bad");
    let g = dir.join("k");
    run(bin().args(["gen", "ktree", "-t", "2", "-n", "12", "-o"]).arg(&g));
    std::fs::write(dir.join("a"), "1\n").unwrap();
    let (code, _, _) =
        run(bin().args(["guard", "--method", "td", "-r", "2", "--graph"]).arg(&g).arg("--targets").arg(dir.join("a")));
    assert_eq!(code, 1, "td without a decomposition is a usage error");
}

#[test]
fn bench_writes_reports() {
    let dir = scratch("bench");
    let spec = dir.join("spec.toml");
    std::fs::write(
        &spec,
        r#"
seed = 3
[[experiment]]
name = "tw"
generator = "ktree"
t = [2]
n = [20]
a = [3]
r = [2, 4]
bounds = ["NC_bounded_treewidth", "guarding_bounded_treewidth"]
"#,
    )
    .unwrap();
    let out = dir.join("out");
    let (code, info, _) = run(bin().arg("bench").arg("--spec").arg(&spec).arg("--out").arg(&out));
    assert_eq!(code, 0);
    assert_eq!(info["violations"], 0);
    let csv = std::fs::read_to_string(out.join("bounds.csv")).unwrap();
    assert!(csv.starts_with("schema_version,"));
    assert!(csv.lines().skip(1).all(|l| l.starts_with("1,")));
    assert!(out.join("report.json").exists());

    std::fs::write(&spec, "[[experiment]]\nname = \"x\"\ngenerator = \"ktree\"\nr = [1]\nbounds = [\"nope\"]\n").unwrap();
    let (code, _, _) = run(bin().arg("bench").arg("--spec").arg(&spec).arg("--out").arg(&out));
    assert_eq!(code, 1);
}
