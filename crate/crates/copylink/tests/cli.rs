use std::path::Path;
use std::process::{Command, Output};

use copylink::io::read_instances;
use copylink_core::Family;

fn copylink(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copylink")).arg("--out-dir").arg(dir).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = copylink(dir.path(), &["--seed", "7", "gen", "--family", "sk", "--n", "5", "--count", "3", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let insts = read_instances(&a).unwrap();
    assert_eq!(insts.len(), 3);
    let ids: Vec<&str> = insts.iter().map(|i| i.id()).collect();
    let again = read_instances(&b).unwrap();
    assert_eq!(ids, again.iter().map(|i| i.id()).collect::<Vec<_>>());
    assert!(dir.path().join("gen.manifest.json").exists());
}

#[test]
fn gen_chain_respects_chain_invariants() {
    let dir = tempfile::tempdir().unwrap();
    assert!(copylink(dir.path(), &["gen", "--family", "chain", "--n", "9"]).status.success());
    let insts = read_instances(&dir.path().join("instances.json")).unwrap();
    assert_eq!(insts.len(), 1);
    assert_eq!(insts[0].family(), Family::Chain);
    assert!(insts[0].couplings().iter().all(|c| c.k == c.j + 1));
    assert!(insts[0].max_abs_parameter() <= 1.0);
}

#[test]
fn fraction_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "f.json",
        r#"{"family":"sk","n":5,"instances":1000,"seed":3,"precisions":[1,2,3,4,5,6,7,8,9,10]}"#,
    );
    let o = copylink(dir.path(), &["fraction", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("fraction.csv")).unwrap();
    let rows = copylink::report::parse_report(&text).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(text.starts_with("instance_count,family,n,p,j_f,topology,frac_single,frac_any_copy,frac_3correct"));
    assert!(rows[9].frac_single >= 0.99);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fraction.manifest.json")).unwrap()).unwrap();
    let outputs = manifest["outputs"].as_array().unwrap();
    assert!(outputs.iter().any(|o| o["path"].as_str().unwrap().ends_with("fraction.csv")));
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["master_seed"], 3);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "f.json", r#"{"family":"sk","n":5,"instances":300,"seed":3,"precisions":[2]}"#);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(copylink(&a, &["fraction", &cfg]).status.success());
    assert!(copylink(&b, &["--seed", "4", "fraction", &cfg]).status.success());
    let read = |d: &Path| std::fs::read_to_string(d.join("fraction.csv")).unwrap();
    assert_ne!(read(&a), read(&b));
}

#[test]
fn jf_sweep_contains_baseline_row_and_fit_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "j.json",
        r#"{"family":"sk","n":4,"instances":200,"seed":1,"precisions":[2,3,4,5,6],
            "topology":{"copies":3,"shape":"triangle"},"jf":{"mode":"sweep"}}"#,
    );
    let o = copylink(dir.path(), &["jf-sweep", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = dir.path().join("jf_sweep.csv");
    let rows = copylink::report::read_report(&csv).unwrap();
    for p in 2..=6 {
        assert!(rows.iter().any(|r| r.p == p && r.jf == Some(0.0)));
    }
    let argmax = std::fs::read_to_string(dir.path().join("jf_argmax.csv")).unwrap();
    assert_eq!(argmax.lines().count(), 6);

    let o = copylink(dir.path(), &["fit", "--report", csv.to_str().unwrap(), "--curve", "any-copy"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fit: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    for key in ["A", "b", "cov", "improvements"] {
        assert!(fit.get(key).is_some(), "{key}");
    }
    assert!(dir.path().join("fit.csv").exists());
}

#[test]
fn jf_sweep_needs_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "j.json",
        r#"{"family":"sk","n":4,"instances":2,"precisions":[3],"topology":"triangle","jf":"min"}"#,
    );
    assert_eq!(copylink(dir.path(), &["jf-sweep", &cfg]).status.code(), Some(2));
}

#[test]
fn long_runs_are_gated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "d.json",
        r#"{"family":"sk","n":9,"instances":10,"precisions":[3],"topology":"triangle","jf":"min"}"#,
    );
    let o = copylink(dir.path(), &["decomposition", &cfg]);
    assert_eq!(o.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(err["error"], "gated");
    assert!(!dir.path().join("decomposition.csv").exists());
}

#[test]
fn schema_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (i, json) in [
        r#"{"family":"sk","n":5,"instances":0,"precisions":[3]}"#,
        r#"{"family":"sk","n":5}"#,
        "not json",
        r#"{"family":"sk","n":5,"instances":3,"precisions":[3],"topology":"triangle","jf":[-0.5,0.25]}"#,
    ]
    .iter()
    .enumerate()
    {
        let cfg = write_config(dir.path(), &format!("bad{i}.json"), json);
        let o = copylink(dir.path(), &["fraction", &cfg]);
        assert_eq!(o.status.code(), Some(2), "{json}");
        let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
        assert_eq!(err["exit_code"], 2);
    }
    let o = copylink(dir.path(), &["decomposition", &write_config(dir.path(), "nt.json", r#"{"family":"sk","n":5,"instances":3,"precisions":[3]}"#)]);
    assert_eq!(o.status.code(), Some(2));
    let missing = copylink(dir.path(), &["fraction", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn ground_command_lists_degenerate_states() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_config(
        dir.path(),
        "i.json",
        r#"[{"id":"flat","n":2,"family":"custom","h":[0.0,0.0],"couplings":[[0,1,1.0]]},
            {"id":"field","n":1,"family":"custom","h":[0.5]}]"#,
    );
    let o = copylink(dir.path(), &["ground", "--instances", &file, "--solver", "branch-and-bound"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ground.json")).unwrap()).unwrap();
    assert_eq!(g[0]["energy"], -1.0);
    // ordered by integer value of the bits; strings print qubit 0 first
    assert_eq!(g[0]["states"], serde_json::json!(["10", "01"]));
    assert_eq!(g[1]["states"], serde_json::json!(["1"]));
}

#[test]
fn qwalk_writes_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_config(
        dir.path(),
        "i.json",
        r#"[{"id":"w","n":3,"family":"custom","h":[0.3,-0.6,0.9],"couplings":[[0,1,-0.4],[1,2,0.7]]}]"#,
    );
    let o = copylink(
        dir.path(),
        &["qwalk", "--instances", &file, "--p", "2", "--model", "midpoint", "--gammas", "0.3,1.0", "--samples", "32", "--dt", "10"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("qwalk.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("gamma,p_exact_single,p_exact_r3,p_reduced_single,p_reduced_linked"));
    assert_eq!(lines.count(), 2);
    let big = write_config(dir.path(), "big.json", &format!(r#"{{"id":"b","n":6,"family":"custom","h":{:?}}}"#, vec![0.5; 6]));
    let o = copylink(dir.path(), &["qwalk", "--instances", &big, "--gammas", "1.0"]);
    assert_eq!(o.status.code(), Some(3));
}
