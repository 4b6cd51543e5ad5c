use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oramsey")).current_dir(dir).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("empty.json"), r#"{"k":3,"n":3,"edges":[]}"#).unwrap();
    std::fs::write(d.join("bad.json"), r#"{"k":3,"n":4,"edges":[[0,1]]}"#).unwrap();
    assert_eq!(run(d, &["gen", "path", "--k", "3", "--n", "4", "-o", "p.json"]).status.code(), Some(0));
    let yes = run(d, &["contains", "--host", "p.json", "--pattern", "p.json"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(json(&yes)["embedding"], serde_json::json!([0, 1, 2, 3]));
    let no = run(d, &["contains", "--host", "empty.json", "--pattern", "p.json"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json(&no)["contains"], false);
    let bad = run(d, &["count", "--host", "bad.json", "--pattern", "p.json"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("[arity]"));
    assert_eq!(run(d, &["bound", "nonsense", "--params", "t=1"]).status.code(), Some(2));
    assert_eq!(run(d, &["density", "bi", "--graph", "none.json", "--eps1", "1/2", "--eps2", "1/2", "--rho", "1/2"]).status.code(), Some(2));
}

#[test]
fn ramsey_and_stepup_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["gen", "complete", "--k", "2", "--n", "3", "-o", "k3.json"]);
    run(d, &["gen", "multipartite", "--k", "2", "--chi", "2", "--n", "2", "-o", "k22.json"]);
    let r = run(d, &["ramsey", "--blue", "k3.json", "--red", "k3.json", "--cap", "8"]);
    assert_eq!(json(&r)["value"], 6);
    let cap = run(d, &["ramsey", "--blue", "k3.json", "--red", "k22.json", "--cap", "6", "--certificate", "c.orc"]);
    assert_eq!(json(&cap)["lower_bound"], 7);
    let full = run(d, &["ramsey", "--blue", "k3.json", "--red", "k22.json", "--cap", "12", "--max-bits", "128", "--certificate", "chi1.orc"]);
    assert_eq!(json(&full)["value"], 9);
    assert_eq!(json(&full)["certificate_n"], 8);
    let s = run(d, &["--seed", "5", "stepup", "--chi1", "chi1.orc", "--n", "24", "-o", "s.orc", "--check", "4"]);
    assert_eq!(s.status.code(), Some(0), "{}", String::from_utf8_lossy(&s.stderr));
    let v = run(d, &["verify", "--coloring", "s.orc", "--clique", "4"]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn bound_outputs_parse() {
    let dir = tempfile::tempdir().unwrap();
    let main = json(&run(dir.path(), &["bound", "main", "--params", "t=10,d=1,log2_s=200"]));
    assert_eq!(main["exponent"], "123/62");
    assert_eq!(main["valid_flags"]["paths_agree"], true);
    let log2: f64 = main["log2"].as_str().unwrap().parse().unwrap();
    assert!(log2 > 0.0 && log2.is_finite());
    let tow = json(&run(dir.path(), &["bound", "tow", "--params", "h=2,x=3"]));
    assert_eq!(tow["log2"].as_str().unwrap().parse::<f64>().unwrap(), 3.0);
}
