use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn corpus(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(file)
}

fn symlog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlog"))
        .args(args)
        .env_remove("SYMLOG_DEPTH")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).expect("json on stdout");
    assert_eq!(v["schema"], 1);
    v
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_accepts_the_corpus() {
    for f in ["c01_membership.blq", "c08_collapse.blq", "c12_join_distribution.blq"] {
        let o = symlog(&["check", corpus(f).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stderr(&o));
        assert!(stdout(&o).lines().all(|l| l.starts_with("ok ")));
    }
}

#[test]
fn check_reports_a_broken_proof() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.blq", "config none\nproof bad : p |- q\n  by id\n");
    let o = symlog(&["check", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL bad"));
    assert!(stderr(&o).contains("bad"));
    let j = json(&symlog(&["--format", "json", "check", &f]));
    assert_eq!(j["ok"], false);
    assert_eq!(j["items"][0]["failures"][0]["rule"], "id");
    assert_eq!(j["items"][0]["failures"][0]["path"], "root");
}

#[test]
fn check_json_is_deterministic() {
    let f = corpus("c06_singleton.blq");
    let a = symlog(&["--format", "json", "check", f.to_str().unwrap()]);
    let b = symlog(&["--format", "json", "check", f.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["command"], "check");
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "plain.blq", "proof t : p |- p\n  by id\n");
    let o = symlog(&["check", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--config"));
    assert!(stdout(&o).is_empty());
    assert_eq!(symlog(&["check", &f, "--config", "none"]).status.code(), Some(0));
    assert_eq!(symlog(&["check", &f, "--config", "sideways"]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "broken.blq", "config none\nproof : p |-\n");
    let o = symlog(&["check", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
    assert_eq!(symlog(&["check", "/nonexistent.blq"]).status.code(), Some(2));
    assert_eq!(symlog(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sym_mirrors_and_checks_a_proof() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "imp.blq",
        "config none\nproof mp : p -> q, p |- q\n  by imp_l formula=[p -> q]\n  - p |- p\n    by id\n  - q |- q\n    by id\n",
    );
    let o = symlog(&["sym", &f, "--name", "mp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("by excl_r"), "{out}");
    assert!(out.contains("ok   mp_sym : q |- p, q <- p"), "{out}");
    let j = json(&symlog(&["--format", "json", "sym", &f, "--name", "mp"]));
    assert_eq!(j["items"][0]["symmetric"], "q |- p, q <- p");
    assert_eq!(j["items"][0]["check"]["ok"], true);
}

#[test]
fn sym_of_formulas_and_sequents() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.blq", "config none\nformula f : p -> q\nsequent s : p & q |- r\n");
    assert_eq!(stdout(&symlog(&["sym", &f, "--name", "f"])), "q <- p\n");
    assert_eq!(stdout(&symlog(&["sym", &f, "--name", "s"])), "r |- q \\/ p\n");
    assert_eq!(symlog(&["sym", &f, "--name", "nope"]).status.code(), Some(2));
}

#[test]
fn dual_swaps_sharp_literals() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "lit.blq",
        "formula down : (forall x in Ddown . A(x))\nformula plus : (forall x in Dplus . A(x))\nformula p : p\n",
    );
    let o = symlog(&["dual", &f, "--name", "down", "--duality", "perp"]);
    assert_eq!(stdout(&o), "(forall x in Dup . A(x))\n");
    let o = symlog(&["dual", &f, "--name", "plus", "--duality", "perp"]);
    assert_eq!(stdout(&o), "(forall x in Dplus . A(x))  (fixed point)\n");
    let o = symlog(&["dual", &f, "--name", "plus", "--duality", "top"]);
    assert_eq!(stdout(&o), "(forall x in Dminus . A(x))\n");
    let o = symlog(&["dual", &f, "--name", "p", "--duality", "top"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a qubit literal"));
    let o = symlog(&["dual", &f, "--name", "p", "--duality", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_reports_not_found_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ext.blq", "config right_contexts\nsequent imp_reversal : p -> q, q |- p\nsequent mp : p -> q, p |- q\n");
    let o = symlog(&["search", &f, "--name", "imp_reversal", "--depth", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NotFound imp_reversal"));
    let o = symlog(&["search", &f, "--name", "imp_reversal", "--expect-not-found"]);
    assert_eq!(o.status.code(), Some(0));
    let o = symlog(&["search", &f, "--name", "mp", "--expect-proof"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("by imp_l"));
    let o = symlog(&["search", &f, "--name", "mp", "--expect-not-found"]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&symlog(&["--format", "json", "search", &f, "--name", "imp_reversal"]));
    assert_eq!(j["items"][0]["found"], false);
    assert_eq!(j["items"][0]["depth"], 8);
}

#[test]
fn search_depth_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d.blq", "config none\nsequent s : p |- q\n");
    let run = |depth: &str| {
        Command::new(env!("CARGO_BIN_EXE_symlog"))
            .args(["--format", "json", "search", &f, "--name", "s"])
            .env("SYMLOG_DEPTH", depth)
            .output()
            .unwrap()
    };
    assert_eq!(json(&run("3"))["items"][0]["depth"], 3);
    assert_eq!(run("9").status.code(), Some(2));
    assert_eq!(run("deep").status.code(), Some(2));
    let o = symlog(&["search", &f, "--name", "s", "--depth", "12"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_passes() {
    let o = symlog(&["corpus"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("18/18 entries pass\n"));
    let j = json(&symlog(&["--format", "json", "corpus"]));
    assert_eq!(j["items"].as_array().unwrap().len(), 18);
    assert_eq!(j["items"][15]["id"], "C16");
}

#[test]
fn qstate_describes_a_qubit() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "plus.json", r#"{"alpha": 0.7071067811865476, "beta": 0.7071067811865476, "phi": 0.0}"#);
    let o = symlog(&["qstate", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("state     (forall x in Dplus . A(x))"), "{out}");
    assert!(out.contains("collapse  A((down,1/2)) & A((up,1/2))"), "{out}");
    let j = json(&symlog(&["--format", "json", "qstate", &f]));
    assert_eq!(j["items"][0]["domain"]["name"], "Dplus");
    assert_eq!(j["items"][0]["gates"][1]["dual"], "(forall x in Dminus . A(x))");
    assert_eq!(j["items"][0]["gates"][1]["agrees"], true);
    let bad = write(&dir, "bad.json", r#"{"alpha": 1.0, "beta": 1.0, "phi": 0.0}"#);
    assert_eq!(symlog(&["qstate", &bad]).status.code(), Some(2));
    let junk = write(&dir, "junk.json", "[1, 2");
    assert_eq!(symlog(&["qstate", &junk]).status.code(), Some(2));
}

#[test]
fn bell_prints_the_formula() {
    let o = symlog(&["bell", "--phase", "minus", "--correlation", "opposite"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(forall x in Dminus . A_1(x) join_o A_2(x))\n");
    let o = symlog(&["bell", "--phase", "plus", "--correlation", "i"]);
    assert_eq!(stdout(&o), "(forall x in Dplus . A_1(x) join_i A_2(x))\n");
    let j = json(&symlog(&["--format", "json", "bell", "--phase", "plus", "--correlation", "identical"]));
    assert_eq!(j["items"][0]["perp_fixed"], true);
    assert_eq!(j["items"][0]["state"]["phase"], "plus");
}

#[test]
fn guard_collapses_only_in_demo_mode() {
    let o = symlog(&["guard", "V", "--collapse-demo"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("V collapses: 2 entry equations"), "{out}");
    assert!(out.contains("ok   collapse_2 : |- T2 = T1"), "{out}");
    let o = symlog(&["guard", "V"]);
    assert_eq!(stdout(&o), "V consistent\n");
    let j = json(&symlog(&["--format", "json", "guard", "V"]));
    assert_eq!(j["items"][0]["licences"]["substitution"], false);
    assert_eq!(j["items"][0]["licences"]["d_axiom"][0], "d");
    let o = symlog(&["guard", "Ddown"]);
    assert!(stdout(&o).contains("extensional singleton: |- (down,1) = (down,1)"));
    assert_eq!(symlog(&["guard", "Nowhere"]).status.code(), Some(2));
}

#[test]
fn guard_reads_domains_from_a_script() {
    let f = corpus("c08_collapse.blq");
    let o = symlog(&["guard", "V", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("V collapses"));
}
