use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(file)
        .display()
        .to_string()
}

fn sctaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sctaut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sctaut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn certifies_the_triangle_relator() {
    let o = sctaut(&["check-cancellation", &corpus("ab7.pres"), "--lambda", "1/7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("C'(1/7): true (lambda* = 1/14"), "{}", stdout(&o));
}

#[test]
fn cycle_spectrum() {
    let o = sctaut(&["taut-spectrum", "--graph", "cycle:6", "--horizon", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("in = [6], unknown = []"));
}

#[test]
fn exhausted_budget_exits_with_unknown() {
    let o = sctaut(&["taut-spectrum", "--graph", "complete:6", "--horizon", "5", "--cycle-nodes", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn proper_dimension_pattern_with_citations() {
    let o = sctaut(&["dim-bounds", &corpus("fin_eg_pattern.prof")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("gd_fin(G) = 3"));
    assert!(out.contains("cd_fin(G) = 2"));
    assert!(out.contains("for Fin: True"));
    for line in out.lines().filter(|l| l.contains("(G)")) {
        assert!(line.contains('[') && line.contains(';'), "bound without citation: {line}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    for path in [&a, &b] {
        let o = sctaut(&[
            "check-cancellation",
            &corpus("block_relator.pres"),
            "--lambda",
            "1/12",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "check-cancellation");
    assert_eq!(v["records"][0]["optimal_lambda"], "23/90");
    assert_eq!(v["records"][0]["holds"], false);
    assert!(v["records"][0]["violation"].is_object());
    assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn errors_exit_with_one() {
    let o = sctaut(&["check-cancellation", "/nonexistent/file.pres"]);
    assert_eq!(o.status.code(), Some(1));
    let bad = scratch("bad.pres");
    std::fs::write(&bad, "factors = A B\nA.kind = cyclic\nA.order = 2\nA.generator = a\nB.kind = bogus\n").unwrap();
    let o = sctaut(&["check-cancellation", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));
}

#[test]
fn one_ended_without_factor_flags_is_undecided() {
    let o = sctaut(&["one-ended", &corpus("block_relator.pres")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bracket_pipeline_on_the_desk_quotient() {
    let pres = corpus("ab7_z20.pres");
    let (a, b, u, q) = (scratch("a.spec"), scratch("b.spec"), scratch("u.spec"), scratch("q.spec"));
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    let runs: [Vec<String>; 4] = [
        ["taut-spectrum", "--presentation", &pres, "--factor", "A", "--horizon", "41", "--out", &s(&a)]
            .map(String::from)
            .to_vec(),
        ["taut-spectrum", "--presentation", &pres, "--factor", "B", "--radius", "20", "--horizon", "41", "--out", &s(&b)]
            .map(String::from)
            .to_vec(),
        ["spectrum-union", &s(&a), &s(&b), "--out", &s(&u)].map(String::from).to_vec(),
        ["taut-spectrum", "--presentation", &pres, "--radius", "11", "--horizon", "21", "--out", &s(&q)]
            .map(String::from)
            .to_vec(),
    ];
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(sctaut(&args).status.code(), Some(0), "{args:?}");
    }
    let o = sctaut(&["spectrum-bracket", &pres, "--quotient", &s(&q), "--factors", &s(&u)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("partner 14"));
    assert!(!stdout(&o).contains("VIOLATED"));
    let o = sctaut(&["spectrum-equiv", &s(&q), &s(&q), "--k", "1"]);
    assert!(stdout(&o).contains("related"));
}

#[test]
fn coned_ball_reports_the_geometric_ratio() {
    let o = sctaut(&["coned-ball", &corpus("ab7.pres"), "--radius", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("70 vertices, 72 edges, 3 cells"));
    assert!(stdout(&o).contains("ratio 1/7"));
}

#[test]
fn dehn_reduce_shortens_a_majority() {
    let o = sctaut(&["dehn-reduce", &corpus("ab7.pres"), "--word", "(A.a B.b)^4", "--mode", "linear"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-> B.b^2 A.a B.b^2 A.a B.b^2 A.a in 1 steps"), "{}", stdout(&o));
}
