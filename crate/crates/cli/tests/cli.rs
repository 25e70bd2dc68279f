use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// Runs `qlogic` inside `dir`.
fn qlogic_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlogic"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn qlogic(args: &[&str]) -> Output {
    qlogic_in(&data_dir(), args)
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("report is JSON")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

fn values(report: &Value) -> Vec<(String, String)> {
    report["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["name"].as_str().unwrap().to_string(), v["value"].as_str().unwrap().to_string()))
        .collect()
}

/// Compares stdout with a pinned report; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(output: &Output, name: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let actual = String::from_utf8(output.stdout.clone()).unwrap();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "report differs from {}", path.display());
}

/// `label -> label -> value` from a table file, values parsed as fractions.
fn table(path: &Path) -> Vec<((String, String), (i64, i64))> {
    let file: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let mut out = Vec::new();
    for (row, cells) in file["table"].as_object().unwrap() {
        for (column, text) in cells.as_object().unwrap() {
            out.push(((row.clone(), column.clone()), fraction(text.as_str().unwrap())));
        }
    }
    out
}

/// Reduced `(numerator, denominator)` of a decimal or `p/q` string.
fn fraction(text: &str) -> (i64, i64) {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.parse().unwrap(), d.parse().unwrap()),
        None => match text.split_once('.') {
            Some((whole, frac)) => {
                let scale = 10i64.pow(frac.len() as u32);
                (whole.parse::<i64>().unwrap() * scale + frac.parse::<i64>().unwrap(), scale)
            }
            None => (text.parse().unwrap(), 1),
        },
    };
    let g = gcd(n, d);
    (n / g, d / g)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs().max(1)
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn reference_files_validate() {
    let out = qlogic(&["validate", "mo2.json", "f.json", "p.json", "x.json", "y.json", "nu.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_golden(&out, "validate.txt");
}

#[test]
fn hexagon_fails_with_a_witness_pair() {
    let out = qlogic(&["--format", "json", "validate", "o6.json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["status"], "error");
    let law = check(&report, "orthomodular law");
    assert_eq!(law["pass"], false);
    assert!(law["witness"].as_str().unwrap().contains("a <= b"));
    assert_eq!(check(&report, "ortholattice")["pass"], true);

    let out = qlogic(&["validate", "o6"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unreadable_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("broken.json"), "{ \"kind\": ").unwrap();
    let lattice = data_dir().join("mo2.json");
    let out = qlogic_in(dir.path(), &["--format", "json", "validate", lattice.to_str().unwrap(), "broken.json"]);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    assert_eq!(report["status"], "error");
    assert!(report["error"].as_str().unwrap().starts_with("broken.json"));

    let out = qlogic(&["validate", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));

    fs::write(dir.path().join("typo.json"), r#"{"kind": "smap", "table": {"c": {"a": "0"}}}"#).unwrap();
    let out = qlogic_in(dir.path(), &["validate", lattice.to_str().unwrap(), "typo.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown label `c`"));
}

#[test]
fn axiom_failures_carry_witnesses() {
    let out = qlogic(&["--format", "json", "validate", "mo2.json", "f_bad_c3.json", "p_bad_s3.json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(check(&report, "f_bad_c3.json: C1")["pass"], true);
    assert_eq!(check(&report, "f_bad_c3.json: C3")["witness"], "f(b, .) does not decompose over {a, a'}");
    assert_eq!(
        check(&report, "p_bad_s3.json: s3")["witness"],
        "additivity in the second argument fails for the orthogonal pair (a, a') at b"
    );
}

#[test]
fn convert_reproduces_the_smap_table() {
    let dir = tempfile::tempdir().unwrap();
    let lattice = data_dir().join("mo2.json");
    let f = data_dir().join("f.json");
    let args = ["--format", "json", "convert", "--lattice", lattice.to_str().unwrap(), f.to_str().unwrap(), "-o", "pf.json"];
    let out = qlogic_in(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0));
    assert_golden(&out, "convert_f.json");

    let emitted = table(&dir.path().join("pf.json"));
    for (key, value) in table(&data_dir().join("p.json")) {
        let found = emitted.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        assert_eq!(found, Some(value), "p_f{key:?}");
    }

    let args = ["convert", "--lattice", lattice.to_str().unwrap(), "pf.json", "-o", "f2.json"];
    assert_eq!(qlogic_in(dir.path(), &args).status.code(), Some(0));
    let again = table(&dir.path().join("f2.json"));
    for (key, value) in table(&f) {
        let found = again.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        assert_eq!(found, Some(value), "f{key:?}");
    }
}

#[test]
fn convert_surfaces_c2_violations() {
    let dir = tempfile::tempdir().unwrap();
    let out = qlogic(&[
        "--format",
        "json",
        "convert",
        "--lattice",
        "mo2.json",
        "f_bad_c2.json",
        "-o",
        dir.path().join("out.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(check(&report, "C2")["witness"], "f(a, a) != 1");
    assert!(!dir.path().join("out.json").exists());
}

#[test]
fn decimal_output_is_exact_or_refused() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let out = qlogic(&["--decimal", "convert", "--lattice", "mo2.json", "p.json", "-o", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("11/30"));

    let out = qlogic(&["--format", "json", "--decimal", "indep", "--lattice", "mo2.json", "p.json", "a", "b"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(values(&json(&out)).contains(&("p(a, b)".into(), "0.12".into())));

    let out = qlogic(&[
        "--format", "json", "--decimal", "--approx", "3", "convert", "--lattice", "mo2.json", "p.json", "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(values(&json(&out)).contains(&("f(b, a')".into(), "0.367".into())));
}

#[test]
fn independence_is_asymmetric() {
    let out = qlogic(&["--format", "json", "indep", "--lattice", "mo2.json", "p.json", "a", "b"]);
    assert_eq!(out.status.code(), Some(0));
    assert_golden(&out, "indep_a_b.json");
    let report = json(&out);
    assert_eq!(report["verdicts"][0]["holds"], true);

    let out = qlogic(&["--format", "json", "indep", "--lattice", "mo2.json", "f.json", "b", "a"]);
    let report = json(&out);
    assert_eq!(report["verdicts"][0]["subject"], "b independent of a");
    assert_eq!(report["verdicts"][0]["holds"], false);

    let out = qlogic(&["--format", "json", "indep", "--lattice", "mo2.json", "p.json", "--scan"]);
    let report = json(&out);
    let subjects: Vec<&str> = report["verdicts"].as_array().unwrap().iter().map(|v| v["subject"].as_str().unwrap()).collect();
    assert!(subjects.contains(&"a independent of b but not conversely"));
    assert!(!subjects.contains(&"b independent of a but not conversely"));
}

#[test]
fn boolean_scan_finds_no_asymmetry() {
    let dir = tempfile::tempdir().unwrap();
    let gen = ["--seed", "11", "gen", "--kind", "boolean", "--n", "3", "--emit", "lattice,smap"];
    assert_eq!(qlogic_in(dir.path(), &gen).status.code(), Some(0));
    let out = qlogic_in(dir.path(), &["--format", "json", "indep", "--lattice", "lattice.json", "smap.json", "--scan"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(values(&report).contains(&("asymmetric pairs".into(), "0".into())));
    assert!(report.get("verdicts").is_none());
}

#[test]
fn conditional_expectations_match_the_reference() {
    let out = qlogic(&["--format", "json", "condexp", "--lattice", "mo2.json", "--cond", "f.json", "--observable", "x.json", "--subalgebra", "b"]);
    assert_eq!(out.status.code(), Some(0));
    assert_golden(&out, "condexp_x_b.json");
    assert_eq!(values(&json(&out))[0], ("z(8/5)".into(), "1".into()));

    let out = qlogic(&["--format", "json", "condexp", "--lattice", "mo2.json", "--cond", "p.json", "--observable", "y.json", "--subalgebra", "a"]);
    assert_eq!(out.status.code(), Some(0));
    assert_golden(&out, "condexp_y_a.json");
    let v = values(&json(&out));
    assert!(v.contains(&("z(9/5)".into(), "a".into())));
    assert!(v.contains(&("z(49/30)".into(), "a'".into())));
}

#[test]
fn constant_observables_are_their_own_expectation() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), r#"[{"value": "5/2", "element": "1"}]"#).unwrap();
    for d in ["a", "b'", "1"] {
        let out = qlogic(&[
            "--format", "json", "condexp", "--lattice", "mo2.json", "--cond", "f.json", "--observable",
            dir.path().join("c.json").to_str().unwrap(), "--subalgebra", d,
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(values(&json(&out))[0], ("z(5/2)".into(), "1".into()));
    }
}

#[test]
fn generation_is_deterministic_and_valid() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let gen = ["--seed", "42", "gen", "--kind", "mo", "--n", "2", "--emit", "lattice,smap,conditional,state,observable"];
    for dir in [&first, &second] {
        assert_eq!(qlogic_in(dir.path(), &gen).status.code(), Some(0));
    }
    for name in ["lattice", "smap", "conditional", "state", "observable"] {
        let file = format!("{name}.json");
        assert_eq!(
            fs::read(first.path().join(&file)).unwrap(),
            fs::read(second.path().join(&file)).unwrap(),
            "{file} differs between runs"
        );
    }
    let out = qlogic_in(
        first.path(),
        &["validate", "lattice.json", "smap.json", "conditional.json", "state.json", "observable.json"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let out = qlogic_in(first.path(), &["gen", "--kind", "o6", "--emit", "lattice,smap"]);
    assert_eq!(out.status.code(), Some(1));
}
