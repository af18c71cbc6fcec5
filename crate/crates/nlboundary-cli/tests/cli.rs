use nlboundary::boundary::synthetic_zplus_ii;
use nlboundary::degeneration::DegenerationData;
use nlboundary::exact::rat;
use nlboundary::fixtures;
use num_rational::BigRational;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::str::FromStr;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nlboundary"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("NLB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

fn cfg(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn analyze_type_iii_seed() {
    let o = run(&["analyze", "--config", &cfg("type_iii_seed.toml")], None);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema"], 1);
    let c = &r["cusps"][0];
    assert_eq!(c["type"], "III");
    assert_eq!(c["invariants"]["r2"], "2");
    assert_eq!(c["invariants"]["vol4"], "2");
    assert_eq!(c["lemma_checks"]["dual_containment"], true);
    assert_eq!(c["unipotent"], true);
}

#[test]
fn trivial_cusp_is_flagged() {
    let o = run(&["analyze", "--config", &cfg("trivial.toml")], None);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert!(r["warnings"][0].as_str().unwrap().contains("extendable across puncture"));
    let o = run(&["boundary", "--config", &cfg("trivial.toml")], None);
    assert!(json(&o)["cusps"][0]["z_minus"].is_null());
}

#[test]
fn type_ii_boundary_values() {
    let o = run(&["boundary", "--config", &cfg("type_ii_seed.toml"), "--tau", "0,1", "--m-max", "4"], None);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let z = &r["cusps"][0]["z_minus"];
    assert_eq!(z["factor"], "1/1");
    assert_eq!(z["terms"][0]["m"], "0/1");
    let v = r["cusps"][0]["samples"][0]["values"][0][0].as_f64().unwrap();
    assert!((v - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn rationals_round_trip() {
    let o = run(&["boundary", "--config", &cfg("type_iii_seed.toml"), "--m-max", "3"], None);
    let r = json(&o);
    fn walk(v: &Value, n: &mut usize) {
        match v {
            Value::String(s) if s.contains('/') && !s.contains(' ') => {
                let q = BigRational::from_str(s).unwrap();
                assert_eq!(format!("{}/{}", q.numer(), q.denom()), *s);
                *n += 1;
            }
            Value::Array(a) => a.iter().for_each(|x| walk(x, n)),
            Value::Object(m) => m.values().for_each(|x| walk(x, n)),
            _ => {}
        }
    }
    let mut n = 0;
    walk(&r, &mut n);
    assert!(n > 10);
}

#[test]
fn reports_are_deterministic() {
    let args = ["boundary", "--config", &cfg("type_iii_seed.toml"), "--m-max", "6"];
    let a = run(&args, Some("1"));
    let b = run(&args, Some("4"));
    let c = run(&args, None);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn check_passes_with_synthetic_zplus() {
    for f in ["type_ii_seed.toml", "type_ii_plus2.toml"] {
        let o = run(&["check", "--config", &cfg(f)], None);
        let r = json(&o);
        assert_eq!(o.status.code(), Some(0), "{}", r);
        assert!(r["residuals"]["S"].as_f64().unwrap() < 1e-6);
    }
}

fn explicit_zplus_config(corrupt: bool) -> String {
    let (l, t) = fixtures::type_ii_seed();
    let d = DegenerationData::from_monodromy(t, l).unwrap();
    let mut s = synthetic_zplus_ii(&d, &rat(40, 1)).unwrap();
    if corrupt {
        *s.coeffs.get_mut(&(rat(1, 1), 0)).unwrap() += rat(1, 1);
    }
    let base = std::fs::read_to_string(fixture("type_ii_seed.toml")).unwrap().replace("zplus_synthetic = \"P\"\n", "");
    let (head, tail) = base.split_at(base.find("[[cusps]]").unwrap());
    let mut terms = String::from("zplus = [\n");
    for ((m, j), c) in &s.coeffs {
        terms += &format!("  {{ m = \"{}\", class = {}, value = \"{}\" }},\n", m, j, c);
    }
    terms += "]\n\n";
    format!("{}{}{}", head, terms, tail)
}

#[test]
fn corrupted_zplus_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    let bad = dir.path().join("bad.toml");
    std::fs::write(&good, explicit_zplus_config(false)).unwrap();
    std::fs::write(&bad, explicit_zplus_config(true)).unwrap();
    let o = run(&["check", "--config", good.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["zplus"], "config");
    let o = run(&["check", "--config", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert!(r["residuals"]["S"].as_f64().unwrap() > r["residuals"]["threshold"].as_f64().unwrap());
    assert_eq!(r["pass"], false);
}

#[test]
fn compact_case_passthrough() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("compact.toml");
    std::fs::write(&p, "gram = [[0, 0, 1, 0], [0, -2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2]]\n").unwrap();
    let o = run(&["check", "--config", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["zplus"], "absent (Z+ = 0)");
    assert_eq!(r["cusps"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_residue_seeds() {
    for f in ["type_ii_seed.toml", "type_iii_seed.toml"] {
        let o = run(&["verify-residue", "--config", &cfg(f)], None);
        assert_eq!(o.status.code(), Some(0));
        let r = json(&o);
        assert!(r["residues"][0]["rel_error"].as_f64().unwrap() < 0.02);
    }
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("sig.toml", "gram = [[2, 0, 0], [0, 2, 0], [0, 0, 2]]\n", "signature"),
        ("field.toml", "gram = [[2, 0, 0], [0, 2, 0], [0, 0, 2]]\nbogus = 1\n", "line 2"),
        (
            "iso.toml",
            "gram = [[0, 0, 1, 0], [0, -2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2]]\n[[cusps]]\nlabel = \"P\"\nT = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]\n",
            "does not preserve",
        ),
    ];
    for (name, text, needle) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        let o = run(&["analyze", "--config", p.to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(2), "{}", name);
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(needle), "{}: {}", name, err);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.json");
    let o = run(&["analyze", "--config", &cfg("type_ii_seed.toml"), "--out", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(r["cusps"][0]["invariants"]["deg_q3"], "1");
}
