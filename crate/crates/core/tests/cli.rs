use semiflat::format::{parse_surface, serialize_curve, serialize_surface};
use semiflat::Error;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiflat")).args(args).env("SEMIFLAT_CORPUS", corpus_dir()).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let o = run(&a);
    assert!(o.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn info_reports_signature_and_dimensions() {
    let o = run(&["info", "octagon.surf"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("α=(4;+1)"));
    assert!(text.contains("g=2"));
    assert!(text.contains("dim QD = 8"));
    assert!(text.contains("dim Flat = 6"));
    assert!(text.starts_with("# semiflat "));
    assert!(text.contains("# seed 0"));
}

#[test]
fn length_formula_check_on_the_torus() {
    let v = json(&["verify-length-formula", "torus2.surf", "--curve", "horiz"]);
    assert!(v["result"]["max_residual"].as_f64().unwrap() <= 1e-10);
    let v = json(&["verify-length-formula", "genus2.surf", "--mode", "quadrature"]);
    assert!(v["result"]["max_residual"].as_f64().unwrap() <= 1e-8);
    assert!(v["result"]["curves"].as_array().unwrap().len() >= 3);
}

#[test]
fn rigidity_certificate_on_the_torus() {
    let v = json(&["rigidity-cert", "torus2.surf"]);
    let r = &v["result"];
    assert!(r["sigma_size"].as_u64().unwrap() <= 30);
    assert_eq!(r["rank"], 4);
    assert_eq!(v["header"]["tolerances"]["rank"], 1e-9);
}

#[test]
fn double_cover_counts() {
    for f in ["pillowcase.surf", "genus2.surf"] {
        let v = json(&["double-cover", f]);
        assert_eq!(v["result"]["matches"], true);
        assert_eq!(v["result"]["trivial_holonomy"], true);
    }
    let o = run(&["double-cover", "torus2.surf"]);
    assert_eq!(o.status.code(), Some(Error::TrivialHolonomyInput.status()));
    assert!(String::from_utf8_lossy(&o.stderr).contains("TRIVIAL_HOLONOMY_INPUT"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--seed", "7", "perturb", "octagon.surf", "--radius", "0.01"][..],
        &["saddles", "genus2.surf", "--max-length", "5"],
        &["--json", "deform", "genus2-generic.surf", "--steps", "5"],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{:?}", args);
        assert_eq!(a.stdout, b.stdout);
    }
    let a = run(&["--seed", "1", "perturb", "octagon.surf"]);
    let b = run(&["--seed", "2", "perturb", "octagon.surf"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn perturbed_surface_is_a_valid_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.surf");
    let o = run(&["perturb", "torus2.surf", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(&["spectrum", out.to_str().unwrap(), "--curves", "horiz,vert"]);
    let l = v["result"]["lengths"].as_array().unwrap();
    assert_eq!(l.len(), 2);
    assert!((l[0]["length"].as_f64().unwrap() - 1.0).abs() < 0.01);
}

#[test]
fn errors_carry_their_class() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.surf");
    std::fs::write(&bad, "triangle a\nv 1 0\nv 0 q\n").unwrap();
    let o = run(&["info", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(Error::Parse { line: 0, col: 0, msg: String::new() }.status()));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("PARSE_ERROR") && err.contains("line 3, column 5"), "{}", err);

    let o = run(&["length", "torus2.surf", "--curve", "nope"]);
    assert_eq!(o.status.code(), Some(Error::InvalidArgument(String::new()).status()));

    let o = run(&["--json", "info", "missing.surf"]);
    assert_eq!(o.status.code(), Some(Error::Io(String::new()).status()));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["code"], "IO_ERROR");

    let o = run(&["--drift-tol=0", "info", "torus2.surf"]);
    assert_eq!(o.status.code(), Some(Error::InvalidArgument(String::new()).status()));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn track_build_and_recover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for pants in ["genus2-theta.pants", "torus2-ring.pants"] {
        for second in [false, true] {
            let w = dir.path().join("w.csv");
            let i = dir.path().join("i.csv");
            let r = dir.path().join("r.csv");
            let flag: &[&str] = if second { &["--second"] } else { &[] };
            let mut a = vec!["track", "build", pants, "--out", w.to_str().unwrap()];
            a.extend_from_slice(flag);
            assert!(run(&a).status.success());
            let mut a = vec!["track", "build", pants, "--emit", "intersections", "--out", i.to_str().unwrap()];
            a.extend_from_slice(flag);
            assert!(run(&a).status.success());
            let mut a =
                vec!["track", "recover", pants, "--intersections", i.to_str().unwrap(), "--out", r.to_str().unwrap()];
            a.extend_from_slice(flag);
            let o = run(&a);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            assert_eq!(std::fs::read_to_string(&w).unwrap(), std::fs::read_to_string(&r).unwrap());
        }
    }
}

#[test]
fn every_command_runs_on_the_corpus() {
    let cases: &[&[&str]] = &[
        &["validate", "genus2.surf"],
        &["validate", "genus2-handles.pants"],
        &["chart", "pillowcase.surf"],
        &["triangulate", "octagon.surf"],
        &["jacobian", "genus2-generic.surf"],
        &["length", "octagon.surf", "--curve", "h0"],
        &["saddles", "torus2.surf", "--max-length", "2"],
    ];
    for args in cases {
        let o = run(args);
        assert!(o.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    }
    let text = stdout(&run(&["saddles", "torus2.surf", "--max-length", "1"]));
    assert!(text.contains("start,end,re,im,length\n"));
    let v = json(&["jacobian", "genus2-generic.surf"]);
    assert_eq!(v["result"]["report"]["nullity"], 7);
    assert_eq!(v["result"]["report"]["bound"], 4);
}

#[test]
fn corpus_files_round_trip_and_match_the_builders() {
    let mut builders = semiflat::corpus::all();
    builders.push(("genus2-generic", semiflat::corpus::genus2_generic()));
    for (name, s) in builders {
        let text = std::fs::read_to_string(corpus_dir().join(format!("{}.surf", name))).unwrap();
        let f = parse_surface(&text).unwrap();
        let mut again = serialize_surface(&f.surface);
        for c in &f.curves {
            again += &serialize_curve(&c.name, &c.refs);
            again.push('\n');
        }
        assert_eq!(again, text, "{}", name);
        assert_eq!(serialize_surface(&s), serialize_surface(&f.surface), "{}", name);
    }
}
