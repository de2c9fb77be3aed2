use std::path::{Path, PathBuf};
use std::process::Command;

use leibniz_cli::description::{parse_description, Coeff};
use leibniz_cli::suites::{transfer_context, Suite};
use leibniz_cli::{load_description, run, CliError, SessionConfig, Status};
use leibniz_core::fixtures;

const K: u32 = 4;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn all_fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    v.sort();
    v
}

fn config(inputs: Vec<PathBuf>) -> SessionConfig {
    SessionConfig {
        inputs,
        ..SessionConfig::default()
    }
}

#[test]
fn coefficient_literals() {
    let c: Coeff = "1/2 t^3".parse().unwrap();
    assert_eq!((c.to_string(), c.exp), ("1/2 t^3".to_string(), 3));
    assert_eq!("t".parse::<Coeff>().unwrap().to_string(), "1 t^1");
    assert_eq!("-t^2".parse::<Coeff>().unwrap().to_string(), "-1 t^2");
    assert_eq!("-6/4".parse::<Coeff>().unwrap().to_string(), "-3/2");
    for bad in ["1/0", "2 t^x", "x", "1/2 s", ""] {
        assert!(bad.parse::<Coeff>().is_err(), "{bad:?}");
    }
}

#[test]
fn bundled_files_match_the_library_fixtures() {
    let s = load_description(&fixture("affine"), None).unwrap();
    assert_eq!(s.structure("g").unwrap(), &fixtures::affine(K));
    assert_eq!(s.mc.as_ref().unwrap().1, fixtures::affine_mc(K));
    let s = load_description(&fixture("nilpotent"), None).unwrap();
    assert_eq!(s.structure("n").unwrap(), &fixtures::nilpotent(K));
    let s = load_description(&fixture("leibniz"), None).unwrap();
    assert_eq!(s.structure("l").unwrap(), &fixtures::leibniz(K));
    let s = load_description(&fixture("abelian_line"), None).unwrap();
    assert_eq!(s.structure("u").unwrap(), &fixtures::abelian_line(K));
    let s = load_description(&fixture("affine_to_abelian"), None).unwrap();
    assert_eq!(s.structure("ga").unwrap(), &fixtures::affine_abelian(K));
    let built = s.morphism.as_ref().unwrap().2.build(5).unwrap();
    assert_eq!(built.taylor_family(), fixtures::affine_to_abelian(K, 5).unwrap().taylor_family());
    let s = load_description(&fixture("affine_gauge"), None).unwrap();
    let built = s.morphism.as_ref().unwrap().2.build(5).unwrap();
    assert_eq!(built.taylor_family(), fixtures::affine_gauge(K, 5).unwrap().taylor_family());
    // the truncation flag wins over the file
    let s = load_description(&fixture("affine"), Some(2)).unwrap();
    assert_eq!(s.order, 2);
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn bad_descriptions_are_rejected_with_a_position() {
    let text = std::fs::read_to_string(fixture("affine")).unwrap();
    let zero = text.replacen("\"coeff\": \"1\"", "\"coeff\": \"1/0\"", 1);
    match parse_description(&zero) {
        Err(CliError::Parse(msg)) => assert!(msg.contains("line") && msg.contains("1/0"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let unknown = write_temp(&text.replacen("\"basis\": \"y\"", "\"basis\": \"w\"", 1));
    match load_description(unknown.path(), None) {
        Err(CliError::Invalid(msg)) => assert!(msg.contains("structures[0].differential[0].output[0]"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let degree = write_temp(&text.replacen("\"degree\": 1", "\"degree\": 2", 1));
    assert!(matches!(load_description(degree.path(), None), Err(CliError::Invalid(_))));
    let version = text.replacen("\"schema_version\": 1", "\"schema_version\": 9", 1);
    assert!(matches!(parse_description(&version), Err(CliError::Invalid(_))));
    assert!(matches!(parse_description("{\"schema_version\": 1,"), Err(CliError::Parse(_))));
}

#[test]
fn every_bundled_fixture_passes_every_suite() {
    let out = run(&config(all_fixtures())).unwrap();
    let failing: Vec<_> = out.report.records().filter(|r| r.status == Status::Fail).collect();
    assert!(failing.is_empty(), "{failing:#?}");
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.report.sections.len(), all_fixtures().len());
}

#[test]
fn broken_structure_fails_with_a_named_check() {
    let text = std::fs::read_to_string(fixture("affine")).unwrap();
    // [h, y] = 2y breaks the derivation rule for d x = y
    let broken = write_temp(&text.replacen(
        "\"inputs\": [\n            \"h\",\n            \"y\"\n          ],\n          \"output\": [\n            {\n              \"basis\": \"y\",\n              \"coeff\": \"1\"",
        "\"inputs\": [\n            \"h\",\n            \"y\"\n          ],\n          \"output\": [\n            {\n              \"basis\": \"y\",\n              \"coeff\": \"2\"",
        1,
    ));
    assert_ne!(std::fs::read_to_string(broken.path()).unwrap(), text);
    let mut cfg = config(vec![broken.path().to_path_buf()]);
    cfg.suites = vec![Suite::Structure];
    let out = run(&cfg).unwrap();
    assert_eq!(out.exit_code, 1);
    let names: Vec<&str> = out
        .report
        .records()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.name.as_str())
        .collect();
    assert!(names.iter().any(|n| n.contains("derivation")), "{names:?}");
    assert!(names.iter().any(|n| n.contains("Q^2")), "{names:?}");
}

#[test]
fn mutations_are_reproducible() {
    let mut cfg = config(vec![fixture("leibniz")]);
    cfg.suites = vec![Suite::Structure];
    cfg.seed = 7;
    let a = run(&cfg).unwrap().report;
    let b = run(&cfg).unwrap().report;
    assert_eq!(a.to_json(), b.to_json());
    cfg.seed = 8;
    let c = run(&cfg).unwrap().report;
    assert_ne!(a.to_json(), c.to_json());
    let mutations = a.records().filter(|r| r.name.contains("mutation ")).count();
    assert!(mutations >= 20);
}

#[test]
fn emitted_tables_reload_identically() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["affine_gauge", "affine", "affine_to_abelian"] {
        let path = dir.path().join(format!("{name}_b.json"));
        let mut cfg = config(vec![fixture(name)]);
        cfg.suites = vec![Suite::Theorem];
        cfg.emit_b = Some(path.clone());
        assert_eq!(run(&cfg).unwrap().exit_code, 0);
        let session = load_description(&fixture(name), None).unwrap();
        let ctx = transfer_context(&session, 5).unwrap();
        let reloaded = load_description(&path, None).unwrap();
        assert_eq!(&reloaded.tables, ctx.tables(), "{name}");
        assert_eq!(reloaded.structure("source_derived").unwrap(), ctx.source_derived());
        match name {
            // identity: B_1 = T^1_α F
            "affine" => {
                for i in 0..3 {
                    assert_eq!(reloaded.tables[&(1, 0)].eval_basis(&[i]), ctx.taylor_derivative(1).eval_basis(&[i]));
                }
            }
            // abelian target: nothing beyond j = 0
            "affine_to_abelian" => assert!(reloaded.tables.keys().all(|&(_, j)| j == 0)),
            _ => assert!(reloaded.tables.keys().any(|&(_, j)| j >= 1)),
        }
    }
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_leibniz")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn exit_codes() {
    let affine = fixture("affine");
    let affine = affine.to_str().unwrap();
    let (code, text) = binary(&["--input", affine, "--suite", "structure,mc"]);
    assert_eq!(code, 0);
    assert!(text.contains("summary: ") && text.contains(" 0 failed"));
    assert_eq!(binary(&[]).0, 2);
    assert_eq!(binary(&["--input", affine, "--suite", "bogus"]).0, 2);
    assert_eq!(binary(&["--input", affine, "--max-arity", "1"]).0, 2);
    assert_eq!(binary(&["--input", "/nonexistent.json"]).0, 2);
    let zero = write_temp(&std::fs::read_to_string(fixture("affine")).unwrap().replacen("\"1\"", "\"1/0\"", 1));
    assert_eq!(binary(&["--input", zero.path().to_str().unwrap()]).0, 2);
    let text = std::fs::read_to_string(fixture("leibniz")).unwrap();
    let broken = write_temp(&text.replacen("\"coeff\": \"-1\"", "\"coeff\": \"-2\"", 1));
    assert_eq!(binary(&["--input", broken.path().to_str().unwrap(), "--suite", "structure"]).0, 1);
}

#[test]
fn json_report_has_one_record_per_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, _) = binary(&[
        "--input",
        fixture("nilpotent").to_str().unwrap(),
        "--suite",
        "mc,theorem",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let records = v["sections"][0]["records"].as_array().unwrap();
    assert!(records.len() > 10);
    for r in records {
        for key in ["name", "anchor", "status", "witness"] {
            assert!(r.get(key).is_some(), "{key} missing in {r}");
        }
    }
    assert_eq!(v["summary"]["failed"], 0);
}
