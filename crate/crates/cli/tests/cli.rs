use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use adhmlab::factorization::usp1_framing;
use adhmlab::forms::{standard_space, FormKind};
use adhmlab::sample::{regular_so_block, rng, sp_line_block};
use adhmlab::Field;
use adhmlab_cli::fixture_roundtrip;
use serde_json::Value;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/regular_k4_n5.json")
}

fn adhmlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_adhmlab")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn checks(stdout: &str) -> Vec<(String, bool)> {
    let v: Value = serde_json::from_str(stdout).unwrap();
    v["checks"].as_array().unwrap().iter().map(|c| (c["name"].as_str().unwrap().to_string(), c["pass"].as_bool().unwrap())).collect()
}

#[test]
fn verify_fixture_passes() {
    let path = fixture();
    let (code, out) = adhmlab(&["verify-fixture", path.to_str().unwrap(), "--expect-kernel", "0,1,1,0"]);
    assert_eq!(code, 0, "{out}");
    let cs = checks(&out);
    assert_eq!(cs.len(), 6);
    assert!(cs.iter().all(|c| c.1));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"]["kernel_of_adjoint"][0], "(0,1,1,0)");
    assert!(v["timing_ms"].is_null());
}

#[test]
fn wrong_kernel_expectation_fails_with_status_one() {
    let path = fixture();
    let (code, _) = adhmlab(&["verify-fixture", path.to_str().unwrap(), "--expect-kernel", "1,0,0,0"]);
    assert_eq!(code, 1);
}

#[test]
fn moment_of_zero_datum() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("zero.json");
    let zero = |r: usize, c: usize| serde_json::json!({ "rows": r, "cols": c, "entries": vec!["0"; r * c] });
    let datum = serde_json::json!({
        "flavor": "ordinary", "V": { "dim": 2 }, "W": { "dim": 1 },
        "B1": zero(2, 2), "B2": zero(2, 2), "i": zero(2, 1), "j": zero(1, 2),
    });
    fs::write(&p, datum.to_string()).unwrap();
    let (code, out) = adhmlab(&["moment", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = adhmlab(&["stability", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 1, "zero datum is neither stable nor costable: {out}");
    assert_eq!(checks(&out), vec![("costable".to_string(), false), ("stable".to_string(), false)]);
}

#[test]
fn roundtrip_canonicalizes_fractions() {
    let text = fs::read_to_string(fixture()).unwrap().replacen("\"1/2\"", "\"2/4\"", 1);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("frac.json");
    fs::write(&p, &text).unwrap();
    assert!(fixture_roundtrip(&p).unwrap());
    let d = adhmlab_cli::load_datum(&p, Field::Rationals).unwrap();
    let canon = adhmlab_cli::canonical_datum_json(&d);
    assert!(!canon.contains("2/4"));
    assert_eq!(canon, adhmlab_cli::canonical_datum_json(&adhmlab_cli::load_datum(&fixture(), Field::Rationals).unwrap()));
}

#[test]
fn truncated_file_reports_position() {
    let text = fs::read_to_string(fixture()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cut.json");
    fs::write(&p, &text[..text.len() / 2]).unwrap();
    let err = fixture_roundtrip(&p).unwrap_err();
    let msg = format!("{err:#}");
    assert!(msg.contains("line") && msg.contains("column"), "{msg}");
    let out = Command::new(env!("CARGO_BIN_EXE_adhmlab")).args(["moment", "--input", p.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let path = fixture();
    let args = ["--seed", "7", "verify-fixture", path.to_str().unwrap()];
    assert_eq!(adhmlab(&args), adhmlab(&args));
    let md = ["--markdown", "ab-table", "--k", "2", "--N", "3"];
    assert_eq!(adhmlab(&md), adhmlab(&md));
}

#[test]
fn factorize_two_so_blocks() {
    let w = standard_space(FormKind::Orthogonal, 4).unwrap();
    let mut r = rng(3);
    let f = Field::Rationals;
    let a = regular_so_block(&mut r, &w, &f.int(1), &f.int(0)).unwrap();
    let b = regular_so_block(&mut r, &w, &f.int(-2), &f.int(5)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("blocks.json");
    fs::write(&p, serde_json::to_string(&vec![a, b]).unwrap()).unwrap();
    let (code, out) = adhmlab(&["factorize", "--blocks", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"]["datum"]["B1"]["rows"], 4);
    assert_eq!(v["output"]["component_indices"].as_array().unwrap().len(), 2);
}

#[test]
fn factorize_rejects_shared_eigenvalue() {
    let w = standard_space(FormKind::Orthogonal, 4).unwrap();
    let mut r = rng(4);
    let f = Field::Rationals;
    let a = regular_so_block(&mut r, &w, &f.int(1), &f.int(0)).unwrap();
    let b = regular_so_block(&mut r, &w, &f.int(1), &f.int(2)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("blocks.json");
    fs::write(&p, serde_json::to_string(&vec![a, b]).unwrap()).unwrap();
    let (code, _) = adhmlab(&["factorize", "--blocks", p.to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn tensor_of_lines() {
    let w = usp1_framing(Field::Rationals);
    let mut r = rng(5);
    let f = Field::Rationals;
    let a = sp_line_block(&mut r, &w, &f.int(1), &f.int(2)).unwrap();
    let b = sp_line_block(&mut r, &w, &f.int(-1), &f.int(3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let (pa, pb) = (dir.path().join("a.json"), dir.path().join("b.json"));
    fs::write(&pa, serde_json::to_string(&a).unwrap()).unwrap();
    fs::write(&pb, serde_json::to_string(&b).unwrap()).unwrap();
    let (code, out) = adhmlab(&["tensor", "--left", pa.to_str().unwrap(), "--right", pb.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn modality_and_hilbert() {
    for (r, n) in [("2", "1"), ("3", "2"), ("2", "3")] {
        let (code, out) = adhmlab(&["modality", "--r", r, "--n", n]);
        assert_eq!(code, 0, "{out}");
    }
    let (code, out) = adhmlab(&["hilbert", "--flavor", "ordinary", "--k", "1", "--N", "2", "--dmax", "3"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"]["coeffs"][0], 1);
}

#[test]
fn census_over_f3() {
    let (code, out) = adhmlab(&["--workers", "2", "census", "--r", "2", "--n", "1", "--p", "3"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"]["census"]["points"], 81);
}

#[test]
fn normal_form_of_jordan_pair() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("nf.json");
    let space = standard_space(FormKind::Orthogonal, 2).unwrap();
    let b: adhmlab::Mat = serde_json::from_value(serde_json::json!({ "rows": 2, "cols": 2, "entries": ["0", "1", "0", "0"] })).unwrap();
    assert!(space.is_self_adjoint(&b));
    fs::write(&p, serde_json::json!({ "space": space, "b": b }).to_string()).unwrap();
    let (code, out) = adhmlab(&["normal-form", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"]["chains"].as_array().unwrap().len(), 1);
    assert_eq!(v["output"]["associated_partitions"][0]["partition"], serde_json::json!([2]));
}

#[test]
fn bad_field_is_usage_error() {
    let (code, _) = adhmlab(&["--field", "fp:9", "modality", "--r", "2", "--n", "1"]);
    assert_eq!(code, 2);
}
