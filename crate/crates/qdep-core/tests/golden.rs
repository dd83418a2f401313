//! Golden files pin the serialized picture formats byte for byte.
//!
//! Regenerate with `BLESS=1 cargo test -p qdep-core --test golden` and review
//! the diff.

use std::fs;
use std::path::PathBuf;

use qdep_core::{analyze, build_fixture, export_picture, Circuit, PictureFormat};

fn check_golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}; regenerate with BLESS=1", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn fixture_export(name: &str, format: PictureFormat) -> String {
    let picture = analyze(&build_fixture(name).unwrap());
    export_picture(&picture, format)
}

#[test]
fn fig1_json() {
    check_golden("fig1.json", &fixture_export("fig1", PictureFormat::Json));
}

#[test]
fn fig1_dot() {
    check_golden("fig1.dot", &fixture_export("fig1", PictureFormat::Dot));
}

#[test]
fn ghz_text() {
    check_golden("ghz.txt", &fixture_export("ghz", PictureFormat::Text));
}

#[test]
fn w_state_text() {
    check_golden("w_state.txt", &fixture_export("w_state", PictureFormat::Text));
}

#[test]
fn ansatz_a_json() {
    check_golden("ansatz_a.json", &fixture_export("ansatz_a", PictureFormat::Json));
}

#[test]
fn ansatz_b_json() {
    check_golden("ansatz_b.json", &fixture_export("ansatz_b", PictureFormat::Json));
}

#[test]
fn eq16_18_json() {
    check_golden("eq16_18.json", &fixture_export("eq16_18", PictureFormat::Json));
}

#[test]
fn empty_circuit_json() {
    let picture = analyze(&Circuit::builder(3).build());
    check_golden("empty3.json", &export_picture(&picture, PictureFormat::Json));
}
