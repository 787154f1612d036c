//! The checked-in corpus must match what the generator writes today,
//! so corpus edits can only happen through mkcorpus.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read(&p).unwrap())
        })
        .collect()
}

#[test]
fn checked_in_corpus_matches_generator() {
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    assert!(shipped.is_dir(), "corpus directory is missing");
    let dir = tempfile::tempdir().unwrap();
    let fresh = dir.path().join("corpus");
    let out = Command::new(env!("CARGO_BIN_EXE_mkcorpus"))
        .arg(&fresh)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let a = tree(&shipped);
    let b = tree(&fresh);
    let names_a: Vec<&String> = a.keys().collect();
    let names_b: Vec<&String> = b.keys().collect();
    assert_eq!(names_a, names_b, "file sets differ");
    for (name, bytes) in &a {
        assert_eq!(bytes, &b[name], "{name} differs from the generated copy");
    }
}
