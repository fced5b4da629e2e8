//! Replays the checked-in fuzz corpus; every seed is well-formed input.

use std::fs;
use std::path::PathBuf;

use starmap::hypernat::{parse_term, GeneratorEnv};
use starmap::ramsey::{Certificate, ColoringSpec};
use starmap::uequiv::{parse_axiom_file, parse_judgment};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            (
                path.display().to_string(),
                fs::read_to_string(&path).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn expression_seeds_parse() {
    for (name, text) in seeds("expr") {
        let c = starmap::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            starmap::parse(&starmap::pretty(&c)).unwrap().normalize(),
            c.normalize(),
            "{name}"
        );
    }
}

#[test]
fn term_seeds_parse() {
    for (name, text) in seeds("term") {
        parse_term(&text, &GeneratorEnv::new()).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn axiom_seeds_parse() {
    for (name, text) in seeds("axiom_file") {
        let env = GeneratorEnv::new();
        let file = parse_axiom_file(&text, &env);
        let judgment = parse_judgment(text.trim(), &GeneratorEnv::new());
        assert!(file.is_ok() || judgment.is_ok(), "{name}: {file:?}");
    }
}

#[test]
fn table_seeds_parse() {
    for (name, text) in seeds("coloring_table") {
        ColoringSpec::parse_table(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn certificate_seeds_round_trip() {
    for (name, text) in seeds("certificate_json") {
        let cert = Certificate::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            Certificate::from_json(&cert.to_json()).unwrap(),
            cert,
            "{name}"
        );
    }
}
