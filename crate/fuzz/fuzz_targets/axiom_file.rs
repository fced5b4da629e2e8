#![no_main]

use libfuzzer_sys::fuzz_target;
use starmap::hypernat::GeneratorEnv;
use starmap::uequiv::{parse_axiom_file, parse_judgment};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let env = GeneratorEnv::new();
        let _ = parse_axiom_file(text, &env);
        let _ = parse_judgment(text, &env);
    }
});
