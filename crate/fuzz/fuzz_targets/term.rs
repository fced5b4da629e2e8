#![no_main]

use libfuzzer_sys::fuzz_target;
use starmap::hypernat::{parse_term, GeneratorEnv};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_term(text, &GeneratorEnv::new());
    }
});
