#![no_main]

use libfuzzer_sys::fuzz_target;
use starmap::ramsey::ColoringSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = ColoringSpec::parse_table(text) {
            let _ = spec.digest();
        }
    }
});
