#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(c) = starmap::parse(text) {
            // printed forms parse back to the same word
            let again = starmap::parse(&starmap::pretty(&c)).expect("pretty output parses");
            assert_eq!(again.normalize(), c.normalize());
        }
    }
});
