#![no_main]

use libfuzzer_sys::fuzz_target;
use starmap::ramsey::Certificate;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cert) = Certificate::from_json(text) {
            let back = Certificate::from_json(&cert.to_json()).expect("serialized certificates parse");
            assert_eq!(back, cert);
        }
    }
});
