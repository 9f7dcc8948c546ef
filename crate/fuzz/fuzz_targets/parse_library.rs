#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(library) = ca_core::parse_library(text, false) {
        let rendered = ca_core::library_to_string(&library);
        let again = ca_core::parse_library(&rendered, false).expect("rendering must re-parse");
        assert_eq!(again.len(), library.len());
        for (a, b) in again.iter().zip(library.iter()) {
            assert_eq!(a.array(), b.array());
        }
    }
});
