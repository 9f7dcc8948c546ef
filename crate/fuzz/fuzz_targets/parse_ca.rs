#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(array) = ca_core::parse_ca(text) {
        // anything accepted must round-trip bit-exactly
        let rendered = ca_core::ca_to_string(&array);
        let again = ca_core::parse_ca(&rendered).expect("rendering must re-parse");
        assert_eq!(again, array);
    }
});
