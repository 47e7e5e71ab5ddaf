#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(doc) = entgate::ketparse::parse_document(&text) {
        if let Some(n) = doc.declared_n {
            assert_eq!(n, doc.state.n());
        }
    }
});
