#![no_main]

use entgate::ketparse::{parse_document, render_document, render_state};
use libfuzzer_sys::fuzz_target;

// Whatever parses must render to text that parses back to the same state.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_document(text) else { return };
    let again = parse_document(&render_state(&doc.state)).expect("rendered state parses");
    assert_eq!(again.state, doc.state);
    let full = parse_document(&render_document(&doc.state)).expect("rendered document parses");
    assert_eq!(full.state, doc.state);
});
