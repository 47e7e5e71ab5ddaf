#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Some(b) = entgate::state::BasisString::from_bit_str(text) {
        assert_eq!(b.to_string(), text);
    }
});
