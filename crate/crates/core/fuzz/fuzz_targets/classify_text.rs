#![no_main]

use entgate::criterion::{classify, ClassifyOptions};
use libfuzzer_sys::fuzz_target;

// Parsed states go through the whole pipeline; witnesses must expand back.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(state) = entgate::ketparse::parse_state(text) else {
        return;
    };
    if state.m() > 64 {
        return;
    }
    let v = classify(
        &state,
        &ClassifyOptions {
            oracle_cap: 12,
            force_oracle: false,
        },
    );
    if let Some(w) = &v.witness {
        assert_eq!(w.expand().as_ref(), Ok(&state));
    }
});
