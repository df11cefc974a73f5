#![no_main]

use libfuzzer_sys::fuzz_target;

// The parser must never panic: every input either yields a tree or a
// structured error with a byte offset inside the input.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match stripft::parse(text) {
        Ok(e) => {
            let _ = e.classify();
            let _ = e.total_phase();
            let _ = e.to_json();
        }
        Err(stripft::expr::ExprError::Syntax { offset, .. })
        | Err(stripft::expr::ExprError::Unsupported { offset, .. }) => {
            assert!(offset <= text.len());
        }
        Err(_) => {}
    }
});
