#![no_main]

use libfuzzer_sys::fuzz_target;

// For every string the grammar accepts, the canonical printer is a
// fixpoint through the parser: print(parse(print(parse(s)))) equals
// print(parse(s)).
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(e) = stripft::parse(text) else { return };
    let once = e.to_string();
    let reparsed = stripft::parse(&once)
        .unwrap_or_else(|err| panic!("printed form {:?} failed to reparse: {}", once, err));
    assert_eq!(once, reparsed.to_string(), "printer is not a fixpoint");
});
