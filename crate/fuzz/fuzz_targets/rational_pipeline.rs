#![no_main]

use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

// Drive the analysis entry points reachable from untrusted text: rational
// extraction, integrability, strips, sectors, and point evaluation must
// return structured errors rather than panic. The parser itself bounds
// nesting depth and expanded polynomial degree; the extra degree guard
// here only keeps per-input root finding fast.
fuzz_target!(|data: &[u8]| {
    if data.len() > 256 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(e) = stripft::parse(text) else { return };
    let _ = stripft::expr::eval_real(&e, 0.75);
    let _ = stripft::expr::eval_complex(&e, Complex64::new(0.3, 0.2));
    if e.degree_hint() > 48 {
        return;
    }
    if let Ok(rf) = stripft::RationalFn::from_expr(&e) {
        let _ = stripft::rational::classify_integrability(&rf);
        let _ = stripft::rational::strip_widths(&rf);
        let _ = stripft::rational::sector_angles(&rf);
        let _ = stripft::rational::entire_check(&rf);
    }
});
