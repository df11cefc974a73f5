//! Shared fixtures for the integration suites.

use num_complex::Complex64;
use stripft::rational::RationalFn;
use stripft::{parse, Expr};

/// Integrable rational corpus: every entry is L¹ on ℝ.
pub const CORPUS_L1: &[&str] = &[
    "1/(1+t^2)",
    "1/(t-i)^2",
    "1/((t-i)*(t-2*i))",
    "1/((t+i)*(t+2*i))",
    "1/(1+t^2)^2",
    "(t+1)/(1+t^4)",
    "t/(1+t^4)",
    "1/(t^2-2*t+2)",
    "1/(4+t^2)",
];

/// Corpus members with no poles on ℝ≥0 (Mellin-admissible).
pub const CORPUS_MELLIN: &[&str] = &[
    "1/(1+t^2)",
    "1/(1+t^2)^2",
    "(t+1)/(1+t^4)",
    "t/(1+t^4)",
    "1/(1+t)^3",
];

pub fn expr(s: &str) -> Expr {
    parse(s).unwrap_or_else(|e| panic!("fixture {:?} must parse: {}", s, e))
}

pub fn rf(s: &str) -> RationalFn {
    RationalFn::from_expr(&expr(s)).unwrap_or_else(|e| panic!("fixture {:?}: {}", s, e))
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
