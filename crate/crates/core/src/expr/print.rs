//! Canonical minimal-parenthesis printer.
//!
//! The printer is a fixpoint through the parser: for any expression `e`,
//! `print(parse(print(e))) == print(e)`.

use super::Expr;
use crate::scalar::GaussianRational;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

pub fn print(e: &Expr) -> String {
    let (s, _) = render(e);
    s
}

/// Renders a node and reports the loosest precedence level at which the
/// string may be embedded without parentheses.
fn render(e: &Expr) -> (String, u8) {
    match e {
        Expr::Const(c) => render_const(c),
        Expr::Var => ("t".into(), PREC_ATOM),
        Expr::Neg(x) => {
            let s = child(x, PREC_NEG);
            (format!("-{}", s), PREC_NEG)
        }
        Expr::Add(a, b) => {
            let sa = child(a, PREC_ADD);
            let sb = child(b, PREC_ADD + 1);
            (format!("{}+{}", sa, sb), PREC_ADD)
        }
        Expr::Sub(a, b) => {
            let sa = child(a, PREC_ADD);
            let sb = child(b, PREC_ADD + 1);
            (format!("{}-{}", sa, sb), PREC_ADD)
        }
        Expr::Mul(a, b) => {
            let sa = child(a, PREC_MUL);
            let sb = child(b, PREC_MUL + 1);
            (format!("{}*{}", sa, sb), PREC_MUL)
        }
        Expr::Div(a, b) => {
            let sa = child(a, PREC_MUL);
            let sb = child(b, PREC_MUL + 1);
            (format!("{}/{}", sa, sb), PREC_MUL)
        }
        Expr::Pow(b, k) => {
            let sb = child(b, PREC_ATOM);
            (format!("{}^{}", sb, k), PREC_POW)
        }
        Expr::CPow(r) => {
            let exp = if r.im == 0.0 {
                fmt_f64(r.re)
            } else if r.re == 0.0 {
                format!("({}*i)", fmt_f64(r.im))
            } else if r.im < 0.0 {
                format!("({}-{}*i)", fmt_f64(r.re), fmt_f64(-r.im))
            } else {
                format!("({}+{}*i)", fmt_f64(r.re), fmt_f64(r.im))
            };
            // A bare leading minus is admissible after '^'.
            (format!("t^{}", exp), PREC_POW)
        }
        Expr::Log => ("log(t)".into(), PREC_ATOM),
        Expr::Phase(p) => (format!("exp(i*({}))", render_real_poly(p)), PREC_ATOM),
    }
}

fn child(e: &Expr, min_prec: u8) -> String {
    let (s, p) = render(e);
    if p < min_prec {
        format!("({})", s)
    } else {
        s
    }
}

fn render_const(c: &GaussianRational) -> (String, u8) {
    let s = c.to_string();
    // Precedence of the rendered constant under re-parsing: complex values
    // come pre-parenthesized from Display; fractions and explicit products
    // parse at multiplication level; a leading minus parses at unary level.
    let prec = if s.starts_with('(') {
        PREC_ATOM
    } else if s.contains('/') || s.contains('*') {
        PREC_MUL
    } else if s.starts_with('-') {
        PREC_NEG
    } else {
        PREC_ATOM
    };
    (s, prec)
}

fn fmt_f64(x: f64) -> String {
    // Rust's Display for f64 is shortest-round-trip decimal, which the
    // lexer reads back to the same double.
    let s = format!("{}", x);
    debug_assert!(!s.contains('e') && !s.contains("inf") && !s.contains("NaN"));
    s
}

fn render_real_poly(p: &[BigRational]) -> String {
    fn rat(r: &BigRational) -> String {
        if r.is_integer() {
            r.to_integer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = if k == 0 {
            rat(&mag)
        } else {
            let var = if k == 1 {
                "t".to_string()
            } else {
                format!("t^{}", k)
            };
            if mag.is_one() {
                var
            } else {
                format!("{}*{}", rat(&mag), var)
            }
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() {
                format!("-{}", body)
            } else {
                body
            });
        } else {
            parts.push(format!(
                "{}{}",
                if c.is_negative() { "-" } else { "+" },
                body
            ));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.concat()
    }
}
