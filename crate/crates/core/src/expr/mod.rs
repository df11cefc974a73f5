//! Abstract syntax, parsing, printing, classification, and evaluation for
//! the restricted power-constructible grammar.
//!
//! The grammar admits one real variable `t`, exact ℚ(i) constants, field
//! operations with syntactically polynomial denominators, integer powers of
//! arbitrary subexpressions, complex powers `t^r` and `log(t)` of the bare
//! variable (domain `t > 0`), and oscillatory factors `exp(i*P(t))` with a
//! real-coefficient polynomial `P`. Multiplication is always explicit; `^`
//! is the power operator; `i` is the imaginary unit.
//!
//! The published EBNF lives in `docs/grammar.md` next to the crate.

mod eval;
mod lex;
mod parse;
mod print;

pub use eval::{eval_complex, eval_real};
pub use parse::parse;

use crate::scalar::GaussianRational;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// One node of the expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// An exact ℚ(i) constant.
    Const(GaussianRational),
    /// The variable `t`.
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Quotient; the denominator is a syntactically nonzero polynomial.
    Div(Box<Expr>, Box<Expr>),
    /// Integer power, exponent ≥ 2 after normalization.
    Pow(Box<Expr>, u32),
    /// `t^r` for a non-integer exponent, on `t > 0`. Kept as a float pair.
    CPow(Complex64),
    /// `log(t)` on `t > 0`.
    Log,
    /// `exp(i*P(t))` for a real-coefficient polynomial `P` (ascending).
    Phase(Vec<BigRational>),
}

/// Capability class of an expression, ordered by what the analyses can do
/// with it: `Rational` admits everything, `General` only direct evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FunctionClass {
    Rational,
    RationalPhase,
    PowerLog,
    General,
}

impl FunctionClass {
    /// Least upper bound in the capability order (Rational below
    /// RationalPhase and PowerLog, which are incomparable below General).
    pub fn join(self, other: FunctionClass) -> FunctionClass {
        use FunctionClass::*;
        match (self, other) {
            (Rational, x) | (x, Rational) => x,
            (RationalPhase, RationalPhase) => RationalPhase,
            (PowerLog, PowerLog) => PowerLog,
            _ => General,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unsupported construct at offset {offset}: {message}")]
    Unsupported { offset: usize, message: String },
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("evaluation within {tol:e} of a real pole (|den| = {denom_mag:e})")]
    PoleHit { tol: f64, denom_mag: f64 },
    #[error("class {0:?} is not analytically continuable off the real line")]
    NotContinuable(FunctionClass),
}

impl Expr {
    pub fn constant(n: i64) -> Expr {
        Expr::Const(GaussianRational::from_int(n))
    }

    /// Deterministic classification from the tree shape alone.
    ///
    /// Products classify as the join of their factors; sums that share one
    /// common phase factor keep it, while mixed-phase sums fall to
    /// `General`.
    pub fn classify(&self) -> FunctionClass {
        use FunctionClass::*;
        match self {
            Expr::Const(_) | Expr::Var => Rational,
            Expr::CPow(_) | Expr::Log => PowerLog,
            Expr::Phase(_) => RationalPhase,
            Expr::Neg(e) => e.classify(),
            Expr::Pow(e, _) => e.classify(),
            Expr::Mul(a, b) => a.classify().join(b.classify()),
            Expr::Div(n, _) => n.classify(), // denominators are rational by construction
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (ca, cb) = (a.classify(), b.classify());
                match (a.total_phase(), b.total_phase()) {
                    (Some(pa), Some(pb)) if pa == pb => ca.join(cb),
                    _ => {
                        if ca.join(cb) == PowerLog || ca.join(cb) == Rational {
                            ca.join(cb)
                        } else {
                            General
                        }
                    }
                }
            }
        }
    }

    /// Total oscillatory phase `P` when the expression factors as
    /// `g(t) * exp(i*P(t))` with `g` phase-free; `None` when no single
    /// phase can be pulled out.
    pub fn total_phase(&self) -> Option<Vec<BigRational>> {
        match self {
            Expr::Const(_) | Expr::Var | Expr::CPow(_) | Expr::Log => Some(Vec::new()),
            Expr::Phase(p) => Some(p.clone()),
            Expr::Neg(e) => e.total_phase(),
            Expr::Pow(e, k) => {
                let p = e.total_phase()?;
                let k = BigRational::from_integer((*k).into());
                Some(normalize_poly(p.iter().map(|c| c * &k).collect()))
            }
            Expr::Mul(a, b) => {
                let (pa, pb) = (a.total_phase()?, b.total_phase()?);
                Some(poly_add(&pa, &pb))
            }
            Expr::Div(n, _) => n.total_phase(),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (pa, pb) = (a.total_phase()?, b.total_phase()?);
                if pa == pb {
                    Some(pa)
                } else {
                    None
                }
            }
        }
    }

    /// Clone with every phase factor replaced by 1. Meaningful when
    /// `total_phase` returned `Some`: the original equals the stripped
    /// expression times `exp(i*P)`.
    pub fn strip_phase(&self) -> Expr {
        match self {
            Expr::Phase(_) => Expr::constant(1),
            Expr::Const(_) | Expr::Var | Expr::CPow(_) | Expr::Log => self.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.strip_phase())),
            Expr::Pow(e, k) => Expr::Pow(Box::new(e.strip_phase()), *k),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.strip_phase()), Box::new(b.strip_phase())),
            Expr::Div(n, d) => Expr::Div(Box::new(n.strip_phase()), Box::new(d.strip_phase())),
            Expr::Add(a, b) => Expr::Add(Box::new(a.strip_phase()), Box::new(b.strip_phase())),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.strip_phase()), Box::new(b.strip_phase())),
        }
    }

    /// Upper bound on the degree this expression expands to as a
    /// polynomial (saturating); used to refuse pathological nested powers
    /// before anything tries to expand them.
    pub fn degree_hint(&self) -> u64 {
        match self {
            Expr::Const(_) | Expr::Log | Expr::CPow(_) => 0,
            Expr::Var => 1,
            Expr::Neg(e) => e.degree_hint(),
            Expr::Add(a, b) | Expr::Sub(a, b) => a.degree_hint().max(b.degree_hint()),
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.degree_hint().saturating_add(b.degree_hint())
            }
            Expr::Pow(e, k) => e.degree_hint().saturating_mul(*k as u64),
            Expr::Phase(p) => p.len().saturating_sub(1) as u64,
        }
    }

    /// Coefficients (ascending, exact ℚ(i)) when the expression is a
    /// polynomial in `t`; quotients qualify only with constant denominators.
    pub fn poly_coeffs(&self) -> Option<Vec<GaussianRational>> {
        match self {
            Expr::Const(c) if c.is_zero() => Some(Vec::new()),
            Expr::Const(c) => Some(vec![c.clone()]),
            Expr::Var => Some(vec![GaussianRational::zero(), GaussianRational::one()]),
            Expr::Neg(e) => {
                let c = e.poly_coeffs()?;
                Some(c.into_iter().map(|x| -x).collect())
            }
            Expr::Add(a, b) => Some(gpoly_add(&a.poly_coeffs()?, &b.poly_coeffs()?)),
            Expr::Sub(a, b) => {
                let nb: Vec<_> = b.poly_coeffs()?.into_iter().map(|x| -x).collect();
                Some(gpoly_add(&a.poly_coeffs()?, &nb))
            }
            Expr::Mul(a, b) => Some(gpoly_mul(&a.poly_coeffs()?, &b.poly_coeffs()?)),
            Expr::Div(n, d) => {
                let dc = d.poly_coeffs()?;
                if dc.len() == 1 && !dc[0].is_zero() {
                    let inv = dc[0].inv().unwrap();
                    Some(n.poly_coeffs()?.into_iter().map(|c| &c * &inv).collect())
                } else {
                    None
                }
            }
            Expr::Pow(e, k) => {
                let base = e.poly_coeffs()?;
                let mut acc = vec![GaussianRational::one()];
                for _ in 0..*k {
                    acc = gpoly_mul(&acc, &base);
                }
                Some(acc)
            }
            Expr::CPow(_) | Expr::Log | Expr::Phase(_) => None,
        }
    }

    /// Serialize the tree to a JSON value with exact constants as strings.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        fn rat(r: &BigRational) -> String {
            if r.is_integer() {
                r.to_integer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        match self {
            Expr::Const(c) => json!({"kind":"const","re":rat(&c.re),"im":rat(&c.im)}),
            Expr::Var => json!({"kind":"var"}),
            Expr::Neg(e) => json!({"kind":"neg","arg":e.to_json()}),
            Expr::Add(a, b) => json!({"kind":"add","lhs":a.to_json(),"rhs":b.to_json()}),
            Expr::Sub(a, b) => json!({"kind":"sub","lhs":a.to_json(),"rhs":b.to_json()}),
            Expr::Mul(a, b) => json!({"kind":"mul","lhs":a.to_json(),"rhs":b.to_json()}),
            Expr::Div(a, b) => json!({"kind":"div","lhs":a.to_json(),"rhs":b.to_json()}),
            Expr::Pow(e, k) => json!({"kind":"pow","base":e.to_json(),"exp":k}),
            Expr::CPow(r) => json!({"kind":"cpow","re":r.re,"im":r.im}),
            Expr::Log => json!({"kind":"log"}),
            Expr::Phase(p) => {
                json!({"kind":"phase","coeffs":p.iter().map(rat).collect::<Vec<_>>()})
            }
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", print::print(self))
    }
}

pub(crate) fn normalize_poly(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

pub(crate) fn poly_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (k, c) in a.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k] += c;
    }
    normalize_poly(out)
}

fn gpoly_add(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut out = vec![GaussianRational::zero(); a.len().max(b.len())];
    for (k, c) in a.iter().enumerate() {
        out[k] = &out[k] + c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k] = &out[k] + c;
    }
    while out.last().map_or(false, |c| c.is_zero()) {
        out.pop();
    }
    out
}

fn gpoly_mul(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussianRational::zero(); a.len() + b.len() - 1];
    for (j, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[j + k] = &out[j + k] + &(x * y);
        }
    }
    while out.last().map_or(false, |c| c.is_zero()) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests;
