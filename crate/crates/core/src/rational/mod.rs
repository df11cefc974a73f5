//! Complex polynomials and rational functions: root finding, partial
//! fractions, integrability and smoothness classification, strip widths and
//! sector angles, and rationality detection from Taylor coefficients.

mod pf;
mod recon;
mod roots;

pub use pf::{partial_fractions, PartialFractions};
pub use recon::{degree_bound, rationality_test, taylor_coeffs, DegreeBound, RationalityResult};
pub use roots::roots;

use crate::expr::Expr;
use crate::scalar::{Coeff, GaussianRational};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Tolerance below which an imaginary part marks a pole as lying on the
/// real axis, poisoning L¹ and strip analyses.
pub const REAL_POLE_TOL: f64 = 1e-9;

/// Default relative residual for the root refiner.
pub const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum RationalError {
    #[error("expression is not rational: contains {0}")]
    NotRational(&'static str),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("polynomial degree must be at least 1")]
    DegreeTooSmall,
    #[error("tolerance must lie in (0, 1e-6]")]
    BadTolerance,
    #[error("root refinement did not converge; best residual {best_residual:e}")]
    NoConvergence { best_residual: f64 },
    #[error("partial-fraction verification failed: max relative error {0:e}")]
    Verification(f64),
    #[error("need at least {need} coefficients, got {got}")]
    InsufficientCoefficients { need: usize, got: usize },
    #[error("Taylor coefficients at 0 require den(0) != 0")]
    PoleAtOrigin,
}

/// Dense complex polynomial, ascending coefficients, no stored trailing
/// zeros. The zero polynomial is the empty list. Exactness is per
/// coefficient; a polynomial is exact when all coefficients are.
#[derive(Clone, Debug)]
pub struct CPoly {
    coeffs: Vec<Coeff>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::new(vec![c])
    }

    pub fn var() -> Self {
        Self::new(vec![Coeff::zero(), Coeff::one()])
    }

    pub fn from_c64_slice(cs: &[Complex64]) -> Self {
        Self::new(cs.iter().map(|&z| Coeff::from_c64(z)).collect())
    }

    pub fn from_int_slice(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&n| Coeff::from_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Coeff {
        self.coeffs.get(k).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn leading(&self) -> Option<&Coeff> {
        self.coeffs.last()
    }

    pub fn to_c64_vec(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_c64()).collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    /// Σ|c_k| |z|^k, the natural magnitude scale of an evaluation.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.to_c64().norm();
        }
        acc
    }

    pub fn eval_exact(&self, z: &GaussianRational) -> Option<GaussianRational> {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c.exact()?;
        }
        Some(acc)
    }

    pub fn add(&self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&rhs.coeff(k)));
        }
        CPoly::new(out)
    }

    pub fn sub(&self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).sub(&rhs.coeff(k)));
        }
        CPoly::new(out)
    }

    pub fn neg(&self) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![Coeff::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            for (k, b) in rhs.coeffs.iter().enumerate() {
                out[j + k] = out[j + k].add(&a.mul(b));
            }
        }
        CPoly::new(out)
    }

    pub fn scale(&self, c: &Coeff) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn pow(&self, k: u32) -> CPoly {
        let mut acc = CPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: `self = q*rhs + r` with `deg r < deg rhs`.
    pub fn divrem(&self, rhs: &CPoly) -> Option<(CPoly, CPoly)> {
        let dd = rhs.degree()?;
        let lead_inv = rhs.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let dn = match self.degree() {
            Some(d) if d >= dd => d,
            _ => return Some((CPoly::zero(), self.clone())),
        };
        let mut quot = vec![Coeff::zero(); dn - dd + 1];
        for k in (dd..=dn).rev() {
            let c = rem[k].mul(&lead_inv);
            if !c.is_zero() {
                for j in 0..=dd {
                    let t = rhs.coeffs[j].mul(&c);
                    rem[k - dd + j] = rem[k - dd + j].sub(&t);
                }
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Some((CPoly::new(quot), CPoly::new(rem)))
    }

    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul(&Coeff::from_int(k as i64)));
        }
        CPoly::new(out)
    }

    /// Leading coefficient scaled to one.
    pub fn monic(&self) -> CPoly {
        match self.leading() {
            None => CPoly::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Coefficients of `p(a + x)` (Taylor recentering), exactness preserved.
    pub fn shift(&self, a: &Coeff) -> CPoly {
        // repeated synthetic division by (x - a)
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            // divide work by (x - a): remainder is p_k coefficient
            let mut carry = Coeff::zero();
            for c in work.iter_mut().rev() {
                let v = c.add(&carry.mul(a));
                carry = v.clone();
                *c = v;
            }
            out.push(work.remove(0));
            let _ = k;
        }
        CPoly::new(out)
    }

    /// Coefficients of `p(s*x)`.
    pub fn scale_arg(&self, s: &Coeff) -> CPoly {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut p = Coeff::one();
        for c in &self.coeffs {
            out.push(c.mul(&p));
            p = p.mul(s);
        }
        CPoly::new(out)
    }

    /// `x^deg * p(1/x)`: coefficient reversal.
    pub fn reversed(&self) -> CPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        CPoly::new(c)
    }

    /// Greatest common divisor, exact coefficients only; returns monic gcd.
    pub fn gcd_exact(&self, rhs: &CPoly) -> Option<CPoly> {
        if !self.is_exact() || !rhs.is_exact() {
            return None;
        }
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Some(CPoly::zero())
        } else {
            Some(a.monic())
        }
    }
}

impl PartialEq for CPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.sub(b).is_zero())
    }
}

/// Quotient of complex polynomials. Exact inputs are reduced (constant gcd)
/// with a monic denominator; float inputs are kept as given and downstream
/// root clustering absorbs near-cancellations.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    pub num: CPoly,
    pub den: CPoly,
}

impl RationalFn {
    pub fn new(num: CPoly, den: CPoly) -> Result<Self, RationalError> {
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        let mut f = Self { num, den };
        f.reduce();
        Ok(f)
    }

    pub fn from_polys_unchecked(num: CPoly, den: CPoly) -> Self {
        Self { num, den }
    }

    fn reduce(&mut self) {
        if !(self.num.is_exact() && self.den.is_exact()) {
            return;
        }
        if let Some(g) = self.num.gcd_exact(&self.den) {
            if g.degree().unwrap_or(0) >= 1 {
                self.num = self.num.divrem(&g).unwrap().0;
                self.den = self.den.divrem(&g).unwrap().0;
            }
        }
        let lead = self.den.leading().unwrap().clone();
        if let Some(inv) = lead.inv() {
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    /// Build from a parsed expression; fails on power-log or phase nodes.
    pub fn from_expr(e: &Expr) -> Result<Self, RationalError> {
        let (num, den) = Self::pair_from_expr(e)?;
        Self::new(num, den)
    }

    fn pair_from_expr(e: &Expr) -> Result<(CPoly, CPoly), RationalError> {
        match e {
            Expr::Const(c) => Ok((CPoly::constant(Coeff::Exact(c.clone())), CPoly::one())),
            Expr::Var => Ok((CPoly::var(), CPoly::one())),
            Expr::Neg(x) => {
                let (n, d) = Self::pair_from_expr(x)?;
                Ok((n.neg(), d))
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (na, da) = Self::pair_from_expr(a)?;
                let (nb, db) = Self::pair_from_expr(b)?;
                let cross = nb.mul(&da);
                let lhs = na.mul(&db);
                let n = if matches!(e, Expr::Add(..)) {
                    lhs.add(&cross)
                } else {
                    lhs.sub(&cross)
                };
                Ok((n, da.mul(&db)))
            }
            Expr::Mul(a, b) => {
                let (na, da) = Self::pair_from_expr(a)?;
                let (nb, db) = Self::pair_from_expr(b)?;
                Ok((na.mul(&nb), da.mul(&db)))
            }
            Expr::Div(a, b) => {
                let (na, da) = Self::pair_from_expr(a)?;
                let (nb, db) = Self::pair_from_expr(b)?;
                if nb.is_zero() {
                    return Err(RationalError::ZeroDenominator);
                }
                Ok((na.mul(&db), da.mul(&nb)))
            }
            Expr::Pow(b, k) => {
                let (n, d) = Self::pair_from_expr(b)?;
                Ok((n.pow(*k), d.pow(*k)))
            }
            Expr::CPow(_) => Err(RationalError::NotRational("a complex power of t")),
            Expr::Log => Err(RationalError::NotRational("a logarithm")),
            Expr::Phase(_) => Err(RationalError::NotRational("an oscillatory factor")),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn is_exact(&self) -> bool {
        self.num.is_exact() && self.den.is_exact()
    }

    /// deg den − deg num; the zero function reports `i64::MAX`.
    pub fn degree_gap(&self) -> i64 {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => i64::MAX,
            (Some(n), Some(d)) => d as i64 - n as i64,
            (Some(_), None) => unreachable!("denominator is nonzero"),
        }
    }

    /// Derivative by the quotient rule, unreduced degrees kept in check by
    /// the exact reduction in `new`.
    pub fn derivative(&self) -> RationalFn {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let d = self.den.mul(&self.den);
        RationalFn::new(n, d).expect("denominator square is nonzero")
    }

    pub fn add(&self, rhs: &RationalFn) -> RationalFn {
        let n = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let d = self.den.mul(&rhs.den);
        RationalFn::new(n, d).expect("product of nonzero denominators")
    }

    pub fn scale(&self, c: Complex64) -> RationalFn {
        RationalFn::from_polys_unchecked(self.num.scale(&Coeff::from_c64(c)), self.den.clone())
    }

    /// `f(t) * t^k`, used by the derivative-relation machinery.
    pub fn mul_power(&self, k: u32) -> RationalFn {
        let mut shifted = vec![Coeff::zero(); k as usize];
        shifted.extend(self.num.coeffs().iter().cloned());
        RationalFn::from_polys_unchecked(CPoly::new(shifted), self.den.clone())
    }
}

/// One pole with its order and principal-part coefficients `P^1..P^μ`
/// (coefficients of `(t-ω)^{-1}..(t-ω)^{-μ}`).
#[derive(Clone, Debug)]
pub struct Pole {
    pub location: Complex64,
    pub order: usize,
    pub principal: Vec<Complex64>,
}

impl Pole {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "re": self.location.re,
            "im": self.location.im,
            "order": self.order,
            "principal": self.principal.iter().enumerate().map(|(k, p)| {
                serde_json::json!({"j": k + 1, "re": p.re, "im": p.im})
            }).collect::<Vec<_>>(),
        })
    }
}

/// L¹/continuity/smoothness classification of a rational function on ℝ.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrabilityReport {
    pub l1_on_r: bool,
    pub continuous_on_r: bool,
    pub smooth_on_r: bool,
    #[serde(skip)]
    pub real_poles: Vec<Pole>,
    pub degree_gap: i64,
}

/// Classify integrability and smoothness of `f` on the real line.
///
/// A rational function is smooth exactly where it is analytic, so
/// smoothness and continuity coincide here: both fail precisely on a real
/// pole. Integrability needs a pole-free axis and a degree gap of at
/// least 2.
pub fn classify_integrability(f: &RationalFn) -> Result<IntegrabilityReport, RationalError> {
    let gap = f.degree_gap();
    let real_poles: Vec<Pole> = if f.den.degree().unwrap_or(0) == 0 {
        Vec::new()
    } else {
        partial_fractions(f)?
            .poles
            .into_iter()
            .filter(|p| p.location.im.abs() < REAL_POLE_TOL)
            .collect()
    };
    let no_real = real_poles.is_empty();
    Ok(IntegrabilityReport {
        l1_on_r: no_real && gap >= 2,
        continuous_on_r: no_real,
        smooth_on_r: no_real,
        real_poles,
        degree_gap: gap,
    })
}

/// Per-side holomorphic strip widths `(δ₊, δ₋)`: the minimum |Im ω| over
/// poles in the corresponding open half-plane, +∞ on a pole-free side, and
/// 0 on both sides when a pole sits on the axis.
pub fn strip_widths(f: &RationalFn) -> Result<(f64, f64), RationalError> {
    let poles = effective_poles(f)?;
    if poles.iter().any(|p| p.location.im.abs() < REAL_POLE_TOL) {
        return Ok((0.0, 0.0));
    }
    let mut up = f64::INFINITY;
    let mut down = f64::INFINITY;
    for p in &poles {
        if p.location.im > 0.0 {
            up = up.min(p.location.im);
        } else {
            down = down.min(-p.location.im);
        }
    }
    Ok((up, down))
}

/// Per-side sector angles `(θ₊, θ₋)` about the positive real axis: the
/// least counterclockwise (resp. clockwise) rotation that meets a pole,
/// +∞ when there are no poles, and 0 on both sides for a pole on ℝ≥0.
pub fn sector_angles(f: &RationalFn) -> Result<(f64, f64), RationalError> {
    let poles = effective_poles(f)?;
    if poles
        .iter()
        .any(|p| p.location.im.abs() < REAL_POLE_TOL && p.location.re > -REAL_POLE_TOL)
    {
        return Ok((0.0, 0.0));
    }
    let mut plus = f64::INFINITY;
    let mut minus = f64::INFINITY;
    for p in &poles {
        let arg = p.location.im.atan2(p.location.re);
        let ccw = if arg > 0.0 {
            arg
        } else {
            2.0 * std::f64::consts::PI + arg
        };
        plus = plus.min(ccw);
        minus = minus.min(2.0 * std::f64::consts::PI - ccw);
    }
    Ok((plus, minus))
}

/// Entire-extension check: true exactly when the reduced denominator is
/// constant, in which case the polynomial is returned.
pub fn entire_check(f: &RationalFn) -> Result<(bool, Option<CPoly>), RationalError> {
    if f.is_exact() {
        // construction reduced the fraction already
        if f.den.degree().unwrap_or(0) == 0 {
            let inv = f.den.leading().unwrap().inv().unwrap();
            return Ok((true, Some(f.num.scale(&inv))));
        }
        return Ok((false, None));
    }
    let pf = partial_fractions(f)?;
    let scale = pf
        .poles
        .iter()
        .flat_map(|p| p.principal.iter())
        .map(|c| c.norm())
        .fold(1.0_f64, f64::max);
    let entire = pf
        .poles
        .iter()
        .all(|p| p.principal.iter().all(|c| c.norm() <= 1e-10 * scale));
    if entire {
        Ok((true, Some(pf.polynomial_part)))
    } else {
        Ok((false, None))
    }
}

/// Poles that survive after discarding numerically removable singularities
/// (all principal coefficients at noise level).
pub fn effective_poles(f: &RationalFn) -> Result<Vec<Pole>, RationalError> {
    if f.den.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let pf = partial_fractions(f)?;
    let scale = pf
        .poles
        .iter()
        .flat_map(|p| p.principal.iter())
        .map(|c| c.norm())
        .fold(1.0_f64, f64::max);
    Ok(pf
        .poles
        .into_iter()
        .filter(|p| p.principal.iter().any(|c| c.norm() > 1e-10 * scale))
        .collect())
}

#[cfg(test)]
pub(crate) mod tests;
