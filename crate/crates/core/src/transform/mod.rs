//! Exact Fourier transforms of integrable rational functions via residues,
//! half-plane vanishing, the Mellin strip and its Fourier bridge, and the
//! derivative and integration-by-parts relations.
//!
//! For an L¹ rational function the transform is a finite sum per half-line:
//! on the branch handled by the half-plane σ,
//!
//! ```text
//! F[f](ξ) = σ·i2π · Σ_{ω : σ·Im ω > 0} e^{-i2πωξ} Σ_{j=1}^{μ(ω)} P_ω^j (-i2πξ)^{j-1}/(j-1)!
//! ```
//!
//! with the ξ<0 branch collecting the upper-half-plane poles and the ξ>0
//! branch the lower ones. The σ·i2π prefactor comes from the contour
//! argument and is cross-checked against quadrature in the test suites.

use crate::expr::Expr;
use crate::rational::{
    classify_integrability, partial_fractions, RationalError, RationalFn, REAL_POLE_TOL,
};
use crate::series::{expand_at, leading_data, Boundary, Coords, Sign};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("function is not L¹ on ℝ (degree gap {gap}, {real_poles} real pole(s))")]
    NotL1 { gap: i64, real_poles: usize },
    #[error("pole on the nonnegative real axis at {0}")]
    PoleOnPositiveAxis(Complex64),
    #[error("not integrable near 0⁺: leading exponent {0}")]
    NotIntegrableAtZero(f64),
    #[error("not integrable at +∞: leading exponent {0}")]
    NotIntegrableAtInfinity(f64),
    #[error("Re(s) = {0} lies outside the Mellin strip ({1}, {2})")]
    OutsideStrip(f64, f64, f64),
    #[error("the integration-by-parts relation needs ξ ≠ 0")]
    ZeroFrequency,
    #[error("degree gap {gap} too small for derivative order {k} (need ≥ k+2)")]
    InsufficientDecay { gap: i64, k: u32 },
    #[error("unsupported class: {0}")]
    UnsupportedClass(String),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error("bridge oracle failed: {0}")]
    Bridge(String),
}

/// One closed-form branch term: `e^{-i2πωξ} · Σ_k poly[k]·ξ^k`.
#[derive(Clone, Debug)]
pub struct BranchTerm {
    pub omega: Complex64,
    pub poly: Vec<Complex64>,
}

impl BranchTerm {
    fn eval(&self, xi: f64) -> Complex64 {
        let mut p = Complex64::new(0.0, 0.0);
        for c in self.poly.iter().rev() {
            p = p * xi + c;
        }
        (-Complex64::i() * 2.0 * PI * self.omega * xi).exp() * p
    }
}

/// Exact Fourier transform of an integrable rational function, stored as
/// one polynomial-times-exponential sum per half-line.
#[derive(Clone, Debug)]
pub struct FourierClosedForm {
    /// Branch for ξ < 0: poles with Im ω > 0.
    pub xi_neg: Vec<BranchTerm>,
    /// Branch for ξ > 0: poles with Im ω < 0.
    pub xi_pos: Vec<BranchTerm>,
    pub value_at_zero: Complex64,
}

impl FourierClosedForm {
    pub fn to_json(&self) -> serde_json::Value {
        let term = |t: &BranchTerm| {
            serde_json::json!({
                "omega_re": t.omega.re,
                "omega_im": t.omega.im,
                "poly": t.poly.iter().map(|c| serde_json::json!({"re": c.re, "im": c.im})).collect::<Vec<_>>(),
            })
        };
        serde_json::json!({
            "xi_neg": self.xi_neg.iter().map(term).collect::<Vec<_>>(),
            "xi_pos": self.xi_pos.iter().map(term).collect::<Vec<_>>(),
            "at_zero": {"re": self.value_at_zero.re, "im": self.value_at_zero.im},
        })
    }
}

/// Residue-series Fourier transform of an L¹ rational function.
pub fn fourier_closed_form(f: &RationalFn) -> Result<FourierClosedForm, TransformError> {
    let report = classify_integrability(f)?;
    if !report.l1_on_r {
        return Err(TransformError::NotL1 {
            gap: report.degree_gap,
            real_poles: report.real_poles.len(),
        });
    }
    let pf = partial_fractions(f)?;
    let mut xi_neg = Vec::new();
    let mut xi_pos = Vec::new();
    for pole in &pf.poles {
        let sigma = if pole.location.im > 0.0 { 1.0 } else { -1.0 };
        let factor = Complex64::i() * 2.0 * PI * sigma;
        let m2pi = -Complex64::i() * 2.0 * PI;
        let mut poly = Vec::with_capacity(pole.order);
        let mut fact = 1.0;
        let mut pw = Complex64::new(1.0, 0.0);
        for (jm1, p) in pole.principal.iter().enumerate() {
            if jm1 > 0 {
                fact *= jm1 as f64;
                pw *= m2pi;
            }
            poly.push(factor * p * pw / fact);
        }
        // trim trailing zeros from vanishing top principal coefficients
        while poly.last().map_or(false, |c| c.norm() == 0.0) {
            poly.pop();
        }
        let term = BranchTerm {
            omega: pole.location,
            poly,
        };
        if sigma > 0.0 {
            xi_neg.push(term);
        } else {
            xi_pos.push(term);
        }
    }
    let limit = |branch: &[BranchTerm]| -> Complex64 {
        branch
            .iter()
            .map(|t| t.poly.first().copied().unwrap_or(Complex64::new(0.0, 0.0)))
            .sum()
    };
    let value_at_zero = if !xi_neg.is_empty() {
        limit(&xi_neg)
    } else {
        limit(&xi_pos)
    };
    Ok(FourierClosedForm {
        xi_neg,
        xi_pos,
        value_at_zero,
    })
}

/// Branch-dispatched evaluation of a closed form.
pub fn eval_fourier_cf(cf: &FourierClosedForm, xi: f64) -> Complex64 {
    if xi == 0.0 {
        return cf.value_at_zero;
    }
    let branch = if xi < 0.0 { &cf.xi_neg } else { &cf.xi_pos };
    branch.iter().map(|t| t.eval(xi)).sum()
}

/// Per-side vanishing of the transform: the flag for σ is true when the
/// σ half-plane is pole-free, i.e. `f` extends analytically there and
/// `F[f]` vanishes on the closed half-line {σξ ≤ 0}.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HalfPlaneVanishing {
    pub plus: bool,
    pub minus: bool,
}

pub fn half_plane_vanishing(f: &RationalFn) -> Result<HalfPlaneVanishing, TransformError> {
    let cf = fourier_closed_form(f)?;
    Ok(HalfPlaneVanishing {
        plus: cf.xi_neg.is_empty(),
        minus: cf.xi_pos.is_empty(),
    })
}

/// Vertical strip of definition of the Mellin transform.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MellinStrip {
    pub alpha: f64,
    pub beta: f64,
}

/// Strip endpoints from the leading exponents: α = −LE₁ at 0⁺ and
/// β = −LE₁ at +∞ in affine coordinates.
pub fn mellin_strip(f: &RationalFn) -> Result<MellinStrip, TransformError> {
    for p in crate::rational::effective_poles(f)? {
        if p.location.im.abs() < REAL_POLE_TOL && p.location.re > -REAL_POLE_TOL {
            return Err(TransformError::PoleOnPositiveAxis(p.location));
        }
    }
    let at_zero = expand_at(f, &Boundary::zero_plus(), 1)
        .map_err(|_| TransformError::UnsupportedClass("expansion at 0⁺ failed".into()))?;
    let le0 = leading_data(&at_zero)
        .map(|l| l.le1)
        .unwrap_or(f64::INFINITY);
    if le0 <= -1.0 {
        return Err(TransformError::NotIntegrableAtZero(le0));
    }
    let at_inf = expand_at(f, &Boundary::infinity(Sign::Plus, Coords::Affine), 1)
        .map_err(|_| TransformError::UnsupportedClass("expansion at +∞ failed".into()))?;
    let le_inf = leading_data(&at_inf)
        .map(|l| l.le1)
        .unwrap_or(f64::NEG_INFINITY);
    if le_inf >= -1.0 {
        return Err(TransformError::NotIntegrableAtInfinity(le_inf));
    }
    Ok(MellinStrip {
        alpha: -le0,
        beta: -le_inf,
    })
}

/// The exponential pullback `E^c[f](t) = e^{ct} f(e^t)`.
///
/// Carried as a wrapped evaluator over the base expression; for rational
/// `f` the Mellin strip fixes two-sided exponential decay rates used by
/// the bridge quadrature.
pub struct EcFunction {
    pub c: f64,
    expr: Expr,
    strip: Option<MellinStrip>,
}

impl EcFunction {
    pub fn eval(&self, t: f64) -> Complex64 {
        let u = t.exp();
        let v = crate::expr::eval_real(&self.expr, u).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        v * (c64(self.c, 0.0) * t).exp()
    }

    /// Exponential decay rates at (−∞, +∞), available when the strip is
    /// known and `c` lies inside it.
    pub fn decay_rates(&self) -> Option<(f64, f64)> {
        self.strip.map(|s| (self.c - s.alpha, s.beta - self.c))
    }
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Build the exponential pullback of a grammar function.
pub fn ec_transform(e: &Expr, c: f64) -> EcFunction {
    let strip = RationalFn::from_expr(e)
        .ok()
        .and_then(|rf| mellin_strip(&rf).ok());
    EcFunction {
        c,
        expr: e.clone(),
        strip,
    }
}

/// Mellin transform through the Fourier bridge:
/// `M[f](s) = F[E^{Re s}[f]](−Im(s)/2π)`.
///
/// The bridge closure supplies the Fourier quadrature of the wrapped
/// evaluator; `Re(s)` must lie inside the Mellin strip.
pub fn mellin_eval(
    f: &Expr,
    s: Complex64,
    bridge: &mut dyn FnMut(&EcFunction, f64) -> Result<Complex64, String>,
) -> Result<Complex64, TransformError> {
    let rf =
        RationalFn::from_expr(f).map_err(|e| TransformError::UnsupportedClass(e.to_string()))?;
    let strip = mellin_strip(&rf)?;
    if !(s.re > strip.alpha && s.re < strip.beta) {
        return Err(TransformError::OutsideStrip(s.re, strip.alpha, strip.beta));
    }
    let ec = EcFunction {
        c: s.re,
        expr: f.clone(),
        strip: Some(strip),
    };
    let xi = -s.im / (2.0 * PI);
    bridge(&ec, xi).map_err(TransformError::Bridge)
}

/// Max deviation between the finite-difference k-th derivative of the
/// closed form and the closed form of `(-i2πt)^k f`, over the samples.
pub fn derivative_relation_check(
    f: &RationalFn,
    k: u32,
    xi_samples: &[f64],
) -> Result<f64, TransformError> {
    let gap = f.degree_gap();
    if gap < k as i64 + 2 {
        return Err(TransformError::InsufficientDecay { gap, k });
    }
    let cf = fourier_closed_form(f)?;
    let scale = (-Complex64::i() * 2.0 * PI).powu(k);
    let g = f.mul_power(k).scale(scale);
    let cf_g = fourier_closed_form(&g)?;
    let h = 1e-4;
    let mut worst = 0.0_f64;
    for &xi in xi_samples {
        let fd = central_difference(&cf, xi, k, h);
        let rhs = eval_fourier_cf(&cf_g, xi);
        worst = worst.max((fd - rhs).norm());
    }
    Ok(worst)
}

fn central_difference(cf: &FourierClosedForm, x: f64, k: u32, h: f64) -> Complex64 {
    let f = |t: f64| eval_fourier_cf(cf, t);
    match k {
        0 => f(x),
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => {
            (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h)
        }
        _ => {
            (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h))
                / (h * h * h * h)
        }
    }
}

/// Residual of `F[f](ξ) − F[f'](ξ)/(i2πξ)`, both sides in closed form.
pub fn ibp_relation_check(f: &RationalFn, xi: f64) -> Result<f64, TransformError> {
    if xi == 0.0 {
        return Err(TransformError::ZeroFrequency);
    }
    let report = classify_integrability(f)?;
    if !report.l1_on_r || !report.continuous_on_r {
        return Err(TransformError::NotL1 {
            gap: report.degree_gap,
            real_poles: report.real_poles.len(),
        });
    }
    let cf = fourier_closed_form(f)?;
    let df = f.derivative();
    let cf_d = fourier_closed_form(&df)?;
    let lhs = eval_fourier_cf(&cf, xi);
    let rhs = eval_fourier_cf(&cf_d, xi) / (Complex64::i() * 2.0 * PI * xi);
    Ok((lhs - rhs).norm())
}

/// Strip widths, sector angles, and the identities tying them to the
/// transform decay rates for this class.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DeltaReport {
    pub delta_h: (f64, f64),
    /// Equal to `delta_h` for rational functions, by the residue series.
    pub delta_f_exact: (f64, f64),
    pub theta_h: (f64, f64),
    /// Equal to `theta_h` for this class, through the exponential bridge.
    pub delta_m: (f64, f64),
}

pub fn delta_report(f: &RationalFn) -> Result<DeltaReport, TransformError> {
    let delta_h = crate::rational::strip_widths(f)?;
    let theta_h = crate::rational::sector_angles(f)?;
    Ok(DeltaReport {
        delta_h,
        delta_f_exact: delta_h,
        theta_h,
        delta_m: theta_h,
    })
}
