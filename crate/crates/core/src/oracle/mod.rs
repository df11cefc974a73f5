//! Quadrature-based Fourier analysis: the independent numerical check
//! against the closed forms and the decay identities.
//!
//! The Fourier transform of an integrable grammar function is computed by
//! adaptive Gauss–Kronrod panels over a stationary-point-free core plus
//! accelerated oscillatory (or doubling algebraic) tails; improper
//! Riemann–Fourier integrals of oscillatory non-L¹ functions reuse the
//! same segment machinery over the whole line.

mod fit;
mod gk;
mod segments;

pub use fit::{decay_fit, DecayFit};
pub use gk::{adaptive, qk15, AdaptiveResult, QuadError};
pub use segments::{algebraic_tail, averaged_limit, oscillatory_tail, TailSum};

use crate::expr::{Expr, FunctionClass};
use crate::rational::{classify_integrability, roots, CPoly, RationalFn, ROOT_TOL};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use segments::{poly_derive, poly_eval, DEFAULT_AVG_LEVELS};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum OscStrategy {
    /// Segment oscillatory tails at half-period crossings of the total
    /// phase and accelerate the alternating sums.
    PhasePeriodSegments,
    /// Plain truncation at the algebraic tail-bound radius; cruder, kept
    /// for cross-checking the segmented path.
    FixedPanels,
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub osc_strategy: OscStrategy,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_panels: 20_000,
            osc_strategy: OscStrategy::PhasePeriodSegments,
        }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("integrand is not L¹: {0}")]
    NotIntegrable(String),
    #[error("unsupported integrand: {0}")]
    Unsupported(String),
    #[error("convergence precondition fails: {0}")]
    ConvergencePrecondition(String),
    #[error("series acceleration did not converge (estimate {0:e})")]
    AccelerationNonConvergence(f64),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("decay fit: {0}")]
    Fit(String),
}

#[derive(Clone, Debug)]
pub struct RiemannFTResult {
    pub value: Complex64,
    pub segments_used: usize,
    pub acceleration_error_estimate: f64,
}

enum BaseEval {
    Rational {
        num: Vec<Complex64>,
        den: Vec<Complex64>,
    },
    General(Expr),
}

impl BaseEval {
    fn eval(&self, t: f64) -> Complex64 {
        match self {
            BaseEval::Rational { num, den } => {
                let z = Complex64::new(t, 0.0);
                horner(num, z) / horner(den, z)
            }
            BaseEval::General(e) => {
                crate::expr::eval_real(e, t).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            }
        }
    }
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

struct Integrand {
    base: BaseEval,
    /// Total phase Θ(t) = P(t) − 2πξt, ascending real coefficients.
    theta: Vec<f64>,
    /// Restrict to t > 0 (power-log factors present).
    positive_domain: bool,
    /// Decay gap of the rational part, when known.
    gap: Option<i64>,
}

impl Integrand {
    fn eval(&self, t: f64) -> Complex64 {
        let b = self.base.eval(t);
        if self.theta.is_empty() {
            return b;
        }
        b * Complex64::new(0.0, poly_eval(&self.theta, t)).exp()
    }

    fn oscillatory(&self) -> bool {
        self.theta.iter().skip(1).any(|c| *c != 0.0)
    }
}

fn phase_to_f64(p: &[num_rational::BigRational]) -> Vec<f64> {
    p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

fn build_integrand(e: &Expr, xi: f64) -> Result<Integrand, OracleError> {
    let phase = e
        .total_phase()
        .ok_or_else(|| OracleError::Unsupported("no common oscillatory factor".into()))?;
    let stripped = e.strip_phase();
    let positive_domain = matches!(
        e.classify(),
        FunctionClass::PowerLog | FunctionClass::General
    );
    let (base, gap) = match RationalFn::from_expr(&stripped) {
        Ok(rf) => {
            let gap = rf.degree_gap();
            (
                BaseEval::Rational {
                    num: rf.num.to_c64_vec(),
                    den: rf.den.to_c64_vec(),
                },
                Some(gap),
            )
        }
        Err(_) => (BaseEval::General(stripped), None),
    };
    let mut theta = phase_to_f64(&phase);
    while theta.len() < 2 {
        theta.push(0.0);
    }
    theta[1] -= 2.0 * std::f64::consts::PI * xi;
    let theta = trim_poly(theta);
    Ok(Integrand {
        base,
        theta,
        positive_domain,
        gap,
    })
}

fn trim_poly(mut p: Vec<f64>) -> Vec<f64> {
    while p.last().map_or(false, |c| *c == 0.0) {
        p.pop();
    }
    p
}

/// Radius beyond which the integrand has neither poles near the axis nor
/// stationary points of the phase.
fn core_radius(ig: &Integrand) -> f64 {
    let mut r: f64 = 10.0;
    if let BaseEval::Rational { den, .. } = &ig.base {
        let lead = den.last().map(|c| c.norm()).unwrap_or(1.0);
        let cauchy = 1.0
            + den[..den.len().saturating_sub(1)]
                .iter()
                .map(|c| c.norm() / lead)
                .fold(0.0_f64, f64::max);
        r = r.max(1.5 * cauchy + 5.0);
    }
    if ig.theta.len() >= 3 {
        let dtheta = poly_derive(&ig.theta);
        if let Ok(st) = roots(
            &CPoly::from_c64_slice(
                &dtheta
                    .iter()
                    .map(|&c| Complex64::new(c, 0.0))
                    .collect::<Vec<_>>(),
            ),
            ROOT_TOL,
        ) {
            for (z, _) in st {
                r = r.max(1.3 * z.norm() + 3.0);
            }
        }
    }
    r
}

/// Seed points for the core panels: real phase zeros and stationary points.
fn core_seeds(ig: &Integrand, lo: f64, hi: f64) -> Vec<f64> {
    let mut seeds = Vec::new();
    for p in [ig.theta.clone(), poly_derive(&ig.theta)] {
        if p.len() >= 2 {
            let cp = CPoly::from_c64_slice(
                &p.iter()
                    .map(|&c| Complex64::new(c, 0.0))
                    .collect::<Vec<_>>(),
            );
            if let Ok(rs) = roots(&cp, ROOT_TOL) {
                for (z, _) in rs {
                    if z.im.abs() < 1e-6 && z.re > lo && z.re < hi {
                        seeds.push(z.re);
                    }
                }
            }
        }
    }
    // cap panel width so the first refinement pass starts reasonably
    let mut t = lo;
    while t < hi {
        seeds.push(t);
        t += (hi - lo).max(1.0) / 16.0;
    }
    seeds
}

/// Fourier transform by quadrature: `∫ f(t) e^{-i2πξt} dt`.
///
/// Rational integrands are checked for integrability; power-log and
/// general ones are integrated over `t > 0` on the caller's assertion.
pub fn quad_ft(e: &Expr, xi: f64, cfg: &QuadConfig) -> Result<Complex64, OracleError> {
    let ig = build_integrand(e, xi)?;
    if let (Some(gap), BaseEval::Rational { num, den }) = (ig.gap, &ig.base) {
        if !num.is_empty() {
            let rf = RationalFn::from_polys_unchecked(
                CPoly::from_c64_slice(num),
                CPoly::from_c64_slice(den),
            );
            let report =
                classify_integrability(&rf).map_err(|e| OracleError::Unsupported(e.to_string()))?;
            if !report.l1_on_r {
                return Err(OracleError::NotIntegrable(format!(
                    "degree gap {} with {} real pole(s)",
                    gap,
                    report.real_poles.len()
                )));
            }
        }
    }
    integrate_line(&ig, cfg).map(|r| r.value)
}

fn integrate_line(ig: &Integrand, cfg: &QuadConfig) -> Result<RiemannFTResult, OracleError> {
    let r0 = core_radius(ig);
    let mut f = |t: f64| ig.eval(t);
    let (lo, hi) = if ig.positive_domain {
        (0.0, r0)
    } else {
        (-r0, r0)
    };
    let mut seeds = core_seeds(ig, lo, hi);
    if ig.positive_domain {
        // geometric refinement toward the possibly singular origin
        let mut w = r0;
        for _ in 0..60 {
            w *= 0.5;
            seeds.push(w);
            if w < 1e-14 {
                break;
            }
        }
    }
    let core = adaptive(
        &mut f,
        lo,
        hi,
        &seeds,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_panels,
    )?;
    let mut value = core.value;
    let mut est = core.error;
    let mut segments = core.panels;

    let oscillatory = ig.oscillatory() && cfg.osc_strategy == OscStrategy::PhasePeriodSegments;
    for dir in [1.0_f64, -1.0] {
        if dir < 0.0 && ig.positive_domain {
            continue;
        }
        let from = dir * r0;
        let tail = if oscillatory {
            oscillatory_tail(
                &mut f,
                &ig.theta,
                from,
                dir,
                cfg.abs_tol,
                DEFAULT_AVG_LEVELS,
                cfg.max_panels,
            )?
        } else if ig.oscillatory() {
            // FixedPanels: truncate at the algebraic tail-bound radius
            let gap = ig.gap.unwrap_or(2).max(2) as f64;
            let t_cut = 50.0_f64
                .max((10.0 / cfg.abs_tol).powf(1.0 / (gap - 1.0)))
                .min(2e4);
            let (a, b) = if dir > 0.0 {
                (from, t_cut)
            } else {
                (-t_cut, from)
            };
            let r = adaptive(&mut f, a, b, &[], cfg.abs_tol, cfg.rel_tol, cfg.max_panels)?;
            TailSum {
                value: r.value,
                error_estimate: r.error,
                segments: r.panels,
            }
        } else {
            algebraic_tail(&mut f, from, dir, cfg.abs_tol, cfg.max_panels)?
        };
        value += tail.value;
        est += tail.error_estimate;
        segments += tail.segments;
    }
    Ok(RiemannFTResult {
        value,
        segments_used: segments,
        acceleration_error_estimate: est,
    })
}


/// Convergence guard shared by the improper transforms: a rational (or
/// polynomial) amplitude without real poles, and a total phase strong
/// enough that amplitude/Θ' vanishes at ±∞ (unless the amplitude is
/// already L¹): deg Θ ≥ growth + 2.
fn check_improper_convergence(ig: &Integrand) -> Result<(), OracleError> {
    let (num, den) = match &ig.base {
        BaseEval::Rational { num, den } => (num, den),
        BaseEval::General(_) => {
            return Err(OracleError::Unsupported(
                "improper-transform amplitude must be rational or polynomial".into(),
            ))
        }
    };
    let (num_deg, den_deg) = (num.len() as i64 - 1, den.len() as i64 - 1);
    if den.len() > 1 {
        let rf = RationalFn::from_polys_unchecked(
            CPoly::from_c64_slice(num),
            CPoly::from_c64_slice(den),
        );
        let rep =
            classify_integrability(&rf).map_err(|e| OracleError::Unsupported(e.to_string()))?;
        if !rep.continuous_on_r {
            return Err(OracleError::ConvergencePrecondition(
                "amplitude has a real pole".into(),
            ));
        }
    }
    let growth = num_deg - den_deg;
    let theta_deg = ig.theta.len() as i64 - 1;
    let l1 = ig.gap.map_or(false, |g| g >= 2) && den_deg >= 1;
    if !l1 && theta_deg < growth.max(0) + 2 {
        return Err(OracleError::ConvergencePrecondition(format!(
            "total phase degree {} too weak for amplitude growth {}",
            theta_deg, growth
        )));
    }
    Ok(())
}

/// Improper Riemann–Fourier transform of an oscillatory integrand that
/// need not be absolutely integrable.
///
/// Requires a rational (or polynomial) amplitude without real poles and a
/// total phase strong enough that amplitude/Θ′ → 0 at ±∞.
pub fn riemann_ft(e: &Expr, xi: f64, cfg: &QuadConfig) -> Result<RiemannFTResult, OracleError> {
    let ig = build_integrand(e, xi)?;
    check_improper_convergence(&ig)?;
    let r = integrate_line(&ig, cfg)?;
    let tol = cfg.abs_tol.max(cfg.rel_tol * r.value.norm()) * 1e4;
    if !r.acceleration_error_estimate.is_finite() || r.acceleration_error_estimate > tol.max(1e-4) {
        return Err(OracleError::AccelerationNonConvergence(
            r.acceleration_error_estimate,
        ));
    }
    Ok(r)
}

/// `g(x) = −∫_x^{+∞} f(t) dt` as a convergent improper integral, via the
/// same segmented tail machinery.
pub fn antiderivative_tail(
    e: &Expr,
    x: f64,
    cfg: &QuadConfig,
) -> Result<RiemannFTResult, OracleError> {
    let ig = build_integrand(e, 0.0)?;
    if !ig.oscillatory() {
        return Err(OracleError::ConvergencePrecondition(
            "tail integral needs an oscillatory phase".into(),
        ));
    }
    check_improper_convergence(&ig)?;
    let r0 = core_radius(&ig).max(x.abs() + 1.0);
    let mut f = |t: f64| ig.eval(t);
    let core = adaptive(
        &mut f,
        x,
        r0,
        &core_seeds(&ig, x, r0),
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_panels,
    )?;
    let tail = oscillatory_tail(
        &mut f,
        &ig.theta,
        r0,
        1.0,
        cfg.abs_tol,
        DEFAULT_AVG_LEVELS,
        cfg.max_panels,
    )?;
    Ok(RiemannFTResult {
        value: -(core.value + tail.value),
        segments_used: core.panels + tail.segments,
        acceleration_error_estimate: core.error + tail.error_estimate,
    })
}

/// Fourier transform of a two-sided exponentially decaying evaluator
/// (the E^c pullback used by the Mellin bridge): `rates = (a₋, a₊)` are
/// lower bounds on the decay rates at −∞ and +∞.
pub fn ft_exponential_decay(
    f: &dyn Fn(f64) -> Complex64,
    rates: (f64, f64),
    xi: f64,
    cfg: &QuadConfig,
) -> Result<Complex64, OracleError> {
    let (am, ap) = rates;
    if !(am > 0.0 && ap > 0.0) {
        return Err(OracleError::ConvergencePrecondition(
            "nonpositive exponential decay rate".into(),
        ));
    }
    let margin = (1.0 / cfg.abs_tol).ln() + 5.0;
    let (lo, hi) = (-(margin / am), margin / ap);
    let mut g = |t: f64| f(t) * Complex64::new(0.0, -2.0 * std::f64::consts::PI * xi * t).exp();
    // pre-split near the oscillation period
    let width = (1.0 / (2.0 * xi.abs() + 1.0)).min(2.0);
    let mut seeds = Vec::new();
    let mut t = lo;
    while t < hi {
        seeds.push(t);
        t += width;
    }
    let r = adaptive(
        &mut g,
        lo,
        hi,
        &seeds,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_panels,
    )?;
    Ok(r.value)
}

/// Direct Mellin integral `∫₀^∞ t^{s-1} f(t) dt`, split at t = 1 with the
/// upper piece mapped to (0,1]; both pieces use geometric panels toward
/// the endpoint singularity.
pub fn mellin_direct(
    f: &dyn Fn(f64) -> Complex64,
    s: Complex64,
    cfg: &QuadConfig,
) -> Result<Complex64, OracleError> {
    let mut lower = |t: f64| f(t) * (s - Complex64::new(1.0, 0.0)).scale(t.ln()).exp();
    let mut upper = |u: f64| {
        // t = 1/u: ∫₁^∞ t^{s-1} f(t) dt = ∫₀^1 u^{-s-1} f(1/u) du
        f(1.0 / u) * ((-s - Complex64::new(1.0, 0.0)).scale(u.ln())).exp()
    };
    let seeds: Vec<f64> = (1..50).map(|k| 2f64.powi(-k)).collect();
    let a = adaptive(
        &mut lower,
        0.0,
        1.0,
        &seeds,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_panels,
    )?;
    let b = adaptive(
        &mut upper,
        0.0,
        1.0,
        &seeds,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_panels,
    )?;
    Ok(a.value + b.value)
}

/// CSV rows (xi, re, im, abs) for a sampled transform grid.
pub fn grid_to_csv(samples: &[(f64, Complex64)]) -> String {
    let mut out = String::from("xi,re,im,abs\n");
    for (xi, v) in samples {
        out.push_str(&format!("{},{},{},{}\n", xi, v.re, v.im, v.norm()));
    }
    out
}
