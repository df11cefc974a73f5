//! Analysis orchestration: run every applicable check on a parsed
//! function, cross-check the engine against the oracle, and emit a
//! structured report.
//!
//! Every enabled check contributes either a result or an explicit skip
//! reason; consistency rows compare two independent routes at a declared
//! tolerance and any exceedance flags the whole report FAIL.

use crate::expr::{parse, Expr, ExprError, FunctionClass};
use crate::oracle::{
    decay_fit, ft_exponential_decay, mellin_direct, quad_ft, riemann_ft, QuadConfig,
};
use crate::rational::{classify_integrability, partial_fractions, taylor_coeffs, RationalFn};
use crate::series::Sign;
use crate::transform::{
    delta_report, ec_transform, eval_fourier_cf, fourier_closed_form, half_plane_vanishing,
    mellin_strip, FourierClosedForm,
};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::time::Instant;

pub const SCHEMA_VERSION: &str = "1";

pub const TOL_ORACLE_VS_CLOSED: f64 = 1e-6;
pub const TOL_ZERO_FREQUENCY: f64 = 1e-8;
pub const TOL_MELLIN_BRIDGE: f64 = 1e-7;
pub const TOL_DECAY_RATE_REL: f64 = 0.05;
pub const TOL_VANISHING_SIDE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    ClosedForm,
    DecayFit,
    Mellin,
    Rationality,
    RiemannFt,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::ClosedForm,
        CheckKind::DecayFit,
        CheckKind::Mellin,
        CheckKind::Rationality,
        CheckKind::RiemannFt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::ClosedForm => "closed_form",
            CheckKind::DecayFit => "decay_fit",
            CheckKind::Mellin => "mellin",
            CheckKind::Rationality => "rationality",
            CheckKind::RiemannFt => "riemann_ft",
        }
    }

    pub fn from_name(s: &str) -> Option<CheckKind> {
        CheckKind::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub expression: String,
    /// Largest |ξ| on the sample grids.
    pub xi_max: f64,
    /// Grid points per side.
    pub xi_samples: usize,
    pub quad: QuadConfig,
    pub checks: BTreeSet<CheckKind>,
}

impl AnalysisConfig {
    pub fn new(expression: &str) -> Self {
        AnalysisConfig {
            expression: expression.to_string(),
            xi_max: 8.0,
            xi_samples: 64,
            quad: QuadConfig::default(),
            checks: CheckKind::ALL.into_iter().collect(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Parse(#[from] ExprError),
    #[error("configuration: {0}")]
    Config(String),
}

#[derive(Clone, Debug)]
pub struct ConsistencyRow {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Full analysis record; serializes to the versioned JSON schema.
pub struct Report {
    pub input: String,
    pub expr: Expr,
    pub class: FunctionClass,
    pub consistency: Vec<ConsistencyRow>,
    pub skips: Vec<(CheckKind, String)>,
    pub sections: Vec<(String, Value)>,
    pub plot_rows: Vec<PlotRow>,
    pub timings_ms: Vec<(String, f64)>,
}

#[derive(Clone, Copy, Debug)]
pub struct PlotRow {
    pub xi: f64,
    pub engine_abs: Option<f64>,
    pub oracle_abs: Option<f64>,
    pub fit_env: Option<f64>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.consistency.iter().all(|r| r.pass)
    }
}

struct Ctx<'a> {
    cfg: &'a AnalysisConfig,
    report: Report,
}

impl<'a> Ctx<'a> {
    fn enabled(&self, k: CheckKind) -> bool {
        self.cfg.checks.contains(&k)
    }

    fn skip(&mut self, k: CheckKind, reason: impl Into<String>) {
        self.report.skips.push((k, reason.into()));
    }

    fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.report.consistency.push(ConsistencyRow {
            name: name.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        });
    }

    fn section(&mut self, name: &str, v: Value) {
        self.report.sections.push((name.to_string(), v));
    }

    fn timed<T>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let t0 = Instant::now();
        let out = f(self);
        let dt = t0.elapsed().as_secs_f64() * 1e3;
        self.report.timings_ms.push((name.to_string(), dt));
        out
    }
}

/// Run the configured checks and assemble the report.
///
/// Parse failures are hard errors; class/check mismatches become recorded
/// skips. The report FAILs only when an executed consistency check
/// exceeds its tolerance.
pub fn analyze(cfg: &AnalysisConfig) -> Result<Report, AnalyzeError> {
    if cfg.checks.contains(&CheckKind::DecayFit) && cfg.xi_samples < 24 {
        return Err(AnalyzeError::Config(format!(
            "decay_fit needs xi_samples ≥ 24, got {}",
            cfg.xi_samples
        )));
    }
    if !(cfg.xi_max > 1.0) {
        return Err(AnalyzeError::Config("xi_max must exceed 1".into()));
    }
    let expr = parse(&cfg.expression)?;
    let class = expr.classify();
    let report = Report {
        input: cfg.expression.clone(),
        expr: expr.clone(),
        class,
        consistency: Vec::new(),
        skips: Vec::new(),
        sections: Vec::new(),
        plot_rows: Vec::new(),
        timings_ms: Vec::new(),
    };
    let mut ctx = Ctx { cfg, report };

    let rational = RationalFn::from_expr(&expr).ok();
    if let Some(rf) = &rational {
        ctx.timed("structure", |c| structure_sections(c, rf));
    }

    let closed_form = match (&rational, class) {
        (Some(rf), FunctionClass::Rational) => fourier_closed_form(rf).ok(),
        _ => None,
    };

    if ctx.enabled(CheckKind::ClosedForm) {
        ctx.timed("closed_form", |c| {
            run_closed_form(c, &expr, &rational, &closed_form)
        });
    }
    if ctx.enabled(CheckKind::DecayFit) {
        ctx.timed("decay_fit", |c| {
            run_decay_fit(c, &expr, &rational, &closed_form)
        });
    }
    if ctx.enabled(CheckKind::Mellin) {
        ctx.timed("mellin", |c| run_mellin(c, &expr, &rational));
    }
    if ctx.enabled(CheckKind::Rationality) {
        ctx.timed("rationality", |c| run_rationality(c, &rational));
    }
    if ctx.enabled(CheckKind::RiemannFt) {
        ctx.timed("riemann_ft", |c| run_riemann(c, &expr, &rational));
    }

    Ok(ctx.report)
}

fn structure_sections(ctx: &mut Ctx, rf: &RationalFn) {
    if let Ok(rep) = classify_integrability(rf) {
        ctx.section(
            "integrability",
            json!({
                "l1_on_r": rep.l1_on_r,
                "continuous_on_r": rep.continuous_on_r,
                "smooth_on_r": rep.smooth_on_r,
                "degree_gap": rep.degree_gap,
                "real_poles": rep.real_poles.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            }),
        );
    }
    if rf.den.degree().unwrap_or(0) >= 1 {
        if let Ok(pf) = partial_fractions(rf) {
            ctx.section("poles", pf.poles_to_json());
        }
    }
    if let Ok(d) = delta_report(rf) {
        ctx.section(
            "delta",
            json!({
                "delta_H_plus": fin(d.delta_h.0), "delta_H_minus": fin(d.delta_h.1),
                "delta_F_exact_plus": fin(d.delta_f_exact.0), "delta_F_exact_minus": fin(d.delta_f_exact.1),
                "theta_H_plus": fin(d.theta_h.0), "theta_H_minus": fin(d.theta_h.1),
                "delta_M_plus": fin(d.delta_m.0), "delta_M_minus": fin(d.delta_m.1),
            }),
        );
    }
    if let Ok(v) = half_plane_vanishing(rf) {
        ctx.section(
            "half_plane_vanishing",
            json!({"plus": v.plus, "minus": v.minus}),
        );
    }
}

fn fin(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn run_closed_form(
    ctx: &mut Ctx,
    expr: &Expr,
    rational: &Option<RationalFn>,
    closed_form: &Option<FourierClosedForm>,
) {
    let Some(rf) = rational else {
        ctx.skip(
            CheckKind::ClosedForm,
            "closed forms exist only for the rational class",
        );
        return;
    };
    let Some(cf) = closed_form else {
        let why = match classify_integrability(rf) {
            Ok(rep) if !rep.l1_on_r => format!(
                "not L¹ on ℝ (degree gap {}, {} real pole(s))",
                rep.degree_gap,
                rep.real_poles.len()
            ),
            _ => "closed form unavailable".to_string(),
        };
        ctx.skip(CheckKind::ClosedForm, why);
        return;
    };
    ctx.section("fourier_closed_form", cf.to_json());

    // engine vs oracle on a fixed moderate grid
    let mut worst = 0.0_f64;
    let mut k = -16i32;
    while k <= 16 {
        let xi = k as f64 * 0.25;
        if let Ok(oracle) = quad_ft(expr, xi, &ctx.cfg.quad) {
            worst = worst.max((oracle - eval_fourier_cf(cf, xi)).norm());
        } else {
            worst = f64::INFINITY;
        }
        k += 2;
    }
    ctx.check("closed_form_vs_oracle_grid", worst, TOL_ORACLE_VS_CLOSED);

    let zero_residual = match quad_ft(expr, 0.0, &ctx.cfg.quad) {
        Ok(v) => (v - cf.value_at_zero).norm(),
        Err(_) => f64::INFINITY,
    };
    ctx.check("residue_factor_at_zero", zero_residual, TOL_ZERO_FREQUENCY);
}

fn side_grid(cfg: &AnalysisConfig, side: Sign) -> Vec<f64> {
    let lo = (cfg.xi_max / 4.0).max(1.0);
    let hi = cfg.xi_max;
    let n = cfg.xi_samples.max(2);
    (0..n)
        .map(|k| {
            let xi = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            match side {
                Sign::Plus => -xi,
                Sign::Minus => xi,
            }
        })
        .collect()
}

fn run_decay_fit(
    ctx: &mut Ctx,
    expr: &Expr,
    rational: &Option<RationalFn>,
    closed_form: &Option<FourierClosedForm>,
) {
    // admission: either an L¹ rational function (samples from the closed
    // form) or a phase-bearing function with an L¹ amplitude (samples
    // from quadrature)
    let oracle_driven = match (rational, closed_form) {
        (Some(_), Some(_)) => false,
        (Some(_), None) => {
            ctx.skip(CheckKind::DecayFit, "no closed form: function is not L¹");
            return;
        }
        (None, _) => {
            if !matches!(expr.classify(), FunctionClass::RationalPhase) {
                ctx.skip(
                    CheckKind::DecayFit,
                    "integrability is not checkable for this class",
                );
                return;
            }
            let base_l1 = RationalFn::from_expr(&expr.strip_phase())
                .ok()
                .and_then(|b| classify_integrability(&b).ok())
                .map_or(false, |r| r.l1_on_r);
            if !base_l1 {
                ctx.skip(CheckKind::DecayFit, "phase-bearing amplitude is not L¹");
                return;
            }
            true
        }
    };

    let mut rows = Vec::new();
    let mut fit_json = Vec::new();
    for side in [Sign::Plus, Sign::Minus] {
        let grid = side_grid(ctx.cfg, side);
        let mut engine: Vec<Option<f64>> = Vec::with_capacity(grid.len());
        let mut samples: Vec<(f64, Complex64)> = Vec::with_capacity(grid.len());
        let mut oracle_vals: Vec<Option<f64>> = Vec::with_capacity(grid.len());
        for &xi in &grid {
            let oracle = quad_ft(expr, xi, &ctx.cfg.quad).ok();
            if let Some(cf) = closed_form {
                let v = eval_fourier_cf(cf, xi);
                engine.push(Some(v.norm()));
                samples.push((xi, v));
            } else {
                match oracle {
                    Some(v) => samples.push((xi, v)),
                    None => {
                        ctx.skip(CheckKind::DecayFit, format!("oracle failed at ξ = {}", xi));
                        return;
                    }
                }
                engine.push(None);
            }
            oracle_vals.push(oracle.map(|v| v.norm()));
        }

        let fit = match decay_fit(&samples, side) {
            Ok(f) => Some(f),
            Err(e) => {
                ctx.skip(CheckKind::DecayFit, format!("{:?} side: {}", side, e));
                None
            }
        };

        if let (Some(f), Some(rf), false) = (&fit, rational.as_ref(), oracle_driven) {
            if let Ok((dp, dm)) = crate::rational::strip_widths(rf) {
                let (delta, tag) = match side {
                    Sign::Plus => (dp, "plus"),
                    Sign::Minus => (dm, "minus"),
                };
                if delta.is_finite() {
                    ctx.check(
                        format!("decay_rate_vs_strip_width_{}", tag),
                        (f.rate - delta).abs() / delta,
                        TOL_DECAY_RATE_REL,
                    );
                } else {
                    let peak = samples.iter().map(|s| s.1.norm()).fold(0.0, f64::max);
                    ctx.check(
                        format!("vanishing_branch_{}", tag),
                        peak,
                        TOL_VANISHING_SIDE,
                    );
                }
            }
        }

        for (k, (xi, v)) in samples.iter().enumerate() {
            rows.push(PlotRow {
                xi: *xi,
                engine_abs: engine[k],
                oracle_abs: if oracle_driven {
                    Some(v.norm())
                } else {
                    oracle_vals[k]
                },
                fit_env: fit.as_ref().map(|f| f.envelope(xi.abs())),
            });
        }
        if let Some(f) = &fit {
            fit_json.push(json!({
                "side": match side { Sign::Plus => "plus", Sign::Minus => "minus" },
                "rate": fin(f.rate), "power": f.power, "log_c": fin(f.log_c),
                "stderr": f.stderr, "r_squared": f.r_squared,
                "window": [f.window.0, f.window.1],
                "envelope_points": f.envelope_points,
            }));
        }
    }
    rows.sort_by(|a, b| a.xi.total_cmp(&b.xi));
    ctx.report.plot_rows = rows;
    ctx.section("decay_fit", Value::Array(fit_json));
}

fn run_mellin(ctx: &mut Ctx, expr: &Expr, rational: &Option<RationalFn>) {
    let Some(rf) = rational else {
        ctx.skip(
            CheckKind::Mellin,
            "Mellin strip analysis requires a rational function",
        );
        return;
    };
    let strip = match mellin_strip(rf) {
        Ok(s) => s,
        Err(e) => {
            ctx.skip(CheckKind::Mellin, e.to_string());
            return;
        }
    };
    let c = if strip.alpha < 1.0 && strip.beta > 1.0 {
        1.0
    } else {
        0.5 * (strip.alpha + strip.beta)
    };
    let mut samples = Vec::new();
    let mut worst = 0.0_f64;
    for xi in [0.0, 0.1, -0.1, 0.2, -0.2] {
        let s = Complex64::new(c, 2.0 * std::f64::consts::PI * xi);
        let ec = ec_transform(expr, c);
        let bridge = match ec.decay_rates() {
            Some(rates) => ft_exponential_decay(&|t| ec.eval(t), rates, -xi, &ctx.cfg.quad),
            None => Err(crate::oracle::OracleError::Unsupported("no rates".into())),
        };
        let f_eval = expr.clone();
        let direct = mellin_direct(
            &move |t| crate::expr::eval_real(&f_eval, t).unwrap_or(Complex64::new(f64::NAN, 0.0)),
            s,
            &ctx.cfg.quad,
        );
        match (bridge, direct) {
            (Ok(b), Ok(d)) => {
                worst = worst.max((b - d).norm());
                samples.push(json!({
                    "s_re": s.re, "s_im": s.im,
                    "bridge_re": b.re, "bridge_im": b.im,
                    "direct_re": d.re, "direct_im": d.im,
                    "residual": (b - d).norm(),
                }));
            }
            _ => {
                worst = f64::INFINITY;
            }
        }
    }
    ctx.section(
        "mellin",
        json!({"alpha": strip.alpha, "beta": strip.beta, "c": c, "samples": samples}),
    );
    ctx.check("mellin_bridge_vs_direct", worst, TOL_MELLIN_BRIDGE);
}

fn run_rationality(ctx: &mut Ctx, rational: &Option<RationalFn>) {
    let Some(rf) = rational else {
        ctx.skip(
            CheckKind::Rationality,
            "Taylor data requires a rational function",
        );
        return;
    };
    let k = rf
        .num
        .degree()
        .unwrap_or(0)
        .max(rf.den.degree().unwrap_or(0))
        .min(6);
    let coeffs = match taylor_coeffs(rf, 2 * k + 4) {
        Ok(c) => c,
        Err(_) => {
            ctx.skip(
                CheckKind::Rationality,
                "pole at the origin blocks Taylor data",
            );
            return;
        }
    };
    match crate::rational::degree_bound(&coeffs, k) {
        Ok(crate::rational::DegreeBound::Found(found)) => {
            ctx.section(
                "rationality",
                json!({"rational": true, "minimal_degree": found, "tested_up_to": k}),
            );
            ctx.check("rationality_recovers_degree", 0.0, 0.5);
        }
        Ok(crate::rational::DegreeBound::NotFound) => {
            ctx.section("rationality", json!({"rational": false, "tested_up_to": k}));
            ctx.check("rationality_recovers_degree", 1.0, 0.5);
        }
        Err(e) => ctx.skip(CheckKind::Rationality, e.to_string()),
    }
}

fn run_riemann(ctx: &mut Ctx, expr: &Expr, rational: &Option<RationalFn>) {
    if rational.is_some() {
        ctx.skip(
            CheckKind::RiemannFt,
            "absolutely integrable or non-oscillatory; the improper transform adds nothing",
        );
        return;
    }
    if !matches!(expr.classify(), FunctionClass::RationalPhase) {
        ctx.skip(
            CheckKind::RiemannFt,
            "needs a rational amplitude with one phase factor",
        );
        return;
    }
    let mut vals = Vec::new();
    for xi in [0.0, 0.5] {
        match riemann_ft(expr, xi, &ctx.cfg.quad) {
            Ok(r) => vals.push(json!({
                "xi": xi,
                "re": r.value.re, "im": r.value.im,
                "segments": r.segments_used,
                "acceleration_error_estimate": r.acceleration_error_estimate,
            })),
            Err(e) => {
                ctx.skip(CheckKind::RiemannFt, e.to_string());
                return;
            }
        }
    }
    ctx.section("riemann_ft", Value::Array(vals));
}

mod emit;
pub use emit::{emit, EmitFormat};
