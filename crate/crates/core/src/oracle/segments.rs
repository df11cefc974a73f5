//! Oscillatory tails: segment the integrand between consecutive half-period
//! crossings of the total phase and accelerate the alternating segment sums
//! by iterated averaging of partial sums.

use super::gk::{adaptive, QuadError};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const DEFAULT_AVG_LEVELS: usize = 8;
pub const MAX_SEGMENTS: usize = 160;

pub fn poly_eval(p: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for c in p.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

pub fn poly_derive(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

#[derive(Clone, Debug)]
pub struct TailSum {
    pub value: Complex64,
    pub error_estimate: f64,
    pub segments: usize,
}

/// Improper integral of `f` from `from` toward `dir·∞`, for integrands
/// whose oscillation is governed by the phase polynomial `theta` (strictly
/// monotone beyond `from` in the marching direction) and whose amplitude
/// decays.
///
/// Consecutive crossings of Θ ≡ 0 (mod π) bound the segments; partial sums
/// of segment integrals are accelerated by `levels` rounds of pairwise
/// averaging. Falls back to a plain sum when the segments collapse below
/// the absolute tolerance on their own.
pub fn oscillatory_tail(
    f: &mut dyn FnMut(f64) -> Complex64,
    theta: &[f64],
    from: f64,
    dir: f64,
    abs_tol: f64,
    levels: usize,
    max_panels: usize,
) -> Result<TailSum, QuadError> {
    let dtheta = poly_derive(theta);
    let mut partials: Vec<Complex64> = Vec::with_capacity(MAX_SEGMENTS);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut t = from;
    let mut theta_t = poly_eval(theta, t);
    let mut quad_err = 0.0;
    let mut small_streak = 0usize;
    for _ in 0..MAX_SEGMENTS {
        let slope = poly_eval(&dtheta, t);
        let advance = if slope.abs() > 1e-12 {
            (PI / slope.abs()).min(1e6)
        } else {
            1.0
        };
        // next multiple of π in the direction the phase moves
        let target = next_pi_multiple(theta_t, slope * dir);
        let t_next = solve_crossing(theta, t, dir, advance, target);
        let (lo, hi) = if dir > 0.0 { (t, t_next) } else { (t_next, t) };
        let r = adaptive(f, lo, hi, &[], abs_tol / 256.0, 1e-13, max_panels)?;
        let seg = r.value;
        quad_err += r.error;
        acc += seg;
        partials.push(acc);
        if seg.norm() < abs_tol / 10.0 {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(TailSum {
                    value: acc,
                    error_estimate: quad_err + seg.norm(),
                    segments: partials.len(),
                });
            }
        } else {
            small_streak = 0;
        }
        t = t_next;
        theta_t = poly_eval(theta, t);
    }
    let (value, accel_err) = averaged_limit(&partials, levels);
    Ok(TailSum {
        value,
        error_estimate: accel_err + quad_err,
        segments: partials.len(),
    })
}

fn next_pi_multiple(theta: f64, signed_slope: f64) -> f64 {
    let k = (theta / PI).floor();
    if signed_slope >= 0.0 {
        let mut m = (k + 1.0) * PI;
        if m - theta < 1e-9 {
            m += PI;
        }
        m
    } else {
        let mut m = k * PI;
        if theta - m < 1e-9 {
            m -= PI;
        }
        m
    }
}

/// Solve Θ(t) = target marching from `t0` in direction `dir`, by bracket
/// expansion and bisection. Θ is monotone on the march by construction.
fn solve_crossing(theta: &[f64], t0: f64, dir: f64, first_step: f64, target: f64) -> f64 {
    let g = |t: f64| poly_eval(theta, t) - target;
    let g0 = g(t0);
    let mut step = first_step.max(1e-9);
    let mut hi = t0 + dir * step;
    let mut guard = 0;
    while g(hi).signum() == g0.signum() && guard < 200 {
        step *= 2.0;
        hi = t0 + dir * step;
        guard += 1;
    }
    let (mut lo, mut hi) = (t0, hi);
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == g0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Iterated pairwise averaging of a partial-sum sequence; returns the
/// deepest averaged value and the magnitude of the last correction.
pub fn averaged_limit(partials: &[Complex64], levels: usize) -> (Complex64, f64) {
    if partials.is_empty() {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let mut row: Vec<Complex64> = partials.to_vec();
    let mut last = *row.last().unwrap();
    let mut est = f64::INFINITY;
    for _ in 0..levels {
        if row.len() < 2 {
            break;
        }
        let next: Vec<Complex64> = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let new_last = *next.last().unwrap();
        est = (new_last - last).norm();
        last = new_last;
        row = next;
    }
    (last, est)
}

/// Non-oscillatory decaying tail: geometric doubling panels with a
/// ratio-extrapolated remainder.
pub fn algebraic_tail(
    f: &mut dyn FnMut(f64) -> Complex64,
    from: f64,
    dir: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<TailSum, QuadError> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut quad_err = 0.0;
    let mut lo = from.abs().max(1.0);
    let mut prev_mag: Option<f64> = None;
    let mut ratio = 0.5_f64;
    let mut segments = 0usize;
    // first stretch from the actual start to the doubling base
    if from.abs() < lo {
        let (a, b) = if dir > 0.0 { (from, lo) } else { (-lo, from) };
        let r = adaptive(f, a, b, &[], abs_tol / 64.0, 1e-13, max_panels)?;
        acc += r.value;
        quad_err += r.error;
        segments += 1;
    }
    for _ in 0..96 {
        let hi = lo * 2.0;
        let (a, b) = if dir > 0.0 { (lo, hi) } else { (-hi, -lo) };
        let r = adaptive(f, a, b, &[], abs_tol / 64.0, 1e-13, max_panels)?;
        let seg = r.value;
        quad_err += r.error;
        acc += seg;
        segments += 1;
        let mag = seg.norm();
        if let Some(p) = prev_mag {
            if p > 0.0 {
                ratio = (mag / p).clamp(0.01, 0.95);
            }
        }
        prev_mag = Some(mag);
        if mag < abs_tol / 20.0 {
            let remainder = mag * ratio / (1.0 - ratio);
            return Ok(TailSum {
                value: acc,
                error_estimate: quad_err + remainder,
                segments,
            });
        }
        lo = hi;
    }
    Ok(TailSum {
        value: acc,
        error_estimate: quad_err + prev_mag.unwrap_or(0.0),
        segments,
    })
}
