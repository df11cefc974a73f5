//! Partial-fraction decomposition over ℂ with verified reconstruction.

use super::{roots, CPoly, Pole, RationalError, RationalFn, ROOT_TOL};
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct PartialFractions {
    pub poles: Vec<Pole>,
    pub polynomial_part: CPoly,
}

impl PartialFractions {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = self.polynomial_part.eval(z);
        for p in &self.poles {
            let d = z - p.location;
            let mut pw = Complex64::new(1.0, 0.0);
            for c in &p.principal {
                pw /= d;
                acc += c * pw;
            }
        }
        acc
    }

    pub fn poles_to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.poles.iter().map(|p| p.to_json()).collect())
    }
}

/// Decompose `f = polynomial_part + Σ_ω Σ_j P_ω^j (t-ω)^{-j}`.
///
/// The result is verified by evaluation at 20 fixed probe points; max
/// relative error above 1e-10 is reported as an error rather than returned
/// silently.
pub fn partial_fractions(f: &RationalFn) -> Result<PartialFractions, RationalError> {
    let (quot, rem) = f.num.divrem(&f.den).ok_or(RationalError::ZeroDenominator)?;

    let mut poles = Vec::new();
    if f.den.degree().unwrap_or(0) >= 1 && !rem.is_zero() {
        let den_roots = roots(&f.den, ROOT_TOL)?;
        let den_f = f.den.to_c64_vec();
        for &(omega, mu) in &den_roots {
            // deflate (t-ω)^μ out of the denominator
            let mut rest = den_f.clone();
            for _ in 0..mu {
                rest = deflate(&rest, omega);
            }
            // Taylor coefficients of rem and rest around ω up to order μ-1
            let rem_t = taylor_at(&rem.to_c64_vec(), omega, mu);
            let rest_t = taylor_at(&rest, omega, mu);
            // series division h = rem_t / rest_t, h_k = a_k
            let mut h = vec![Complex64::new(0.0, 0.0); mu];
            for k in 0..mu {
                let mut s = rem_t[k];
                for j in 1..=k {
                    s -= rest_t[j] * h[k - j];
                }
                h[k] = s / rest_t[0];
            }
            // P^j = h_{μ-j}
            let principal: Vec<Complex64> = (1..=mu).map(|j| h[mu - j]).collect();
            poles.push(Pole {
                location: omega,
                order: mu,
                principal,
            });
        }
    }

    let pf = PartialFractions {
        poles,
        polynomial_part: quot,
    };
    verify(f, &pf)?;
    Ok(pf)
}

fn deflate(coeffs: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n - 1];
    let mut carry = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        carry = coeffs[k] + carry * root;
        out[k - 1] = carry;
    }
    out
}

fn taylor_at(coeffs: &[Complex64], a: Complex64, terms: usize) -> Vec<Complex64> {
    let mut work = coeffs.to_vec();
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let mut carry = Complex64::new(0.0, 0.0);
        for c in work.iter_mut().rev() {
            let v = *c + carry * a;
            carry = v;
            *c = v;
        }
        out.push(work.remove(0));
    }
    out
}

fn verify(f: &RationalFn, pf: &PartialFractions) -> Result<(), RationalError> {
    // fixed low-discrepancy probes on a tilted line, dodging poles
    let mut worst = 0.0_f64;
    let mut used = 0;
    let mut k = 0u32;
    while used < 20 && k < 200 {
        k += 1;
        let x = -3.0 + 6.0 * (((k as f64) * 0.6180339887498949) % 1.0);
        let z = Complex64::new(x, 0.37 + 1e-3 * k as f64);
        if pf.poles.iter().any(|p| (z - p.location).norm() < 0.05) {
            continue;
        }
        let den = f.den.eval(z);
        if den.norm() < 1e-8 * f.den.eval_scale(z) {
            continue;
        }
        let truth = f.num.eval(z) / den;
        let rebuilt = pf.eval(z);
        let err = (truth - rebuilt).norm() / (1.0 + truth.norm());
        worst = worst.max(err);
        used += 1;
    }
    if worst > 1e-10 {
        return Err(RationalError::Verification(worst));
    }
    Ok(())
}
