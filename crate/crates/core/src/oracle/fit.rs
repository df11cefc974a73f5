//! Exponential decay-rate estimation by log-linear regression on the
//! envelope of |F|.
//!
//! Oscillatory transforms have zeros that wreck a naive pointwise log fit,
//! so when the sampled modulus oscillates we keep only its local maxima;
//! monotone-like data keeps every sample.

use super::OracleError;
use crate::series::Sign;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    /// Fitted a in |F(ξ)| ≈ C·|ξ|^m·e^{−2πa|ξ|}.
    pub rate: f64,
    pub power: f64,
    /// log C, the fitted intercept.
    pub log_c: f64,
    pub stderr: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub side: Sign,
    pub envelope_points: usize,
}

impl DecayFit {
    /// Fitted envelope value at |ξ| = x.
    pub fn envelope(&self, x: f64) -> f64 {
        if self.rate.is_infinite() {
            return 0.0;
        }
        (self.log_c + self.power * x.ln() - 2.0 * std::f64::consts::PI * self.rate * x).exp()
    }
}

/// Fit the exponential envelope of transform samples on one side.
///
/// Needs at least 24 samples whose |ξ| spans a factor of 4. All samples
/// below 1e-14 report `rate = +∞` (a vanishing branch).
pub fn decay_fit(samples: &[(f64, Complex64)], side: Sign) -> Result<DecayFit, OracleError> {
    if samples.len() < 24 {
        return Err(OracleError::Fit(format!(
            "need at least 24 samples, got {}",
            samples.len()
        )));
    }
    let mut pts: Vec<(f64, f64)> = samples.iter().map(|(x, v)| (x.abs(), v.norm())).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lo, hi) = (pts[0].0, pts[pts.len() - 1].0);
    if !(lo > 0.0 && hi >= 4.0 * lo) {
        return Err(OracleError::Fit(format!(
            "|ξ| must span a factor of 4, got [{}, {}]",
            lo, hi
        )));
    }
    let gmax = pts.iter().map(|p| p.1).fold(0.0_f64, f64::max);
    if gmax < 1e-14 {
        return Ok(DecayFit {
            rate: f64::INFINITY,
            power: 0.0,
            log_c: f64::NEG_INFINITY,
            stderr: 0.0,
            r_squared: 1.0,
            window: (lo, hi),
            side,
            envelope_points: 0,
        });
    }

    // interior local maxima of the sampled modulus
    let maxima: Vec<(f64, f64)> = (1..pts.len() - 1)
        .filter(|&k| pts[k].1 >= pts[k - 1].1 && pts[k].1 >= pts[k + 1].1)
        .map(|k| pts[k])
        .collect();
    let envelope: Vec<(f64, f64)> = if maxima.len() >= 6 {
        maxima
    } else if maxima.len() <= 1 {
        pts.clone()
    } else {
        return Err(OracleError::Fit(format!(
            "fewer than 6 envelope maxima ({}) in an oscillatory sample set",
            maxima.len()
        )));
    };
    let data: Vec<(f64, f64)> = envelope.into_iter().filter(|p| p.1 > 1e-300).collect();
    if data.len() < 6 {
        return Err(OracleError::Fit(
            "fewer than 6 usable envelope points".into(),
        ));
    }

    // least squares for log g = b + m log ξ − 2π a ξ
    let n = data.len();
    let rows: Vec<[f64; 3]> = data.iter().map(|p| [1.0, p.0.ln(), p.0]).collect();
    let ys: Vec<f64> = data.iter().map(|p| p.1.ln()).collect();
    let mut ata = [[0.0f64; 3]; 3];
    let mut aty = [0.0f64; 3];
    for (r, y) in rows.iter().zip(&ys) {
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += r[i] * r[j];
            }
            aty[i] += r[i] * y;
        }
    }
    let inv = invert3(&ata).ok_or_else(|| OracleError::Fit("singular design matrix".into()))?;
    let mut beta = [0.0f64; 3];
    for i in 0..3 {
        for j in 0..3 {
            beta[i] += inv[i][j] * aty[j];
        }
    }
    let rate = -beta[2] / (2.0 * std::f64::consts::PI);
    let power = beta[1];

    let mut ssr = 0.0;
    let mean = ys.iter().sum::<f64>() / n as f64;
    let mut sst = 0.0;
    for (r, y) in rows.iter().zip(&ys) {
        let fit = beta[0] * r[0] + beta[1] * r[1] + beta[2] * r[2];
        ssr += (y - fit) * (y - fit);
        sst += (y - mean) * (y - mean);
    }
    let dof = (n as f64 - 3.0).max(1.0);
    let sigma2 = ssr / dof;
    let stderr = (sigma2 * inv[2][2]).max(0.0).sqrt() / (2.0 * std::f64::consts::PI);
    let r_squared = if sst > 0.0 { 1.0 - ssr / sst } else { 1.0 };

    Ok(DecayFit {
        rate,
        power,
        log_c: beta[0],
        stderr,
        r_squared,
        window: (lo, hi),
        side,
        envelope_points: n,
    })
}

fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let d = 1.0 / det;
    let mut inv = [[0.0f64; 3]; 3];
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * d;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * d;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * d;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * d;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * d;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * d;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * d;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * d;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * d;
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(f: impl Fn(f64) -> f64) -> Vec<(f64, Complex64)> {
        (0..32)
            .map(|k| {
                let xi = 1.0 + 7.0 * k as f64 / 31.0;
                (xi, Complex64::new(f(xi), 0.0))
            })
            .collect()
    }

    #[test]
    fn exact_exponential_recovered() {
        let s = grid(|xi| PI * (-2.0 * PI * xi).exp());
        let fit = decay_fit(&s, Sign::Plus).unwrap();
        assert!((fit.rate - 1.0).abs() < 1e-6, "rate {}", fit.rate);
        assert!(fit.power.abs() < 1e-6);
        assert!(fit.r_squared > 0.999999);
    }

    #[test]
    fn polynomial_prefactor_recovered() {
        let s = grid(|xi| 4.0 * PI * PI * xi * (-2.0 * PI * xi).exp());
        let fit = decay_fit(&s, Sign::Minus).unwrap();
        assert!((fit.rate - 1.0).abs() < 0.005 * 1.0, "rate {}", fit.rate);
        assert!((fit.power - 1.0).abs() < 0.05, "power {}", fit.power);
    }

    #[test]
    fn subexponential_rate_zero() {
        let s = grid(|xi| xi.powi(-2));
        let fit = decay_fit(&s, Sign::Plus).unwrap();
        assert!(fit.rate.abs() < 1e-3);
        assert!((fit.power + 2.0).abs() < 1e-6);
    }

    #[test]
    fn vanishing_branch_reports_infinite_rate() {
        let s = grid(|_| 0.0);
        let fit = decay_fit(&s, Sign::Plus).unwrap();
        assert!(fit.rate.is_infinite());
    }

    #[test]
    fn oscillatory_data_uses_envelope() {
        // |cos(3ξ)| e^{-2πξ}: zeros would wreck a pointwise fit
        let s: Vec<(f64, Complex64)> = (0..200)
            .map(|k| {
                let xi = 1.0 + 7.0 * k as f64 / 199.0;
                let v = (3.0 * xi).cos().abs() * (-2.0 * PI * xi).exp();
                (xi, Complex64::new(v, 0.0))
            })
            .collect();
        let fit = decay_fit(&s, Sign::Plus).unwrap();
        assert!((fit.rate - 1.0).abs() < 0.02, "rate {}", fit.rate);
    }

    #[test]
    fn preconditions_enforced() {
        let few: Vec<(f64, Complex64)> = (0..10)
            .map(|k| (1.0 + k as f64, Complex64::new(1.0, 0.0)))
            .collect();
        assert!(decay_fit(&few, Sign::Plus).is_err());
        let narrow: Vec<(f64, Complex64)> = (0..30)
            .map(|k| (1.0 + 0.01 * k as f64, Complex64::new(1.0, 0.0)))
            .collect();
        assert!(decay_fit(&narrow, Sign::Plus).is_err());
    }
}
