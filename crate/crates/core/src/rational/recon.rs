//! Rationality detection and reconstruction from Taylor coefficients.
//!
//! A truncated power series comes from a rational function of degree ≤ K
//! exactly when the sliding windows `(f_j, …, f_{j+K})`, j ≥ 1, fail to
//! span ℂ^{K+1}; the annihilating functional supplies the denominator and
//! the low-order coefficients the numerator. Exact ℚ(i) input gets an
//! exact rank decision; float input a singular-value one.

use super::{CPoly, RationalError, RationalFn};
use crate::scalar::{Coeff, GaussianRational};
use num_complex::Complex64;

const SV_REL_THRESHOLD: f64 = 1e-8;
const REGEN_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct RationalityResult {
    pub rational: bool,
    pub reconstruction: Option<RationalFn>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeBound {
    Found(usize),
    NotFound,
}

/// Taylor coefficients of `f` at 0 (requires `den(0) != 0`), exactness
/// following the input.
pub fn taylor_coeffs(f: &RationalFn, n: usize) -> Result<Vec<Coeff>, RationalError> {
    let d0 = f.den.coeff(0);
    if d0.is_zero() {
        return Err(RationalError::PoleAtOrigin);
    }
    let inv = d0.inv().unwrap();
    let mut out: Vec<Coeff> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = f.num.coeff(k);
        for j in 1..=k.min(f.den.coeffs().len().saturating_sub(1)) {
            s = s.sub(&f.den.coeff(j).mul(&out[k - j]));
        }
        out.push(s.mul(&inv));
    }
    Ok(out)
}

/// Decide whether `coeffs` are the Taylor coefficients of a rational
/// function of degree ≤ `k`, reconstructing it when possible.
///
/// `rational` reflects the window-rank decision alone; the reconstruction
/// is attached only when it regenerates every supplied coefficient
/// (exactly in the exact path, to 1e-9 otherwise).
pub fn rationality_test(coeffs: &[Coeff], k: usize) -> Result<RationalityResult, RationalError> {
    let need = 2 * k + 2;
    if coeffs.len() < need {
        return Err(RationalError::InsufficientCoefficients {
            need,
            got: coeffs.len(),
        });
    }
    if k == 0 {
        // degree 0: constant numerator and denominator
        let rational = coeffs.iter().skip(1).all(|c| c.is_zero());
        let reconstruction = if rational {
            Some(RationalFn::from_polys_unchecked(
                CPoly::new(vec![coeffs[0].clone()]),
                CPoly::one(),
            ))
        } else {
            None
        };
        return Ok(RationalityResult {
            rational,
            reconstruction,
        });
    }

    if coeffs.iter().all(|c| c.is_exact()) {
        rationality_exact(coeffs, k)
    } else {
        rationality_float(coeffs, k)
    }
}

/// Smallest `k ≤ k_max` accepted by `rationality_test`, if any.
pub fn degree_bound(coeffs: &[Coeff], k_max: usize) -> Result<DegreeBound, RationalError> {
    let need = 2 * k_max + 2;
    if coeffs.len() < need {
        return Err(RationalError::InsufficientCoefficients {
            need,
            got: coeffs.len(),
        });
    }
    for k in 0..=k_max {
        if rationality_test(coeffs, k)?.rational {
            return Ok(DegreeBound::Found(k));
        }
    }
    Ok(DegreeBound::NotFound)
}

fn windows(coeffs: &[Coeff], k: usize) -> Vec<Vec<Coeff>> {
    (1..=(coeffs.len() - k - 1))
        .map(|j| coeffs[j..=j + k].to_vec())
        .collect()
}

fn rationality_exact(coeffs: &[Coeff], k: usize) -> Result<RationalityResult, RationalError> {
    let rows: Vec<Vec<GaussianRational>> = windows(coeffs, k)
        .into_iter()
        .map(|w| w.into_iter().map(|c| c.exact().unwrap().clone()).collect())
        .collect();
    let (rank, null) = exact_rank_and_null(rows, k + 1);
    let rational = rank < k + 1;
    let mut reconstruction = None;
    if rational {
        for v in &null {
            if let Some(rf) = reconstruct_exact(coeffs, k, v) {
                reconstruction = Some(rf);
                break;
            }
        }
    }
    Ok(RationalityResult {
        rational,
        reconstruction,
    })
}

/// Row-reduce over ℚ(i); returns the rank and a basis of the null space of
/// the row span (vectors v with row·v = 0 for all rows).
fn exact_rank_and_null(
    rows: Vec<Vec<GaussianRational>>,
    width: usize,
) -> (usize, Vec<Vec<GaussianRational>>) {
    let mut m = rows;
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..width {
        let mut sel = None;
        for r in row..m.len() {
            if !m[r][col].is_zero() {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        m.swap(row, sel);
        let inv = m[row][col].inv().unwrap();
        for c in col..width {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..width {
                    let t = &m[row][c] * &factor;
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let rank = pivots.len();
    // null-space basis: one vector per free column
    let mut basis = Vec::new();
    for free in 0..width {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![GaussianRational::zero(); width];
        v[free] = GaussianRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    (rank, basis)
}

/// Build p/q from an annihilating vector and check regeneration.
///
/// The functional `Σ_m v_m f_{j+m} = 0` encodes the recurrence with
/// `q_l = v_{K-l}`; the numerator follows from the low-order convolution.
fn reconstruct_exact(coeffs: &[Coeff], k: usize, v: &[GaussianRational]) -> Option<RationalFn> {
    let q: Vec<GaussianRational> = (0..=k).map(|l| v[k - l].clone()).collect();
    if q[0].is_zero() {
        return None;
    }
    let f: Vec<&GaussianRational> = coeffs.iter().map(|c| c.exact().unwrap()).collect();
    let mut p = Vec::with_capacity(k + 1);
    for kk in 0..=k {
        let mut s = GaussianRational::zero();
        for j in 0..=kk {
            s = &s + &(&q[j] * f[kk - j]);
        }
        p.push(s);
    }
    let rf = RationalFn::new(
        CPoly::new(p.into_iter().map(Coeff::Exact).collect()),
        CPoly::new(q.into_iter().map(Coeff::Exact).collect()),
    )
    .ok()?;
    // regeneration check over the full supplied range
    let regen = taylor_coeffs(&rf, coeffs.len()).ok()?;
    for (a, b) in regen.iter().zip(coeffs) {
        if !a.sub(b).is_zero() {
            return None;
        }
    }
    Some(rf)
}

fn rationality_float(coeffs: &[Coeff], k: usize) -> Result<RationalityResult, RationalError> {
    let rows: Vec<Vec<Complex64>> = windows(coeffs, k)
        .into_iter()
        .map(|w| w.into_iter().map(|c| c.to_c64()).collect())
        .collect();
    let width = k + 1;
    // Gram matrix A^H A, Hermitian PSD
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); width]; width];
    for r in &rows {
        for (i, gi) in gram.iter_mut().enumerate() {
            for (j, gij) in gi.iter_mut().enumerate() {
                *gij += r[i].conj() * r[j];
            }
        }
    }
    let (eigvals, eigvecs) = hermitian_jacobi(gram);
    let sigma: Vec<f64> = eigvals.iter().map(|l| l.max(0.0).sqrt()).collect();
    let smax = sigma.iter().cloned().fold(0.0_f64, f64::max);
    let rank = sigma
        .iter()
        .filter(|&&s| s > SV_REL_THRESHOLD * smax.max(f64::MIN_POSITIVE))
        .count();
    let rational = rank < width;
    let mut reconstruction = None;
    if rational && smax > 0.0 {
        // eigenvector of the smallest eigenvalue annihilates the windows
        let mut order: Vec<usize> = (0..width).collect();
        order.sort_by(|&a, &b| sigma[a].partial_cmp(&sigma[b]).unwrap());
        for &idx in &order {
            if sigma[idx] > SV_REL_THRESHOLD * smax {
                break;
            }
            let v: Vec<Complex64> = eigvecs.iter().map(|row| row[idx]).collect();
            if let Some(rf) = reconstruct_float(coeffs, k, &v) {
                reconstruction = Some(rf);
                break;
            }
        }
    } else if rational {
        // all-zero data: the zero function
        reconstruction = Some(RationalFn::from_polys_unchecked(
            CPoly::zero(),
            CPoly::one(),
        ));
    }
    Ok(RationalityResult {
        rational,
        reconstruction,
    })
}

fn reconstruct_float(coeffs: &[Coeff], k: usize, v: &[Complex64]) -> Option<RationalFn> {
    let q: Vec<Complex64> = (0..=k).map(|l| v[k - l]).collect();
    let qscale = q.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    if q[0].norm() <= 1e-10 * qscale {
        return None;
    }
    let f: Vec<Complex64> = coeffs.iter().map(|c| c.to_c64()).collect();
    let mut p = Vec::with_capacity(k + 1);
    for kk in 0..=k {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..=kk {
            s += q[j] * f[kk - j];
        }
        p.push(s);
    }
    let rf = RationalFn::from_polys_unchecked(CPoly::from_c64_slice(&p), CPoly::from_c64_slice(&q));
    let regen = taylor_coeffs(&rf, coeffs.len()).ok()?;
    let scale = f.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
    for (a, b) in regen.iter().zip(&f) {
        if (a.to_c64() - b).norm() > REGEN_TOL * scale {
            return None;
        }
    }
    Some(rf)
}

/// Cyclic Jacobi eigensolver for a Hermitian matrix; returns eigenvalues
/// and the unitary eigenvector matrix (columns indexed like the values).
fn hermitian_jacobi(mut a: Vec<Vec<Complex64>>) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = a.len();
    let mut v = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q].norm_sqr();
            }
        }
        if off.sqrt() < 1e-300 || off < 1e-28 * (1.0 + frob(&a)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.norm() == 0.0 {
                    continue;
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);
                // A ← J^H A J with J = [[c, s],[-conj(s), c]] acting on (p,q)
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp * c - akq * s.conj();
                    a[k][q] = akp * s + akq * c;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = apk * c - aqk * s;
                    a[q][k] = apk * s.conj() + aqk * c;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = vkp * c - vkq * s.conj();
                    v[k][q] = vkp * s + vkq * c;
                }
            }
        }
    }
    let vals: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    (vals, v)
}

fn frob(a: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
}

#[cfg(test)]
mod jacobi_tests {
    use super::*;

    #[test]
    fn hermitian_jacobi_known_eigs() {
        // [[2, i],[-i, 2]] has eigenvalues 1 and 3
        let i = Complex64::i();
        let a = vec![
            vec![Complex64::new(2.0, 0.0), i],
            vec![-i, Complex64::new(2.0, 0.0)],
        ];
        let (mut vals, _) = hermitian_jacobi(a);
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_eigenvectors_diagonalize() {
        let i = Complex64::i();
        let a = vec![
            vec![Complex64::new(3.0, 0.0), Complex64::new(1.0, 1.0), i],
            vec![
                Complex64::new(1.0, -1.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.5, 0.0),
            ],
            vec![-i, Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0)],
        ];
        let (vals, v) = hermitian_jacobi(a.clone());
        // A v_k = λ_k v_k
        for k in 0..3 {
            for r in 0..3 {
                let mut av = Complex64::new(0.0, 0.0);
                for c in 0..3 {
                    av += a[r][c] * v[c][k];
                }
                assert!((av - vals[k] * v[r][k]).norm() < 1e-10);
            }
        }
    }
}
