//! All-roots refinement: closed forms through degree 2, Aberth–Ehrlich
//! simultaneous iteration above, multiplicity recovery by cluster merging.

use super::{CPoly, RationalError};
use num_complex::Complex64;

const MAX_ITER: usize = 200;

/// Find every root of `p` with multiplicities summing to `deg p`.
///
/// Roots are refined until the relative backward residual
/// `|p(z)| / Σ|c_k||z|^k` falls below `tol`; converged roots closer than
/// `10·tol^{1/μ}` (scaled by 1+|z|) are merged into one root of
/// multiplicity μ at their centroid.
pub fn roots(p: &CPoly, tol: f64) -> Result<Vec<(Complex64, usize)>, RationalError> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(RationalError::BadTolerance);
    }
    match p.degree() {
        None | Some(0) => return Err(RationalError::DegreeTooSmall),
        _ => {}
    }
    let mut coeffs = p.to_c64_vec();

    // factor out exact roots at the origin
    let mut zero_mult = 0usize;
    while coeffs.first().map_or(false, |c| c.norm() == 0.0) {
        coeffs.remove(0);
        zero_mult += 1;
    }
    let mut found: Vec<Complex64> = Vec::new();
    if coeffs.len() > 1 {
        found = all_roots(&coeffs, tol)?;
    }
    let mut clustered = cluster(found, &coeffs, tol);
    polish(&coeffs, &mut clustered, tol);
    if zero_mult > 0 {
        clustered.push((Complex64::new(0.0, 0.0), zero_mult));
    }
    clustered.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    debug_assert_eq!(
        clustered.iter().map(|c| c.1).sum::<usize>(),
        p.degree().unwrap()
    );
    Ok(clustered)
}

fn all_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>, RationalError> {
    let deg = coeffs.len() - 1;
    match deg {
        1 => Ok(vec![-coeffs[0] / coeffs[1]]),
        2 => Ok(quadratic(coeffs)),
        _ => aberth(coeffs, tol),
    }
}

/// Stable quadratic formula over ℂ.
fn quadratic(c: &[Complex64]) -> Vec<Complex64> {
    let (a, b, c0) = (c[2], c[1], c[0]);
    let disc = (b * b - 4.0 * a * c0).sqrt();
    // choose the sign that avoids cancellation in -b ∓ disc
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    vec![q / a, c0 / q]
}

fn horner2(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let r = z.norm();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * r + c.norm();
    }
    (p, dp, scale)
}

fn aberth(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>, RationalError> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    // Cauchy bound as the initial circle radius
    let radius = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0_f64, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            let r = radius * (0.6 + 0.4 * (k as f64 + 1.0) / deg as f64);
            Complex64::from_polar(r, angle)
        })
        .collect();

    let mut best_residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let mut worst = 0.0_f64;
        let snapshot = z.clone();
        for i in 0..deg {
            let (p, dp, scale) = horner2(coeffs, z[i]);
            let rel = p.norm() / scale.max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
            if rel <= tol {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(tol, tol)
            };
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, w) in snapshot.iter().enumerate() {
                if j != i {
                    let d = z[i] - w;
                    if d.norm() > 1e-300 {
                        sum += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * sum;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
        }
        best_residual = best_residual.min(worst);
        if worst <= tol {
            return Ok(z);
        }
    }
    Err(RationalError::NoConvergence { best_residual })
}

/// Admission radius for a candidate μ-fold cluster anchored at `z`.
///
/// A residual bounded by tol·scale scatters a μ-fold root over a disc of
/// radius (tol·scale·μ!/|p^{(μ)}(z)|)^{1/μ}; the factor 10 and the cap
/// keep the rule robust between well-separated roots.
fn merge_radius(coeffs: &[Complex64], z: Complex64, mu: usize, tol: f64) -> f64 {
    let (_, _, scale) = horner2(coeffs, z);
    let mut d = coeffs.to_vec();
    let mut fact = 1.0;
    for k in 1..=mu {
        d = derive(&d);
        fact *= k as f64;
    }
    let (pmu, _, _) = horner2(&d, z);
    let lead_term = (pmu.norm() / fact).max(f64::MIN_POSITIVE);
    let raw = 10.0 * (tol * scale.max(1.0) / lead_term).powf(1.0 / mu as f64);
    raw.min(0.2 * (1.0 + z.norm()))
}

/// Merge converged roots into multiplicity clusters.
///
/// The admission radius must be evaluated at the size of the *candidate*
/// cluster: for each anchor we try the nearest m neighbours with the
/// radius for μ = m+1, largest first.
fn cluster(mut zs: Vec<Complex64>, coeffs: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    zs.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut clusters: Vec<(Complex64, usize)> = zs.into_iter().map(|z| (z, 1)).collect();
    loop {
        let mut merged = false;
        'anchors: for a in 0..clusters.len() {
            let anchor = clusters[a].0;
            let mut order: Vec<usize> = (0..clusters.len()).filter(|&b| b != a).collect();
            order.sort_by(|&x, &y| {
                (clusters[x].0 - anchor)
                    .norm()
                    .partial_cmp(&(clusters[y].0 - anchor).norm())
                    .unwrap()
            });
            for take in (1..=order.len()).rev() {
                let group = &order[..take];
                let mu: usize = clusters[a].1 + group.iter().map(|&b| clusters[b].1).sum::<usize>();
                let radius = merge_radius(coeffs, anchor, mu, tol);
                if group
                    .iter()
                    .all(|&b| (clusters[b].0 - anchor).norm() <= radius)
                {
                    let mut z = clusters[a].0 * clusters[a].1 as f64;
                    let mut removals: Vec<usize> = group.to_vec();
                    for &b in group {
                        z += clusters[b].0 * clusters[b].1 as f64;
                    }
                    clusters[a] = (z / mu as f64, mu);
                    removals.sort_unstable();
                    for &b in removals.iter().rev() {
                        clusters.remove(b);
                    }
                    merged = true;
                    break 'anchors;
                }
            }
        }
        if !merged {
            return clusters;
        }
    }
}

/// Newton-polish each cluster on the (μ-1)-th derivative, where the
/// multiple root is simple; a centroid alone is only ~tol^{2/μ} accurate,
/// which is not enough for principal-part extraction downstream.
fn polish(coeffs: &[Complex64], clusters: &mut [(Complex64, usize)], tol: f64) {
    for (z, mu) in clusters.iter_mut() {
        if coeffs.len() < *mu + 1 {
            continue;
        }
        let mut d = coeffs.to_vec();
        for _ in 0..(*mu - 1) {
            d = derive(&d);
        }
        let guard = merge_radius(coeffs, *z, *mu, tol).max(1e-8 * (1.0 + z.norm()));
        let mut w = *z;
        for _ in 0..30 {
            let (p, dp, _) = horner2(&d, w);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            w -= step;
            if step.norm() <= 1e-16 * (1.0 + w.norm()) {
                break;
            }
        }
        if (w - *z).norm() <= guard {
            *z = w;
        }
    }
}

fn derive(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}
