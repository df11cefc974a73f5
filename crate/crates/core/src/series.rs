//! Finite truncated power-log expansions at a boundary point, with
//! arithmetic, differentiation, leading-data extraction, and the empirical
//! noncompensation witness search.
//!
//! Expansions are finite truncations carrying an explicit validity order:
//! every monomial dominating the cutoff is present. At `0⁺` and at finite
//! one-sided points, dominance means smaller real exponent (larger log
//! power on ties); at infinity in affine coordinates the order reverses.

use crate::rational::RationalFn;
use crate::scalar::{Coeff, GaussianRational};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryKind {
    /// y → 0⁺.
    ZeroPlus,
    /// t → θ from the side σ; the expansion variable is y = σ(t-θ) → 0⁺.
    FinitePoint { theta: GaussianRational, side: Sign },
    /// t → σ∞.
    Infinity(Sign),
}

/// Coordinates at infinity: affine y = σt (grows), standard y = 1/(σt)
/// (vanishes). They coincide at finite boundary points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coords {
    Standard,
    Affine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Boundary {
    pub kind: BoundaryKind,
    pub coords: Coords,
}

impl Boundary {
    pub fn zero_plus() -> Self {
        Boundary {
            kind: BoundaryKind::ZeroPlus,
            coords: Coords::Standard,
        }
    }

    pub fn finite(theta: GaussianRational, side: Sign) -> Self {
        Boundary {
            kind: BoundaryKind::FinitePoint { theta, side },
            coords: Coords::Standard,
        }
    }

    pub fn infinity(side: Sign, coords: Coords) -> Self {
        Boundary {
            kind: BoundaryKind::Infinity(side),
            coords,
        }
    }

    /// +1 when dominance is "smaller Re exponent first" (boundary variable
    /// tends to 0⁺), −1 at infinity in affine coordinates.
    fn orientation(&self) -> f64 {
        match (&self.kind, self.coords) {
            (BoundaryKind::Infinity(_), Coords::Affine) => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLogMonomial {
    pub r: Complex64,
    pub s: u32,
}

/// A truncated expansion Σ c·y^r (log y)^s, terms sorted by dominance at
/// the boundary, zero coefficients dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub boundary: Boundary,
    terms: Vec<(Coeff, PowerLogMonomial)>,
    pub order_valid_to: f64,
}

#[derive(Clone, Debug)]
pub struct LeadingData {
    pub le1: f64,
    pub le2: u32,
    /// Coefficient function of the leading dominance class: pairs of
    /// (coefficient, imaginary exponent of y).
    pub lc: Vec<(Complex64, f64)>,
    pub lm: PowerLogMonomial,
}

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("boundaries or coordinates differ")]
    BoundaryMismatch,
    #[error("pole of order {order} at the expansion point")]
    PoleAtPoint { order: usize },
    #[error("zero expansion has no leading data")]
    ZeroExpansion,
    #[error("noncompensation probe needs at least 8 levels, got {0}")]
    TooFewLevels(u32),
}

fn dominates(orient: f64, a: &PowerLogMonomial, b: &PowerLogMonomial) -> std::cmp::Ordering {
    let (ka, kb) = (orient * a.r.re, orient * b.r.re);
    ka.partial_cmp(&kb)
        .unwrap()
        .then(b.s.cmp(&a.s))
        .then(a.r.im.partial_cmp(&b.r.im).unwrap())
}

impl Expansion {
    pub fn new(
        boundary: Boundary,
        terms: Vec<(Coeff, PowerLogMonomial)>,
        order_valid_to: f64,
    ) -> Self {
        let orient = boundary.orientation();
        let mut merged: Vec<(Coeff, PowerLogMonomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            push_merged(&mut merged, c, m);
        }
        merged.retain(|(c, _)| !c.is_zero());
        merged.sort_by(|a, b| dominates(orient, &a.1, &b.1));
        Expansion {
            boundary,
            terms: merged,
            order_valid_to,
        }
    }

    pub fn zero(boundary: Boundary, order_valid_to: f64) -> Self {
        Expansion {
            boundary,
            terms: Vec::new(),
            order_valid_to,
        }
    }

    pub fn terms(&self) -> &[(Coeff, PowerLogMonomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluate the truncation at a point of the boundary variable
    /// (y > 0; at infinity in affine coordinates y = σt).
    pub fn eval(&self, y: f64) -> Complex64 {
        let ln = y.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, m) in &self.terms {
            let p = (m.r * ln).exp() * ln.powi(m.s as i32);
            acc += c.to_c64() * p;
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(c, m)| {
                    let z = c.to_c64();
                    serde_json::json!({
                        "re_r": m.r.re, "im_r": m.r.im, "s": m.s,
                        "coeff_re": z.re, "coeff_im": z.im,
                    })
                })
                .collect(),
        )
    }
}

/// Expand a rational function at a boundary point to `n_terms` nonzero
/// terms (fewer when the expansion terminates).
///
/// At a finite point the expansion lives in y = σ(t-θ) and a pole there is
/// an error carrying its order; at 0⁺ a pole at the origin simply yields
/// Laurent terms with negative exponents. At infinity the affine variable
/// is y = σt and exponents descend.
pub fn expand_at(
    f: &RationalFn,
    boundary: &Boundary,
    n_terms: usize,
) -> Result<Expansion, SeriesError> {
    match (&boundary.kind, boundary.coords) {
        (BoundaryKind::ZeroPlus, _) => {
            let (terms, valid) = laurent_at_zero(&f.num, &f.den, n_terms, true)
                .map_err(|order| SeriesError::PoleAtPoint { order })
                .map(Ok)
                .unwrap_or_else(Err)?;
            Ok(Expansion::new(boundary.clone(), terms, valid))
        }
        (BoundaryKind::FinitePoint { theta, side }, _) => {
            let th = Coeff::Exact(theta.clone());
            let sg = Coeff::from_int(side.as_f64() as i64);
            let num = f.num.shift(&th).scale_arg(&sg);
            let den = f.den.shift(&th).scale_arg(&sg);
            let (terms, valid) = laurent_at_zero(&num, &den, n_terms, false)
                .map_err(|order| SeriesError::PoleAtPoint { order })
                .map(Ok)
                .unwrap_or_else(Err)?;
            Ok(Expansion::new(boundary.clone(), terms, valid))
        }
        (BoundaryKind::Infinity(side), coords) => {
            let sg = Coeff::from_int(side.as_f64() as i64);
            let num = f.num.scale_arg(&sg);
            let den = f.den.scale_arg(&sg);
            // g(y) = num(y)/den(y) as y → +∞: reverse into u = 1/y
            let num_rev = num.reversed();
            let den_rev = den.reversed();
            let lead_gap = num.degree().map(|n| n as i64).unwrap_or(0)
                - den.degree().expect("nonzero denominator") as i64;
            let (mut terms, valid) = laurent_at_zero(&num_rev, &den_rev, n_terms, true)
                .expect("reversed denominator is nonzero at 0");
            // u-exponent j maps to y-exponent lead_gap - j
            for (_, m) in terms.iter_mut() {
                m.r = Complex64::new(lead_gap as f64 - m.r.re, 0.0);
            }
            let mut valid = lead_gap as f64 - valid;
            if coords == Coords::Standard {
                // y_ST = 1/y_AF
                for (_, m) in terms.iter_mut() {
                    m.r = -m.r;
                }
                valid = -valid;
            }
            Ok(Expansion::new(boundary.clone(), terms, valid))
        }
    }
}

/// Laurent/Taylor data of num/den at the origin. Returns the term list and
/// the last exponent scanned (every monomial up to it is present). A pole
/// at the origin is `Err(order)` unless `allow_pole`.
fn laurent_at_zero(
    num: &crate::rational::CPoly,
    den: &crate::rational::CPoly,
    n_terms: usize,
    allow_pole: bool,
) -> Result<(Vec<(Coeff, PowerLogMonomial)>, f64), usize> {
    if num.is_zero() {
        return Ok((Vec::new(), n_terms as f64));
    }
    let strip = |p: &crate::rational::CPoly| -> (Vec<Coeff>, usize) {
        let cs = p.coeffs().to_vec();
        let k = cs.iter().take_while(|c| c.is_zero()).count();
        (cs[k..].to_vec(), k)
    };
    let (ncs, nk) = strip(num);
    let (dcs, dk) = strip(den);
    let shift = nk as i64 - dk as i64;
    if shift < 0 && !allow_pole {
        return Err((-shift) as usize);
    }
    let d0_inv = dcs[0].inv().expect("unit constant term after stripping");
    let mut taylor: Vec<Coeff> = Vec::new();
    let mut found = 0usize;
    let cap = 8 * n_terms + ncs.len() + dcs.len() + 8;
    let mut last_j = 0usize;
    for j in 0..cap {
        let mut s = ncs.get(j).cloned().unwrap_or_else(Coeff::zero);
        for l in 1..=j.min(dcs.len() - 1) {
            s = s.sub(&dcs[l].mul(&taylor[j - l]));
        }
        let c = s.mul(&d0_inv);
        if !c.is_zero() {
            found += 1;
        }
        taylor.push(c);
        last_j = j;
        if found == n_terms {
            break;
        }
    }
    let terms = taylor
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            (
                c,
                PowerLogMonomial {
                    r: Complex64::new((j as i64 + shift) as f64, 0.0),
                    s: 0,
                },
            )
        })
        .collect();
    Ok((terms, (last_j as i64 + shift) as f64))
}

/// Leading dominance class of a nonzero expansion.
pub fn leading_data(e: &Expansion) -> Result<LeadingData, SeriesError> {
    let (_, m0) = e.terms.first().ok_or(SeriesError::ZeroExpansion)?;
    let le1 = m0.r.re;
    let le2 = m0.s;
    let mut lc: Vec<(Complex64, f64)> = Vec::new();
    for (c, m) in &e.terms {
        if m.r.re == le1 && m.s == le2 {
            lc.push((c.to_c64(), m.r.im));
        } else {
            break;
        }
    }
    let lm = if lc.len() == 1 {
        *m0
    } else {
        PowerLogMonomial {
            r: Complex64::new(le1, 0.0),
            s: le2,
        }
    };
    Ok(LeadingData { le1, le2, lc, lm })
}

/// Termwise formal derivative in the expansion variable:
/// d/dy[y^r (log y)^s] = r·y^{r-1}(log y)^s + s·y^{r-1}(log y)^{s-1}.
pub fn differentiate(e: &Expansion) -> Expansion {
    let mut out: Vec<(Coeff, PowerLogMonomial)> = Vec::new();
    for (c, m) in &e.terms {
        let down = PowerLogMonomial {
            r: m.r - Complex64::new(1.0, 0.0),
            s: m.s,
        };
        let rc = mul_coeff_exponent(c, m.r);
        if !rc.is_zero() {
            push_merged(&mut out, rc, down);
        }
        if m.s > 0 {
            let sc = c.mul(&Coeff::from_int(m.s as i64));
            push_merged(
                &mut out,
                sc,
                PowerLogMonomial {
                    r: down.r,
                    s: m.s - 1,
                },
            );
        }
    }
    Expansion::new(e.boundary.clone(), out, e.order_valid_to - 1.0)
}

fn mul_coeff_exponent(c: &Coeff, r: Complex64) -> Coeff {
    if r.im == 0.0 && r.re.fract() == 0.0 && r.re.abs() < 9e15 {
        c.mul(&Coeff::from_int(r.re as i64))
    } else {
        c.mul(&Coeff::from_c64(r))
    }
}

fn push_merged(out: &mut Vec<(Coeff, PowerLogMonomial)>, c: Coeff, m: PowerLogMonomial) {
    for (c0, m0) in out.iter_mut() {
        if m0.r == m.r && m0.s == m.s {
            *c0 = c0.add(&c);
            return;
        }
    }
    out.push((c, m));
}

/// Cauchy product truncated to the shared validity order.
pub fn multiply(a: &Expansion, b: &Expansion) -> Result<Expansion, SeriesError> {
    if a.boundary != b.boundary {
        return Err(SeriesError::BoundaryMismatch);
    }
    let orient = a.boundary.orientation();
    // validity of the product: a term beyond the cutoff could receive
    // contributions from monomials the truncations no longer carry
    let lead = |e: &Expansion| {
        e.terms
            .first()
            .map(|(_, m)| orient * m.r.re)
            .unwrap_or(orient * e.order_valid_to)
    };
    let valid = (orient * a.order_valid_to + lead(b)).min(orient * b.order_valid_to + lead(a));
    let mut out: Vec<(Coeff, PowerLogMonomial)> = Vec::new();
    for (ca, ma) in &a.terms {
        for (cb, mb) in &b.terms {
            let m = PowerLogMonomial {
                r: ma.r + mb.r,
                s: ma.s + mb.s,
            };
            if orient * m.r.re > valid {
                continue;
            }
            push_merged(&mut out, ca.mul(cb), m);
        }
    }
    Ok(Expansion::new(a.boundary.clone(), out, orient * valid))
}

/// One oscillatory term c · y^{iγ} · e^{iφ(y^{-1/d})}.
#[derive(Clone, Debug)]
pub struct OscTerm {
    pub c: Complex64,
    pub gamma: f64,
    /// Real polynomial φ with φ(0) = 0, ascending coefficients.
    pub phi: Vec<f64>,
}

/// E(y) = Σ_j c_j y^{iγ_j} e^{iφ_j(y^{-1/d})} with a shared scale index d.
/// The (γ_j, φ_j) pairs are pairwise distinct; `normalized` merges
/// coefficients of repeated pairs.
#[derive(Clone, Debug)]
pub struct OscSum {
    pub terms: Vec<OscTerm>,
    pub scale_den: u32,
}

impl OscSum {
    /// Merge coefficients of equal (γ, φ) pairs and drop zero terms.
    pub fn normalized(&self) -> OscSum {
        let mut terms: Vec<OscTerm> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if let Some(existing) = terms
                .iter_mut()
                .find(|u| u.gamma == t.gamma && u.phi == t.phi)
            {
                existing.c += t.c;
            } else {
                terms.push(t.clone());
            }
        }
        terms.retain(|t| t.c.norm() > 0.0);
        OscSum {
            terms,
            scale_den: self.scale_den,
        }
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        let ln = y.ln();
        let u = y.powf(-1.0 / self.scale_den as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut phi = 0.0;
            for c in t.phi.iter().rev() {
                phi = phi * u + c;
            }
            acc += t.c * Complex64::new(0.0, t.gamma * ln + phi).exp();
        }
        acc
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NoncompProbe {
    pub y_min: f64,
    pub levels: u32,
}

impl Default for NoncompProbe {
    fn default() -> Self {
        NoncompProbe {
            y_min: 1e-16,
            levels: 16,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NoncompWitness {
    pub epsilon_hat: f64,
    /// Per-level argmax sample points, ordered toward the boundary.
    pub witness_points: Vec<f64>,
}

const POINTS_PER_LEVEL: usize = 64;

/// Sample |E| on a geometric grid descending to `y_min`, one level at a
/// time, reporting the best lower bound observed and the per-level argmax
/// points as a witness sequence tending to the boundary.
pub fn noncompensation_witness(
    e: &OscSum,
    probe: NoncompProbe,
) -> Result<NoncompWitness, SeriesError> {
    if probe.levels < 8 {
        return Err(SeriesError::TooFewLevels(probe.levels));
    }
    let e = e.normalized();
    if e.terms.is_empty() {
        return Ok(NoncompWitness {
            epsilon_hat: 0.0,
            witness_points: Vec::new(),
        });
    }
    let y_min = probe.y_min.clamp(f64::MIN_POSITIVE, 0.5);
    let y_top = 1.0_f64;
    let ratio = (y_min / y_top).powf(1.0 / probe.levels as f64);
    let mut eps = 0.0_f64;
    let mut witnesses = Vec::with_capacity(probe.levels as usize);
    for level in 0..probe.levels {
        let hi = y_top * ratio.powi(level as i32);
        let lo = hi * ratio;
        let step = (lo / hi).powf(1.0 / POINTS_PER_LEVEL as f64);
        let mut best = (0.0_f64, hi);
        for k in 0..POINTS_PER_LEVEL {
            let y = hi * step.powi(k as i32);
            let v = e.eval(y).norm();
            if v > best.0 {
                best = (v, y);
            }
        }
        eps = eps.max(best.0);
        witnesses.push(best.1);
    }
    Ok(NoncompWitness {
        epsilon_hat: eps,
        witness_points: witnesses,
    })
}
