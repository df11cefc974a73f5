use super::{Expr, ExprError, FunctionClass};
use num_complex::Complex64;
use num_traits::ToPrimitive;

const POLE_TOL: f64 = 1e-12;

/// Evaluate at a real point.
///
/// `t > 0` is required as soon as the expression contains a complex power
/// or a logarithm; quotients report a pole hit when the denominator value
/// falls below `1e-12` of its coefficient-magnitude scale.
pub fn eval_real(e: &Expr, t: f64) -> Result<Complex64, ExprError> {
    let (v, _) = walk(e, Complex64::new(t, 0.0), true)?;
    Ok(v)
}

/// Evaluate the holomorphic extension at a complex point.
///
/// Only the `Rational` and `RationalPhase` classes extend off the real
/// line within this grammar; power-log expressions carry branch cuts and
/// are refused.
pub fn eval_complex(e: &Expr, z: Complex64) -> Result<Complex64, ExprError> {
    let class = e.classify();
    if !matches!(
        class,
        FunctionClass::Rational | FunctionClass::RationalPhase
    ) {
        return Err(ExprError::NotContinuable(class));
    }
    let (v, _) = walk(e, z, false)?;
    Ok(v)
}

/// Recursive evaluation carrying a coefficient-magnitude estimate used for
/// the relative pole test. The magnitude is an upper-bound style scale:
/// |coeffs| and |z| propagated through sums and products.
fn walk(e: &Expr, z: Complex64, real_domain: bool) -> Result<(Complex64, f64), ExprError> {
    match e {
        Expr::Const(c) => {
            let v = c.to_c64();
            Ok((v, v.norm()))
        }
        Expr::Var => Ok((z, z.norm())),
        Expr::Neg(x) => {
            let (v, m) = walk(x, z, real_domain)?;
            Ok((-v, m))
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (va, ma) = walk(a, z, real_domain)?;
            let (vb, mb) = walk(b, z, real_domain)?;
            let v = if matches!(e, Expr::Add(..)) {
                va + vb
            } else {
                va - vb
            };
            Ok((v, ma + mb))
        }
        Expr::Mul(a, b) => {
            let (va, ma) = walk(a, z, real_domain)?;
            let (vb, mb) = walk(b, z, real_domain)?;
            Ok((va * vb, ma * mb))
        }
        Expr::Div(a, b) => {
            let (va, ma) = walk(a, z, real_domain)?;
            let (vb, mb) = walk(b, z, real_domain)?;
            let scale = mb.max(1.0);
            if vb.norm() <= POLE_TOL * scale {
                return Err(ExprError::PoleHit {
                    tol: POLE_TOL,
                    denom_mag: vb.norm(),
                });
            }
            Ok((va / vb, ma / vb.norm()))
        }
        Expr::Pow(base, k) => {
            let (vb, mb) = walk(base, z, real_domain)?;
            Ok((vb.powi(*k as i32), mb.powi(*k as i32)))
        }
        Expr::CPow(r) => {
            if real_domain {
                if z.re <= 0.0 {
                    return Err(ExprError::Domain(format!(
                        "t^r requires t > 0, got t = {}",
                        z.re
                    )));
                }
                let ln = z.re.ln();
                let v = (r * ln).exp();
                Ok((v, v.norm()))
            } else {
                // Unreachable through eval_complex (class check), kept for
                // direct internal callers on the positive axis.
                if z.im != 0.0 || z.re <= 0.0 {
                    return Err(ExprError::NotContinuable(FunctionClass::PowerLog));
                }
                let v = (r * z.re.ln()).exp();
                Ok((v, v.norm()))
            }
        }
        Expr::Log => {
            if z.im != 0.0 || z.re <= 0.0 {
                return Err(ExprError::Domain(format!(
                    "log(t) requires real t > 0, got {}",
                    z
                )));
            }
            let v = Complex64::new(z.re.ln(), 0.0);
            Ok((v, v.norm().max(1.0)))
        }
        Expr::Phase(p) => {
            // e^{iP(z)}: evaluate P by Horner over the complexes.
            let mut acc = Complex64::new(0.0, 0.0);
            for c in p.iter().rev() {
                acc = acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            }
            let v = (Complex64::i() * acc).exp();
            Ok((v, v.norm().max(1.0)))
        }
    }
}
