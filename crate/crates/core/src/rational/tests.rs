use super::*;
use crate::expr::parse;
use crate::scalar::{Coeff, GaussianRational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use std::f64::consts::PI;

pub(crate) fn rf(s: &str) -> RationalFn {
    RationalFn::from_expr(&parse(s).unwrap()).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn roots_simple_pair() {
    let p = CPoly::from_int_slice(&[1, 0, 1]); // 1 + t^2
    let mut rs = roots(&p, 1e-12).unwrap();
    rs.sort_by(|a, b| a.0.im.partial_cmp(&b.0.im).unwrap());
    assert_eq!(rs.len(), 2);
    assert!((rs[0].0 - c(0.0, -1.0)).norm() < 1e-12 && rs[0].1 == 1);
    assert!((rs[1].0 - c(0.0, 1.0)).norm() < 1e-12 && rs[1].1 == 1);
}

#[test]
fn roots_double_from_expanded() {
    // (t-i)^2 presented as t^2 - 2it - 1
    let p = CPoly::new(vec![
        Coeff::from_c64(c(-1.0, 0.0)),
        Coeff::from_c64(c(0.0, -2.0)),
        Coeff::one(),
    ]);
    let rs = roots(&p, 1e-12).unwrap();
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0].1, 2);
    assert!((rs[0].0 - c(0.0, 1.0)).norm() < 1e-6);
}

#[test]
fn roots_real_integers() {
    let p = CPoly::from_int_slice(&[2, -3, 1]); // t^2 - 3t + 2
    let mut rs = roots(&p, 1e-12).unwrap();
    rs.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
    assert!((rs[0].0 - c(1.0, 0.0)).norm() < 1e-12);
    assert!((rs[1].0 - c(2.0, 0.0)).norm() < 1e-12);
}

#[test]
fn roots_higher_degree_with_multiplicity() {
    // (t-1)^3 (t+2) = t^4 - t^3 - 3t^2 + 5t - 2
    let p = CPoly::from_int_slice(&[-2, 5, -3, -1, 1]);
    let mut rs = roots(&p, 1e-12).unwrap();
    rs.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
    assert_eq!(rs.len(), 2);
    assert!((rs[0].0 - c(-2.0, 0.0)).norm() < 1e-10 && rs[0].1 == 1);
    assert!((rs[1].0 - c(1.0, 0.0)).norm() < 1e-4 && rs[1].1 == 3);
}

#[test]
fn partial_fractions_simple_poles() {
    let pf = partial_fractions(&rf("1/(1+t^2)")).unwrap();
    assert!(pf.polynomial_part.is_zero());
    assert_eq!(pf.poles.len(), 2);
    for p in &pf.poles {
        assert_eq!(p.order, 1);
        // cover-up: 1/(2i) at i, -1/(2i) at -i
        let expect = if p.location.im > 0.0 {
            c(0.0, -0.5)
        } else {
            c(0.0, 0.5)
        };
        assert!((p.principal[0] - expect).norm() < 1e-12);
    }
}

#[test]
fn partial_fractions_double_pole() {
    let pf = partial_fractions(&rf("1/(t-i)^2")).unwrap();
    assert_eq!(pf.poles.len(), 1);
    let p = &pf.poles[0];
    assert_eq!(p.order, 2);
    assert!(p.principal[0].norm() < 1e-12); // P^1 = 0
    assert!((p.principal[1] - c(1.0, 0.0)).norm() < 1e-12); // P^2 = 1
}

#[test]
fn partial_fractions_cover_up_pair() {
    let pf = partial_fractions(&rf("1/((t-i)*(t-2*i))")).unwrap();
    assert_eq!(pf.poles.len(), 2);
    for p in &pf.poles {
        let expect = if (p.location - c(0.0, 1.0)).norm() < 1e-9 {
            c(0.0, 1.0) // 1/(i-2i) = i
        } else {
            c(0.0, -1.0) // 1/(2i-i) = -i
        };
        assert!((p.principal[0] - expect).norm() < 1e-12);
    }
}

#[test]
fn partial_fractions_with_polynomial_part() {
    let pf = partial_fractions(&rf("(t^3+1)/(1+t^2)")).unwrap();
    assert_eq!(pf.polynomial_part.degree(), Some(1));
    // t^3+1 = t(1+t^2) + (1 - t)
    assert!((pf.polynomial_part.eval(c(2.0, 0.0)) - c(2.0, 0.0)).norm() < 1e-12);
}

#[test]
fn integrability_examples() {
    let r = classify_integrability(&rf("1/(1+t^2)")).unwrap();
    assert!(r.l1_on_r && r.smooth_on_r && r.degree_gap == 2);

    let r = classify_integrability(&rf("1/t")).unwrap();
    assert!(!r.l1_on_r && !r.continuous_on_r && r.degree_gap == 1);
    assert_eq!(r.real_poles.len(), 1);

    let r = classify_integrability(&rf("t/(1+t^2)")).unwrap();
    assert!(!r.l1_on_r && r.smooth_on_r && r.degree_gap == 1);
}

#[test]
fn strip_width_examples() {
    assert_eq!(strip_widths(&rf("1/(1+t^2)")).unwrap(), (1.0, 1.0));
    let (dp, dm) = strip_widths(&rf("1/(t-i)^2")).unwrap();
    assert!((dp - 1.0).abs() < 1e-9 && dm.is_infinite());
    let (dp, dm) = strip_widths(&rf("1/((t-i)*(t-2*i))")).unwrap();
    assert!((dp - 1.0).abs() < 1e-9 && dm.is_infinite());
    assert_eq!(strip_widths(&rf("1/t")).unwrap(), (0.0, 0.0));
}

#[test]
fn sector_angle_examples() {
    let (tp, tm) = sector_angles(&rf("1/(1+t^2)")).unwrap();
    assert!((tp - PI / 2.0).abs() < 1e-9 && (tm - PI / 2.0).abs() < 1e-9);

    let (tp, tm) = sector_angles(&rf("1/(1+t)")).unwrap();
    assert!((tp - PI).abs() < 1e-9 && (tm - PI).abs() < 1e-9);

    let (tp, tm) = sector_angles(&rf("1+t")).unwrap();
    assert!(tp.is_infinite() && tm.is_infinite());

    assert_eq!(sector_angles(&rf("1/(t-1)")).unwrap(), (0.0, 0.0));
}

#[test]
fn strips_and_sectors_scale_invariant() {
    for s in ["1/(1+t^2)", "1/((t-i)*(t-2*i))", "(t+1)/(1+t^4)"] {
        let f = rf(s);
        let g = f.scale(c(3.5, -1.25));
        assert_eq!(strip_widths(&f).unwrap(), strip_widths(&g).unwrap());
        assert_eq!(sector_angles(&f).unwrap(), sector_angles(&g).unwrap());
    }
}

#[test]
fn residue_sum_vanishes_for_integrable() {
    for s in [
        "1/(1+t^2)",
        "1/(t-i)^2",
        "1/((t-i)*(t-2*i))",
        "1/(1+t^2)^2",
        "(t+1)/(1+t^4)",
        "1/(1+t)^3",
    ] {
        let pf = partial_fractions(&rf(s)).unwrap();
        let sum: Complex64 = pf.poles.iter().map(|p| p.principal[0]).sum();
        assert!(sum.norm() < 1e-9, "residue sum {:e} for {}", sum.norm(), s);
    }
}

#[test]
fn entire_check_examples() {
    let (e, p) = entire_check(&rf("(t^2-1)/(t-1)")).unwrap();
    assert!(e);
    let p = p.unwrap();
    // t + 1
    assert_eq!(p.degree(), Some(1));
    assert!(p.coeff(0).sub(&Coeff::one()).is_zero());

    assert!(!entire_check(&rf("1/(1+t^2)")).unwrap().0);

    let (e, p) = entire_check(&rf("5")).unwrap();
    assert!(e && p.unwrap().degree() == Some(0));
}

fn exact_coeffs(vals: &[i64]) -> Vec<Coeff> {
    vals.iter().map(|&v| Coeff::from_int(v)).collect()
}

#[test]
fn rationality_geometric() {
    let ones = exact_coeffs(&[1; 12]);
    let r = rationality_test(&ones, 1).unwrap();
    assert!(r.rational);
    let rec = r.reconstruction.unwrap();
    // p = 1, q = 1 - y (up to normalization; den is monic after reduction)
    let ratio = rec.eval(c(0.3, 0.0));
    assert!((ratio - c(1.0 / 0.7, 0.0)).norm() < 1e-12);
}

#[test]
fn rationality_rejects_factorials() {
    // 1/j! coefficients are not rational of any small degree
    let coeffs: Vec<Coeff> = (0..12)
        .map(|j| {
            let mut f = BigInt::from(1);
            for k in 1..=j {
                f *= k;
            }
            Coeff::Exact(GaussianRational::new(
                BigRational::new(BigInt::from(1), f),
                BigRational::from_integer(0.into()),
            ))
        })
        .collect();
    assert!(!rationality_test(&coeffs, 3).unwrap().rational);
    assert_eq!(degree_bound(&coeffs, 4).unwrap(), DegreeBound::NotFound);
}

#[test]
fn rationality_zero_sequence() {
    let zeros = exact_coeffs(&[0, 0, 0, 0]);
    let r = rationality_test(&zeros, 0).unwrap();
    assert!(r.rational);
    assert!(r.reconstruction.unwrap().num.is_zero());
}

#[test]
fn degree_bound_examples() {
    // coefficients of 1/(1-y)^2 are j+1
    let coeffs: Vec<Coeff> = (1..=12).map(Coeff::from_int).collect();
    assert_eq!(degree_bound(&coeffs, 4).unwrap(), DegreeBound::Found(2));
    assert!(!rationality_test(&coeffs, 1).unwrap().rational);

    let ones = exact_coeffs(&[1; 12]);
    assert_eq!(degree_bound(&ones, 3).unwrap(), DegreeBound::Found(1));
}

#[test]
fn degree_bound_monotone_on_fixtures() {
    let coeffs: Vec<Coeff> = (1..=16).map(Coeff::from_int).collect();
    if let DegreeBound::Found(k) = degree_bound(&coeffs, 5).unwrap() {
        for kk in k..=5 {
            assert!(rationality_test(&coeffs, kk).unwrap().rational);
        }
    } else {
        panic!("expected a degree bound");
    }
}

#[test]
fn rationality_float_path() {
    // float coefficients of 1/(1-y/2): c_j = 2^{-j}
    let coeffs: Vec<Coeff> = (0..12).map(|j| Coeff::from_f64(0.5f64.powi(j))).collect();
    let r = rationality_test(&coeffs, 1).unwrap();
    assert!(r.rational);
    let rec = r.reconstruction.unwrap();
    assert!((rec.eval(c(0.5, 0.0)) - c(4.0 / 3.0, 0.0)).norm() < 1e-9);

    // and a float non-example
    let coeffs: Vec<Coeff> = (0..12)
        .map(|j| Coeff::from_f64(1.0 / (1.0 + (j * j) as f64)))
        .collect();
    assert!(!rationality_test(&coeffs, 2).unwrap().rational);
}

#[test]
fn taylor_recurrence_matches_series() {
    let f = rf("1/(1+t^2)");
    let cs = taylor_coeffs(&f, 8).unwrap();
    let expect = [1, 0, -1, 0, 1, 0, -1, 0];
    for (a, e) in cs.iter().zip(expect) {
        assert!(a.sub(&Coeff::from_int(e)).is_zero());
    }
    assert!(matches!(
        taylor_coeffs(&rf("1/t"), 4),
        Err(RationalError::PoleAtOrigin)
    ));
}

#[test]
fn exact_reduction_and_derivative() {
    let f = rf("(t^2-1)/((t-1)*(1+t^2))");
    // reduces to (t+1)/(1+t^2)
    assert_eq!(f.num.degree(), Some(1));
    assert_eq!(f.den.degree(), Some(2));

    let df = f.derivative();
    // check against a central difference
    let t = c(0.7, 0.0);
    let h = 1e-6;
    let fd = (f.eval(t + c(h, 0.0)) - f.eval(t - c(h, 0.0))) / c(2.0 * h, 0.0);
    assert!((df.eval(t) - fd).norm() < 1e-8);
}

#[test]
fn random_exact_rational_recovery() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..12 {
        let dn = rng.gen_range(0..=3usize);
        let dd = rng.gen_range(0..=3usize);
        let k = dn.max(dd);
        let mut num: Vec<i64> = (0..=dn).map(|_| rng.gen_range(-4..=4)).collect();
        let mut den: Vec<i64> = (0..=dd).map(|_| rng.gen_range(-4..=4)).collect();
        if *num.last().unwrap() == 0 {
            *num.last_mut().unwrap() = 1;
        }
        if *den.last().unwrap() == 0 {
            *den.last_mut().unwrap() = 2;
        }
        den[0] = 1; // analytic at 0
        let f = RationalFn::new(CPoly::from_int_slice(&num), CPoly::from_int_slice(&den)).unwrap();
        let cs = taylor_coeffs(&f, 2 * k + 4).unwrap();
        let r = rationality_test(&cs, k).unwrap();
        assert!(r.rational, "degree-{} function rejected", k);
        let rec = r.reconstruction.expect("reconstruction should verify");
        // p*den == num*q exactly (proportional reconstruction)
        let lhs = rec.num.mul(&f.den);
        let rhs = f.num.mul(&rec.den);
        assert_eq!(lhs, rhs);
    }
}
