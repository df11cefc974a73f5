use super::*;
use crate::scalar::GaussianRational;
use num_complex::Complex64;
use proptest::prelude::*;

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

#[test]
fn parse_rational_quotient() {
    let e = p("1/(1+t^2)");
    match &e {
        Expr::Div(n, d) => {
            assert_eq!(**n, Expr::constant(1));
            assert_eq!(
                **d,
                Expr::Add(
                    Box::new(Expr::constant(1)),
                    Box::new(Expr::Pow(Box::new(Expr::Var), 2))
                )
            );
        }
        other => panic!("unexpected tree {:?}", other),
    }
}

#[test]
fn parse_phase_product() {
    let e = p("t*exp(i*t^4/4)");
    match &e {
        Expr::Mul(a, b) => {
            assert_eq!(**a, Expr::Var);
            match &**b {
                Expr::Phase(poly) => {
                    assert_eq!(poly.len(), 5);
                    assert_eq!(poly[4], num_rational::BigRational::new(1.into(), 4.into()));
                }
                other => panic!("expected phase, got {:?}", other),
            }
        }
        other => panic!("unexpected tree {:?}", other),
    }
}

#[test]
fn parse_error_offset() {
    match parse("1/(1+") {
        Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 5),
        other => panic!("expected syntax error, got {:?}", other),
    }
}

#[test]
fn unsupported_constructs() {
    assert!(matches!(
        parse("log(1+t)"),
        Err(ExprError::Unsupported { .. })
    ));
    assert!(matches!(
        parse("exp(t)"),
        Err(ExprError::Unsupported { .. })
    ));
    assert!(matches!(
        parse("1/log(t)"),
        Err(ExprError::Unsupported { .. })
    ));
    assert!(matches!(parse("1/0"), Err(ExprError::Unsupported { .. })));
    assert!(matches!(
        parse("(1+t)^(1/2)"),
        Err(ExprError::Unsupported { .. })
    ));
}

#[test]
fn classify_examples() {
    assert_eq!(p("1/(1+t^2)").classify(), FunctionClass::Rational);
    assert_eq!(
        p("exp(i*t^2)/(1+t^2)").classify(),
        FunctionClass::RationalPhase
    );
    assert_eq!(p("t^(1/2)*log(t)").classify(), FunctionClass::PowerLog);
    assert_eq!(p("exp(i*t^2)*log(t)").classify(), FunctionClass::General);
    assert_eq!(p("exp(i*t^2)+1/(1+t^2)").classify(), FunctionClass::General);
    // sums sharing one phase keep it
    assert_eq!(
        p("exp(i*t^2)*t+exp(i*t^2)/(1+t^2)").classify(),
        FunctionClass::RationalPhase
    );
}

#[test]
fn eval_real_values() {
    let e = p("1/(1+t^2)");
    assert_eq!(eval_real(&e, 1.0).unwrap(), Complex64::new(0.5, 0.0));
    assert_eq!(eval_real(&e, 0.0).unwrap(), Complex64::new(1.0, 0.0));

    // independent high-precision reference for t*exp(i*t^4/4) at t = 1
    let v = eval_real(&p("t*exp(i*t^4/4)"), 1.0).unwrap();
    assert!((v.re - 0.968912421710644784).abs() < 1e-12);
    assert!((v.im - 0.247403959254522930).abs() < 1e-12);
}

#[test]
fn eval_complex_values() {
    let e = p("1/(1+t^2)");
    let v = eval_complex(&e, Complex64::new(0.0, 2.0)).unwrap();
    assert!((v - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);

    let e2 = p("1/(t-i)^2");
    let v2 = eval_complex(&e2, Complex64::new(0.0, 0.0)).unwrap();
    assert!((v2 - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

    assert!(matches!(
        eval_complex(&p("t^(1/2)"), Complex64::new(-1.0, 0.0)),
        Err(ExprError::NotContinuable(_))
    ));
}

#[test]
fn eval_pole_and_domain_errors() {
    assert!(matches!(
        eval_real(&p("1/t"), 0.0),
        Err(ExprError::PoleHit { .. })
    ));
    assert!(matches!(
        eval_real(&p("1/(t-1)"), 1.0 + 1e-14),
        Err(ExprError::PoleHit { .. })
    ));
    assert!(matches!(
        eval_real(&p("log(t)"), -2.0),
        Err(ExprError::Domain(_))
    ));
    assert!(matches!(
        eval_real(&p("t^(1/2)"), -1.0),
        Err(ExprError::Domain(_))
    ));
}

#[test]
fn eval_complex_matches_eval_real_on_axis() {
    for s in ["1/(1+t^2)", "(t^2-1)/(t^4+t^2+3)", "exp(i*t^2)/(1+t^2)"] {
        let e = p(s);
        for k in 0..40 {
            let t = -4.0 + 0.2 * k as f64;
            let a = eval_real(&e, t).unwrap();
            let b = eval_complex(&e, Complex64::new(t, 0.0)).unwrap();
            assert_eq!(a, b, "same code path must give identical values");
        }
    }
}

pub(crate) const CORPUS: &[&str] = &[
    "1/(1+t^2)",
    "1/(t-i)^2",
    "1/((t-i)*(t-2*i))",
    "1/((t+i)*(t+2*i))",
    "1/(1+t^2)^2",
    "(t+1)/(1+t^4)",
    "t/(1+t^4)",
    "1/(t^2-2*t+2)",
    "1/(1+t)^3",
    "1/t",
    "t/(1+t^2)",
    "1+t",
    "exp(i*t^2)",
    "t*exp(i*t^4/4)",
    "exp(i*t^2)/(1+t^2)",
    "t^(1/2)*log(t)",
    "t^(1/2)/(1+t^2)",
    "t^(0.5+1.5*i)",
    "t^(0.5-1.5*i)",
    "t^-0.75",
    "log(t)/(1+t)^2",
    "-3/4*t+2",
    "(1/2+3/4*i)*t^3-i",
];

#[test]
fn printer_fixpoint_on_corpus() {
    for s in CORPUS {
        let once = p(s).to_string();
        let twice = p(&once).to_string();
        assert_eq!(once, twice, "printer not a fixpoint on {:?}", s);
    }
}

fn arb_rational() -> impl Strategy<Value = GaussianRational> {
    (-6i64..7, 1i64..5, -6i64..7, 1i64..5).prop_map(|(a, b, c, d)| {
        GaussianRational::new(
            num_rational::BigRational::new(a.into(), b.into()),
            num_rational::BigRational::new(c.into(), d.into()),
        )
    })
}

/// Normalized trees only: built through the same constructors the parser
/// uses, so printing them reparses to an identical tree.
fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        arb_rational().prop_map(Expr::Const),
        Just(Expr::Var),
        Just(Expr::Log),
        (Just(()), -40i64..40, 1i64..9).prop_map(|(_, n, d)| {
            let r = n as f64 / d as f64;
            if r.fract() == 0.0 {
                Expr::Var
            } else {
                Expr::CPow(Complex64::new(r, 0.0))
            }
        }),
        prop::collection::vec((-5i64..6, 1i64..5), 1..4).prop_map(|cs| {
            let poly: Vec<_> = cs
                .into_iter()
                .map(|(n, d)| num_rational::BigRational::new(n.into(), d.into()))
                .collect();
            super::parse::mk_phase(
                Expr::Mul(
                    Box::new(Expr::Const(GaussianRational::i())),
                    Box::new(
                        poly.iter()
                            .enumerate()
                            .fold(Expr::constant(0), |acc, (k, c)| {
                                let term = Expr::Mul(
                                    Box::new(Expr::Const(GaussianRational::new(
                                        c.clone(),
                                        num_rational::BigRational::from_integer(0.into()),
                                    ))),
                                    Box::new(if k == 0 {
                                        Expr::constant(1)
                                    } else {
                                        Expr::Pow(Box::new(Expr::Var), k.max(1) as u32)
                                    }),
                                );
                                super::parse::mk_add(acc, term)
                            }),
                    ),
                ),
                0,
            )
            .unwrap_or(Expr::Var)
        }),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| super::parse::mk_add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| super::parse::mk_sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| super::parse::mk_mul(a, b)),
            (inner.clone(), 2u32..4).prop_map(|(a, k)| {
                super::parse::mk_pow(a, GaussianRational::from_int(k as i64), 0, 0).unwrap()
            }),
            inner.clone().prop_map(super::parse::mk_neg),
            (inner.clone(), prop::collection::vec(arb_rational(), 1..3)).prop_map(|(n, ds)| {
                // polynomial denominators only
                let den = ds
                    .iter()
                    .enumerate()
                    .fold(Expr::constant(1), |acc, (k, c)| {
                        super::parse::mk_add(
                            acc,
                            super::parse::mk_mul(
                                Expr::Const(c.clone()),
                                if k == 0 {
                                    Expr::Var
                                } else {
                                    Expr::Pow(Box::new(Expr::Var), (k + 1) as u32)
                                },
                            ),
                        )
                    });
                super::parse::mk_div(n, den, 0).unwrap()
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printer_fixpoint_random(e in arb_expr()) {
        let s1 = e.to_string();
        let reparsed = parse(&s1).unwrap();
        prop_assert_eq!(&s1, &reparsed.to_string());
    }

    #[test]
    fn classify_monotone_under_mul(a in arb_expr(), b in arb_expr()) {
        let prod = Expr::Mul(Box::new(a.clone()), Box::new(b.clone()));
        prop_assert_eq!(prod.classify(), a.classify().join(b.classify()));
    }
}

#[test]
fn adversarial_inputs_rejected_not_crashed() {
    // nested powers that would expand to astronomical degrees
    assert!(matches!(
        parse("1/(((t^512)^512)^512)"),
        Err(ExprError::Unsupported { .. })
    ));
    // deep parenthesis nesting
    let deep = format!("{}t{}", "(".repeat(5000), ")".repeat(5000));
    assert!(matches!(parse(&deep), Err(ExprError::Syntax { .. })));
    // long unary chains fold instead of recursing
    let minuses = format!("{}t", "-".repeat(100_000));
    let e = parse(&minuses).unwrap();
    assert_eq!(e, Expr::Var); // even number of minuses
    // moderate nesting still parses
    let ok = format!("{}t{}", "(".repeat(64), ")".repeat(64));
    assert_eq!(parse(&ok).unwrap(), Expr::Var);
}

#[test]
fn duplicate_monomials_merge_in_expansions() {
    use crate::series::{Boundary, Expansion, PowerLogMonomial};
    let m = PowerLogMonomial {
        r: Complex64::new(-1.0, 0.0),
        s: 1,
    };
    let e = Expansion::new(
        Boundary::zero_plus(),
        vec![
            (crate::scalar::Coeff::from_int(2), m),
            (crate::scalar::Coeff::from_int(3), m),
        ],
        4.0,
    );
    assert_eq!(e.terms().len(), 1);
    assert!(e.terms()[0].0.sub(&crate::scalar::Coeff::from_int(5)).is_zero());
}

/// Deterministic mutation sweep standing in for the external fuzzer on
/// toolchains without a sanitizer runtime: random edits of corpus strings
/// must never panic the parser, and accepted outputs must round-trip.
#[test]
fn mutation_sweep_never_panics() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xF0225);
    let alphabet: Vec<u8> = b"0123456789.+-*/^()ti explog".to_vec();
    let mut checked = 0usize;
    for round in 0..8_000 {
        let base = CORPUS[round % CORPUS.len()].as_bytes().to_vec();
        let mut buf = base;
        for _ in 0..rng.gen_range(1..6) {
            match rng.gen_range(0..3) {
                0 if !buf.is_empty() => {
                    let k = rng.gen_range(0..buf.len());
                    buf[k] = alphabet[rng.gen_range(0..alphabet.len())];
                }
                1 => {
                    let k = rng.gen_range(0..=buf.len());
                    buf.insert(k, alphabet[rng.gen_range(0..alphabet.len())]);
                }
                _ if !buf.is_empty() => {
                    buf.remove(rng.gen_range(0..buf.len()));
                }
                _ => {}
            }
        }
        let Ok(text) = std::str::from_utf8(&buf) else { continue };
        match parse(text) {
            Ok(e) => {
                let once = e.to_string();
                let re = parse(&once).unwrap_or_else(|err| {
                    panic!("printed form {:?} of {:?} failed: {}", once, text, err)
                });
                assert_eq!(once, re.to_string(), "fixpoint broke on {:?}", text);
                let _ = e.classify();
                let _ = eval_real(&e, 0.6);
                checked += 1;
            }
            Err(ExprError::Syntax { offset, .. }) | Err(ExprError::Unsupported { offset, .. }) => {
                assert!(offset <= text.len());
            }
            Err(_) => {}
        }
    }
    assert!(checked > 400, "sweep accepted only {} inputs", checked);
}
