use super::lex::{lex, Spanned, Tok};
use super::{Expr, ExprError};
use crate::scalar::GaussianRational;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Largest admitted integer exponent; larger powers are rejected rather
/// than expanded.
const MAX_POW: i64 = 512;

/// Cap on the polynomial degree an expression may expand to. Nested
/// powers multiply degrees, and denominator validation expands them.
const MAX_DEGREE: u64 = 4096;

/// Parenthesis/function nesting bound for the recursive-descent parser.
const MAX_DEPTH: u32 = 200;

/// Parse an expression in the restricted grammar.
///
/// Returns the tree after constant folding and normalization of integer
/// powers (negative exponents become quotients, `^0` and `^1` disappear).
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Syntax {
            offset: 0,
            message: "empty input".into(),
        });
    }
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        depth: 0,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ExprError::Syntax {
            offset: p.toks[p.pos].offset,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: usize,
    depth: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |s| s.offset)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        let off = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ExprError::Syntax {
                offset: off,
                message: format!("expected {}", what),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ExprError::Syntax {
                offset: self.offset(),
                message: format!("nesting deeper than {} levels", MAX_DEPTH),
            });
        }
        let out = self.expr_inner();
        self.depth -= 1;
        out
    }

    fn expr_inner(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = mk_add(lhs, rhs);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = mk_sub(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = mk_mul(lhs, rhs);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let off = self.offset();
                    let rhs = self.unary()?;
                    lhs = mk_div(lhs, rhs, off)?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    negate = !negate;
                    self.pos += 1;
                }
                Some(Tok::Plus) => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let inner = self.power()?;
        Ok(if negate { mk_neg(inner) } else { inner })
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base_off = self.offset();
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp_off = self.offset();
            let exp = self.exponent()?;
            mk_pow(base, exp, base_off, exp_off)
        } else {
            Ok(base)
        }
    }

    /// An exponent is a signed number, `i`, or a parenthesized constant
    /// expression.
    fn exponent(&mut self) -> Result<GaussianRational, ExprError> {
        let mut negate = false;
        while self.peek() == Some(&Tok::Minus) {
            negate = !negate;
            self.pos += 1;
        }
        let off = self.offset();
        let e = self.atom()?;
        let c = match e {
            Expr::Const(c) => c,
            _ => {
                return Err(ExprError::Unsupported {
                    offset: off,
                    message: "exponent must be a constant".into(),
                })
            }
        };
        Ok(if negate { -c } else { c })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Number(n)) => Ok(Expr::Const(GaussianRational::new(n, BigRational::zero()))),
            Some(Tok::Ident(name)) => match name.as_str() {
                "t" => Ok(Expr::Var),
                "i" => Ok(Expr::Const(GaussianRational::i())),
                "log" => {
                    self.expect(Tok::LParen, "'(' after log")?;
                    let arg_off = self.offset();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    if arg == Expr::Var {
                        Ok(Expr::Log)
                    } else {
                        Err(ExprError::Unsupported {
                            offset: arg_off,
                            message: "log applies only to the bare variable t".into(),
                        })
                    }
                }
                "exp" => {
                    self.expect(Tok::LParen, "'(' after exp")?;
                    let arg_off = self.offset();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    mk_phase(arg, arg_off)
                }
                _ => Err(ExprError::Syntax {
                    offset: off,
                    message: format!("unknown identifier {:?}", name),
                }),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(t) => Err(ExprError::Syntax {
                offset: off,
                message: format!("unexpected token {:?}", t),
            }),
            None => Err(ExprError::Syntax {
                offset: self.end,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

fn fold2(
    a: &Expr,
    b: &Expr,
    f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
) -> Option<Expr> {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Some(Expr::Const(f(x, y))),
        _ => None,
    }
}

pub(super) fn mk_add(a: Expr, b: Expr) -> Expr {
    fold2(&a, &b, |x, y| x + y).unwrap_or_else(|| Expr::Add(Box::new(a), Box::new(b)))
}

pub(super) fn mk_sub(a: Expr, b: Expr) -> Expr {
    fold2(&a, &b, |x, y| x - y).unwrap_or_else(|| Expr::Sub(Box::new(a), Box::new(b)))
}

pub(super) fn mk_mul(a: Expr, b: Expr) -> Expr {
    fold2(&a, &b, |x, y| x * y).unwrap_or_else(|| Expr::Mul(Box::new(a), Box::new(b)))
}

pub(super) fn mk_neg(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub(super) fn mk_div(a: Expr, b: Expr, den_offset: usize) -> Result<Expr, ExprError> {
    match b.poly_coeffs() {
        Some(coeffs) if !coeffs.is_empty() => {
            if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
                return Ok(Expr::Const(x / y));
            }
            Ok(Expr::Div(Box::new(a), Box::new(b)))
        }
        Some(_) => Err(ExprError::Unsupported {
            offset: den_offset,
            message: "denominator is the zero polynomial".into(),
        }),
        None => Err(ExprError::Unsupported {
            offset: den_offset,
            message: "denominator must be a polynomial in t".into(),
        }),
    }
}

pub(super) fn mk_pow(
    base: Expr,
    exp: GaussianRational,
    base_offset: usize,
    exp_offset: usize,
) -> Result<Expr, ExprError> {
    if let Some(k) = exp.as_integer() {
        let k = k.to_i64().ok_or_else(|| ExprError::Unsupported {
            offset: exp_offset,
            message: "integer exponent out of range".into(),
        })?;
        if k.abs() > MAX_POW {
            return Err(ExprError::Unsupported {
                offset: exp_offset,
                message: format!("integer exponent magnitude exceeds {}", MAX_POW),
            });
        }
        if k == 0 {
            return Ok(Expr::constant(1));
        }
        if k == 1 {
            return Ok(base);
        }
        if base.degree_hint().saturating_mul(k.unsigned_abs()) > MAX_DEGREE {
            return Err(ExprError::Unsupported {
                offset: exp_offset,
                message: format!("polynomial degree exceeds the supported bound {}", MAX_DEGREE),
            });
        }
        if k < 0 {
            let den = mk_pow(
                base,
                GaussianRational::from_int(-k),
                base_offset,
                exp_offset,
            )?;
            return mk_div(Expr::constant(1), den, base_offset);
        }
        if let Expr::Const(c) = &base {
            return Ok(Expr::Const(c.pow(k as u32)));
        }
        return Ok(Expr::Pow(Box::new(base), k as u32));
    }
    // Non-integer exponents apply only to the bare variable.
    if base != Expr::Var {
        return Err(ExprError::Unsupported {
            offset: base_offset,
            message: "non-integer powers apply only to the bare variable t".into(),
        });
    }
    let r = exp.to_c64();
    if !r.re.is_finite() || !r.im.is_finite() {
        return Err(ExprError::Unsupported {
            offset: exp_offset,
            message: "exponent does not fit in a float pair".into(),
        });
    }
    Ok(Expr::CPow(r))
}

pub(super) fn mk_phase(arg: Expr, arg_offset: usize) -> Result<Expr, ExprError> {
    let coeffs = arg.poly_coeffs().ok_or_else(|| ExprError::Unsupported {
        offset: arg_offset,
        message: "exp argument must be i times a real-coefficient polynomial in t".into(),
    })?;
    // arg = i*P(t) with real P means every coefficient is purely imaginary.
    let mut real = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if !c.re.is_zero() {
            return Err(ExprError::Unsupported {
                offset: arg_offset,
                message: "exp argument must be purely imaginary: use exp(i*P(t))".into(),
            });
        }
        real.push(c.im.clone());
    }
    while real.last().map_or(false, |c| c.is_zero()) {
        real.pop();
    }
    if real.is_empty() {
        return Ok(Expr::constant(1));
    }
    Ok(Expr::Phase(real))
}
