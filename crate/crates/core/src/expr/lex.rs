use super::ExprError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::pow::Pow;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Number(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub offset: usize,
}

pub fn lex(text: &str) -> Result<Vec<Spanned>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        let start = k;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                k += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push(Spanned { tok, offset: start });
                k += 1;
            }
            '0'..='9' | '.' => {
                let mut int_digits = String::new();
                let mut frac_digits = String::new();
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    int_digits.push(bytes[k] as char);
                    k += 1;
                }
                if k < bytes.len() && bytes[k] == b'.' {
                    k += 1;
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        frac_digits.push(bytes[k] as char);
                        k += 1;
                    }
                }
                if int_digits.is_empty() && frac_digits.is_empty() {
                    return Err(ExprError::Syntax {
                        offset: start,
                        message: "expected digits".into(),
                    });
                }
                let whole: BigInt = if int_digits.is_empty() {
                    BigInt::from(0)
                } else {
                    int_digits.parse().unwrap()
                };
                let mut value = BigRational::from_integer(whole);
                if !frac_digits.is_empty() {
                    let num: BigInt = frac_digits.parse().unwrap();
                    let den = BigInt::from(10).pow(frac_digits.len() as u32);
                    value += BigRational::new(num, den);
                }
                out.push(Spanned {
                    tok: Tok::Number(value),
                    offset: start,
                });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut name = String::new();
                while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                    name.push(bytes[k] as char);
                    k += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(name),
                    offset: start,
                });
            }
            _ => {
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character {:?}", c),
                });
            }
        }
    }
    Ok(out)
}
