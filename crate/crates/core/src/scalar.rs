//! Exact Gaussian-rational scalars and a dual exact/float coefficient type.
//!
//! The coefficient field is ℚ(i): complex numbers with rational real and
//! imaginary parts, stored as `num_rational::BigRational` pairs in lowest
//! terms with positive denominators (the representation `Ratio` maintains).
//! Operations that leave ℚ(i) (root finding, quadrature) convert to
//! `Complex64` and stay there.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An element of ℚ(i), exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    /// n/d as a real rational. Panics if d == 0.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(n), BigInt::from(d)),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|² = z·conj(z), a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// True when the value is a (real) integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rat(r: &BigRational) -> String {
            if r.is_integer() {
                r.to_integer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        if self.im.is_zero() {
            write!(f, "{}", rat(&self.re))
        } else if self.re.is_zero() {
            if self.im.is_one() {
                write!(f, "i")
            } else if (-&self.im).is_one() {
                write!(f, "-i")
            } else {
                write!(f, "{}*i", rat(&self.im))
            }
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            let a = self.im.abs();
            if a.is_one() {
                write!(f, "({}{}i)", rat(&self.re), sign)
            } else {
                write!(f, "({}{}{}*i)", rat(&self.re), sign, rat(&a))
            }
        }
    }
}

macro_rules! binop_gq {
    ($trait:ident, $meth:ident, |$a:ident, $b:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $meth(self, rhs: &'b GaussianRational) -> GaussianRational {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $meth(self, rhs: GaussianRational) -> GaussianRational {
                $trait::$meth(&self, &rhs)
            }
        }
    };
}

binop_gq!(Add, add, |a, b| GaussianRational {
    re: &a.re + &b.re,
    im: &a.im + &b.im,
});
binop_gq!(Sub, sub, |a, b| GaussianRational {
    re: &a.re - &b.re,
    im: &a.im - &b.im,
});
binop_gq!(Mul, mul, |a, b| GaussianRational {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}
impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl<'a, 'b> Div<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'b GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * &inv
    }
}
impl Div<GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: GaussianRational) -> GaussianRational {
        &self / &rhs
    }
}

/// A coefficient that is either exact in ℚ(i) or an IEEE double pair.
///
/// Mixed arithmetic demotes to float. Anything built purely from exact
/// inputs stays exact, which is what the reconstruction and gcd paths
/// rely on.
#[derive(Clone, Debug)]
pub enum Coeff {
    Exact(GaussianRational),
    Float(Complex64),
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Exact(GaussianRational::zero())
    }

    pub fn one() -> Self {
        Coeff::Exact(GaussianRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::Exact(GaussianRational::from_int(n))
    }

    pub fn from_f64(x: f64) -> Self {
        Coeff::Float(Complex64::new(x, 0.0))
    }

    pub fn from_c64(z: Complex64) -> Self {
        Coeff::Float(z)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(q) => q.is_zero(),
            Coeff::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Coeff::Exact(q) => q.to_c64(),
            Coeff::Float(z) => *z,
        }
    }

    pub fn exact(&self) -> Option<&GaussianRational> {
        match self {
            Coeff::Exact(q) => Some(q),
            Coeff::Float(_) => None,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Coeff::Exact(q) => Coeff::Exact(q.conj()),
            Coeff::Float(z) => Coeff::Float(z.conj()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Coeff::Exact(q) => Coeff::Exact(-q),
            Coeff::Float(z) => Coeff::Float(-z),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            Coeff::Exact(q) => q.inv().map(Coeff::Exact),
            Coeff::Float(z) => {
                if z.re == 0.0 && z.im == 0.0 {
                    None
                } else {
                    Some(Coeff::Float(z.inv()))
                }
            }
        }
    }

    pub fn add(&self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a + b),
            _ => Coeff::Float(self.to_c64() + rhs.to_c64()),
        }
    }

    pub fn sub(&self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a - b),
            _ => Coeff::Float(self.to_c64() - rhs.to_c64()),
        }
    }

    pub fn mul(&self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a * b),
            _ => Coeff::Float(self.to_c64() * rhs.to_c64()),
        }
    }

    pub fn div(&self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a / b),
            _ => Coeff::Float(self.to_c64() / rhs.to_c64()),
        }
    }
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a == b,
            _ => self.to_c64() == other.to_c64(),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(q) => write!(f, "{}", q),
            Coeff::Float(z) => write!(f, "{}", z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussianRational::i();
        let m1 = &i * &i;
        assert_eq!(m1, GaussianRational::from_int(-1));
        let half = GaussianRational::from_ratio(1, 2);
        assert_eq!(&half + &half, GaussianRational::one());
    }

    #[test]
    fn inversion() {
        let z = GaussianRational::new(
            BigRational::from_integer(BigInt::from(3)),
            BigRational::from_integer(BigInt::from(4)),
        );
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn coeff_promotion() {
        let a = Coeff::from_int(2);
        let b = Coeff::from_f64(0.5);
        let c = a.mul(&b);
        assert!(!c.is_exact());
        assert_eq!(c.to_c64(), Complex64::new(1.0, 0.0));
        let d = Coeff::from_int(2).mul(&Coeff::from_int(3));
        assert!(d.is_exact());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::from_ratio(3, 4).to_string(), "3/4");
        assert_eq!(GaussianRational::i().to_string(), "i");
        let z = GaussianRational::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::from_integer(BigInt::from(-3)),
        );
        assert_eq!(z.to_string(), "(1/2-3*i)");
    }
}
