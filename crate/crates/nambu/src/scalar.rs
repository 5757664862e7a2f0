//! Exact scalars: rationals and Gaussian rationals (a + b*i with rational a, b).
//!
//! Every value is kept in canonical form: fractions are fully reduced with a
//! positive denominator (guaranteed by `BigRational`), and a Gaussian value
//! whose imaginary part is zero collapses to the plain rational variant, so
//! structural equality is value equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact element of Q or Q(i).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Rational(BigRational),
    /// Invariant: `im` is nonzero.
    Gaussian { re: BigRational, im: BigRational },
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::Gaussian {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Reduced fraction `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `re + im*i`, collapsed to the rational variant when `im == 0`.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        if im.is_zero() {
            Scalar::Rational(re)
        } else {
            Scalar::Gaussian { re, im }
        }
    }

    /// `a + b*i` from integer parts.
    pub fn gaussian_int(a: i64, b: i64) -> Self {
        Scalar::gaussian(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
        )
    }

    pub fn re(&self) -> BigRational {
        match self {
            Scalar::Rational(r) => r.clone(),
            Scalar::Gaussian { re, .. } => re.clone(),
        }
    }

    pub fn im(&self) -> BigRational {
        match self {
            Scalar::Rational(_) => BigRational::zero(),
            Scalar::Gaussian { im, .. } => im.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn neg_ref(&self) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Gaussian { re, im } => Scalar::Gaussian {
                re: -re,
                im: -im,
            },
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        Scalar::gaussian(self.re() + other.re(), self.im() + other.im())
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        Scalar::gaussian(self.re() - other.re(), self.im() - other.im())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        // (a+bi)(c+di) = (ac - bd) + (ad + bc)i
        let (a, b) = (self.re(), self.im());
        let (c, d) = (other.re(), other.im());
        Scalar::gaussian(&a * &c - &b * &d, &a * &d + &b * &c)
    }

    /// Multiplicative inverse. Errors on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Gaussian { re, im } => {
                let norm = re * re + im * im;
                Ok(Scalar::gaussian(re / &norm, -(im / &norm)))
            }
        }
    }

    /// Exact division. Errors on a zero divisor.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Integer power; negative exponents invert first (error on zero base).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.mul_ref(&Scalar::from_int(k))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: Self) -> Scalar {
        self.add_ref(other)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: Self) -> Scalar {
        self.sub_ref(other)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: Self) -> Scalar {
        self.mul_ref(other)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn fmt_imag(im: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else if (-im).is_one() {
        write!(f, "-i")
    } else {
        write!(f, "{}i", im)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", r),
            Scalar::Gaussian { re, im } => {
                if re.is_zero() {
                    fmt_imag(im, f)
                } else if im.is_negative() {
                    write!(f, "{}-", re)?;
                    let pos = -im;
                    if pos.is_one() {
                        write!(f, "i")
                    } else {
                        write!(f, "{}i", pos)
                    }
                } else {
                    write!(f, "{}+", re)?;
                    fmt_imag(im, f)
                }
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational `{}`", s));
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(num, den))
    } else {
        let num = BigInt::from_str(s.trim()).map_err(|_| bad())?;
        Ok(BigRational::from_integer(num))
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts the same grammar `Display` emits: `3`, `-5/2`, `i`, `-2i`,
    /// `3/4i` (meaning (3/4)i), `1+2i`, `1/2-3/4i`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if let Some(body) = s.strip_suffix('i') {
            // Split off an imaginary tail at the last top-level +/- (not the
            // leading sign, not the sign after '/').
            let mut split = None;
            for (idx, ch) in body.char_indices().skip(1) {
                if (ch == '+' || ch == '-') && !body[..idx].ends_with('/') {
                    split = Some(idx);
                }
            }
            if let Some(idx) = split {
                let re = parse_rational(&body[..idx])?;
                let sign = if body[idx..].starts_with('-') { -1 } else { 1 };
                let imag_str = &body[idx + 1..];
                let im = if imag_str.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(imag_str)?
                };
                let im = if sign < 0 { -im } else { im };
                Ok(Scalar::gaussian(re, im))
            } else {
                let im = match body {
                    "" => BigRational::one(),
                    "-" => -BigRational::one(),
                    other => parse_rational(other)?,
                };
                Ok(Scalar::gaussian(BigRational::zero(), im))
            }
        } else {
            Ok(Scalar::Rational(parse_rational(s)?))
        }
    }
}
