//! Formal power series in one or more parameters, truncated at a fixed
//! total degree.
//!
//! A `TruncSeries` represents an element of `K[[t1,...,tn]]` modulo terms of
//! total degree greater than `order`. Arithmetic discards everything above
//! the truncation order, so products and inverses stay exact within it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::{fmt_terms, MultiPoly, Poly};
use crate::ring::Ring;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    arity: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl TruncSeries {
    pub fn zero(arity: usize, order: u32) -> Self {
        TruncSeries {
            arity,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, order: u32, value: Scalar) -> Self {
        let mut s = Self::zero(arity, order);
        s.add_term(vec![0; arity], value);
        s
    }

    pub fn one(arity: usize, order: u32) -> Self {
        Self::constant(arity, order, Scalar::one())
    }

    /// The parameter `t_{j+1}` (0-based index).
    pub fn param(arity: usize, order: u32, j: usize) -> Self {
        assert!(j < arity, "parameter index out of range");
        let mut exps = vec![0; arity];
        exps[j] = 1;
        let mut s = Self::zero(arity, order);
        s.add_term(exps, Scalar::one());
        s
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient of the monomial `t^exps` (zero if absent).
    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.arity])
    }

    /// Accumulate one term; degrees beyond the truncation order are dropped.
    pub fn add_term(&mut self, exps: Vec<u32>, coef: Scalar) {
        assert_eq!(exps.len(), self.arity, "exponent vector length");
        if coef.is_zero() || exps.iter().sum::<u32>() > self.order {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&coef);
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity || self.order != other.order {
            return Err(Error::SeriesShapeMismatch(
                self.arity,
                self.order,
                other.arity,
                other.order,
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg_ref());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = Self::zero(self.arity, self.order);
        for (ea, ca) in &self.terms {
            let deg_a: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                if deg_a + eb.iter().sum::<u32>() > self.order {
                    continue;
                }
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    pub fn neg_ref(&self) -> Self {
        let mut out = Self::zero(self.arity, self.order);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg_ref());
        }
        out
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        let mut out = Self::zero(self.arity, self.order);
        for (e, c) in &self.terms {
            let v = c.mul_ref(factor);
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    /// Multiplicative inverse, defined exactly when the constant term is
    /// nonzero: with `a = c*(1 + u)` and `u` of positive valuation,
    /// `a^-1 = c^-1 * sum_{k=0..order} (-u)^k`.
    pub fn invert(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NonInvertibleSeries);
        }
        let c_inv = c.inv()?;
        let u = self.scale(&c_inv).try_sub(&Self::one(self.arity, self.order))?;
        let neg_u = u.neg_ref();
        let mut acc = Self::one(self.arity, self.order);
        let mut power = Self::one(self.arity, self.order);
        for _ in 0..self.order {
            power = power.try_mul(&neg_u)?;
            if power.is_zero() {
                break;
            }
            acc = acc.try_add(&power)?;
        }
        Ok(acc.scale(&c_inv))
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.invert()?.pow_i64(-e);
        }
        let mut acc = Self::one(self.arity, self.order);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `cos(t_{j+1})` truncated at the given order.
    pub fn cos(arity: usize, order: u32, j: usize) -> Self {
        Self::trig_series(arity, order, j, 0)
    }

    /// `sin(t_{j+1})` truncated at the given order.
    pub fn sin(arity: usize, order: u32, j: usize) -> Self {
        Self::trig_series(arity, order, j, 1)
    }

    /// Shared alternating series `sum_i (-1)^i t^(2i+offset) / (2i+offset)!`.
    fn trig_series(arity: usize, order: u32, j: usize, offset: u32) -> Self {
        assert!(j < arity, "parameter index out of range");
        let mut s = Self::zero(arity, order);
        let mut factorial = BigInt::from(1);
        let mut sign = 1i64;
        let mut k = 0u32;
        loop {
            let deg = 2 * k + offset;
            if deg > order {
                break;
            }
            // factorial currently holds (previous deg)!, bring it up to deg!.
            let prev = if k == 0 { 0 } else { 2 * (k - 1) + offset };
            for m in (prev + 1)..=deg {
                factorial *= BigInt::from(m);
            }
            let coef = Scalar::Rational(BigRational::new(BigInt::from(sign), factorial.clone()));
            let mut exps = vec![0; arity];
            exps[j] = deg;
            s.add_term(exps, coef);
            sign = -sign;
            k += 1;
        }
        s
    }

    /// Drop precision down to `new_order` (never up).
    pub fn truncated(&self, new_order: u32) -> Result<Self> {
        if new_order > self.order {
            return Err(Error::InvalidParameter(format!(
                "cannot raise truncation order from {} to {}",
                self.order, new_order
            )));
        }
        let mut out = Self::zero(self.arity, new_order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Embed a polynomial in the same variables, truncating high degrees.
    pub fn from_poly(p: &MultiPoly, order: u32) -> Result<Self> {
        if p.has_negative_exponents() {
            return Err(Error::LaurentNotAllowed(0));
        }
        let mut out = Self::zero(p.arity(), order);
        for (e, c) in p.terms() {
            out.add_term(e.iter().map(|&x| x as u32).collect(), c.clone());
        }
        Ok(out)
    }

    /// The truncated series as an honest polynomial.
    pub fn to_poly(&self) -> MultiPoly {
        let mut p = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(e.iter().map(|&x| x as i32).collect(), c.clone());
        }
        p
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let as_i32: BTreeMap<Vec<i32>, Scalar> = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().map(|&x| x as i32).collect(), c.clone()))
            .collect();
        let arity = self.arity;
        let name = move |j: usize| {
            if arity == 1 {
                "t".to_string()
            } else {
                format!("t{}", j + 1)
            }
        };
        write!(f, "{}", fmt_terms(&as_i32, name))
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, other: Self) -> TruncSeries {
        self.try_add(other).expect("series shape mismatch")
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, other: Self) -> TruncSeries {
        self.try_sub(other).expect("series shape mismatch")
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, other: Self) -> TruncSeries {
        self.try_mul(other).expect("series shape mismatch")
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        self.neg_ref()
    }
}

impl Ring for TruncSeries {
    fn ring_zero(&self) -> Self {
        Self::zero(self.arity, self.order)
    }
    fn ring_one(&self) -> Self {
        Self::one(self.arity, self.order)
    }
    fn is_zero(&self) -> bool {
        TruncSeries::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn from_scalar(&self, s: &Scalar) -> Self {
        Self::constant(self.arity, self.order, s.clone())
    }
}
