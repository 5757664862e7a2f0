//! Sparse multivariate polynomials over an arbitrary coefficient ring.
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vectors, so the
//! representation is canonical and equality is representation equality.
//! Invariants: no stored zero coefficients; every exponent vector has length
//! `arity`; negative (Laurent) exponents appear only on variables flagged
//! invertible.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::Scalar;

/// A sparse polynomial in `arity` variables with coefficients in `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<R: Ring> {
    arity: usize,
    laurent: Vec<bool>,
    terms: BTreeMap<Vec<i32>, R>,
}

/// Polynomials over the exact scalars, the workhorse of the carrier algebras.
pub type MultiPoly = Poly<Scalar>;

impl<R: Ring> Poly<R> {
    /// The zero polynomial in `arity` variables, none invertible.
    pub fn zero(arity: usize) -> Self {
        Poly {
            arity,
            laurent: vec![false; arity],
            terms: BTreeMap::new(),
        }
    }

    /// The zero polynomial with the given per-variable invertibility flags.
    pub fn zero_laurent(flags: Vec<bool>) -> Self {
        Poly {
            arity: flags.len(),
            laurent: flags,
            terms: BTreeMap::new(),
        }
    }

    /// Zero with the same arity and Laurent flags as `self`.
    pub fn zero_like(&self) -> Self {
        Poly {
            arity: self.arity,
            laurent: self.laurent.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, value: R) -> Self {
        let mut p = Poly::zero(arity);
        p.add_term(vec![0; arity], value);
        p
    }

    /// The variable `x_{j+1}` (0-based index) as a polynomial.
    pub fn variable(arity: usize, j: usize, one: &R) -> Self {
        let mut p = Poly::zero(arity);
        let mut exps = vec![0; arity];
        exps[j] = 1;
        p.add_term(exps, one.ring_one());
        p
    }

    /// A single term `coef * x^exps`.
    pub fn monomial(arity: usize, exps: Vec<i32>, coef: R) -> Self {
        let mut p = Poly::zero(arity);
        p.add_term(exps, coef);
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn laurent_flags(&self) -> &[bool] {
        &self.laurent
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i32]) -> Option<&R> {
        self.terms.get(exps)
    }

    /// Largest total degree among the stored terms (0 for the zero poly).
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Accumulate one term, dropping the entry if the coefficient cancels.
    ///
    /// Panics if the exponent vector has the wrong length or a negative
    /// entry on a non-invertible variable; those are construction bugs.
    pub fn add_term(&mut self, exps: Vec<i32>, coef: R) {
        assert_eq!(exps.len(), self.arity, "exponent vector length");
        for (j, &e) in exps.iter().enumerate() {
            assert!(
                e >= 0 || self.laurent[j],
                "negative exponent on non-invertible variable {}",
                j + 1
            );
        }
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&coef);
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        if self.laurent != other.laurent {
            return Err(Error::InvalidParameter(
                "polynomials have different invertible-variable flags".into(),
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
            out.add_term(e.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.zero_like();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn neg_ref(&self) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, factor: &R) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            let v = c.mul(factor);
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = match self.terms.values().next() {
            Some(c) => Poly {
                arity: self.arity,
                laurent: self.laurent.clone(),
                terms: BTreeMap::from([(vec![0; self.arity], c.ring_one())]),
            },
            // Zero polynomial: 0^0 = 1 is unrepresentable without a
            // coefficient prototype, so only e >= 1 is meaningful here.
            None => {
                if e == 0 {
                    panic!("pow(0) on the zero polynomial has no coefficient prototype")
                } else {
                    return self.zero_like();
                }
            }
        };
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same shape");
        }
        acc
    }

    /// Formal partial derivative with respect to variable `j` (0-based).
    pub fn partial(&self, j: usize) -> Result<Self> {
        if j >= self.arity {
            return Err(Error::InvalidParameter(format!(
                "variable index {} out of range for arity {}",
                j + 1,
                self.arity
            )));
        }
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            let k = e[j];
            if k == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[j] = k - 1;
            out.add_term(exps, c.scale_int(k as i64));
        }
        Ok(out)
    }

    /// Substitute `images[j]` for variable `j`: the composite `p(images)`.
    ///
    /// One image per variable of `p`; all images share one shape, which
    /// becomes the result's shape. `p` must not contain negative exponents.
    pub fn substitute(&self, images: &[Poly<R>]) -> Result<Poly<R>> {
        if images.len() != self.arity {
            return Err(Error::ArityMismatch(self.arity, images.len()));
        }
        if self.has_negative_exponents() {
            return Err(Error::LaurentInSubstitution);
        }
        let Some(first) = images.first() else {
            return Err(Error::InvalidParameter(
                "substitution needs at least one variable".into(),
            ));
        };
        for img in images {
            first.same_shape(img)?;
        }
        let mut out = first.zero_like();
        for (e, c) in &self.terms {
            let mut term = Poly::constant(first.arity, c.clone());
            term.laurent = first.laurent.clone();
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.try_mul(&images[j].pow(k as u32))?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Apply `f` to every coefficient, dropping resulting zeros.
    pub fn map_coeffs<S: Ring>(&self, mut f: impl FnMut(&R) -> S) -> Poly<S> {
        let mut out = Poly {
            arity: self.arity,
            laurent: self.laurent.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    /// Render with custom variable names (one per variable).
    pub fn display_named(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.arity);
        fmt_terms(&self.terms, |j| names[j].to_string())
    }
}

/// Append one `coef * key` term to a sum under construction, extracting a
/// leading minus sign when the coefficient allows it and parenthesizing
/// composite coefficients. `key` is `None` for a constant term.
pub(crate) fn push_term(out: &mut String, coef_str: String, key: Option<String>) {
    let (negative, coef_abs) = match coef_str.strip_prefix('-') {
        // A leading '-' can be pulled out only if the rest has no further
        // sign structure (e.g. not `-1+2i`).
        Some(rest) if !rest.contains('+') && !rest.contains('-') => (true, rest.to_string()),
        _ => (false, coef_str),
    };
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let composite = coef_abs.contains('+') || coef_abs.contains('-') || coef_abs.contains(' ');
    let body = match key {
        None if composite => format!("({})", coef_abs),
        None => coef_abs,
        Some(k) if coef_abs == "1" => k,
        Some(k) if composite => format!("({})*{}", coef_abs, k),
        Some(k) => format!("{}*{}", coef_abs, k),
    };
    out.push_str(&body);
}

/// Shared term formatter: canonical BTreeMap order, `+`/`-` separators.
pub(crate) fn fmt_terms<R: Ring>(
    terms: &BTreeMap<Vec<i32>, R>,
    name: impl Fn(usize) -> String,
) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (exps, coef) in terms {
        let vars: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(j, &e)| {
                if e == 1 {
                    name(j)
                } else {
                    format!("{}^{}", name(j), e)
                }
            })
            .collect();
        let key = if vars.is_empty() {
            None
        } else {
            Some(vars.join("*"))
        };
        push_term(&mut out, coef.to_string(), key);
    }
    out
}

impl<R: Ring> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_terms(&self.terms, |j| format!("x{}", j + 1)))
    }
}

impl<R: Ring> Add for &Poly<R> {
    type Output = Poly<R>;
    fn add(self, other: Self) -> Poly<R> {
        self.try_add(other).expect("polynomial shape mismatch")
    }
}

impl<R: Ring> Sub for &Poly<R> {
    type Output = Poly<R>;
    fn sub(self, other: Self) -> Poly<R> {
        self.try_sub(other).expect("polynomial shape mismatch")
    }
}

impl<R: Ring> Mul for &Poly<R> {
    type Output = Poly<R>;
    fn mul(self, other: Self) -> Poly<R> {
        self.try_mul(other).expect("polynomial shape mismatch")
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        self.neg_ref()
    }
}

impl Ring for Poly<Scalar> {
    fn ring_zero(&self) -> Self {
        self.zero_like()
    }
    fn ring_one(&self) -> Self {
        let mut p = self.zero_like();
        p.add_term(vec![0; self.arity], Scalar::one());
        p
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
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
        let mut p = self.zero_like();
        p.add_term(vec![0; self.arity], s.clone());
        p
    }
}
