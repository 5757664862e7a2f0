//! Elements of the carrier spaces: formal linear combinations of basis keys.
//!
//! One key type covers all three kinds of carrier so that brackets, maps and
//! reports share a single element representation:
//! coordinate vectors (`e1..e4`), monomials in three variables, and the
//! doubly indexed generator families `Q_n`, `R_n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{push_term, Poly};
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    Q,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKey {
    /// Coordinate basis vector, stored 0-based, printed `e1`, `e2`, ...
    Coord(u8),
    /// Monomial `x1^a * x2^b * x3^c` in the three-variable polynomial ring.
    Monomial(Vec<u32>),
    /// Generator `Q_n` or `R_n`, any integer index.
    Generator { kind: GenKind, index: i64 },
}

impl BasisKey {
    /// The coordinate vector `e_i` in 1-based math notation.
    pub fn e(i: usize) -> Self {
        assert!(i >= 1, "coordinate vectors are 1-based");
        BasisKey::Coord((i - 1) as u8)
    }

    pub fn monomial(exps: [u32; 3]) -> Self {
        BasisKey::Monomial(exps.to_vec())
    }

    pub fn q(index: i64) -> Self {
        BasisKey::Generator {
            kind: GenKind::Q,
            index,
        }
    }

    pub fn r(index: i64) -> Self {
        BasisKey::Generator {
            kind: GenKind::R,
            index,
        }
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKey::Coord(i) => write!(f, "e{}", i + 1),
            BasisKey::Monomial(exps) => {
                let vars: Vec<String> = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(j, &e)| {
                        if e == 1 {
                            format!("x{}", j + 1)
                        } else {
                            format!("x{}^{}", j + 1, e)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", vars.join("*"))
                }
            }
            BasisKey::Generator { kind, index } => {
                let k = match kind {
                    GenKind::Q => "Q",
                    GenKind::R => "R",
                };
                write!(f, "{}_{}", k, index)
            }
        }
    }
}

/// A finite linear combination of basis keys with coefficients in `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element<R: Ring> {
    terms: BTreeMap<BasisKey, R>,
}

impl<R: Ring> Element<R> {
    pub fn zero() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(key: BasisKey, one: R) -> Self {
        let mut el = Element::zero();
        el.add_term(key, one);
        el
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisKey, R)>) -> Self {
        let mut el = Element::zero();
        for (k, c) in terms {
            el.add_term(k, c);
        }
        el
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &BasisKey) -> Option<&R> {
        self.terms.get(key)
    }

    pub fn add_term(&mut self, key: BasisKey, coef: R) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn neg_ref(&self) -> Self {
        Element {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, factor: &R) -> Self {
        let mut out = Element::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.mul(factor));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let mut out = Element::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scale_int(n));
        }
        out
    }

    pub fn map_coeffs<S: Ring>(&self, mut f: impl FnMut(&R) -> S) -> Element<S> {
        let mut out = Element::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    /// Reinterpret an element with monomial keys as a polynomial in three
    /// variables. Errors on any non-monomial key.
    pub fn to_poly3(&self) -> Result<Poly<R>> {
        let mut p = Poly::zero(3);
        for (k, c) in &self.terms {
            match k {
                BasisKey::Monomial(exps) if exps.len() == 3 => {
                    p.add_term(exps.iter().map(|&e| e as i32).collect(), c.clone());
                }
                other => {
                    return Err(Error::CarrierMismatch(format!(
                        "expected a three-variable monomial key, found {}",
                        other
                    )))
                }
            }
        }
        Ok(p)
    }

    /// Wrap a polynomial in three variables as an element with monomial keys.
    pub fn from_poly3(p: &Poly<R>) -> Result<Self> {
        if p.arity() != 3 {
            return Err(Error::ArityMismatch(3, p.arity()));
        }
        if p.has_negative_exponents() {
            return Err(Error::LaurentNotAllowed(0));
        }
        let mut el = Element::zero();
        for (exps, c) in p.terms() {
            el.add_term(
                BasisKey::Monomial(exps.iter().map(|&e| e as u32).collect()),
                c.clone(),
            );
        }
        Ok(el)
    }
}

impl<R: Ring> fmt::Display for Element<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (key, coef) in &self.terms {
            let key_str = match key {
                BasisKey::Monomial(exps) if exps.iter().all(|&e| e == 0) => None,
                other => Some(other.to_string()),
            };
            push_term(&mut out, coef.to_string(), key_str);
        }
        write!(f, "{}", out)
    }
}

impl<R: Ring> Add for &Element<R> {
    type Output = Element<R>;
    fn add(self, other: Self) -> Element<R> {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl<R: Ring> Sub for &Element<R> {
    type Output = Element<R>;
    fn sub(self, other: Self) -> Element<R> {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.neg());
        }
        out
    }
}

impl<R: Ring> Neg for &Element<R> {
    type Output = Element<R>;
    fn neg(self) -> Element<R> {
        self.neg_ref()
    }
}
