//! The ring `Q[c1,s1,c2,s2] / (c1^2+s1^2-1, c2^2+s2^2-1)`.
//!
//! Elements are kept in a normal form where each sine variable appears with
//! exponent at most one: every `s_k^2` is rewritten as `1 - c_k^2`. Two
//! expressions are equal as trigonometric functions of `(theta1, theta2)`
//! exactly when their normal forms coincide, so zero-testing is decisive.
//!
//! Variable layout of the underlying polynomial: `(c1, s1, c2, s2)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::poly::{MultiPoly, Poly};
use crate::ring::Ring;
use crate::scalar::Scalar;

const VAR_NAMES: [&str; 4] = ["c1", "s1", "c2", "s2"];
const SIN_VARS: [usize; 2] = [1, 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigRingElem {
    poly: MultiPoly,
}

/// Rewrite every even sine power using `s_k^2 = 1 - c_k^2` until sine
/// exponents are at most one.
pub fn trig_reduce(p: &MultiPoly) -> MultiPoly {
    assert_eq!(p.arity(), 4, "trig ring polynomials have four variables");
    let mut out: MultiPoly = Poly::zero(4);
    for (exps, coef) in p.terms() {
        let mut reduced = Poly::monomial(4, residual_exps(exps), coef.clone());
        for &sv in &SIN_VARS {
            let m = exps[sv] / 2;
            if m > 0 {
                reduced = &reduced * &one_minus_cos_sq(sv - 1).pow(m as u32);
            }
        }
        out = &out + &reduced;
    }
    out
}

/// The monomial part left after extracting all full sine squares.
fn residual_exps(exps: &[i32]) -> Vec<i32> {
    let mut r = exps.to_vec();
    for &sv in &SIN_VARS {
        r[sv] %= 2;
    }
    r
}

/// `1 - c_k^2` for the cosine variable preceding sine variable `cv+1`.
fn one_minus_cos_sq(cv: usize) -> MultiPoly {
    let mut p: MultiPoly = Poly::zero(4);
    p.add_term(vec![0; 4], Scalar::one());
    let mut sq = vec![0; 4];
    sq[cv] = 2;
    p.add_term(sq, Scalar::from_int(-1));
    p
}

impl TrigRingElem {
    pub fn zero() -> Self {
        TrigRingElem {
            poly: Poly::zero(4),
        }
    }

    pub fn one() -> Self {
        TrigRingElem {
            poly: Poly::constant(4, Scalar::one()),
        }
    }

    pub fn constant(value: Scalar) -> Self {
        TrigRingElem {
            poly: Poly::constant(4, value),
        }
    }

    /// `cos(theta_k)` for `k` in `{1, 2}`.
    pub fn cos(k: usize) -> Self {
        assert!(k == 1 || k == 2, "angle index must be 1 or 2");
        TrigRingElem {
            poly: Poly::variable(4, 2 * (k - 1), &Scalar::one()),
        }
    }

    /// `sin(theta_k)` for `k` in `{1, 2}`.
    pub fn sin(k: usize) -> Self {
        assert!(k == 1 || k == 2, "angle index must be 1 or 2");
        TrigRingElem {
            poly: Poly::variable(4, 2 * (k - 1) + 1, &Scalar::one()),
        }
    }

    /// Wrap a raw polynomial in `(c1, s1, c2, s2)`, normalizing it.
    pub fn from_poly(p: MultiPoly) -> Self {
        TrigRingElem {
            poly: trig_reduce(&p),
        }
    }

    pub fn as_poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl fmt::Display for TrigRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.display_named(&VAR_NAMES))
    }
}

impl Add for &TrigRingElem {
    type Output = TrigRingElem;
    fn add(self, other: Self) -> TrigRingElem {
        // Sums of normal forms are already normal.
        TrigRingElem {
            poly: &self.poly + &other.poly,
        }
    }
}

impl Sub for &TrigRingElem {
    type Output = TrigRingElem;
    fn sub(self, other: Self) -> TrigRingElem {
        TrigRingElem {
            poly: &self.poly - &other.poly,
        }
    }
}

impl Mul for &TrigRingElem {
    type Output = TrigRingElem;
    fn mul(self, other: Self) -> TrigRingElem {
        TrigRingElem {
            poly: trig_reduce(&(&self.poly * &other.poly)),
        }
    }
}

impl Neg for &TrigRingElem {
    type Output = TrigRingElem;
    fn neg(self) -> TrigRingElem {
        TrigRingElem {
            poly: self.poly.neg_ref(),
        }
    }
}

impl Ring for TrigRingElem {
    fn ring_zero(&self) -> Self {
        TrigRingElem::zero()
    }
    fn ring_one(&self) -> Self {
        TrigRingElem::one()
    }
    fn is_zero(&self) -> bool {
        TrigRingElem::is_zero(self)
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
        -self
    }
    fn from_scalar(&self, s: &Scalar) -> Self {
        TrigRingElem::constant(s.clone())
    }
}
