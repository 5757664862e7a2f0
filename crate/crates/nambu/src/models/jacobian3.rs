//! The Jacobian determinant bracket on polynomials in three variables and
//! its family of unimodular substitution endomorphisms.

use std::fmt;

use crate::algebra::{Algebra, BracketKind, Carrier, LinearMap};
use crate::element::{BasisKey, Element};
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Poly};
use crate::ring::Ring;
use crate::scalar::Scalar;

/// `det(d q_i / d x_j)` for three polynomials, differentiating with respect
/// to the first three variables. Extra variables (formal parameters) are
/// allowed and pass through into the coefficients.
pub fn jacobian3_bracket<R: Ring>(
    q1: &Poly<R>,
    q2: &Poly<R>,
    q3: &Poly<R>,
) -> Result<Poly<R>> {
    let rows: [[Poly<R>; 3]; 3] = [grad3(q1)?, grad3(q2)?, grad3(q3)?];
    let m = |i: usize, j: usize| &rows[i][j];
    let minor = |a: usize, b: usize, c: usize, d: usize| &(m(a, b) * m(c, d)) - &(m(a, d) * m(c, b));
    let det = &(&(m(0, 0) * &minor(1, 1, 2, 2)) - &(m(0, 1) * &minor(1, 0, 2, 2)))
        + &(m(0, 2) * &minor(1, 0, 2, 1));
    Ok(det)
}

fn grad3<R: Ring>(p: &Poly<R>) -> Result<[Poly<R>; 3]> {
    if p.arity() < 3 {
        return Err(Error::ArityMismatch(3, p.arity()));
    }
    Ok([p.partial(0)?, p.partial(1)?, p.partial(2)?])
}

/// The untwisted algebra: `(K[x1,x2,x3], Jacobian bracket, (id, id))`.
pub fn algebra<R: Ring>(one: R) -> Algebra<R> {
    Algebra {
        id: "jacobian3".to_string(),
        carrier: Carrier::Poly3,
        one,
        bracket: BracketKind::Jacobian3,
        alpha: LinearMap::Identity,
        beta: LinearMap::Identity,
    }
}

/// All monomials of total degree at most `max_degree` as carrier elements
/// (20 of them for degree 3), in graded-then-lexicographic order.
pub fn monomial_elements<R: Ring>(one: &R, max_degree: u32) -> Vec<Element<R>> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for a in (0..=d).rev() {
            for b in (0..=(d - a)).rev() {
                let c = d - a - b;
                out.push(Element::basis(
                    BasisKey::monomial([a, b, c]),
                    one.ring_one(),
                ));
            }
        }
    }
    out
}

/// The curated 5-tuple sample: every 5-tuple drawn from `{x1, x2, x3}`,
/// plus mixed tuples of higher-degree monomials around the bracket's
/// interesting cases, including `(x1, x2, x3^3, x1^2, x2*x3)`.
pub fn curated_tuples5<R: Ring>(one: &R) -> Vec<[Element<R>; 5]> {
    let var = |i: usize| {
        let mut exps = [0u32; 3];
        exps[i] = 1;
        Element::basis(BasisKey::monomial(exps), one.ring_one())
    };
    let mono =
        |exps: [u32; 3]| Element::basis(BasisKey::monomial(exps), one.ring_one());

    let vars = [var(0), var(1), var(2)];
    let mut out = Vec::new();
    for idx in 0..3usize.pow(5) {
        let mut i = idx;
        out.push(std::array::from_fn(|_| {
            let el = vars[i % 3].clone();
            i /= 3;
            el
        }));
    }
    let interesting: [[[u32; 3]; 5]; 9] = [
        // The shifted-cube tuple behind the k4 counterexample.
        [[1, 0, 0], [0, 1, 0], [0, 0, 3], [2, 0, 0], [0, 1, 1]],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [0, 1, 1]],
        [[2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [0, 1, 1]],
        [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0]],
        [[0, 0, 2], [1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 1, 1]],
        [[3, 0, 0], [0, 3, 0], [0, 0, 3], [1, 0, 0], [0, 1, 0]],
        [[1, 2, 0], [0, 1, 2], [2, 0, 1], [1, 0, 0], [0, 0, 1]],
        [[2, 1, 0], [1, 0, 0], [0, 1, 0], [0, 0, 2], [1, 1, 1]],
        [[0, 1, 1], [1, 0, 1], [1, 1, 0], [1, 0, 0], [0, 0, 1]],
    ];
    for tuple in interesting {
        out.push(std::array::from_fn(|j| mono(tuple[j])));
    }
    out
}

/// Univariate polynomials in the shift constant `k4`, so identities that
/// depend on the shift can be decided symbolically rather than at sampled
/// values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K4Poly(pub MultiPoly);

impl K4Poly {
    pub fn k4() -> Self {
        K4Poly(Poly::variable(1, 0, &Scalar::one()))
    }

    pub fn constant(s: Scalar) -> Self {
        K4Poly(Poly::constant(1, s))
    }
}

impl fmt::Display for K4Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.display_named(&["k4"]))
    }
}

impl Ring for K4Poly {
    fn ring_zero(&self) -> Self {
        K4Poly(self.0.zero_like())
    }
    fn ring_one(&self) -> Self {
        K4Poly(self.0.ring_one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        K4Poly(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        K4Poly(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        K4Poly(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        K4Poly(self.0.neg_ref())
    }
    fn from_scalar(&self, s: &Scalar) -> Self {
        K4Poly::constant(s.clone())
    }
}

/// Which triangular shape the Jacobian matrix of the substitution takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangular {
    Upper,
    Lower,
}

/// A unimodular polynomial substitution `x -> gamma(x)`.
///
/// The upper-triangular family is
/// `gamma = (k1*x1 + p1(x2,x3), k2*x2 + p2(x3), k3*x3 + k4)` with
/// `k1*k2*k3 = 1`; the lower-triangular mirror is
/// `gamma = (k1*x1 + k4, k2*x2 + p2(x1), k3*x3 + p1(x1,x2))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMap<R: Ring> {
    images: [Poly<R>; 3],
    orientation: Triangular,
}

impl<R: Ring> GammaMap<R> {
    pub fn upper(k: [R; 3], p1: Poly<R>, p2: Poly<R>, k4: R) -> Result<Self> {
        Self::build(Triangular::Upper, k, p1, p2, k4)
    }

    pub fn lower(k: [R; 3], p1: Poly<R>, p2: Poly<R>, k4: R) -> Result<Self> {
        Self::build(Triangular::Lower, k, p1, p2, k4)
    }

    fn build(
        orientation: Triangular,
        k: [R; 3],
        p1: Poly<R>,
        p2: Poly<R>,
        k4: R,
    ) -> Result<Self> {
        let product = k[0].mul(&k[1]).mul(&k[2]);
        if product != k[0].ring_one() {
            return Err(Error::BadDiagonal(format!("{}", product)));
        }
        for p in [&p1, &p2] {
            if p.arity() != 3 {
                return Err(Error::ArityMismatch(3, p.arity()));
            }
            if p.has_negative_exponents() {
                return Err(Error::LaurentNotAllowed(0));
            }
        }
        // p1 and p2 may only involve the variables the triangular shape
        // permits: (x2,x3) and x3 for upper, (x1,x2) and x1 for lower.
        let (p1_banned, p2_banned): (&[usize], &[usize]) = match orientation {
            Triangular::Upper => (&[0], &[0, 1]),
            Triangular::Lower => (&[2], &[1, 2]),
        };
        for (p, banned, name) in [(&p1, p1_banned, "p1"), (&p2, p2_banned, "p2")] {
            for (exps, _) in p.terms() {
                if banned.iter().any(|&j| exps[j] != 0) {
                    return Err(Error::InvalidParameter(format!(
                        "{} may not involve x{}",
                        name,
                        banned
                            .iter()
                            .find(|&&j| exps[j] != 0)
                            .map(|&j| j + 1)
                            .unwrap()
                    )));
                }
            }
        }
        let one = k[0].ring_one();
        let scaled_var = |j: usize, coef: &R| {
            Poly::variable(3, j, &one).scale(coef)
        };
        let constant = Poly::constant(3, k4);
        let images = match orientation {
            Triangular::Upper => [
                &scaled_var(0, &k[0]) + &p1,
                &scaled_var(1, &k[1]) + &p2,
                &scaled_var(2, &k[2]) + &constant,
            ],
            Triangular::Lower => [
                &scaled_var(0, &k[0]) + &constant,
                &scaled_var(1, &k[1]) + &p2,
                &scaled_var(2, &k[2]) + &p1,
            ],
        };
        let gamma = GammaMap {
            images,
            orientation,
        };
        let det = gamma.det_jacobian()?;
        if det != Poly::constant(3, one) {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(gamma)
    }

    /// Accept any substitution whose Jacobian determinant is exactly one.
    pub fn from_images(images: [Poly<R>; 3], one: &R) -> Result<Self> {
        for p in &images {
            if p.arity() != 3 {
                return Err(Error::ArityMismatch(3, p.arity()));
            }
            if p.has_negative_exponents() {
                return Err(Error::LaurentNotAllowed(0));
            }
        }
        let det = jacobian3_bracket(&images[0], &images[1], &images[2])?;
        if det != Poly::constant(3, one.ring_one()) {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(GammaMap {
            images,
            orientation: Triangular::Upper,
        })
    }

    pub fn images(&self) -> &[Poly<R>; 3] {
        &self.images
    }

    pub fn orientation(&self) -> Triangular {
        self.orientation
    }

    pub fn det_jacobian(&self) -> Result<Poly<R>> {
        jacobian3_bracket(&self.images[0], &self.images[1], &self.images[2])
    }
}

/// The substitution endomorphism `rho_gamma: q(x) -> q(gamma(x))`.
pub fn gamma_endo<R: Ring>(gamma: &GammaMap<R>) -> LinearMap<R> {
    LinearMap::Substitution {
        images: gamma.images.clone(),
    }
}
