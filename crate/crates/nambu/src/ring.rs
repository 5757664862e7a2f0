//! Coefficient-ring abstraction.
//!
//! Brackets, twisting maps, and checkers are generic over the ring the
//! algebra's coefficients live in: exact scalars for the base algebras, the
//! trigonometric quotient ring for the symbolic rotation family, Laurent
//! polynomials for the symbolic q-twist, and truncated power series for
//! formal deformations.
//!
//! Values with a shape (a series' arity and order, a polynomial's arity)
//! carry that shape themselves, so "the zero/one of the same ring as `self`"
//! is always constructible from an existing value. Binary operations on
//! mismatched shapes panic: constructors validate shapes at the API
//! boundary, and all values inside one algebra share a shape by
//! construction.

use crate::scalar::Scalar;

/// A commutative ring with an embedding of Q(i).
pub trait Ring: Clone + PartialEq + Eq + std::fmt::Debug + std::fmt::Display {
    /// Zero with the same shape as `self`.
    fn ring_zero(&self) -> Self;
    /// One with the same shape as `self`.
    fn ring_one(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Embed an exact scalar, with the same shape as `self`.
    fn from_scalar(&self, s: &Scalar) -> Self;

    fn from_int(&self, n: i64) -> Self {
        self.from_scalar(&Scalar::from_int(n))
    }

    fn scale_int(&self, n: i64) -> Self {
        self.mul(&self.from_int(n))
    }

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = self.ring_one();
        let mut b = self.clone();
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        acc
    }
}

impl Ring for Scalar {
    fn ring_zero(&self) -> Self {
        Scalar::zero()
    }
    fn ring_one(&self) -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn from_scalar(&self, s: &Scalar) -> Self {
        s.clone()
    }
}
