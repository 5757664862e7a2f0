//! The ternary Virasoro-Witt bracket on the generator families `Q_n`, `R_n`
//! and the index-scaling endomorphisms `rho_q`.

use crate::algebra::{Algebra, BracketKind, Carrier, LinearMap};
use crate::element::{BasisKey, Element, GenKind};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::scalar::Scalar;
use crate::series::TruncSeries;

/// The bracket on generators. The defining relations list each kind pattern
/// with the `Q`'s first; a general argument order is brought to that form by
/// a stable sort on the kind, and the permutation sign is applied. Within a
/// pattern the right-hand sides are themselves antisymmetric, so this
/// determines the bracket on all of the carrier.
///
/// Relations (`z` is the algebra's central parameter):
/// `[Q_k,Q_m,Q_n] = (k-m)(m-n)(k-n) R_{k+m+n}`,
/// `[Q_k,Q_m,R_n] = (k-m)(Q_{k+m+n} + z n R_{k+m+n})`,
/// `[Q_k,R_m,R_n] = (n-m) R_{k+m+n}`,
/// `[R_k,R_m,R_n] = 0`.
pub fn vw_bracket<R: Ring>(
    z: &Scalar,
    one: &R,
    g1: (GenKind, i64),
    g2: (GenKind, i64),
    g3: (GenKind, i64),
) -> Element<R> {
    // Stable insertion sort by kind, counting transpositions.
    let mut gens = [g1, g2, g3];
    let mut sign = 1i64;
    for i in 1..3 {
        let mut j = i;
        while j > 0 && gens[j - 1].0 > gens[j].0 {
            gens.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    let [(a_kind, k), (b_kind, m), (c_kind, n)] = gens;
    let total = k + m + n;
    let mut out = Element::zero();
    match (a_kind, b_kind, c_kind) {
        (GenKind::Q, GenKind::Q, GenKind::Q) => {
            let coef = (k - m) * (m - n) * (k - n);
            out.add_term(BasisKey::r(total), one.scale_int(coef * sign));
        }
        (GenKind::Q, GenKind::Q, GenKind::R) => {
            let coef = (k - m) * sign;
            out.add_term(BasisKey::q(total), one.scale_int(coef));
            out.add_term(
                BasisKey::r(total),
                one.from_scalar(&z.scale_int(n)).scale_int(coef),
            );
        }
        (GenKind::Q, GenKind::R, GenKind::R) => {
            out.add_term(BasisKey::r(total), one.scale_int((n - m) * sign));
        }
        (GenKind::R, GenKind::R, GenKind::R) => {}
        _ => unreachable!("kinds are sorted"),
    }
    out
}

/// The bracket on basis keys, for the trilinear extension machinery.
pub fn bracket_keys<R: Ring>(
    z: &Scalar,
    one: &R,
    k1: &BasisKey,
    k2: &BasisKey,
    k3: &BasisKey,
) -> Result<Element<R>> {
    let gen_of = |key: &BasisKey| match key {
        BasisKey::Generator { kind, index } => Ok((*kind, *index)),
        other => Err(Error::CarrierMismatch(format!(
            "Virasoro-Witt bracket expects Q_n/R_n generators, found {}",
            other
        ))),
    };
    Ok(vw_bracket(z, one, gen_of(k1)?, gen_of(k2)?, gen_of(k3)?))
}

/// The untwisted algebra `(span{Q_n,R_n}, vw bracket, (id, id))` with the
/// given central parameter.
pub fn algebra<R: Ring>(one: R, z: Scalar) -> Algebra<R> {
    Algebra {
        id: format!("vw(z={})", z),
        carrier: Carrier::Generators,
        one,
        bracket: BracketKind::VirasoroWitt { z },
        alpha: LinearMap::Identity,
        beta: LinearMap::Identity,
    }
}

/// `true` exactly for the two central parameters that make the bracket
/// satisfy the Nambu identity.
pub fn z_is_nambu_lie(z: &Scalar) -> bool {
    *z == Scalar::gaussian_int(0, 2) || *z == Scalar::gaussian_int(0, -2)
}

/// All generators `Q_a..Q_b, R_a..R_b` as elements, `Q`'s first.
pub fn generator_elements<R: Ring>(one: &R, lo: i64, hi: i64) -> Vec<Element<R>> {
    let mut out = Vec::new();
    for index in lo..=hi {
        out.push(Element::basis(BasisKey::q(index), one.ring_one()));
    }
    for index in lo..=hi {
        out.push(Element::basis(BasisKey::r(index), one.ring_one()));
    }
    out
}

/// `rho_q` for an invertible scalar `q`: `X_n -> q^n X_n`.
pub fn rho_q_scalar(q: &Scalar) -> Result<LinearMap<Scalar>> {
    let inv = q.inv().map_err(|_| Error::NonInvertibleQ)?;
    LinearMap::generator_scale(q.clone(), inv)
}

/// `rho_q` with `q = 1 + t` over the one-parameter series ring truncated at
/// `order`; the inverse is the geometric series.
pub fn rho_q_series(order: u32) -> LinearMap<TruncSeries> {
    let q = &TruncSeries::one(1, order) + &TruncSeries::param(1, order, 0);
    let q_inv = q.invert().expect("1 + t has unit constant term");
    LinearMap::generator_scale(q, q_inv).expect("series inverse is exact within the order")
}

/// `rho_q` with `q` kept as a formal Laurent variable, so identities can be
/// verified identically in `q`.
pub fn rho_q_laurent() -> LinearMap<Poly<Scalar>> {
    let mut q = Poly::zero_laurent(vec![true]);
    q.add_term(vec![1], Scalar::one());
    let mut q_inv = Poly::zero_laurent(vec![true]);
    q_inv.add_term(vec![-1], Scalar::one());
    LinearMap::generator_scale(q, q_inv).expect("q * q^-1 = 1")
}
