//! The ternary cross product on the four-dimensional coordinate space, its
//! rotation-family endomorphisms, and the endomorphism equation system.

use crate::algebra::{Algebra, BracketKind, Carrier, LinearMap, Matrix4};
use crate::element::{BasisKey, Element};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::ring::Ring;
use crate::scalar::Scalar;
use crate::series::TruncSeries;
use crate::trig::TrigRingElem;

/// Sign of the permutation `(idx[0], .., idx[3])` of `(0,1,2,3)`; zero when
/// any two indices coincide.
pub fn levi_civita4(idx: [usize; 4]) -> i64 {
    let mut sign = 1i64;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if idx[a] == idx[b] {
                return 0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

fn coord_of(key: &BasisKey) -> Result<usize> {
    match key {
        BasisKey::Coord(i) if *i < 4 => Ok(*i as usize),
        other => Err(Error::CarrierMismatch(format!(
            "cross product bracket expects e1..e4, found {}",
            other
        ))),
    }
}

/// The bracket on basis vectors: `[e_a, e_b, e_c] = sum_d eps(a,b,c,d) e_d`.
pub fn bracket_keys<R: Ring>(
    one: &R,
    k1: &BasisKey,
    k2: &BasisKey,
    k3: &BasisKey,
) -> Result<Element<R>> {
    let (a, b, c) = (coord_of(k1)?, coord_of(k2)?, coord_of(k3)?);
    let mut out = Element::zero();
    for d in 0..4 {
        let s = levi_civita4([a, b, c, d]);
        if s != 0 {
            out.add_term(BasisKey::Coord(d as u8), one.scale_int(s));
        }
    }
    Ok(out)
}

fn coords<R: Ring>(one: &R, el: &Element<R>) -> Result<[R; 4]> {
    let mut out: [R; 4] = std::array::from_fn(|_| one.ring_zero());
    for (key, coef) in el.terms() {
        out[coord_of(key)?] = coef.clone();
    }
    Ok(out)
}

/// The same bracket computed as the formal 4x4 determinant with the basis
/// vectors down the last column, expanded along that column. Kept as an
/// independent implementation to cross-check `bracket_keys`.
pub fn bracket_det<R: Ring>(
    one: &R,
    x: &Element<R>,
    y: &Element<R>,
    z: &Element<R>,
) -> Result<Element<R>> {
    let cols = [coords(one, x)?, coords(one, y)?, coords(one, z)?];
    let mut out = Element::zero();
    for skip in 0..4 {
        let rows: Vec<usize> = (0..4).filter(|&r| r != skip).collect();
        let m = |i: usize, j: usize| -> &R { &cols[j][rows[i]] };
        let minor = m(0, 0)
            .mul(&m(1, 1).mul(m(2, 2)).sub(&m(1, 2).mul(m(2, 1))))
            .sub(&m(0, 1).mul(&m(1, 0).mul(m(2, 2)).sub(&m(1, 2).mul(m(2, 0)))))
            .add(&m(0, 2).mul(&m(1, 0).mul(m(2, 1)).sub(&m(1, 1).mul(m(2, 0)))));
        // Cofactor sign of entry (skip, 3) in the 4x4 expansion.
        let sign = if skip % 2 == 0 { -1 } else { 1 };
        out.add_term(BasisKey::Coord(skip as u8), minor.scale_int(sign));
    }
    Ok(out)
}

/// The untwisted algebra: `(span{e1..e4}, cross product, (id, id))`.
pub fn algebra<R: Ring>(one: R) -> Algebra<R> {
    Algebra {
        id: "cross4".to_string(),
        carrier: Carrier::Coord4,
        one,
        bracket: BracketKind::Cross4,
        alpha: LinearMap::Identity,
        beta: LinearMap::Identity,
    }
}

pub fn basis_elements<R: Ring>(one: &R) -> Vec<Element<R>> {
    (0..4)
        .map(|i| Element::basis(BasisKey::Coord(i), one.ring_one()))
        .collect()
}

/// Assemble the rotation-pair matrix from the four trigonometric values:
/// rotation by `theta1` in the `e1e3`-plane times rotation by `theta2` in
/// the `e2e4`-plane. Columns are images of basis vectors.
pub fn rho_theta_from_parts<R: Ring>(c1: R, s1: R, c2: R, s2: R) -> Matrix4<R> {
    let z = || c1.ring_zero();
    Matrix4::from_rows([
        [c1.clone(), z(), s1.neg(), z()],
        [z(), c2.clone(), z(), s2.neg()],
        [s1.clone(), z(), c1.clone(), z()],
        [z(), s2.clone(), z(), c2.clone()],
    ])
}

/// Exact-value mode: requires each pair to satisfy `c^2 + s^2 = 1`.
pub fn rho_theta_exact(
    c1: &Scalar,
    s1: &Scalar,
    c2: &Scalar,
    s2: &Scalar,
) -> Result<Matrix4<Scalar>> {
    for (c, s) in [(c1, s1), (c2, s2)] {
        let norm = &(c * c) + &(s * s);
        if !norm.is_one() {
            return Err(Error::NotOnUnitCircle(c.to_string(), s.to_string()));
        }
    }
    Ok(rho_theta_from_parts(
        c1.clone(),
        s1.clone(),
        c2.clone(),
        s2.clone(),
    ))
}

/// Symbolic mode: entries in the trig quotient ring, angles kept abstract.
pub fn rho_theta_trig() -> Matrix4<TrigRingElem> {
    rho_theta_from_parts(
        TrigRingElem::cos(1),
        TrigRingElem::sin(1),
        TrigRingElem::cos(2),
        TrigRingElem::sin(2),
    )
}

/// The two commuting rotation factors in the trig ring (`e1e3`-plane first).
pub fn rho_theta_trig_factors() -> (Matrix4<TrigRingElem>, Matrix4<TrigRingElem>) {
    let one = TrigRingElem::one();
    let first = rho_theta_from_parts(
        TrigRingElem::cos(1),
        TrigRingElem::sin(1),
        one.clone(),
        TrigRingElem::zero(),
    );
    let second = rho_theta_from_parts(
        one.clone(),
        TrigRingElem::zero(),
        TrigRingElem::cos(2),
        TrigRingElem::sin(2),
    );
    (first, second)
}

/// Series mode: entries are `cos`/`sin` power series in the two angle
/// parameters `t1, t2`, truncated at the given order.
pub fn rho_theta_series(order: u32) -> Matrix4<TruncSeries> {
    rho_theta_from_parts(
        TruncSeries::cos(2, order, 0),
        TruncSeries::sin(2, order, 0),
        TruncSeries::cos(2, order, 1),
        TruncSeries::sin(2, order, 1),
    )
}

/// Evaluate all 256 endomorphism equations for a candidate matrix: for each
/// `(l,m,n,t)` the residual
/// `sum_s eps(l,m,n,s)*a[t][s] - sum_{p,q,r} eps(p,q,r,t)*a[p][l]*a[q][m]*a[r][n]`
/// must vanish. Nonzero residuals are reported with their index tuple
/// (1-based) as witness.
pub fn check_cross_endo_equations<R: Ring>(m: &Matrix4<R>) -> CheckReport {
    let zero = m.entry(0, 0).ring_zero();
    let mut report = CheckReport::new("cross4-endomorphism-equations", "cross4");
    for l in 0..4 {
        for mm in 0..4 {
            for n in 0..4 {
                for t in 0..4 {
                    report.sample_size += 1;
                    let mut lhs = zero.clone();
                    for s in 0..4 {
                        let e = levi_civita4([l, mm, n, s]);
                        if e != 0 {
                            lhs = lhs.add(&m.entry(t, s).scale_int(e));
                        }
                    }
                    let mut rhs = zero.clone();
                    for p in 0..4 {
                        for q in 0..4 {
                            for r in 0..4 {
                                let e = levi_civita4([p, q, r, t]);
                                if e != 0 {
                                    let prod =
                                        m.entry(p, l).mul(m.entry(q, mm)).mul(m.entry(r, n));
                                    rhs = rhs.add(&prod.scale_int(e));
                                }
                            }
                        }
                    }
                    let residual = lhs.sub(&rhs);
                    if !residual.is_zero() {
                        report.record(
                            vec![format!("(l,m,n,t) = ({},{},{},{})", l + 1, mm + 1, n + 1, t + 1)],
                            residual.to_string(),
                        );
                    }
                }
            }
        }
    }
    report
}
