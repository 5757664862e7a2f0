//! Ternary algebras with twisting maps, and the verification routines that
//! operate on them.
//!
//! An `Algebra` packages a carrier space, a trilinear bracket and the pair
//! of twisting maps `(alpha, beta)`. The checkers evaluate defining
//! identities on finite samples of elements and report every violation with
//! an explicit witness; on a basis-closed sample a pass is a certification,
//! because all the identities involved are multilinear.

use crate::element::{BasisKey, Element};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::ring::Ring;
use crate::scalar::Scalar;

/// A 4x4 matrix over `R`; `rows[i][l]` is the coefficient of `e_{i+1}` in
/// the image of `e_{l+1}` (columns are images of basis vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix4<R: Ring> {
    rows: [[R; 4]; 4],
}

impl<R: Ring> Matrix4<R> {
    pub fn from_rows(rows: [[R; 4]; 4]) -> Self {
        Matrix4 { rows }
    }

    pub fn identity(one: &R) -> Self {
        Matrix4 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { one.ring_one() } else { one.ring_zero() })
            }),
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> &R {
        &self.rows[row][col]
    }

    /// The image of the basis vector `e_{col+1}` as an element.
    pub fn column(&self, col: usize) -> Element<R> {
        let mut el = Element::zero();
        for (i, row) in self.rows.iter().enumerate() {
            el.add_term(BasisKey::Coord(i as u8), row[col].clone());
        }
        el
    }

    pub fn map_entries<S: Ring>(&self, mut f: impl FnMut(&R) -> S) -> Matrix4<S> {
        Matrix4 {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| f(&self.rows[i][j]))),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Matrix4 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let mut acc = self.rows[i][0].mul(&other.rows[0][j]);
                    for k in 1..4 {
                        acc = acc.add(&self.rows[i][k].mul(&other.rows[k][j]));
                    }
                    acc
                })
            }),
        }
    }
}

/// The three carrier spaces the built-in models live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Carrier {
    /// The four-dimensional coordinate space spanned by `e1..e4`.
    Coord4,
    /// The polynomial ring in `x1, x2, x3`.
    Poly3,
    /// The span of the generator families `Q_n`, `R_n`.
    Generators,
}

impl Carrier {
    pub fn describe(self) -> &'static str {
        match self {
            Carrier::Coord4 => "span{e1..e4}",
            Carrier::Poly3 => "K[x1,x2,x3]",
            Carrier::Generators => "span{Q_n, R_n}",
        }
    }
}

/// A linear (or algebra-endomorphism) map on a carrier space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearMap<R: Ring> {
    Identity,
    /// Matrix action on the coordinate carrier.
    Matrix(Matrix4<R>),
    /// Composition with a polynomial map: `p` maps to `p(images)`.
    Substitution { images: [Poly<R>; 3] },
    /// Index-graded scaling of generators: `X_n` maps to `base^n * X_n`.
    /// `base_inv` is the stored inverse used for negative indices.
    GeneratorScale { base: R, base_inv: R },
}

impl<R: Ring> LinearMap<R> {
    /// Scaling map with a checked inverse.
    pub fn generator_scale(base: R, base_inv: R) -> Result<Self> {
        if base.mul(&base_inv) != base.ring_one() {
            return Err(Error::NonInvertibleQ);
        }
        Ok(LinearMap::GeneratorScale { base, base_inv })
    }

    pub fn apply(&self, el: &Element<R>) -> Result<Element<R>> {
        match self {
            LinearMap::Identity => Ok(el.clone()),
            LinearMap::Matrix(m) => {
                let mut out = Element::zero();
                for (key, coef) in el.terms() {
                    let BasisKey::Coord(l) = key else {
                        return Err(Error::CarrierMismatch(format!(
                            "matrix map applied to non-coordinate key {}",
                            key
                        )));
                    };
                    if *l >= 4 {
                        return Err(Error::CarrierMismatch(format!(
                            "coordinate index e{} outside the four-dimensional carrier",
                            l + 1
                        )));
                    }
                    for i in 0..4 {
                        out.add_term(
                            BasisKey::Coord(i as u8),
                            m.entry(i, *l as usize).mul(coef),
                        );
                    }
                }
                Ok(out)
            }
            LinearMap::Substitution { images } => {
                let p = el.to_poly3()?;
                let composed = p.substitute(images)?;
                Element::from_poly3(&composed)
            }
            LinearMap::GeneratorScale { base, base_inv } => {
                let mut out = Element::zero();
                for (key, coef) in el.terms() {
                    let BasisKey::Generator { index, .. } = key else {
                        return Err(Error::CarrierMismatch(format!(
                            "generator scaling applied to non-generator key {}",
                            key
                        )));
                    };
                    let factor = if *index >= 0 {
                        base.pow_u32(*index as u32)
                    } else {
                        base_inv.pow_u32(index.unsigned_abs() as u32)
                    };
                    out.add_term(key.clone(), coef.mul(&factor));
                }
                Ok(out)
            }
        }
    }
}

impl<R: Ring> LinearMap<R> {
    /// Push the map through a coefficient-ring homomorphism `f`.
    ///
    /// `f` must preserve products and inverses (a ring homomorphism), or
    /// the `GeneratorScale` invariant would silently break.
    pub fn map_ring<S: Ring>(&self, f: &mut impl FnMut(&R) -> S) -> LinearMap<S> {
        match self {
            LinearMap::Identity => LinearMap::Identity,
            LinearMap::Matrix(m) => LinearMap::Matrix(m.map_entries(|e| f(e))),
            LinearMap::Substitution { images } => LinearMap::Substitution {
                images: std::array::from_fn(|j| images[j].map_coeffs(|c| f(c))),
            },
            LinearMap::GeneratorScale { base, base_inv } => LinearMap::GeneratorScale {
                base: f(base),
                base_inv: f(base_inv),
            },
        }
    }
}

/// The bracket of an algebra: one of the built-in models, or a model
/// composed with a twisting map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketKind<R: Ring> {
    /// The four-dimensional ternary cross product.
    Cross4,
    /// The Jacobian determinant bracket on polynomials in three variables.
    Jacobian3,
    /// The ternary Virasoro-Witt bracket with central parameter `z`.
    VirasoroWitt { z: Scalar },
    /// `rho` composed with a base bracket.
    Twisted {
        base: Box<BracketKind<R>>,
        rho: LinearMap<R>,
    },
}

impl<R: Ring> BracketKind<R> {
    /// Push the bracket description through a coefficient-ring homomorphism.
    pub fn map_ring<S: Ring>(&self, f: &mut impl FnMut(&R) -> S) -> BracketKind<S> {
        match self {
            BracketKind::Cross4 => BracketKind::Cross4,
            BracketKind::Jacobian3 => BracketKind::Jacobian3,
            BracketKind::VirasoroWitt { z } => BracketKind::VirasoroWitt { z: z.clone() },
            BracketKind::Twisted { base, rho } => BracketKind::Twisted {
                base: Box::new(base.map_ring(f)),
                rho: rho.map_ring(f),
            },
        }
    }
}

/// A carrier space together with a ternary bracket and twisting maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra<R: Ring> {
    pub id: String,
    pub carrier: Carrier,
    /// Coefficient prototype: fixes the ring shape for structure constants.
    pub one: R,
    pub bracket: BracketKind<R>,
    pub alpha: LinearMap<R>,
    pub beta: LinearMap<R>,
}

impl<R: Ring> Algebra<R> {
    /// Evaluate the bracket on three elements.
    pub fn bracket_eval(
        &self,
        x: &Element<R>,
        y: &Element<R>,
        z: &Element<R>,
    ) -> Result<Element<R>> {
        eval_bracket(&self.bracket, &self.one, x, y, z)
    }

    pub fn alpha(&self, el: &Element<R>) -> Result<Element<R>> {
        self.alpha.apply(el)
    }

    /// Push the whole algebra through a coefficient-ring homomorphism.
    pub fn map_ring<S: Ring>(&self, f: &mut impl FnMut(&R) -> S) -> Algebra<S> {
        Algebra {
            id: self.id.clone(),
            carrier: self.carrier,
            one: f(&self.one),
            bracket: self.bracket.map_ring(f),
            alpha: self.alpha.map_ring(f),
            beta: self.beta.map_ring(f),
        }
    }

    pub fn beta(&self, el: &Element<R>) -> Result<Element<R>> {
        self.beta.apply(el)
    }

    /// The defect of the six-term compatibility identity on one 5-tuple:
    /// zero exactly when the identity holds there.
    pub fn hom_nambu_residual(&self, xs: &[Element<R>; 5]) -> Result<Element<R>> {
        let [x1, x2, x3, x4, x5] = xs;
        let lhs = self.bracket_eval(
            &self.alpha(x1)?,
            &self.beta(x2)?,
            &self.bracket_eval(x3, x4, x5)?,
        )?;
        let t1 = self.bracket_eval(
            &self.bracket_eval(x1, x2, x3)?,
            &self.alpha(x4)?,
            &self.beta(x5)?,
        )?;
        let t2 = self.bracket_eval(
            &self.alpha(x3)?,
            &self.bracket_eval(x1, x2, x4)?,
            &self.beta(x5)?,
        )?;
        let t3 = self.bracket_eval(
            &self.alpha(x3)?,
            &self.beta(x4)?,
            &self.bracket_eval(x1, x2, x5)?,
        )?;
        Ok(&(&(&lhs - &t1) - &t2) - &t3)
    }

    /// Twist by a bracket endomorphism: the new algebra has bracket
    /// `rho` after the old bracket and twisting pair `(rho, rho)`.
    ///
    /// `rho` is validated on the given sample of triples first; an empty
    /// sample skips validation.
    pub fn twist_by_endomorphism<'a>(
        &self,
        rho: LinearMap<R>,
        validation_sample: impl IntoIterator<Item = &'a [Element<R>; 3]>,
    ) -> Result<Algebra<R>>
    where
        R: 'a,
    {
        let mut checked = 0usize;
        let mut bad = 0usize;
        for [x, y, z] in validation_sample {
            checked += 1;
            let lhs = rho.apply(&self.bracket_eval(x, y, z)?)?;
            let rhs = self.bracket_eval(&rho.apply(x)?, &rho.apply(y)?, &rho.apply(z)?)?;
            if lhs != rhs {
                bad += 1;
            }
        }
        if bad > 0 {
            return Err(Error::NotAnEndomorphism(self.id.clone(), bad));
        }
        let _ = checked;
        Ok(Algebra {
            id: format!("{}-twisted", self.id),
            carrier: self.carrier,
            one: self.one.clone(),
            bracket: BracketKind::Twisted {
                base: Box::new(self.bracket.clone()),
                rho: rho.clone(),
            },
            alpha: rho.clone(),
            beta: rho,
        })
    }
}

fn eval_bracket<R: Ring>(
    bracket: &BracketKind<R>,
    one: &R,
    x: &Element<R>,
    y: &Element<R>,
    z: &Element<R>,
) -> Result<Element<R>> {
    match bracket {
        BracketKind::Cross4 => trilinear_by_keys(one, x, y, z, crate::models::cross4::bracket_keys),
        BracketKind::VirasoroWitt { z: zc } => trilinear_by_keys(
            one,
            x,
            y,
            z,
            |one, k1, k2, k3| crate::models::vw::bracket_keys(zc, one, k1, k2, k3),
        ),
        BracketKind::Jacobian3 => {
            let p = x.to_poly3()?;
            let q = y.to_poly3()?;
            let r = z.to_poly3()?;
            let det = crate::models::jacobian3::jacobian3_bracket(&p, &q, &r)?;
            Element::from_poly3(&det)
        }
        BracketKind::Twisted { base, rho } => {
            let inner = eval_bracket(base, one, x, y, z)?;
            rho.apply(&inner)
        }
    }
}

/// Extend a bracket given on basis keys to arbitrary elements trilinearly.
fn trilinear_by_keys<R: Ring>(
    one: &R,
    x: &Element<R>,
    y: &Element<R>,
    z: &Element<R>,
    bracket_on: impl Fn(&R, &BasisKey, &BasisKey, &BasisKey) -> Result<Element<R>>,
) -> Result<Element<R>> {
    let mut acc = Element::zero();
    for (k1, c1) in x.terms() {
        for (k2, c2) in y.terms() {
            let c12 = c1.mul(c2);
            for (k3, c3) in z.terms() {
                let structure = bracket_on(one, k1, k2, k3)?;
                if structure.is_zero() {
                    continue;
                }
                acc = &acc + &structure.scale(&c12.mul(c3));
            }
        }
    }
    Ok(acc)
}

/// The six permutations of three slots with their signs.
pub const PERMUTATIONS3: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
    ([1, 0, 2], -1),
];

/// Check total antisymmetry of the bracket on a sample of triples: for each
/// triple and each permutation, the permuted bracket must equal the signed
/// original.
pub fn check_skew_symmetry<R: Ring>(
    alg: &Algebra<R>,
    triples: impl IntoIterator<Item = [Element<R>; 3]>,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("skew-symmetry", alg.id.clone());
    for triple in triples {
        report.sample_size += 1;
        let base = alg.bracket_eval(&triple[0], &triple[1], &triple[2])?;
        for (perm, sign) in PERMUTATIONS3.iter().skip(1) {
            let permuted =
                alg.bracket_eval(&triple[perm[0]], &triple[perm[1]], &triple[perm[2]])?;
            let residual = &permuted - &base.scale_int(*sign);
            if !residual.is_zero() {
                report.record(
                    vec![
                        triple[0].to_string(),
                        triple[1].to_string(),
                        triple[2].to_string(),
                        format!("permutation ({} {} {})", perm[0] + 1, perm[1] + 1, perm[2] + 1),
                    ],
                    residual.to_string(),
                );
            }
        }
    }
    Ok(report)
}

/// Check the compatibility identity between the bracket and the twisting
/// pair on a sample of 5-tuples.
pub fn check_hom_nambu_identity<R: Ring>(
    alg: &Algebra<R>,
    tuples: impl IntoIterator<Item = [Element<R>; 5]>,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("hom-nambu-identity", alg.id.clone());
    for tuple in tuples {
        report.sample_size += 1;
        let residual = alg.hom_nambu_residual(&tuple)?;
        if !residual.is_zero() {
            report.record(
                tuple.iter().map(|e| e.to_string()).collect(),
                residual.to_string(),
            );
        }
    }
    Ok(report)
}

/// Check that `f` is a morphism of twisted algebras: it must commute with
/// the brackets on the sampled triples and intertwine the twisting maps on
/// every sampled component.
pub fn check_morphism<R: Ring>(
    f: &LinearMap<R>,
    source: &Algebra<R>,
    target: &Algebra<R>,
    triples: impl IntoIterator<Item = [Element<R>; 3]>,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "morphism",
        format!("{} -> {}", source.id, target.id),
    );
    for triple in triples {
        report.sample_size += 1;
        let lhs = f.apply(&source.bracket_eval(&triple[0], &triple[1], &triple[2])?)?;
        let rhs = target.bracket_eval(
            &f.apply(&triple[0])?,
            &f.apply(&triple[1])?,
            &f.apply(&triple[2])?,
        )?;
        let residual = &lhs - &rhs;
        if !residual.is_zero() {
            report.record(
                triple.iter().map(|e| e.to_string()).collect(),
                residual.to_string(),
            );
        }
        for el in &triple {
            let a = &f.apply(&source.alpha(el)?)? - &target.alpha(&f.apply(el)?)?;
            if !a.is_zero() {
                report.record(
                    vec![el.to_string(), "alpha intertwining".into()],
                    a.to_string(),
                );
            }
            let b = &f.apply(&source.beta(el)?)? - &target.beta(&f.apply(el)?)?;
            if !b.is_zero() {
                report.record(
                    vec![el.to_string(), "beta intertwining".into()],
                    b.to_string(),
                );
            }
        }
    }
    Ok(report)
}

/// Check that the algebra's twisting pair is multiplicative: `alpha = beta`
/// on the sampled vectors, and `alpha` is an endomorphism of the bracket,
/// `alpha([x,y,z]) = [alpha(x), alpha(y), alpha(z)]`.
pub fn check_multiplicative<R: Ring>(
    alg: &Algebra<R>,
    triples: impl IntoIterator<Item = [Element<R>; 3]>,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("multiplicative", alg.id.clone());
    for triple in triples {
        report.sample_size += 1;
        for el in &triple {
            let diff = &alg.alpha(el)? - &alg.beta(el)?;
            if !diff.is_zero() {
                report.record(
                    vec![el.to_string(), "alpha differs from beta".into()],
                    diff.to_string(),
                );
            }
        }
        let lhs = alg.alpha(&alg.bracket_eval(&triple[0], &triple[1], &triple[2])?)?;
        let rhs = alg.bracket_eval(
            &alg.alpha(&triple[0])?,
            &alg.alpha(&triple[1])?,
            &alg.alpha(&triple[2])?,
        )?;
        let residual = &lhs - &rhs;
        if !residual.is_zero() {
            report.record(
                triple.iter().map(|e| e.to_string()).collect(),
                residual.to_string(),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn e(i: usize) -> Element<Scalar> {
        Element::basis(BasisKey::e(i), Scalar::one())
    }

    #[test]
    fn identity_matrix_fixes_elements() {
        let m = Matrix4::identity(&Scalar::one());
        let map = LinearMap::Matrix(m);
        let el = &e(1) + &e(3).scale(&Scalar::from_int(-2));
        assert_eq!(map.apply(&el).unwrap(), el);
    }

    #[test]
    fn matrix_map_uses_columns_as_images() {
        // Send e1 -> e3, e3 -> -e1, fix e2 and e4.
        let z = Scalar::zero;
        let o = Scalar::one;
        let m = Matrix4::from_rows([
            [z(), z(), Scalar::from_int(-1), z()],
            [z(), o(), z(), z()],
            [o(), z(), z(), z()],
            [z(), z(), z(), o()],
        ]);
        assert_eq!(m.column(0), Element::basis(BasisKey::e(3), o()));
        let map = LinearMap::Matrix(m);
        assert_eq!(map.apply(&e(1)).unwrap(), e(3));
        assert_eq!(map.apply(&e(3)).unwrap(), e(1).neg_ref());
    }

    #[test]
    fn generator_scale_uses_index_powers() {
        let two = Scalar::from_int(2);
        let map = LinearMap::generator_scale(two.clone(), two.inv().unwrap()).unwrap();
        let el = Element::basis(BasisKey::q(3), Scalar::one());
        assert_eq!(
            map.apply(&el).unwrap(),
            Element::basis(BasisKey::q(3), Scalar::from_int(8))
        );
        let neg = Element::basis(BasisKey::r(-2), Scalar::one());
        assert_eq!(
            map.apply(&neg).unwrap(),
            Element::basis(BasisKey::r(-2), Scalar::ratio(1, 4))
        );
    }

    #[test]
    fn generator_scale_requires_a_true_inverse() {
        assert!(matches!(
            LinearMap::generator_scale(Scalar::from_int(2), Scalar::from_int(1)),
            Err(Error::NonInvertibleQ)
        ));
    }

    #[test]
    fn matrix_map_rejects_wrong_carriers() {
        let map: LinearMap<Scalar> = LinearMap::Matrix(Matrix4::identity(&Scalar::one()));
        let el = Element::basis(BasisKey::q(0), Scalar::one());
        assert!(matches!(map.apply(&el), Err(Error::CarrierMismatch(_))));
    }
}
