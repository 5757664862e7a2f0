//! Formal multi-parameter deformations of the built-in ternary brackets.
//!
//! A `DeformationFamily` packages an algebra over the truncated series ring
//! together with the scalar algebra it restricts to when every parameter is
//! set to zero. The series algebra is stored in closed form (a twist of the
//! base model), so the component of any parameter monomial up to the
//! truncation order is read off exactly by taking series coefficients; no
//! floating point and no order-by-order solving is involved.
//!
//! `verify_deformation` checks skew-symmetry and the compatibility identity
//! at the series level, which covers every component degree at once, and
//! reports violations broken down by total degree.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{Algebra, Carrier, LinearMap, PERMUTATIONS3};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::models::{all_triples, cross4, jacobian3, vw};
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::series::TruncSeries;

/// Exponent vector of a parameter monomial `t1^{i1} * ... * tn^{in}`.
///
/// Ordered by total degree first, then lexicographically, so iteration over
/// a `BTreeMap` keyed by `MultiIndex` visits components degree by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zero(arity: usize) -> Self {
        MultiIndex(vec![0; arity])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `<=`, the divisibility order on parameter monomials.
    pub fn componentwise_le(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Every index of the given arity with total degree at most `order`,
    /// in graded order.
    pub fn all_up_to(arity: usize, order: u32) -> Vec<MultiIndex> {
        fn rec(arity: usize, budget: u32) -> Vec<Vec<u32>> {
            if arity == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for first in 0..=budget {
                for mut rest in rec(arity - 1, budget - first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        let mut list: Vec<MultiIndex> = rec(arity, order).into_iter().map(MultiIndex).collect();
        list.sort();
        list
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("multi-index '{}' is not parenthesized", s))?;
        let exps = inner
            .split(',')
            .map(|p| {
                p.parse::<u32>()
                    .map_err(|_| format!("bad exponent '{}' in multi-index '{}'", p, s))
            })
            .collect::<std::result::Result<Vec<u32>, String>>()?;
        Ok(MultiIndex(exps))
    }
}

/// The finite slice of a carrier basis used for sampling and tabulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// The four coordinate vectors `e1..e4`.
    Coords,
    /// Generators `Q_lo..Q_hi` and `R_lo..R_hi`.
    Generators { lo: i64, hi: i64 },
    /// All monomials in `x1, x2, x3` up to a total degree.
    Monomials { max_degree: u32 },
}

impl Window {
    pub fn basis(&self) -> Vec<Element<Scalar>> {
        let one = Scalar::one();
        match self {
            Window::Coords => cross4::basis_elements(&one),
            Window::Generators { lo, hi } => vw::generator_elements(&one, *lo, *hi),
            Window::Monomials { max_degree } => jacobian3::monomial_elements(&one, *max_degree),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Window::Coords => "coords e1..e4".to_string(),
            Window::Generators { lo, hi } => format!("generators {}..{}", lo, hi),
            Window::Monomials { max_degree } => format!("monomials degree<={}", max_degree),
        }
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "coords e1..e4" || s == "coords" {
            return Ok(Window::Coords);
        }
        if let Some(range) = s.strip_prefix("generators ") {
            let (lo, hi) = range
                .split_once("..")
                .ok_or_else(|| format!("bad generator range '{}'", range))?;
            let lo = lo
                .parse::<i64>()
                .map_err(|_| format!("bad generator bound '{}'", lo))?;
            let hi = hi
                .parse::<i64>()
                .map_err(|_| format!("bad generator bound '{}'", hi))?;
            if lo > hi {
                return Err(format!("empty generator range {}..{}", lo, hi));
            }
            return Ok(Window::Generators { lo, hi });
        }
        if let Some(deg) = s.strip_prefix("monomials degree<=") {
            let max_degree = deg
                .parse::<u32>()
                .map_err(|_| format!("bad degree bound '{}'", deg))?;
            return Ok(Window::Monomials { max_degree });
        }
        Err(format!("unrecognized window '{}'", s))
    }
}

/// Coefficient of one parameter monomial in each basis coordinate.
pub fn series_component(el: &Element<TruncSeries>, index: &MultiIndex) -> Element<Scalar> {
    let mut out = Element::zero();
    for (key, series) in el.terms() {
        out.add_term(key.clone(), series.coeff(index.exps()));
    }
    out
}

/// All nonzero components of a series element, keyed by parameter monomial.
pub fn series_components(el: &Element<TruncSeries>) -> BTreeMap<MultiIndex, Element<Scalar>> {
    let mut map: BTreeMap<MultiIndex, Element<Scalar>> = BTreeMap::new();
    for (key, series) in el.terms() {
        for (exps, coef) in series.terms() {
            map.entry(MultiIndex::new(exps.clone()))
                .or_insert_with(Element::zero)
                .add_term(key.clone(), coef.clone());
        }
    }
    map.retain(|_, v| !v.is_zero());
    map
}

/// A multi-parameter formal deformation, truncated at a fixed total degree.
///
/// `algebra` lives over the series ring in `params` parameters; `base` is
/// the scalar algebra obtained by setting every parameter to zero, kept
/// alongside so the degree-zero components can be compared against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationFamily {
    pub name: String,
    pub params: usize,
    pub order: u32,
    pub algebra: Algebra<TruncSeries>,
    pub base: Algebra<Scalar>,
}

impl DeformationFamily {
    /// Embed a scalar element as a constant series element.
    pub fn lift(&self, el: &Element<Scalar>) -> Element<TruncSeries> {
        el.map_coeffs(|c| TruncSeries::constant(self.params, self.order, c.clone()))
    }

    /// The full deformed bracket over the series ring.
    pub fn eval_deformed_bracket(
        &self,
        x: &Element<TruncSeries>,
        y: &Element<TruncSeries>,
        z: &Element<TruncSeries>,
    ) -> Result<Element<TruncSeries>> {
        self.algebra.bracket_eval(x, y, z)
    }

    /// The bracket component attached to one parameter monomial, evaluated
    /// on scalar arguments.
    pub fn bracket_component(
        &self,
        index: &MultiIndex,
        x: &Element<Scalar>,
        y: &Element<Scalar>,
        z: &Element<Scalar>,
    ) -> Result<Element<Scalar>> {
        self.check_index(index)?;
        let full = self
            .algebra
            .bracket_eval(&self.lift(x), &self.lift(y), &self.lift(z))?;
        Ok(series_component(&full, index))
    }

    /// The component of the first twisting map attached to one parameter
    /// monomial.
    pub fn alpha_component(&self, index: &MultiIndex, x: &Element<Scalar>) -> Result<Element<Scalar>> {
        self.check_index(index)?;
        let full = self.algebra.alpha(&self.lift(x))?;
        Ok(series_component(&full, index))
    }

    /// The component of the second twisting map attached to one parameter
    /// monomial.
    pub fn beta_component(&self, index: &MultiIndex, x: &Element<Scalar>) -> Result<Element<Scalar>> {
        self.check_index(index)?;
        let full = self.algebra.beta(&self.lift(x))?;
        Ok(series_component(&full, index))
    }

    fn check_index(&self, index: &MultiIndex) -> Result<()> {
        if index.arity() != self.params || index.total() > self.order {
            return Err(Error::InvalidParameter(format!(
                "index {} out of range for {} parameters at order {}",
                index, self.params, self.order
            )));
        }
        Ok(())
    }

    /// Drop every component of total degree above `new_order`. Raising the
    /// order is not possible: the discarded components are gone.
    pub fn truncated(&self, new_order: u32) -> Result<DeformationFamily> {
        if new_order > self.order {
            return Err(Error::InvalidParameter(format!(
                "cannot raise truncation order from {} to {}",
                self.order, new_order
            )));
        }
        let algebra = self.algebra.map_ring(&mut |s: &TruncSeries| {
            s.truncated(new_order).expect("lowering the order never fails")
        });
        Ok(DeformationFamily {
            name: self.name.clone(),
            params: self.params,
            order: new_order,
            algebra,
            base: self.base.clone(),
        })
    }

    pub fn default_window(&self) -> Window {
        match self.base.carrier {
            Carrier::Coord4 => Window::Coords,
            Carrier::Poly3 => Window::Monomials { max_degree: 1 },
            Carrier::Generators => Window::Generators { lo: -1, hi: 1 },
        }
    }

    fn window_fits(&self, window: Window) -> Result<()> {
        let ok = matches!(
            (window, self.base.carrier),
            (Window::Coords, Carrier::Coord4)
                | (Window::Generators { .. }, Carrier::Generators)
                | (Window::Monomials { .. }, Carrier::Poly3)
        );
        if ok {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(format!(
                "window '{}' does not fit carrier {}",
                window.describe(),
                self.base.carrier.describe()
            )))
        }
    }

    /// Tabulate every nonzero bracket and twisting-map component over the
    /// window basis, grouped by parameter monomial in graded order.
    pub fn tabulate(&self, window: Window) -> Result<SavedFamily> {
        self.window_fits(window)?;
        let basis = window.basis();
        let names: Vec<String> = basis.iter().map(|b| b.to_string()).collect();

        let mut brackets: BTreeMap<MultiIndex, Vec<([String; 3], String)>> = BTreeMap::new();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                for (k, z) in basis.iter().enumerate() {
                    let full =
                        self.algebra
                            .bracket_eval(&self.lift(x), &self.lift(y), &self.lift(z))?;
                    for (idx, el) in series_components(&full) {
                        brackets.entry(idx).or_default().push((
                            [names[i].clone(), names[j].clone(), names[k].clone()],
                            el.to_string(),
                        ));
                    }
                }
            }
        }

        let tabulate_map = |apply: &dyn Fn(&Element<TruncSeries>) -> Result<Element<TruncSeries>>|
         -> Result<Vec<(MultiIndex, String, String)>> {
            let mut rows: BTreeMap<MultiIndex, Vec<(String, String)>> = BTreeMap::new();
            for (i, x) in basis.iter().enumerate() {
                let full = apply(&self.lift(x))?;
                for (idx, el) in series_components(&full) {
                    rows.entry(idx)
                        .or_default()
                        .push((names[i].clone(), el.to_string()));
                }
            }
            Ok(rows
                .into_iter()
                .flat_map(|(idx, entries)| {
                    entries.into_iter().map(move |(k, e)| (idx.clone(), k, e))
                })
                .collect())
        };

        Ok(SavedFamily {
            family: self.name.clone(),
            base: self.base.id.clone(),
            params: self.params,
            order: self.order,
            window: window.describe(),
            brackets: brackets
                .into_iter()
                .flat_map(|(idx, entries)| {
                    entries.into_iter().map(move |(ks, e)| (idx.clone(), ks, e))
                })
                .collect(),
            alpha: tabulate_map(&|x| self.algebra.alpha(x))?,
            beta: tabulate_map(&|x| self.algebra.beta(x))?,
        })
    }

    /// Render the component tables in the text format `SavedFamily::parse`
    /// reads back.
    pub fn save_text(&self, window: Window) -> Result<String> {
        Ok(self.tabulate(window)?.render())
    }
}

/// The generator-scaling family: `X_n -> q^n X_n` with `q = 1 + t`.
///
/// The scalar base keeps the supplied central parameter `z`; values away
/// from the two distinguished ones leave the base outside the skew-plus-
/// identity class, which is refused unless explicitly allowed.
pub fn build_qvw_deformation(
    order: u32,
    z: &Scalar,
    allow_non_nambu_lie: bool,
) -> Result<DeformationFamily> {
    if !vw::z_is_nambu_lie(z) && !allow_non_nambu_lie {
        return Err(Error::BaseNotNambuLie(z.to_string()));
    }
    let one = TruncSeries::one(1, order);
    let series_alg = vw::algebra(one.clone(), z.clone());
    let sample: Vec<[Element<TruncSeries>; 3]> =
        all_triples(&vw::generator_elements(&one, -1, 1)).collect();
    let algebra = series_alg.twist_by_endomorphism(vw::rho_q_series(order), sample.iter())?;
    Ok(DeformationFamily {
        name: "qvw".to_string(),
        params: 1,
        order,
        algebra,
        base: vw::algebra(Scalar::one(), z.clone()),
    })
}

/// The rotation family on four coordinates: one angle parameter per plane,
/// entering through their sine and cosine series.
pub fn build_cross_deformation(order: u32) -> Result<DeformationFamily> {
    let one = TruncSeries::one(2, order);
    let series_alg = cross4::algebra(one.clone());
    let sample: Vec<[Element<TruncSeries>; 3]> =
        all_triples(&cross4::basis_elements(&one)).collect();
    let rho = LinearMap::Matrix(cross4::rho_theta_series(order));
    let algebra = series_alg.twist_by_endomorphism(rho, sample.iter())?;
    Ok(DeformationFamily {
        name: "cross4".to_string(),
        params: 2,
        order,
        algebra,
        base: cross4::algebra(Scalar::one()),
    })
}

/// The triangular substitution family on three polynomial variables.
///
/// Parameter layout: `t1` is the constant shift of `x3`; the next block
/// holds the coefficients of `p1(x2, x3)` on monomials of total degree
/// `1..=shape.0` (by degree, `x2` power descending); the last block holds
/// the coefficients of `p2(x3)` on `x3^1..=x3^{shape.1}`. The default shape
/// `(1, 1)` gives four parameters. The diagonal `k` must have product one,
/// and a diagonal other than `(1, 1, 1)` makes the base the correspondingly
/// twisted algebra rather than the plain one.
pub fn build_jacobian_deformation(
    shape: (u32, u32),
    k: &[Scalar; 3],
    order: u32,
) -> Result<DeformationFamily> {
    let k_prod = &(&k[0] * &k[1]) * &k[2];
    if k_prod != Scalar::one() {
        return Err(Error::BadDiagonal(format!("k1*k2*k3 = {}", k_prod)));
    }

    let mut p1_monomials: Vec<[i32; 3]> = Vec::new();
    for d in 1..=shape.0 as i32 {
        for a in (0..=d).rev() {
            p1_monomials.push([0, a, d - a]);
        }
    }
    let p2_degrees: Vec<i32> = (1..=shape.1 as i32).collect();
    let params = 1 + p1_monomials.len() + p2_degrees.len();

    let one = TruncSeries::one(params, order);
    let param = |j: usize| TruncSeries::param(params, order, j);

    let mut p1: Poly<TruncSeries> = Poly::zero(3);
    for (i, exps) in p1_monomials.iter().enumerate() {
        p1 = &p1 + &Poly::monomial(3, exps.to_vec(), param(1 + i));
    }
    let mut p2: Poly<TruncSeries> = Poly::zero(3);
    for (i, d) in p2_degrees.iter().enumerate() {
        p2 = &p2 + &Poly::monomial(3, vec![0, 0, *d], param(1 + p1_monomials.len() + i));
    }
    let k_series: [TruncSeries; 3] =
        std::array::from_fn(|j| TruncSeries::constant(params, order, k[j].clone()));
    let gamma = jacobian3::GammaMap::upper(k_series, p1, p2, param(0))?;

    let series_alg = jacobian3::algebra(one.clone());
    let sample: Vec<[Element<TruncSeries>; 3]> =
        all_triples(&jacobian3::monomial_elements(&one, 1)).collect();
    let algebra = series_alg.twist_by_endomorphism(jacobian3::gamma_endo(&gamma), sample.iter())?;

    let unit = [Scalar::one(), Scalar::one(), Scalar::one()];
    let base = if *k == unit {
        jacobian3::algebra(Scalar::one())
    } else {
        let gamma0 =
            jacobian3::GammaMap::upper(k.clone(), Poly::zero(3), Poly::zero(3), Scalar::zero())?;
        let base_sample: Vec<[Element<Scalar>; 3]> =
            all_triples(&jacobian3::monomial_elements(&Scalar::one(), 1)).collect();
        jacobian3::algebra(Scalar::one())
            .twist_by_endomorphism(jacobian3::gamma_endo(&gamma0), base_sample.iter())?
    };

    Ok(DeformationFamily {
        name: "jacobian3".to_string(),
        params,
        order,
        algebra,
        base,
    })
}

/// One failing 5-tuple with its residual split by parameter monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedResidual {
    pub witness: Vec<String>,
    /// Nonzero residual components in graded order, as
    /// `(parameter monomial, element)` strings.
    pub components: Vec<(String, String)>,
}

/// Outcome of verifying one deformation family over a sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationReport {
    pub family: String,
    #[serde(rename = "base-id")]
    pub base_id: String,
    pub params: usize,
    pub order: u32,
    pub skew: CheckReport,
    pub identity: CheckReport,
    pub residuals: Vec<OrderedResidual>,
    /// Count of nonzero residual components per total degree, across both
    /// checks. Degrees that never appear are clean.
    #[serde(rename = "degree-violations")]
    pub degree_violations: BTreeMap<u32, usize>,
}

impl DeformationReport {
    pub fn passed(&self) -> bool {
        self.skew.passed() && self.identity.passed()
    }

    pub fn render_text(&self, max_violations: Option<usize>) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "deformation: {} (base {}, {} parameter{}, order {})\n",
            self.family,
            self.base_id,
            self.params,
            if self.params == 1 { "" } else { "s" },
            self.order
        ));
        out.push_str(&self.skew.render_text(max_violations));
        out.push_str(&self.identity.render_text(max_violations));
        out.push_str("degree table:\n");
        for d in 0..=self.order {
            match self.degree_violations.get(&d).copied().unwrap_or(0) {
                0 => out.push_str(&format!("  degree {}: pass\n", d)),
                n => out.push_str(&format!("  degree {}: fail ({} nonzero components)\n", d, n)),
            }
        }
        if let Some(first) = self.residuals.first() {
            out.push_str("first failing tuple, residual by parameter monomial:\n");
            for (idx, el) in &first.components {
                out.push_str(&format!("  {}: {}\n", idx, el));
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.passed() { "pass" } else { "fail" }
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Check skew-symmetry and the compatibility identity of the deformed
/// bracket at the series level. A zero series residual means every
/// component up to the truncation order vanishes, so one pass covers all
/// degrees; any nonzero residual is recorded both whole and split by
/// parameter monomial.
pub fn verify_deformation<I3, I5>(
    family: &DeformationFamily,
    triples: I3,
    tuples: I5,
) -> Result<DeformationReport>
where
    I3: IntoIterator<Item = [Element<Scalar>; 3]>,
    I5: IntoIterator<Item = [Element<Scalar>; 5]>,
{
    let alg = &family.algebra;
    let mut skew = CheckReport::new("deformation-skew-symmetry", alg.id.clone());
    let mut identity = CheckReport::new("deformation-hom-nambu-identity", alg.id.clone());
    let mut degree_violations: BTreeMap<u32, usize> = BTreeMap::new();
    let mut residuals = Vec::new();

    for triple in triples {
        skew.sample_size += 1;
        let lifted: [Element<TruncSeries>; 3] = std::array::from_fn(|i| family.lift(&triple[i]));
        let base = alg.bracket_eval(&lifted[0], &lifted[1], &lifted[2])?;
        for (perm, sign) in PERMUTATIONS3.iter().skip(1) {
            let permuted =
                alg.bracket_eval(&lifted[perm[0]], &lifted[perm[1]], &lifted[perm[2]])?;
            let residual = &permuted - &base.scale_int(*sign);
            if !residual.is_zero() {
                for idx in series_components(&residual).keys() {
                    *degree_violations.entry(idx.total()).or_insert(0) += 1;
                }
                skew.record(
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

    for tuple in tuples {
        identity.sample_size += 1;
        let lifted: [Element<TruncSeries>; 5] = std::array::from_fn(|i| family.lift(&tuple[i]));
        let residual = alg.hom_nambu_residual(&lifted)?;
        if !residual.is_zero() {
            let comps = series_components(&residual);
            for idx in comps.keys() {
                *degree_violations.entry(idx.total()).or_insert(0) += 1;
            }
            let witness: Vec<String> = tuple.iter().map(|e| e.to_string()).collect();
            identity.record(witness.clone(), residual.to_string());
            residuals.push(OrderedResidual {
                witness,
                components: comps
                    .into_iter()
                    .map(|(i, e)| (i.to_string(), e.to_string()))
                    .collect(),
            });
        }
    }

    Ok(DeformationReport {
        family: family.name.clone(),
        base_id: family.base.id.clone(),
        params: family.params,
        order: family.order,
        skew,
        identity,
        residuals,
        degree_violations,
    })
}

/// Component tables of a deformation family in their on-disk form.
///
/// The format is line based:
///
/// ```text
/// nambu deformation table v1
/// family: cross4
/// base: cross4
/// params: 2
/// order: 1
/// window: coords e1..e4
/// brackets:
/// (0,0) | e1, e2, e3 -> e4
/// alpha:
/// (0,0) | e1 -> e1
/// beta:
/// (0,0) | e1 -> e1
/// end
/// ```
///
/// Header lines are fixed and ordered; each table line is
/// `index | arguments -> element`, grouped by index in graded order with
/// zero components omitted. Element strings use the canonical displays, so
/// rendering a parsed file reproduces it byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SavedFamily {
    pub family: String,
    pub base: String,
    pub params: usize,
    pub order: u32,
    pub window: String,
    pub brackets: Vec<(MultiIndex, [String; 3], String)>,
    pub alpha: Vec<(MultiIndex, String, String)>,
    pub beta: Vec<(MultiIndex, String, String)>,
}

impl SavedFamily {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("nambu deformation table v1\n");
        out.push_str(&format!("family: {}\n", self.family));
        out.push_str(&format!("base: {}\n", self.base));
        out.push_str(&format!("params: {}\n", self.params));
        out.push_str(&format!("order: {}\n", self.order));
        out.push_str(&format!("window: {}\n", self.window));
        out.push_str("brackets:\n");
        for (idx, keys, el) in &self.brackets {
            out.push_str(&format!(
                "{} | {}, {}, {} -> {}\n",
                idx, keys[0], keys[1], keys[2], el
            ));
        }
        out.push_str("alpha:\n");
        for (idx, key, el) in &self.alpha {
            out.push_str(&format!("{} | {} -> {}\n", idx, key, el));
        }
        out.push_str("beta:\n");
        for (idx, key, el) in &self.beta {
            out.push_str(&format!("{} | {} -> {}\n", idx, key, el));
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<SavedFamily> {
        let mut lines = text.lines().enumerate();

        let mut expect = |what: &str| -> Result<(usize, String)> {
            let (i, line) = lines
                .next()
                .ok_or_else(|| Error::FileFormat(0, format!("missing {}", what)))?;
            Ok((i + 1, line.to_string()))
        };

        let (no, magic) = expect("header")?;
        if magic != "nambu deformation table v1" {
            return Err(Error::FileFormat(no, "unrecognized header".to_string()));
        }

        let mut header_field = |name: &str| -> Result<(usize, String)> {
            let (no, line) = expect(name)?;
            let value = line.strip_prefix(&format!("{}: ", name)).ok_or_else(|| {
                Error::FileFormat(no, format!("expected '{}: ...' line", name))
            })?;
            Ok((no, value.to_string()))
        };

        let (_, family) = header_field("family")?;
        let (_, base) = header_field("base")?;
        let (no, params_str) = header_field("params")?;
        let params: usize = params_str
            .parse()
            .map_err(|_| Error::FileFormat(no, format!("bad parameter count '{}'", params_str)))?;
        if params == 0 {
            return Err(Error::FileFormat(no, "parameter count must be positive".to_string()));
        }
        let (no, order_str) = header_field("order")?;
        let order: u32 = order_str
            .parse()
            .map_err(|_| Error::FileFormat(no, format!("bad order '{}'", order_str)))?;
        let (no, window) = header_field("window")?;
        Window::from_str(&window).map_err(|e| Error::FileFormat(no, e))?;

        let (no, line) = expect("brackets section")?;
        if line != "brackets:" {
            return Err(Error::FileFormat(no, "expected 'brackets:' line".to_string()));
        }

        let parse_index = |no: usize, s: &str| -> Result<MultiIndex> {
            let idx = MultiIndex::from_str(s).map_err(|e| Error::FileFormat(no, e))?;
            if idx.arity() != params {
                return Err(Error::FileFormat(
                    no,
                    format!("index {} does not have {} entries", idx, params),
                ));
            }
            if idx.total() > order {
                return Err(Error::FileFormat(
                    no,
                    format!("index {} exceeds order {}", idx, order),
                ));
            }
            Ok(idx)
        };

        let mut brackets = Vec::new();
        let line = loop {
            let (no, line) = expect("bracket line or 'alpha:'")?;
            if line == "alpha:" {
                break line;
            }
            let (idx_str, rest) = line.split_once(" | ").ok_or_else(|| {
                Error::FileFormat(no, "expected 'index | arguments -> element'".to_string())
            })?;
            let idx = parse_index(no, idx_str)?;
            let (args, el) = rest.split_once(" -> ").ok_or_else(|| {
                Error::FileFormat(no, "expected '-> element' after arguments".to_string())
            })?;
            let keys: Vec<&str> = args.split(", ").collect();
            if keys.len() != 3 || el.is_empty() {
                return Err(Error::FileFormat(
                    no,
                    "bracket lines take three arguments and a nonempty element".to_string(),
                ));
            }
            brackets.push((
                idx,
                [keys[0].to_string(), keys[1].to_string(), keys[2].to_string()],
                el.to_string(),
            ));
        };
        debug_assert_eq!(line, "alpha:");

        let mut parse_map_section = |terminator: &str| -> Result<Vec<(MultiIndex, String, String)>> {
            let mut rows = Vec::new();
            loop {
                let (no, line) = expect(&format!("map line or '{}'", terminator))?;
                if line == terminator {
                    return Ok(rows);
                }
                let (idx_str, rest) = line.split_once(" | ").ok_or_else(|| {
                    Error::FileFormat(no, "expected 'index | argument -> element'".to_string())
                })?;
                let idx = parse_index(no, idx_str)?;
                let (key, el) = rest.split_once(" -> ").ok_or_else(|| {
                    Error::FileFormat(no, "expected '-> element' after the argument".to_string())
                })?;
                if key.is_empty() || key.contains(", ") || el.is_empty() {
                    return Err(Error::FileFormat(
                        no,
                        "map lines take one argument and a nonempty element".to_string(),
                    ));
                }
                rows.push((idx, key.to_string(), el.to_string()));
            }
        };

        let alpha = parse_map_section("beta:")?;
        let beta = parse_map_section("end")?;

        for (i, line) in lines {
            if !line.trim().is_empty() {
                return Err(Error::FileFormat(
                    i + 1,
                    format!("unexpected content after 'end': '{}'", line),
                ));
            }
        }

        Ok(SavedFamily {
            family,
            base,
            params,
            order,
            window,
            brackets,
            alpha,
            beta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::BasisKey;
    use crate::models::all_tuples5;

    fn e(i: usize) -> Element<Scalar> {
        Element::basis(BasisKey::e(i), Scalar::one())
    }

    fn q_el(n: i64) -> Element<Scalar> {
        Element::basis(BasisKey::q(n), Scalar::one())
    }

    fn r_el(n: i64) -> Element<Scalar> {
        Element::basis(BasisKey::r(n), Scalar::one())
    }

    fn mono(exps: [u32; 3]) -> Element<Scalar> {
        Element::basis(BasisKey::monomial(exps), Scalar::one())
    }

    fn idx1(i: u32) -> MultiIndex {
        MultiIndex::new(vec![i])
    }

    fn two_i() -> Scalar {
        Scalar::gaussian_int(0, 2)
    }

    #[test]
    fn multi_index_graded_order() {
        let all = MultiIndex::all_up_to(2, 2);
        let rendered: Vec<String> = all.iter().map(|i| i.to_string()).collect();
        assert_eq!(
            rendered,
            ["(0,0)", "(0,1)", "(1,0)", "(0,2)", "(1,1)", "(2,0)"]
        );
        assert!(MultiIndex::new(vec![0, 1]).componentwise_le(&MultiIndex::new(vec![1, 1])));
        assert!(!MultiIndex::new(vec![2, 0]).componentwise_le(&MultiIndex::new(vec![1, 1])));
    }

    #[test]
    fn multi_index_round_trips_through_display() {
        for idx in MultiIndex::all_up_to(3, 3) {
            assert_eq!(idx.to_string().parse::<MultiIndex>().unwrap(), idx);
        }
        assert!("(1,x)".parse::<MultiIndex>().is_err());
        assert!("1,2".parse::<MultiIndex>().is_err());
    }

    #[test]
    fn window_descriptions_round_trip() {
        for w in [
            Window::Coords,
            Window::Generators { lo: -2, hi: 3 },
            Window::Monomials { max_degree: 2 },
        ] {
            assert_eq!(w.describe().parse::<Window>().unwrap(), w);
        }
        assert!("generators 3..1".parse::<Window>().is_err());
    }

    #[test]
    fn qvw_scaling_map_components_match_binomials() {
        // (1+t)^{-1} restricted to order 2 is 1 - t + t^2.
        let family = build_qvw_deformation(2, &two_i(), false).unwrap();
        assert_eq!(family.alpha_component(&idx1(0), &q_el(-1)).unwrap(), q_el(-1));
        assert_eq!(
            family.alpha_component(&idx1(1), &q_el(-1)).unwrap(),
            q_el(-1).scale_int(-1)
        );
        assert_eq!(family.alpha_component(&idx1(2), &q_el(-1)).unwrap(), q_el(-1));
        // (1+t)^2 has no component beyond degree 2 even at higher order.
        let family = build_qvw_deformation(3, &two_i(), false).unwrap();
        assert_eq!(
            family.alpha_component(&idx1(3), &q_el(2)).unwrap(),
            Element::zero()
        );
    }

    #[test]
    fn qvw_bracket_components_scale_by_index_sum() {
        // [Q_0,Q_1,R_0] = -Q_1, and the deformed bracket multiplies it by
        // (1+t)^{0+1+0}, so the components at degree 0 and 1 are both -Q_1.
        let family = build_qvw_deformation(2, &two_i(), false).unwrap();
        let expected = q_el(1).scale_int(-1);
        assert_eq!(
            family
                .bracket_component(&idx1(0), &q_el(0), &q_el(1), &r_el(0))
                .unwrap(),
            expected
        );
        assert_eq!(
            family
                .bracket_component(&idx1(1), &q_el(0), &q_el(1), &r_el(0))
                .unwrap(),
            expected
        );
        assert_eq!(
            family
                .bracket_component(&idx1(2), &q_el(0), &q_el(1), &r_el(0))
                .unwrap(),
            Element::zero()
        );
    }

    #[test]
    fn qvw_degree_zero_component_is_the_base_bracket() {
        let family = build_qvw_deformation(2, &two_i(), false).unwrap();
        let gens = vw::generator_elements(&Scalar::one(), -1, 1);
        for [x, y, z] in all_triples(&gens) {
            let got = family.bracket_component(&idx1(0), &x, &y, &z).unwrap();
            let want = family.base.bracket_eval(&x, &y, &z).unwrap();
            assert_eq!(got, want, "[{}, {}, {}]", x, y, z);
        }
    }

    #[test]
    fn qvw_rejects_bad_central_parameter_unless_allowed() {
        let err = build_qvw_deformation(2, &Scalar::one(), false).unwrap_err();
        assert!(matches!(err, Error::BaseNotNambuLie(_)));
        assert!(build_qvw_deformation(2, &Scalar::one(), true).is_ok());
    }

    #[test]
    fn cross_scaling_map_components_match_trig_series() {
        // The first coordinate goes to cos(t1) e1 + sin(t1) e3.
        let family = build_cross_deformation(3).unwrap();
        let comp = |i, j| {
            family
                .alpha_component(&MultiIndex::new(vec![i, j]), &e(1))
                .unwrap()
        };
        assert_eq!(comp(0, 0), e(1));
        assert_eq!(comp(1, 0), e(3));
        assert_eq!(comp(2, 0), e(1).scale(&Scalar::ratio(-1, 2)));
        assert_eq!(comp(3, 0), e(3).scale(&Scalar::ratio(-1, 6)));
        assert_eq!(comp(0, 1), Element::zero());
        assert_eq!(comp(0, 2), Element::zero());
    }

    #[test]
    fn cross_bracket_components_at_order_one() {
        // [e1,e2,e3] deforms to e4 - t2 e2 at first order.
        let family = build_cross_deformation(1).unwrap();
        let comp = |i, j| {
            family
                .bracket_component(&MultiIndex::new(vec![i, j]), &e(1), &e(2), &e(3))
                .unwrap()
        };
        assert_eq!(comp(0, 0), e(4));
        assert_eq!(comp(0, 1), e(2).scale_int(-1));
        assert_eq!(comp(1, 0), Element::zero());
    }

    #[test]
    fn cross_degree_zero_component_is_the_base_bracket() {
        let family = build_cross_deformation(2).unwrap();
        let basis = cross4::basis_elements(&Scalar::one());
        let zero_idx = MultiIndex::zero(2);
        for [x, y, z] in all_triples(&basis) {
            let got = family.bracket_component(&zero_idx, &x, &y, &z).unwrap();
            let want = family.base.bracket_eval(&x, &y, &z).unwrap();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn jacobian_single_parameter_deforms_the_cube() {
        // With only the constant shift, [x1,x2,x3^3] becomes 3(x3 + t)^2.
        let family = build_jacobian_deformation(
            (0, 0),
            &[Scalar::one(), Scalar::one(), Scalar::one()],
            2,
        )
        .unwrap();
        assert_eq!(family.params, 1);
        let args = (mono([1, 0, 0]), mono([0, 1, 0]), mono([0, 0, 3]));
        let comp = |i| {
            family
                .bracket_component(&idx1(i), &args.0, &args.1, &args.2)
                .unwrap()
        };
        assert_eq!(comp(0), mono([0, 0, 2]).scale_int(3));
        assert_eq!(comp(1), mono([0, 0, 1]).scale_int(6));
        assert_eq!(comp(2), mono([0, 0, 0]).scale_int(3));
    }

    #[test]
    fn jacobian_default_shape_has_four_parameters() {
        let family = build_jacobian_deformation(
            (1, 1),
            &[Scalar::one(), Scalar::one(), Scalar::one()],
            1,
        )
        .unwrap();
        assert_eq!(family.params, 4);
        // x3 -> x3 + t1; x1 -> x1 + t2 x2 + t3 x3; x2 -> x2 + t4 x3.
        let one_at = |j: usize| {
            let mut exps = vec![0u32; 4];
            exps[j] = 1;
            MultiIndex::new(exps)
        };
        let x3 = mono([0, 0, 1]);
        assert_eq!(
            family.alpha_component(&one_at(0), &x3).unwrap(),
            mono([0, 0, 0])
        );
        let x1 = mono([1, 0, 0]);
        assert_eq!(
            family.alpha_component(&one_at(1), &x1).unwrap(),
            mono([0, 1, 0])
        );
        assert_eq!(
            family.alpha_component(&one_at(2), &x1).unwrap(),
            mono([0, 0, 1])
        );
        let x2 = mono([0, 1, 0]);
        assert_eq!(
            family.alpha_component(&one_at(3), &x2).unwrap(),
            mono([0, 0, 1])
        );
    }

    #[test]
    fn jacobian_rejects_non_unimodular_diagonal() {
        let err = build_jacobian_deformation(
            (0, 0),
            &[Scalar::from_int(2), Scalar::one(), Scalar::one()],
            1,
        )
        .unwrap_err();
        assert!(matches!(err, Error::BadDiagonal(_)));
    }

    #[test]
    fn jacobian_twisted_base_for_nontrivial_diagonal() {
        let family = build_jacobian_deformation(
            (0, 0),
            &[Scalar::from_int(2), Scalar::ratio(1, 2), Scalar::one()],
            1,
        )
        .unwrap();
        // The degree-zero component rescales arguments before the bracket:
        // it is the diagonal twist, not the plain bracket.
        let got = family
            .bracket_component(
                &idx1(0),
                &mono([1, 0, 0]),
                &mono([0, 1, 0]),
                &mono([0, 0, 3]),
            )
            .unwrap();
        let want = family
            .base
            .bracket_eval(&mono([1, 0, 0]), &mono([0, 1, 0]), &mono([0, 0, 3]))
            .unwrap();
        assert_eq!(got, want);
        assert_eq!(got, mono([0, 0, 2]).scale_int(3));
    }

    #[test]
    fn verification_passes_for_all_three_families() {
        let qvw = build_qvw_deformation(2, &two_i(), false).unwrap();
        let gens = vw::generator_elements(&Scalar::one(), -1, 1);
        let report =
            verify_deformation(&qvw, all_triples(&gens), all_tuples5(&gens)).unwrap();
        assert!(report.passed(), "{}", report.render_text(Some(3)));
        assert!(report.degree_violations.is_empty());

        let cross = build_cross_deformation(2).unwrap();
        let basis = cross4::basis_elements(&Scalar::one());
        let report =
            verify_deformation(&cross, all_triples(&basis), all_tuples5(&basis)).unwrap();
        assert!(report.passed(), "{}", report.render_text(Some(3)));

        let jac = build_jacobian_deformation(
            (1, 1),
            &[Scalar::one(), Scalar::one(), Scalar::one()],
            1,
        )
        .unwrap();
        let monos = jacobian3::monomial_elements(&Scalar::one(), 1);
        let report =
            verify_deformation(&jac, all_triples(&monos), all_tuples5(&monos)).unwrap();
        assert!(report.passed(), "{}", report.render_text(Some(3)));
    }

    #[test]
    fn verification_flags_a_base_outside_the_class() {
        let family = build_qvw_deformation(1, &Scalar::one(), true).unwrap();
        let gens = vw::generator_elements(&Scalar::one(), -1, 1);
        let report =
            verify_deformation(&family, all_triples(&gens), all_tuples5(&gens)).unwrap();
        assert!(!report.passed());
        // The defect is already present before deforming, so degree zero
        // must be among the failing degrees.
        assert!(report.degree_violations.contains_key(&0));
        let first = &report.residuals[0];
        assert!(!first.components.is_empty());
        let text = report.render_text(Some(2));
        assert!(text.contains("degree 0: fail"));
        assert!(text.contains("overall: fail"));
    }

    #[test]
    fn corrupting_the_twist_shows_up_at_positive_degree() {
        // Dropping the twisting maps while keeping the twisted bracket
        // breaks the identity in the parameter-dependent part only: the
        // degree-0 slice is the intact base algebra.
        let mut family = build_qvw_deformation(2, &two_i(), false).unwrap();
        family.algebra.alpha = LinearMap::Identity;
        family.algebra.beta = LinearMap::Identity;
        let gens = vw::generator_elements(&Scalar::one(), -1, 1);
        let report =
            verify_deformation(&family, std::iter::empty(), all_tuples5(&gens)).unwrap();
        assert!(!report.passed());
        assert!(!report.degree_violations.contains_key(&0));
        assert!(
            report.degree_violations.contains_key(&1)
                || report.degree_violations.contains_key(&2)
        );
    }

    #[test]
    fn truncating_a_family_matches_building_at_the_lower_order() {
        let big = build_cross_deformation(4).unwrap();
        let small = build_cross_deformation(2).unwrap();
        assert_eq!(big.truncated(2).unwrap(), small);

        let big = build_qvw_deformation(3, &two_i(), false).unwrap();
        let small = build_qvw_deformation(1, &two_i(), false).unwrap();
        assert_eq!(big.truncated(1).unwrap(), small);

        let unit = [Scalar::one(), Scalar::one(), Scalar::one()];
        let big = build_jacobian_deformation((1, 1), &unit, 2).unwrap();
        let small = build_jacobian_deformation((1, 1), &unit, 1).unwrap();
        assert_eq!(big.truncated(1).unwrap(), small);

        assert!(matches!(
            small.truncated(5),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn saved_tables_round_trip_byte_for_byte() {
        let family = build_cross_deformation(1).unwrap();
        let text = family.save_text(Window::Coords).unwrap();
        let parsed = SavedFamily::parse(&text).unwrap();
        assert_eq!(parsed.render(), text);
        assert_eq!(parsed, family.tabulate(Window::Coords).unwrap());

        let family = build_qvw_deformation(1, &two_i(), false).unwrap();
        let text = family
            .save_text(Window::Generators { lo: -1, hi: 1 })
            .unwrap();
        let parsed = SavedFamily::parse(&text).unwrap();
        assert_eq!(parsed.render(), text);
    }

    #[test]
    fn saved_table_lines_carry_readable_components() {
        let family = build_cross_deformation(1).unwrap();
        let text = family.save_text(Window::Coords).unwrap();
        assert!(text.contains("(0,0) | e1, e2, e3 -> e4\n"));
        assert!(text.contains("(0,1) | e1, e2, e3 -> -e2\n"));
        assert!(text.contains("(1,0) | e1 -> e3\n"));
    }

    #[test]
    fn parse_rejects_malformed_tables() {
        let reject = |text: &str| {
            assert!(matches!(
                SavedFamily::parse(text),
                Err(Error::FileFormat(_, _))
            ));
        };
        reject("not a table\n");
        reject("nambu deformation table v1\nfamily: x\n");
        let family = build_cross_deformation(1).unwrap();
        let good = family.save_text(Window::Coords).unwrap();
        reject(&good.replace("(0,0) | e1, e2, e3 -> e4", "(0,0,0) | e1, e2, e3 -> e4"));
        reject(&good.replace("(0,0) | e1, e2, e3 -> e4", "(9,0) | e1, e2, e3 -> e4"));
        reject(&good.replace("(0,0) | e1, e2, e3 -> e4", "(0,0) e1, e2, e3 -> e4"));
        reject(&good.replace("end\n", ""));
        reject(&(good + "trailing\n"));
    }

    #[test]
    fn tabulation_rejects_a_window_from_the_wrong_carrier() {
        let family = build_cross_deformation(1).unwrap();
        assert!(matches!(
            family.tabulate(Window::Generators { lo: 0, hi: 1 }),
            Err(Error::CarrierMismatch(_))
        ));
    }

    #[test]
    fn component_queries_reject_out_of_range_indices() {
        let family = build_cross_deformation(1).unwrap();
        assert!(family
            .alpha_component(&MultiIndex::new(vec![2, 0]), &e(1))
            .is_err());
        assert!(family.alpha_component(&idx1(0), &e(1)).is_err());
    }

    #[test]
    fn beta_matches_alpha_for_the_built_in_families() {
        let family = build_cross_deformation(2).unwrap();
        for idx in MultiIndex::all_up_to(2, 2) {
            for x in cross4::basis_elements(&Scalar::one()) {
                assert_eq!(
                    family.alpha_component(&idx, &x).unwrap(),
                    family.beta_component(&idx, &x).unwrap()
                );
            }
        }
    }
}
