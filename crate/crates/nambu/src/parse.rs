//! Parsers for the small textual grammars the command line accepts.
//!
//! Everything here is plain string handling that ends in library types;
//! failures carry the offending fragment so the command line can surface
//! them as usage errors.

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Poly};
use crate::scalar::Scalar;

/// Signed integer range `a..b` (inclusive on both ends).
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("range '{}' is not of the form a..b", s)))?;
    let lo: i64 = lo
        .parse()
        .map_err(|_| Error::Parse(format!("bad range bound '{}'", lo)))?;
    let hi: i64 = hi
        .parse()
        .map_err(|_| Error::Parse(format!("bad range bound '{}'", hi)))?;
    if lo > hi {
        return Err(Error::Parse(format!("range {}..{} is empty", lo, hi)));
    }
    Ok((lo, hi))
}

/// Rotation twist: four exact points on the unit circle, or a truncation
/// order for the series form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaSpec {
    Exact {
        c1: Scalar,
        s1: Scalar,
        c2: Scalar,
        s2: Scalar,
    },
    Series {
        order: u32,
    },
}

pub fn parse_theta(s: &str) -> Result<ThetaSpec> {
    if let Some(rest) = s.strip_prefix("exact:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "theta spec '{}' needs exactly four values c1,s1,c2,s2",
                s
            )));
        }
        let mut vals = parts.iter().map(|p| p.trim().parse::<Scalar>());
        Ok(ThetaSpec::Exact {
            c1: vals.next().unwrap()?,
            s1: vals.next().unwrap()?,
            c2: vals.next().unwrap()?,
            s2: vals.next().unwrap()?,
        })
    } else if let Some(rest) = s.strip_prefix("series:") {
        let order: u32 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad series order '{}'", rest)))?;
        Ok(ThetaSpec::Series { order })
    } else {
        Err(Error::Parse(format!(
            "theta spec '{}' must start with 'exact:' or 'series:'",
            s
        )))
    }
}

/// Scaling twist: an invertible scalar, or a truncation order for the
/// series form `q = 1 + t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSpec {
    Value(Scalar),
    Series { order: u32 },
}

pub fn parse_q(s: &str) -> Result<QSpec> {
    if let Some(rest) = s.strip_prefix("series:") {
        let order: u32 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad series order '{}'", rest)))?;
        Ok(QSpec::Series { order })
    } else {
        Ok(QSpec::Value(s.parse::<Scalar>()?))
    }
}

/// Substitution twist `k1,k2,k3,k4[,p1=POLY][,p2=POLY]`; omitted parts
/// default to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSpec {
    pub k: [Scalar; 3],
    pub k4: Scalar,
    pub p1: MultiPoly,
    pub p2: MultiPoly,
}

pub fn parse_gamma(s: &str) -> Result<GammaSpec> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() < 4 {
        return Err(Error::Parse(format!(
            "gamma spec '{}' needs at least k1,k2,k3,k4",
            s
        )));
    }
    let k1 = parts[0].trim().parse::<Scalar>()?;
    let k2 = parts[1].trim().parse::<Scalar>()?;
    let k3 = parts[2].trim().parse::<Scalar>()?;
    let k4 = parts[3].trim().parse::<Scalar>()?;
    let mut p1 = Poly::zero(3);
    let mut p2 = Poly::zero(3);
    for extra in &parts[4..] {
        let extra = extra.trim();
        if let Some(body) = extra.strip_prefix("p1=") {
            p1 = parse_poly3(body)?;
        } else if let Some(body) = extra.strip_prefix("p2=") {
            p2 = parse_poly3(body)?;
        } else {
            return Err(Error::Parse(format!(
                "unexpected gamma component '{}' (only p1=... and p2=... may follow k4)",
                extra
            )));
        }
    }
    Ok(GammaSpec {
        k: [k1, k2, k3],
        k4,
        p1,
        p2,
    })
}

/// A polynomial in `x1, x2, x3` with scalar coefficients, e.g.
/// `x2^2 + 3*x2*x3 - 1/2*x3`. Composite scalars go in parentheses:
/// `(1+2i)*x2`. Exponents are nonnegative integers.
pub fn parse_poly3(s: &str) -> Result<MultiPoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".to_string()));
    }

    let mut poly = Poly::zero(3);
    for (sign, term) in split_signed_terms(&compact)? {
        let (coef, exps) = parse_term(term)?;
        let coef = if sign < 0 { -&coef } else { coef };
        poly.add_term(exps.to_vec(), coef);
    }
    Ok(poly)
}

/// Split at top-level `+`/`-`, respecting parentheses, into signed chunks.
fn split_signed_terms(s: &str) -> Result<Vec<(i32, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut sign = 1i32;
    for (pos, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| {
                    Error::Parse(format!("unbalanced ')' in polynomial '{}'", s))
                })?;
            }
            '+' | '-' if depth == 0 => {
                if pos > start {
                    out.push((sign, &s[start..pos]));
                } else if !(pos == 0 && ch == '-') {
                    return Err(Error::Parse(format!(
                        "empty term in polynomial '{}'",
                        s
                    )));
                }
                sign = if ch == '-' { -1 } else { 1 };
                start = pos + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced '(' in polynomial '{}'", s)));
    }
    if start >= s.len() {
        return Err(Error::Parse(format!("trailing sign in polynomial '{}'", s)));
    }
    out.push((sign, &s[start..]));
    Ok(out)
}

/// One product of factors: scalars, parenthesized scalars, and variable
/// powers `x1`, `x2^3`, joined by `*`.
fn parse_term(term: &str) -> Result<(Scalar, [i32; 3])> {
    let mut coef = Scalar::one();
    let mut exps = [0i32; 3];
    for factor in split_factors(term) {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in term '{}'", term)));
        }
        if let Some(inner) = factor.strip_prefix('(') {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced '(' in '{}'", factor)))?;
            coef = &coef * &inner.parse::<Scalar>()?;
        } else if let Some(rest) = factor.strip_prefix('x') {
            let (var, exp) = match rest.split_once('^') {
                Some((v, e)) => {
                    let exp: u32 = e.parse().map_err(|_| {
                        Error::Parse(format!("bad exponent '{}' in '{}'", e, factor))
                    })?;
                    (v, exp)
                }
                None => (rest, 1),
            };
            let var: usize = var
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable '{}'", factor)))?;
            if !(1..=3).contains(&var) {
                return Err(Error::Parse(format!(
                    "variable '{}' is out of range (x1, x2, x3)",
                    factor
                )));
            }
            exps[var - 1] += exp as i32;
        } else {
            coef = &coef * &factor.parse::<Scalar>()?;
        }
    }
    Ok((coef, exps))
}

/// Split a term at top-level `*`, respecting parentheses.
fn split_factors(term: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (pos, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '*' if depth == 0 => {
                out.push(&term[start..pos]);
                start = pos + 1;
            }
            _ => {}
        }
    }
    out.push(&term[start..]);
    out
}
