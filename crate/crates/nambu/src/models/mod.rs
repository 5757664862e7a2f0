//! The built-in model algebras and their twisting-map families.

pub mod cross4;
pub mod jacobian3;
pub mod vw;

use std::str::FromStr;

use crate::element::Element;
use crate::error::Error;
use crate::ring::Ring;

/// String identifiers accepted by the CLI and the registry.
pub const MODEL_IDS: [&str; 3] = ["cross4", "jacobian3", "vw"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelId {
    Cross4,
    Jacobian3,
    Vw,
}

impl ModelId {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Cross4 => "cross4",
            ModelId::Jacobian3 => "jacobian3",
            ModelId::Vw => "vw",
        }
    }

    /// One-line summary of carrier and accepted parameters, for `list-models`.
    pub fn describe(self) -> &'static str {
        match self {
            ModelId::Cross4 => {
                "ternary cross product on span{e1..e4}; twist: --theta exact:c1,s1,c2,s2 | series:N"
            }
            ModelId::Jacobian3 => {
                "Jacobian determinant bracket on K[x1,x2,x3]; twist: --gamma k1,k2,k3,k4[,p1=..][,p2=..]"
            }
            ModelId::Vw => {
                "Virasoro-Witt bracket on span{Q_n,R_n}; params: --z (default 2i), --q scalar | series:N, --range a..b"
            }
        }
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "cross4" => Ok(ModelId::Cross4),
            "jacobian3" => Ok(ModelId::Jacobian3),
            "vw" => Ok(ModelId::Vw),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }
}

/// Every ordered triple from a basis slice, in mixed-radix order.
pub fn all_triples<R: Ring>(basis: &[Element<R>]) -> impl Iterator<Item = [Element<R>; 3]> + '_ {
    let n = basis.len();
    (0..n.pow(3)).map(move |idx| {
        let mut i = idx;
        std::array::from_fn(|_| {
            let el = basis[i % n].clone();
            i /= n;
            el
        })
    })
}

/// Every ordered 5-tuple from a basis slice, in mixed-radix order.
pub fn all_tuples5<R: Ring>(basis: &[Element<R>]) -> impl Iterator<Item = [Element<R>; 5]> + '_ {
    let n = basis.len();
    (0..n.pow(5)).map(move |idx| {
        let mut i = idx;
        std::array::from_fn(|_| {
            let el = basis[i % n].clone();
            i /= n;
            el
        })
    })
}
