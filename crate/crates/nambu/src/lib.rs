pub mod algebra;
pub mod cli;
pub mod deformation;
pub mod element;
pub mod error;
pub mod models;
pub mod parse;
pub mod poly;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod trig;

pub use algebra::{
    check_hom_nambu_identity, check_morphism, check_multiplicative, check_skew_symmetry, Algebra,
    BracketKind, Carrier, LinearMap, Matrix4,
};
pub use deformation::{
    build_cross_deformation, build_jacobian_deformation, build_qvw_deformation,
    verify_deformation, DeformationFamily, DeformationReport, MultiIndex, OrderedResidual,
    SavedFamily, Window,
};
pub use element::{BasisKey, Element, GenKind};
pub use error::{Error, Result};
pub use poly::{MultiPoly, Poly};
pub use report::{CheckReport, Violation};
pub use ring::Ring;
pub use scalar::Scalar;
pub use series::TruncSeries;
pub use trig::{trig_reduce, TrigRingElem};

// The guide chapters double as doc-tests, so every snippet in the book
// compiles and runs against the current API. One module per chapter keeps
// failures attributable.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/checkers.md")]
    mod checkers {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/twisting.md")]
    mod twisting {}
    #[doc = include_str!("../../../book/src/counterexamples.md")]
    mod counterexamples {}
    #[doc = include_str!("../../../book/src/deformations.md")]
    mod deformations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
