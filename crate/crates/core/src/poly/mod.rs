//! Dense integer polynomials in one and two variables, and the exact algebra on them.

mod arith;
mod bipoly;
mod gcd;
mod intpoly;
mod kronecker;
pub mod modp;
mod resultant;
mod transform;

pub use arith::{cyclotomic, divisors, euler_phi, moebius};
pub use bipoly::BiPoly;
pub use gcd::{
    gcd, gcd_modular, gcd_subresultant, is_squarefree, squarefree_decomposition, squarefree_part,
};
pub use intpoly::IntPoly;
pub use num_rational::BigRational;
pub use resultant::{resultant, resultant_prs, resultant_univariate};
pub use transform::{root_power_transform, root_scale_transform};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("degenerate resultant: {0}")]
    Degenerate(String),
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
