//! External rays in the parameter plane of `z^n + c`: tracing, landing-point
//! extrapolation, and matching against exact candidate polynomials.

pub mod angle;
pub mod complex;
pub mod landing;
pub mod roots;
pub mod trace;

pub use angle::{angle_orbit, Angle, AngleOrbit};
pub use complex::Complex;
pub use landing::{
    default_candidates, land, land_and_match, match_landing, Landing, LandingConfig, LandingReport,
};
pub use roots::{complex_roots, polynomial_roots};
pub use trace::{trace_param_ray, trace_with, RayPath, RayPoint, TraceConfig};

use unicrit_core::dynamics::DynError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RayError {
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("newton continuation diverged near potential {potential:e}")]
    NewtonDivergence { potential: f64 },
    #[error("{bits}-bit precision exhausted near potential {potential:e}")]
    PrecisionExhausted { bits: usize, potential: f64 },
    #[error("{what}: no convergence after {iterations} iterations")]
    NonConvergence { what: String, iterations: usize },
    #[error("ambiguous landing: distance {distance:e}, margin {margin:.3} below {required}")]
    Ambiguous {
        distance: f64,
        margin: f64,
        required: f64,
    },
    #[error("no candidate root within {tolerance:e} (closest at {distance:e})")]
    NoCandidate { distance: f64, tolerance: f64 },
    #[error(transparent)]
    Dyn(#[from] DynError),
}
