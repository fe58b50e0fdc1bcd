//! Polynomial families attached to the unicritical maps `z^n + c`.
//!
//! Three normal forms are used: `z^n + c`, `(w^n + b)/n`, and `chat*x^n + 1`, related by
//! `chat = c^(n-1)`, `bhat = n^n chat` and `bhat = b^(n-1)`.

mod iterate;
mod memo;
mod parabolic;
mod params;

pub use iterate::{
    critical_orbit_poly, dynatomic, iterate_poly_gb, periodicity_poly, unicritical_iterate,
    CriticalOrbitPoly, IteratePair,
};
pub use parabolic::{fixed_point_parabolic, multiplier_resultant, parabolic_resultant};
pub use params::{
    coord_transform, gleason_poly, misiurewicz_poly, misiurewicz_raw, parabolic_param_poly,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{IntPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error("degree cap exceeded: {what} needs degree {degree}, cap is {cap}")]
    DegreeCap { what: String, degree: u64, cap: u64 },
    #[error("elimination cap exceeded: {what} has {size} periodic points, cap is {cap}")]
    EliminationCap { what: String, size: u64, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl DynError {
    /// True for resource-guard errors, as opposed to bad input or internal failures.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            DynError::DegreeCap { .. } | DynError::EliminationCap { .. }
        )
    }
}

/// Resource guards for the constructions in this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest allowed `n^k` for iterates of the map.
    pub degree_cap: u64,
    /// Largest allowed number of exact-period points fed to an elimination.
    pub elimination_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            degree_cap: 4096,
            elimination_cap: 250,
        }
    }
}

impl Limits {
    pub(crate) fn check_degree(
        &self,
        what: impl Into<String>,
        n: u32,
        k: u32,
    ) -> Result<(), DynError> {
        let degree = (n as u64).checked_pow(k).unwrap_or(u64::MAX);
        if degree > self.degree_cap {
            return Err(DynError::DegreeCap {
                what: what.into(),
                degree,
                cap: self.degree_cap,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    C,
    Chat,
    B,
    Bhat,
}

impl Coordinate {
    pub fn var(self) -> &'static str {
        match self {
            Coordinate::C => "c",
            Coordinate::Chat => "chat",
            Coordinate::B => "b",
            Coordinate::Bhat => "bhat",
        }
    }

    pub const ALL: [Coordinate; 4] = [
        Coordinate::C,
        Coordinate::Chat,
        Coordinate::B,
        Coordinate::Bhat,
    ];
}

impl std::fmt::Display for Coordinate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.var())
    }
}

impl std::str::FromStr for Coordinate {
    type Err = DynError;
    fn from_str(s: &str) -> Result<Self, DynError> {
        match s {
            "c" => Ok(Coordinate::C),
            "chat" => Ok(Coordinate::Chat),
            "b" => Ok(Coordinate::B),
            "bhat" => Ok(Coordinate::Bhat),
            _ => Err(DynError::InvalidArgument(format!(
                "unknown coordinate {s:?}"
            ))),
        }
    }
}

/// Normal form of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalForm {
    /// `z^n + c`
    Unicritical,
    /// `(w^n + b)/n`
    Normalized,
    /// `chat*x^n + 1`, the critical-value normalization
    CriticalValue,
}

impl NormalForm {
    /// (dynamical variable, parameter) names.
    pub fn vars(self) -> (&'static str, &'static str) {
        match self {
            NormalForm::Unicritical => ("z", "c"),
            NormalForm::Normalized => ("w", "b"),
            NormalForm::CriticalValue => ("x", "chat"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MapFamily {
    pub n: u32,
    pub form: NormalForm,
}

impl MapFamily {
    pub fn new(n: u32, form: NormalForm) -> Result<Self, DynError> {
        if n < 2 {
            return Err(DynError::InvalidArgument(format!(
                "degree n = {n} must be at least 2"
            )));
        }
        Ok(MapFamily { n, form })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Gleason { h: u32 },
    Misiurewicz { t: u32, h: u32, tau: u32 },
    Parabolic { h: u32, m: u32 },
    FixedPoint { m: u32 },
    Iterate { k: u32 },
    Other,
}

/// A polynomial in one of the parameter coordinates, primitive with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPolynomial {
    #[serde(flatten)]
    pub poly: IntPoly,
    pub coordinate: Coordinate,
    pub n: u32,
    pub provenance: Provenance,
}

impl ParamPolynomial {
    pub fn new(poly: IntPoly, coordinate: Coordinate, n: u32, provenance: Provenance) -> Self {
        ParamPolynomial {
            poly: poly
                .primitive_part()
                .with_positive_lead()
                .with_var(coordinate.var()),
            coordinate,
            n,
            provenance,
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }
}

pub(crate) fn check_n(n: u32) -> Result<(), DynError> {
    if n < 2 {
        return Err(DynError::InvalidArgument(format!(
            "degree n = {n} must be at least 2"
        )));
    }
    Ok(())
}

pub(crate) fn check_positive(name: &str, v: u32) -> Result<(), DynError> {
    if v == 0 {
        return Err(DynError::InvalidArgument(format!(
            "{name} must be at least 1"
        )));
    }
    Ok(())
}
