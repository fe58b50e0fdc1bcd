//! Arithmetic in `Q[x]/(m(x))` and integrality certificates for its elements.

mod orbits;

pub use orbits::{
    congruence_certificates, dynamical_unit_check, periodic_orbit_in_field,
    periodic_orbit_normalized, prime_to_n_test, CheckOutcome, CongruenceReport, MapParameter,
    OrbitCongruences, OrbitUnits, PeriodicOrbit, PrimeToN, UnitReport,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::DynError;
use crate::factor::is_irreducible;
use crate::poly::{resultant, squarefree_part, BiPoly, IntPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field modulus {0} is not irreducible over Q")]
    Reducible(String),
    #[error("field modulus must have degree at least 1")]
    Constant,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("coordinate vector has length {got}, field degree is {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("division by zero in a number field")]
    DivisionByZero,
    #[error(
        "parabolic collision: period-{h} points of {form} at {param} are not distinct (n = {n})"
    )]
    ParabolicCollision {
        n: u32,
        h: u32,
        form: String,
        param: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Polynomial with rational coefficients, ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPoly {
    pub var: String,
    #[serde(with = "crate::wire::rational_vec")]
    pub coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(var: impl Into<String>, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly {
            var: var.into(),
            coeffs,
        }
    }

    pub fn from_int(p: &IntPoly) -> Self {
        Self::new(
            p.var(),
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The same polynomial, if every coefficient is an integer.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        self.is_integral().then(|| {
            IntPoly::new(
                self.var.clone(),
                self.coeffs.iter().map(|c| c.to_integer()).collect(),
            )
        })
    }

    /// Scaled to leading coefficient one.
    pub fn monic(&self) -> Self {
        let Some(lc) = self.coeffs.last() else {
            return self.clone();
        };
        let lc = lc.clone();
        Self::new(
            self.var.clone(),
            self.coeffs.iter().map(|c| c / &lc).collect(),
        )
    }

    /// Monic scaling of an integer polynomial.
    pub fn monic_from_int(p: &IntPoly) -> Self {
        Self::from_int(p).monic()
    }

    /// Product of the roots, `(-1)^d a_0 / a_d`.
    pub fn root_product(&self) -> BigRational {
        let d = self.degree().unwrap_or(0);
        let Some(lc) = self.coeffs.last() else {
            return BigRational::zero();
        };
        let v = self.coeff(0) / lc;
        if d % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                if a.is_integer() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "{}{}", if show_coeff { "*" } else { "" }, self.var)?,
                _ => write!(f, "{}{}^{}", if show_coeff { "*" } else { "" }, self.var, i)?,
            }
        }
        Ok(())
    }
}

/// `Q[x]/(m)` for an irreducible integer polynomial `m`, kept primitive with positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    modulus: IntPoly,
}

impl NumberField {
    /// Checks irreducibility by factoring.
    pub fn new(modulus: &IntPoly) -> Result<Arc<Self>, FieldError> {
        let m = modulus.primitive_part();
        match m.degree() {
            None | Some(0) => return Err(FieldError::Constant),
            _ => {}
        }
        if !is_irreducible(&m) {
            return Err(FieldError::Reducible(m.to_string()));
        }
        Ok(Arc::new(NumberField { modulus: m }))
    }

    /// For a modulus already known to be irreducible, e.g. a factor from a factorization.
    pub fn from_irreducible(modulus: &IntPoly) -> Arc<Self> {
        let m = modulus.primitive_part();
        debug_assert!(m.degree().unwrap_or(0) >= 1);
        Arc::new(NumberField { modulus: m })
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// Reduces a rational coefficient vector of any length modulo the modulus.
    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        let m = self.modulus.coeffs();
        let lc = BigRational::from_integer(m[d].clone());
        while v.len() > d {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let t = top / &lc;
            let k = v.len() - d;
            for (i, mi) in m.iter().enumerate().take(d) {
                if !mi.is_zero() {
                    v[k + i] -= &t * BigRational::from_integer(mi.clone());
                }
            }
        }
        v.resize(d, BigRational::zero());
        v
    }
}

/// Element of a number field in the power basis.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    modulus: IntPoly,
    #[serde(with = "crate::wire::rational_vec")]
    coords: Vec<BigRational>,
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementRepr {
            modulus: self.field.modulus.clone(),
            coords: self.coords.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        let field = NumberField::new(&r.modulus).map_err(serde::de::Error::custom)?;
        FieldElement::new(&field, r.coords).map_err(serde::de::Error::custom)
    }
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self, FieldError> {
        if coords.len() != field.degree() {
            return Err(FieldError::BadLength {
                got: coords.len(),
                expected: field.degree(),
            });
        }
        Ok(FieldElement {
            field: field.clone(),
            coords,
        })
    }

    pub fn from_rational(field: &Arc<NumberField>, r: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = r;
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_int(field: &Arc<NumberField>, k: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(k.into()))
    }

    /// The class of `x`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &IntPoly::x("x"))
    }

    /// The class of an integer polynomial in the generator.
    pub fn from_poly(field: &Arc<NumberField>, p: &IntPoly) -> Self {
        let v = p
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        FieldElement {
            field: field.clone(),
            coords: field.reduce(v),
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coords[0].clone())
    }

    fn same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "{}",
            FieldError::FieldMismatch
        );
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_int(&self.field, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // Cayley-Hamilton: chi(e) = 0 with chi(0) != 0
        let chi = self.charpoly();
        let d = chi.degree().unwrap();
        let mut acc = Self::from_int(&self.field, 0);
        for i in (1..=d).rev() {
            acc = &(&acc * self) + &Self::from_rational(&self.field, chi.coeff(i));
        }
        Ok(acc.scale(&(-chi.coeff(0)).recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self * &other.inverse()?)
    }

    /// Numerator polynomial and positive common denominator: `self = num(x) / den`.
    fn cleared(&self) -> (IntPoly, BigInt) {
        let den = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .coords
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        (IntPoly::new("x", num), den)
    }

    /// Characteristic polynomial of multiplication by `self`, monic of degree `d`, in `y`.
    pub fn charpoly(&self) -> RationalPoly {
        let d = self.field.degree();
        if let Some(r) = self.as_rational() {
            let lin = RationalPoly::new("y", vec![-r, BigRational::one()]);
            let mut acc = RationalPoly::new("y", vec![BigRational::one()]);
            for _ in 0..d {
                acc = rat_mul(&acc, &lin);
            }
            return acc;
        }
        let r = self.cleared_resultant();
        RationalPoly::monic_from_int(&r)
    }

    /// `Res_x(m(x), den*y - num(x))`, an integer multiple of the characteristic polynomial.
    fn cleared_resultant(&self) -> IntPoly {
        let (num, den) = self.cleared();
        let m = BiPoly::from_outer(&self.field.modulus.clone().with_var("x"), "y");
        let mut rows: Vec<IntPoly> = num
            .coeffs()
            .iter()
            .map(|c| IntPoly::constant("y", -c))
            .collect();
        rows[0] = &rows[0] + &IntPoly::monomial("y", den, 1);
        let g = BiPoly::new("x", "y", rows);
        resultant(&m, &g, "x").expect("non-constant element has a nondegenerate resultant")
    }

    /// Minimal polynomial over Q, monic, in `y`.
    pub fn minimal_polynomial(&self) -> RationalPoly {
        if let Some(r) = self.as_rational() {
            return RationalPoly::new("y", vec![-r, BigRational::one()]);
        }
        let r = squarefree_part(&self.cleared_resultant());
        RationalPoly::monic_from_int(&r.with_var("y"))
    }

    /// Field norm and trace: determinant and trace of multiplication by `self`.
    pub fn norm_and_trace(&self) -> (BigRational, BigRational) {
        let chi = self.charpoly();
        let d = self.field.degree();
        let norm = if d % 2 == 1 {
            -chi.coeff(0)
        } else {
            chi.coeff(0)
        };
        (norm, -chi.coeff(d - 1))
    }

    pub fn norm(&self) -> BigRational {
        self.norm_and_trace().0
    }

    pub fn trace(&self) -> BigRational {
        self.norm_and_trace().1
    }

    pub fn is_algebraic_integer(&self, context: impl Into<String>) -> IntegralityCertificate {
        IntegralityCertificate::from_minpoly(self.minimal_polynomial(), context.into())
    }

    pub fn is_unit(&self) -> bool {
        self.is_algebraic_integer("").is_unit
    }
}

fn rat_mul(a: &RationalPoly, b: &RationalPoly) -> RationalPoly {
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return RationalPoly::new(a.var.clone(), vec![]);
    }
    let mut out = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    RationalPoly::new(a.var.clone(), out)
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.same_field(o);
        FieldElement {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.same_field(o);
        FieldElement {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.same_field(o);
        let d = self.coords.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        FieldElement {
            field: self.field.clone(),
            coords: self.field.reduce(prod),
        }
    }
}

/// Evidence for or against membership in the ring of algebraic integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralityCertificate {
    pub element_minpoly: RationalPoly,
    pub is_integer: bool,
    /// Norm from `Q(e)` to `Q`: the product of the roots of the minimal polynomial.
    #[serde(with = "crate::wire::rational_string")]
    pub norm: BigRational,
    pub is_unit: bool,
    pub context: String,
}

impl IntegralityCertificate {
    pub fn from_minpoly(minpoly: RationalPoly, context: String) -> Self {
        let is_integer = minpoly.is_integral();
        let norm = minpoly.root_product();
        let is_unit = is_integer && norm.abs().is_one();
        IntegralityCertificate {
            element_minpoly: minpoly,
            is_integer,
            norm,
            is_unit,
            context,
        }
    }

    /// Certificate for a rational number.
    pub fn for_rational(r: &BigRational, context: impl Into<String>) -> Self {
        Self::from_minpoly(
            RationalPoly::new("y", vec![-r.clone(), BigRational::one()]),
            context.into(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn rp(v: &[(i64, i64)]) -> RationalPoly {
        RationalPoly::new("y", v.iter().map(|&(a, b)| q(a, b)).collect())
    }

    #[test]
    fn field_construction() {
        assert!(NumberField::new(&p("x^2 - 1")).is_err());
        assert!(NumberField::new(&p("5")).is_err());
        let k = NumberField::new(&p("x^2 + 1")).unwrap();
        assert_eq!(k.degree(), 2);
        let i = FieldElement::generator(&k);
        assert_eq!(&i * &i, FieldElement::from_int(&k, -1));
        assert!(FieldElement::new(&k, vec![q(1, 1)]).is_err());
    }

    #[test]
    fn minimal_polynomials() {
        let k = NumberField::new(&p("x^2 + 1")).unwrap();
        let x = FieldElement::generator(&k);
        assert_eq!(x.minimal_polynomial(), rp(&[(1, 1), (0, 1), (1, 1)]));
        let e = &x + &FieldElement::from_int(&k, 1);
        assert_eq!(e.minimal_polynomial(), rp(&[(2, 1), (-2, 1), (1, 1)]));
        let five = FieldElement::from_int(&k, 5);
        assert_eq!(five.minimal_polynomial(), rp(&[(-5, 1), (1, 1)]));
        assert_eq!(five.charpoly(), rp(&[(25, 1), (-10, 1), (1, 1)]));
    }

    #[test]
    fn integrality() {
        let k = NumberField::new(&p("x^2 + 1")).unwrap();
        let half = FieldElement::new(&k, vec![q(1, 2), q(1, 2)]).unwrap();
        let c = half.is_algebraic_integer("(1+i)/2");
        assert!(!c.is_integer);
        assert_eq!(c.element_minpoly, rp(&[(1, 2), (-1, 1), (1, 1)]));
        let k7 = NumberField::new(&p("x^2 + x + 7")).unwrap();
        let c = FieldElement::generator(&k7).is_algebraic_integer("root");
        assert!(c.is_integer && !c.is_unit);
        assert_eq!(c.norm, q(7, 1));
        let three = IntegralityCertificate::for_rational(&q(3, 1), "three");
        assert!(three.is_integer);
        assert_eq!(three.norm, q(3, 1));
    }

    #[test]
    fn norm_trace_examples() {
        let k7 = NumberField::new(&p("x^2 + x + 7")).unwrap();
        let x = FieldElement::generator(&k7);
        assert_eq!(x.norm_and_trace(), (q(7, 1), q(-1, 1)));
        let one = FieldElement::from_int(&k7, 1);
        assert_eq!(one.norm_and_trace(), (q(1, 1), q(2, 1)));
    }

    #[test]
    fn units() {
        let k = NumberField::new(&p("x^2 - x - 1")).unwrap();
        assert!(FieldElement::generator(&k).is_unit());
        assert!(!FieldElement::from_int(&k, 2).is_unit());
        let k = NumberField::new(&p("x^2 + 1")).unwrap();
        assert!(FieldElement::generator(&k).is_unit());
    }

    #[test]
    fn inverse_and_nonmonic_modulus() {
        let k = NumberField::new(&p("3x^3 - x + 5")).unwrap();
        let x = FieldElement::generator(&k);
        let e = &(&x * &x) + &FieldElement::from_int(&k, 2);
        let inv = e.inverse().unwrap();
        assert!((&e * &inv).is_one());
        // 3x is a root of y^3 - 3y + 45
        let three_x = x.scale(&q(3, 1));
        assert_eq!(
            three_x.minimal_polynomial(),
            rp(&[(45, 1), (-3, 1), (0, 1), (1, 1)])
        );
        assert!(FieldElement::from_int(&k, 0).inverse().is_err());
    }

    #[test]
    fn serde_shapes() {
        let k7 = NumberField::new(&p("x^2 + x + 7")).unwrap();
        let c = FieldElement::generator(&k7).is_algebraic_integer("root");
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["norm"], "7");
        assert_eq!(v["is_integer"], true);
        assert_eq!(v["element_minpoly"]["coeffs"][0], "7");
        let back: IntegralityCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
        let e = FieldElement::new(&k7, vec![q(1, 2), q(-3, 1)]).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<FieldElement>(&s).unwrap(), e);
    }
}
