use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{FieldElement, FieldError, IntegralityCertificate, NumberField, RationalPoly};
use crate::dynamics::{dynatomic, Limits, NormalForm};
use crate::factor::factor;
use crate::poly::{is_squarefree, BiPoly, IntPoly};

/// A parameter value for one of the two normal forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapParameter {
    /// `z^n + c`
    C(BigRational),
    /// `(w^n + b)/n`
    B(BigRational),
}

#[derive(Serialize, Deserialize)]
struct ParameterRepr {
    form: String,
    #[serde(with = "crate::wire::rational_string")]
    value: BigRational,
}

impl Serialize for MapParameter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (form, value) = match self {
            MapParameter::C(v) => ("c", v),
            MapParameter::B(v) => ("b", v),
        };
        ParameterRepr {
            form: form.into(),
            value: value.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MapParameter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ParameterRepr::deserialize(d)?;
        match r.form.as_str() {
            "c" => Ok(MapParameter::C(r.value)),
            "b" => Ok(MapParameter::B(r.value)),
            other => Err(serde::de::Error::custom(format!("unknown form {other:?}"))),
        }
    }
}

impl MapParameter {
    fn form(&self) -> NormalForm {
        match self {
            MapParameter::C(_) => NormalForm::Unicritical,
            MapParameter::B(_) => NormalForm::Normalized,
        }
    }

    fn value(&self) -> &BigRational {
        match self {
            MapParameter::C(v) | MapParameter::B(v) => v,
        }
    }

    /// `bhat = b^(n-1) = n^n c^(n-1)`, always rational.
    fn bhat(&self, n: u32) -> BigRational {
        match self {
            MapParameter::C(c) => {
                BigRational::from_integer(BigInt::from(n).pow(n)) * pow_q(c, n - 1)
            }
            MapParameter::B(b) => pow_q(b, n - 1),
        }
    }

    /// `chat = c^(n-1) = bhat / n^n`.
    fn chat(&self, n: u32) -> BigRational {
        self.bhat(n) / BigRational::from_integer(BigInt::from(n).pow(n))
    }

    /// `b` itself when it is rational: always in the normalized form, and for `n = 2`.
    fn rational_b(&self, n: u32) -> Option<BigRational> {
        match self {
            MapParameter::B(b) => Some(b.clone()),
            MapParameter::C(c) if n == 2 => Some(c * BigRational::from_integer(4.into())),
            MapParameter::C(_) => None,
        }
    }
}

fn pow_q(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// One periodic orbit, generated over `Q` by its first point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicOrbit {
    pub n: u32,
    pub parameter: MapParameter,
    pub field: Arc<NumberField>,
    /// `z_1 = x, z_2, ..., z_h` in the field `Q[x]/(modulus)`.
    pub points: Vec<FieldElement>,
    pub multiplier: FieldElement,
}

#[derive(Serialize)]
struct OrbitRepr<'a> {
    n: u32,
    parameter: &'a MapParameter,
    modulus: &'a IntPoly,
    #[serde(serialize_with = "coords_list")]
    points: &'a [FieldElement],
    #[serde(serialize_with = "coords_one")]
    multiplier: &'a FieldElement,
}

fn coords_list<S: serde::Serializer>(v: &&[FieldElement], s: S) -> Result<S::Ok, S::Error> {
    let out: Vec<Vec<String>> = v
        .iter()
        .map(|e| e.coords().iter().map(|c| c.to_string()).collect())
        .collect();
    out.serialize(s)
}

fn coords_one<S: serde::Serializer>(e: &&FieldElement, s: S) -> Result<S::Ok, S::Error> {
    let out: Vec<String> = e.coords().iter().map(|c| c.to_string()).collect();
    out.serialize(s)
}

impl Serialize for PeriodicOrbit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OrbitRepr {
            n: self.n,
            parameter: &self.parameter,
            modulus: self.field.modulus(),
            points: &self.points,
            multiplier: &self.multiplier,
        }
        .serialize(s)
    }
}

/// `Phi_h(param, x)` with denominators cleared.
fn specialized_dynatomic(n: u32, param: &MapParameter, h: u32) -> Result<IntPoly, FieldError> {
    let phi: BiPoly = dynatomic(n, h, param.form(), &Limits::default())?;
    let vals: Vec<BigRational> = phi
        .rows()
        .iter()
        .map(|r| r.eval_rational(param.value()))
        .collect();
    let den = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let coeffs = vals
        .iter()
        .map(|v| (v * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    Ok(IntPoly::new("x", coeffs).primitive_part())
}

fn orbits(n: u32, param: MapParameter, h: u32) -> Result<Vec<PeriodicOrbit>, FieldError> {
    if n < 2 || h == 0 {
        return Err(FieldError::InvalidArgument(format!(
            "need n >= 2 and h >= 1, got n = {n}, h = {h}"
        )));
    }
    let phi = specialized_dynatomic(n, &param, h)?;
    if !is_squarefree(&phi) {
        let (form, v) = match &param {
            MapParameter::C(v) => ("z^n + c", format!("c = {v}")),
            MapParameter::B(v) => ("(w^n + b)/n", format!("b = {v}")),
        };
        return Err(FieldError::ParabolicCollision {
            n,
            h,
            form: form.into(),
            param: v,
        });
    }
    let nq = BigRational::from_integer(n.into());
    let mut out = Vec::new();
    for f in factor(&phi).irreducibles() {
        let field = NumberField::from_irreducible(f);
        let pv = FieldElement::from_rational(&field, param.value().clone());
        let step = |z: &FieldElement| -> FieldElement {
            let y = &z.pow(n) + &pv;
            match param {
                MapParameter::C(_) => y,
                MapParameter::B(_) => y.scale(&nq.recip()),
            }
        };
        let mut points = vec![FieldElement::generator(&field)];
        for _ in 1..h {
            let next = step(points.last().unwrap());
            points.push(next);
        }
        if step(points.last().unwrap()) != points[0] {
            return Err(FieldError::Inconsistent(format!(
                "orbit in Q[x]/({f}) does not close after {h} steps"
            )));
        }
        let mut mu = FieldElement::from_int(&field, 1);
        for z in &points {
            mu = &mu * &z.pow(n - 1);
        }
        if matches!(param, MapParameter::C(_)) {
            mu = mu.scale(&BigRational::from_integer(BigInt::from(n).pow(h)));
        }
        out.push(PeriodicOrbit {
            n,
            parameter: param.clone(),
            field,
            points,
            multiplier: mu,
        });
    }
    Ok(out)
}

/// Period-`h` orbits of `z^n + c`, one per irreducible factor of `Phi_h(c, z)`.
pub fn periodic_orbit_in_field(
    n: u32,
    c: &BigRational,
    h: u32,
) -> Result<Vec<PeriodicOrbit>, FieldError> {
    orbits(n, MapParameter::C(c.clone()), h)
}

/// Period-`h` orbits of `(w^n + b)/n`.
pub fn periodic_orbit_normalized(
    n: u32,
    b: &BigRational,
    h: u32,
) -> Result<Vec<PeriodicOrbit>, FieldError> {
    orbits(n, MapParameter::B(b.clone()), h)
}

/// `(x^n - y^n)/(x - y)`.
fn divided_power(x: &FieldElement, y: &FieldElement, n: u32) -> FieldElement {
    let mut acc = FieldElement::from_int(x.field(), 0);
    for i in 0..n {
        acc = &acc + &(&x.pow(i) * &y.pow(n - 1 - i));
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitUnits {
    pub modulus: IntPoly,
    /// `(z_j^n - z_{j+1}^n)/(z_j - z_{j+1})` for `j = 1..h`, cyclically.
    #[serde(serialize_with = "coords_vec")]
    pub values: Vec<FieldElement>,
    pub product_is_one: bool,
    /// Present when `c` is an integer.
    pub certificates: Vec<IntegralityCertificate>,
}

fn coords_vec<S: serde::Serializer>(v: &[FieldElement], s: S) -> Result<S::Ok, S::Error> {
    coords_list(&v, s)
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitReport {
    pub n: u32,
    #[serde(with = "crate::wire::rational_string")]
    pub c: BigRational,
    pub h: u32,
    pub orbits: Vec<OrbitUnits>,
    pub all_products_one: bool,
    /// `None` when no certificates were produced.
    pub all_units: Option<bool>,
}

/// Checks that the divided differences of `z^n` along each period-`h` orbit multiply to 1,
/// and certifies each of them as a unit when `c` is an integer.
pub fn dynamical_unit_check(n: u32, c: &BigRational, h: u32) -> Result<UnitReport, FieldError> {
    if h < 2 {
        return Err(FieldError::InvalidArgument(
            "the unit identity needs period h >= 2".into(),
        ));
    }
    let certify = c.is_integer();
    let mut out = Vec::new();
    for orbit in periodic_orbit_in_field(n, c, h)? {
        let k = orbit.points.len();
        let values: Vec<FieldElement> = (0..k)
            .map(|j| divided_power(&orbit.points[j], &orbit.points[(j + 1) % k], n))
            .collect();
        let mut prod = FieldElement::from_int(&orbit.field, 1);
        for v in &values {
            prod = &prod * v;
        }
        let certificates = if certify {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    v.is_algebraic_integer(format!(
                        "divided difference {} of orbit in Q[x]/({})",
                        j + 1,
                        orbit.field.modulus()
                    ))
                })
                .collect()
        } else {
            Vec::new()
        };
        out.push(OrbitUnits {
            modulus: orbit.field.modulus().clone(),
            values,
            product_is_one: prod.is_one(),
            certificates,
        });
    }
    let all_products_one = out.iter().all(|o| o.product_is_one);
    let all_units = certify.then(|| out.iter().all(|o| o.certificates.iter().all(|c| c.is_unit)));
    Ok(UnitReport {
        n,
        c: c.clone(),
        h,
        orbits: out,
        all_products_one,
        all_units,
    })
}

/// Result of one integrality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckOutcome {
    Passed { certificate: IntegralityCertificate },
    Failed { certificate: IntegralityCertificate },
    NotApplicable { reason: String },
}

impl CheckOutcome {
    fn from_cert(certificate: IntegralityCertificate) -> Self {
        if certificate.is_integer {
            CheckOutcome::Passed { certificate }
        } else {
            CheckOutcome::Failed { certificate }
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, CheckOutcome::Failed { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, CheckOutcome::Passed { .. })
    }
}

/// Whether each of the point, multiplier, `b` and `bhat` is prime to `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeToN {
    pub point: bool,
    pub multiplier: bool,
    pub b: bool,
    pub bhat: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCongruences {
    pub modulus: IntPoly,
    pub multiplier_minpoly: RationalPoly,
    pub multiplier_is_unit: bool,
    /// `(mu^n - (-b)^((n-1)h)) / n` is integral.
    pub multiplier_power: CheckOutcome,
    /// `mu / n^h` is integral.
    pub multiplier_over_n_power: CheckOutcome,
    /// `(n^h - mu) / b` is integral when `mu` is a unit.
    pub unit_multiplier: CheckOutcome,
    pub prime_to_n: Option<PrimeToN>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub n: u32,
    pub h: u32,
    pub parameter: MapParameter,
    pub orbits: Vec<OrbitCongruences>,
    pub all_pass: bool,
}

/// `gcd(|Norm(e)|, n) = 1` for an algebraic integer `e` given by its monic minimal polynomial.
pub fn prime_to_n_test(minpoly: &IntPoly, n: u32) -> Result<bool, FieldError> {
    if !minpoly.is_monic() {
        return Err(FieldError::InvalidArgument(format!(
            "{minpoly} is not monic; the element is not an algebraic integer"
        )));
    }
    let norm = minpoly.constant_term().abs();
    Ok(norm.gcd(&BigInt::from(n)).is_one())
}

fn element_prime_to_n(e: &FieldElement, n: u32) -> Option<bool> {
    let m = e.minimal_polynomial().to_int_poly()?;
    prime_to_n_test(&m, n).ok()
}

fn rational_prime_to_n(r: &BigRational, n: u32) -> Option<bool> {
    r.is_integer()
        .then(|| r.to_integer().abs().gcd(&BigInt::from(n)).is_one())
}

/// Integrality certificates for the congruences satisfied by multipliers of period-`h`
/// orbits at a rational parameter.
pub fn congruence_certificates(
    n: u32,
    param: &MapParameter,
    h: u32,
) -> Result<CongruenceReport, FieldError> {
    let orbits = orbits(n, param.clone(), h)?;
    let bhat = param.bhat(n);
    let b_integral = bhat.is_integer();
    let chat_integral = param.chat(n).is_integer();
    let nq = BigRational::from_integer(n.into());
    let n_h = BigRational::from_integer(BigInt::from(n).pow(h));
    let mut out = Vec::new();
    for orbit in orbits {
        let field = &orbit.field;
        let mu = &orbit.multiplier;
        let mu_cert = mu.is_algebraic_integer("multiplier");
        let ctx = |what: &str| format!("{what}, orbit in Q[x]/({})", field.modulus());

        let multiplier_power = if b_integral {
            let sign = if ((n - 1) * h) % 2 == 1 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            let rhs = FieldElement::from_rational(field, sign * pow_q(&bhat, h));
            let e = (&mu.pow(n) - &rhs).scale(&nq.recip());
            CheckOutcome::from_cert(e.is_algebraic_integer(ctx("(mu^n - (-b)^((n-1)h))/n")))
        } else {
            CheckOutcome::NotApplicable {
                reason: "b is not an algebraic integer".into(),
            }
        };

        let multiplier_over_n_power = if chat_integral {
            let e = mu.scale(&n_h.recip());
            CheckOutcome::from_cert(e.is_algebraic_integer(ctx("mu/n^h")))
        } else {
            CheckOutcome::NotApplicable {
                reason: "c is not an algebraic integer".into(),
            }
        };

        let unit_multiplier = if !b_integral || bhat.is_zero() {
            CheckOutcome::NotApplicable {
                reason: "b is zero or not an algebraic integer".into(),
            }
        } else if !mu_cert.is_unit {
            CheckOutcome::NotApplicable {
                reason: "multiplier is not a unit".into(),
            }
        } else {
            let diff = &FieldElement::from_rational(field, n_h.clone()) - mu;
            match param.rational_b(n) {
                Some(b) => {
                    let e = diff.scale(&b.recip());
                    CheckOutcome::from_cert(e.is_algebraic_integer(ctx("(n^h - mu)/b")))
                }
                None => {
                    // b = bhat^(1/(n-1)); integrality of x is that of x^(n-1)
                    let e = diff.pow(n - 1).scale(&bhat.recip());
                    CheckOutcome::from_cert(e.is_algebraic_integer(ctx("(n^h - mu)^(n-1)/bhat")))
                }
            }
        };

        let prime_to_n = match (&param, b_integral) {
            (MapParameter::B(b), true) => {
                let point = element_prime_to_n(&orbit.points[0], n);
                let multiplier = element_prime_to_n(mu, n);
                let bp = rational_prime_to_n(b, n);
                let bhp = rational_prime_to_n(&bhat, n);
                match (point, multiplier, bp, bhp) {
                    (Some(point), Some(multiplier), Some(b), Some(bhat)) => Some(PrimeToN {
                        point,
                        multiplier,
                        b,
                        bhat,
                        consistent: point == multiplier && multiplier == b && b == bhat,
                    }),
                    _ => None,
                }
            }
            _ => None,
        };

        out.push(OrbitCongruences {
            modulus: field.modulus().clone(),
            multiplier_minpoly: mu_cert.element_minpoly.clone(),
            multiplier_is_unit: mu_cert.is_unit,
            multiplier_power,
            multiplier_over_n_power,
            unit_multiplier,
            prime_to_n,
        });
    }
    let all_pass = out.iter().all(|o| {
        !o.multiplier_power.is_failure()
            && !o.multiplier_over_n_power.is_failure()
            && !o.unit_multiplier.is_failure()
            && o.prime_to_n.as_ref().is_none_or(|p| p.consistent)
    });
    Ok(CongruenceReport {
        n,
        h,
        parameter: param.clone(),
        orbits: out,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn orbit_examples() {
        let o = periodic_orbit_in_field(2, &q(-2), 2).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].field.modulus(), &p("x^2 + x - 1"));
        assert_eq!(o[0].multiplier, FieldElement::from_int(&o[0].field, -4));
        let z = &o[0].points[0];
        assert_eq!(
            o[0].points[1],
            &(-z) - &FieldElement::from_int(&o[0].field, 1)
        );

        let o = periodic_orbit_in_field(2, &q(0), 1).unwrap();
        let mut roots: Vec<_> = o
            .iter()
            .map(|x| x.points[0].as_rational().unwrap())
            .collect();
        roots.sort();
        assert_eq!(roots, vec![q(0), q(1)]);

        let o = periodic_orbit_in_field(2, &q(-1), 1).unwrap();
        assert_eq!(o[0].field.modulus(), &p("x^2 - x - 1"));
        assert_eq!(o[0].multiplier, o[0].points[0].scale(&q(2)));
    }

    #[test]
    fn collision_is_distinct_error() {
        let quarter = BigRational::new(1.into(), 4.into());
        let e = periodic_orbit_in_field(2, &quarter, 1).unwrap_err();
        assert!(matches!(e, FieldError::ParabolicCollision { .. }));
        let e =
            periodic_orbit_in_field(2, &BigRational::new((-3).into(), 4.into()), 2).unwrap_err();
        assert!(matches!(e, FieldError::ParabolicCollision { .. }));
    }

    #[test]
    fn unit_identity_examples() {
        let r = dynamical_unit_check(2, &q(-2), 2).unwrap();
        assert!(r.all_products_one);
        assert_eq!(r.all_units, Some(true));
        let v = &r.orbits[0].values;
        assert_eq!(v[0].as_rational(), Some(q(-1)));
        let r = dynamical_unit_check(2, &q(-1), 3).unwrap();
        assert!(r.all_products_one && r.all_units == Some(true));
        let r = dynamical_unit_check(2, &q(0), 2).unwrap();
        assert!(r.all_products_one && r.all_units == Some(true));
        assert!(dynamical_unit_check(2, &q(0), 1).is_err());
    }

    #[test]
    fn congruence_examples() {
        let r = congruence_certificates(2, &MapParameter::C(q(-2)), 2).unwrap();
        assert!(r.all_pass);
        let o = &r.orbits[0];
        match &o.multiplier_over_n_power {
            CheckOutcome::Passed { certificate } => assert!(certificate.is_unit),
            other => panic!("{other:?}"),
        }
        // mu = -4 is not a unit
        assert!(matches!(
            o.unit_multiplier,
            CheckOutcome::NotApplicable { .. }
        ));

        let r = congruence_certificates(2, &MapParameter::C(q(-1)), 1).unwrap();
        assert!(r.all_pass);
        match &r.orbits[0].multiplier_over_n_power {
            CheckOutcome::Passed { certificate } => assert!(certificate.is_unit),
            other => panic!("{other:?}"),
        }

        let r = congruence_certificates(2, &MapParameter::C(q(0)), 1).unwrap();
        assert!(r.all_pass);
        assert!(r.orbits[0].multiplier_over_n_power.is_pass());
    }

    #[test]
    fn normalized_form_and_prime_to_n() {
        // b = -4 is c = -1; critically periodic, so nothing is prime to 2
        let r = congruence_certificates(2, &MapParameter::B(q(-4)), 2).unwrap();
        assert!(r.all_pass);
        for o in &r.orbits {
            let ptn = o.prime_to_n.as_ref().unwrap();
            assert!(ptn.consistent);
        }
        let r = congruence_certificates(3, &MapParameter::B(q(1)), 1).unwrap();
        assert!(r.all_pass);
        assert!(r
            .orbits
            .iter()
            .all(|o| o.prime_to_n.as_ref().unwrap().consistent));
    }

    #[test]
    fn prime_to_n_examples() {
        assert!(prime_to_n_test(&p("y^2 + y + 7"), 2).unwrap());
        assert!(prime_to_n_test(&p("y + 1"), 2).unwrap());
        assert!(!prime_to_n_test(&p("y - 2"), 2).unwrap());
        assert!(prime_to_n_test(&p("2y - 1"), 2).is_err());
    }
}
