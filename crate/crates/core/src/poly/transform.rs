use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{resultant, BiPoly, IntPoly, PolyError};

/// Polynomial whose roots are the k-th powers of the roots of `p`, with multiplicity:
/// `Res_y(p(y), x - y^k)`, primitive with positive leading coefficient.
pub fn root_power_transform(p: &IntPoly, k: u32) -> IntPoly {
    assert!(!p.is_zero(), "root power transform of zero");
    assert!(k >= 1);
    let var = p.var().to_string();
    if k == 1 || p.is_constant() {
        return p.primitive_part().with_positive_lead();
    }
    // Roots at zero stay at zero; strip them so the resultant has a clean shape.
    let z = p.trailing_zeros();
    let q = p.shift_down(z);
    if q.is_constant() {
        return IntPoly::x(var).pow(z as u32);
    }
    let tmp = if var == "_t" { "_u" } else { "_t" };
    let a = BiPoly::from_outer(&q.clone().with_var(tmp), var.clone());
    let mut rows = vec![IntPoly::zero(var.clone()); k as usize + 1];
    rows[0] = IntPoly::x(var.clone());
    rows[k as usize] = IntPoly::constant(var.clone(), -BigInt::one());
    let b = BiPoly::new(tmp, var.clone(), rows);
    let r = resultant(&a, &b, tmp).expect("both inputs have positive degree");
    (&r * &IntPoly::x(var).pow(z as u32))
        .primitive_part()
        .with_positive_lead()
}

/// Polynomial whose roots are `s * alpha` for the roots `alpha` of `p`.
pub fn root_scale_transform(p: &IntPoly, s: &BigRational) -> Result<IntPoly, PolyError> {
    if s.is_zero() {
        return Err(PolyError::ZeroScale);
    }
    let Some(d) = p.degree() else {
        return Ok(p.clone());
    };
    let (u, v) = (s.numer().clone(), s.denom().clone());
    // sum a_i v^i u^(d-i) x^i
    let mut upow = vec![BigInt::one(); d + 1];
    for i in 1..=d {
        upow[i] = &upow[i - 1] * &u;
    }
    let mut vp = BigInt::one();
    let mut out = Vec::with_capacity(d + 1);
    for (i, a) in p.coeffs().iter().enumerate() {
        out.push(a * &vp * &upow[d - i]);
        vp *= &v;
    }
    let r = IntPoly::new(p.var(), out).primitive_part();
    Ok(if r.leading_coeff().is_negative() {
        -r
    } else {
        r
    })
}
