//! Simultaneous root isolation (Aberth–Ehrlich) at a requested binary precision.

use unicrit_core::poly::IntPoly;

use crate::complex::{consts, from_bigint, real, to_f64, Complex};
use crate::RayError;

const MAX_SWEEPS: usize = 600;

/// All complex roots of a squarefree integer polynomial.
pub fn complex_roots(p: &IntPoly, bits: usize) -> Result<Vec<Complex>, RayError> {
    let mut cc = consts();
    let coeffs: Vec<Complex> = p
        .coeffs()
        .iter()
        .map(|a| Complex::from_real(from_bigint(a, bits + 64, &mut cc), bits + 64))
        .collect();
    polynomial_roots(&coeffs, bits)
}

/// Roots of `sum coeffs[i] x^i`; the leading coefficient must be nonzero.
pub fn polynomial_roots(coeffs: &[Complex], bits: usize) -> Result<Vec<Complex>, RayError> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let w = bits + 32;
    let lc = &coeffs[d];
    let monic: Vec<Complex> = coeffs.iter().map(|a| a.div(lc, w)).collect();
    if d == 1 {
        return Ok(vec![monic[0].neg().with_precision(bits)]);
    }
    // start on a circle of the Fujiwara radius, rotated off the real axis
    let radius = (0..d)
        .map(|i| to_f64(&monic[i].abs(64)).powf(1.0 / (d - i) as f64))
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex> = (0..d)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
            Complex::from_f64(radius * t.cos(), radius * t.sin(), 64)
        })
        .collect();
    // a cheap low-precision pass, then the full precision pass
    for prec in [64usize, w] {
        let target = prec as i32 - if prec == w { 40 } else { 12 };
        let coeffs_p: Vec<Complex> = monic.iter().map(|a| a.with_precision(prec)).collect();
        z = z.into_iter().map(|x| x.with_precision(prec)).collect();
        aberth(&coeffs_p, &mut z, prec, target)?;
    }
    check_residuals(&monic, &z, w, bits)?;
    Ok(z.into_iter().map(|x| x.with_precision(bits)).collect())
}

/// `p(x)` and `p'(x)` by Horner.
pub(crate) fn eval_with_derivative(
    coeffs: &[Complex],
    x: &Complex,
    p: usize,
) -> (Complex, Complex) {
    let d = coeffs.len() - 1;
    let mut v = coeffs[d].clone();
    let mut dv = Complex::zero(p);
    for a in coeffs[..d].iter().rev() {
        dv = dv.mul(x, p).add(&v, p);
        v = v.mul(x, p).add(a, p);
    }
    (v, dv)
}

fn aberth(
    coeffs: &[Complex],
    z: &mut [Complex],
    p: usize,
    target_bits: i32,
) -> Result<(), RayError> {
    let d = z.len();
    let mut converged = vec![false; d];
    for _ in 0..MAX_SWEEPS {
        for k in 0..d {
            if converged[k] {
                continue;
            }
            let (v, dv) = eval_with_derivative(coeffs, &z[k], p);
            if v.re.is_zero() && v.im.is_zero() {
                converged[k] = true;
                continue;
            }
            let newton = v.div(&dv, p);
            let mut s = Complex::zero(p);
            for j in 0..d {
                if j != k {
                    s = s.add(&z[k].sub(&z[j], p).recip(p), p);
                }
            }
            let denom = Complex::one(p).sub(&newton.mul(&s, p), p);
            let step = newton.div(&denom, p);
            if !step.is_finite() {
                return Err(RayError::NonConvergence {
                    what: "root isolation".into(),
                    iterations: MAX_SWEEPS,
                });
            }
            z[k] = z[k].sub(&step, p);
            let size = to_f64(&step.abs(64)).log2();
            let scale = to_f64(&z[k].abs(64)).max(1.0).log2();
            if size < scale - target_bits as f64 {
                converged[k] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            return Ok(());
        }
    }
    Err(RayError::NonConvergence {
        what: "root isolation".into(),
        iterations: MAX_SWEEPS,
    })
}

/// Residual bound: `|p(x)| <= d * 2^-(bits - 8) * sum |a_i| |x|^i`.
fn check_residuals(
    monic: &[Complex],
    z: &[Complex],
    w: usize,
    bits: usize,
) -> Result<(), RayError> {
    let d = monic.len() - 1;
    for x in z {
        let (v, _) = eval_with_derivative(monic, x, w);
        let r = x.abs(w);
        let mut scale = real(0.0, w);
        for a in monic.iter().rev() {
            scale = scale
                .mul(&r, w, crate::complex::RM)
                .add(&a.abs(w), w, crate::complex::RM);
        }
        let bound = to_f64(&scale).log2() + (d as f64).log2() - (bits as f64 - 8.0);
        let resid = to_f64(&v.abs(w));
        if resid > 0.0 && resid.log2() > bound {
            return Err(RayError::NonConvergence {
                what: format!(
                    "root residual 2^{:.1} above bound 2^{bound:.1}",
                    resid.log2()
                ),
                iterations: MAX_SWEEPS,
            });
        }
    }
    Ok(())
}

/// Sorts by real part, then imaginary part (as doubles): the root-index convention.
pub(crate) fn sort_roots(roots: &mut [Complex]) {
    roots.sort_by(|a, b| {
        let (ar, ai) = a.to_c64();
        let (br, bi) = b.to_c64();
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots(s: &str) -> Vec<(f64, f64)> {
        let mut r = complex_roots(&s.parse().unwrap(), 256).unwrap();
        sort_roots(&mut r);
        r.iter().map(Complex::to_c64).collect()
    }

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12
    }

    #[test]
    fn small_examples() {
        let r = roots("x^2 + 1");
        assert!(close(r[0], (0.0, -1.0)) && close(r[1], (0.0, 1.0)));
        let r = roots("b^2 + b + 7");
        let im = 3.0 * 3f64.sqrt() / 2.0;
        assert!(close(r[0], (-0.5, -im)) && close(r[1], (-0.5, im)));
        assert!(close(roots("c + 2")[0], (-2.0, 0.0)));
    }

    #[test]
    fn high_precision() {
        let r = complex_roots(&"x^2 - 2".parse().unwrap(), 512).unwrap();
        let p = 512;
        for x in r {
            let e = x.sqr(p).sub(&Complex::from_f64(2.0, 0.0, p), p);
            assert!(to_f64(&e.abs(p)) < 1e-150);
        }
    }

    #[test]
    fn cyclotomic_and_wilkinson_like() {
        let r = roots("x^12 - 1");
        assert_eq!(r.len(), 12);
        let p = (1..=8).fold(IntPoly::one("x"), |acc, k| {
            &acc * &IntPoly::from_i64s("x", &[-k, 1])
        });
        let r: Vec<f64> = complex_roots(&p, 256)
            .map(|mut v| {
                sort_roots(&mut v);
                v.iter().map(|z| z.to_c64().0).collect()
            })
            .unwrap();
        for (i, x) in r.iter().enumerate() {
            assert!((x - (i + 1) as f64).abs() < 1e-20);
        }
    }
}
