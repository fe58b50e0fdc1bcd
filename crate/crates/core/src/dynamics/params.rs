use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::iterate::critical_orbit;
use super::memo::Memo;
use super::parabolic::parabolic_resultant;
use super::{check_n, check_positive, Coordinate, DynError, Limits, ParamPolynomial, Provenance};
use crate::poly::{
    cyclotomic, divisors, euler_phi, gcd, root_power_transform, root_scale_transform,
    squarefree_part, IntPoly,
};

static MISIUREWICZ_RAW: Memo<(u32, u32, u32, u32), IntPoly> = Memo::new();

/// Divides out of `p` every factor it shares with `q`, with multiplicity.
fn remove_shared(mut p: IntPoly, q: &IntPoly) -> IntPoly {
    if q.is_zero() {
        return p;
    }
    loop {
        let g = gcd(&p, q);
        if g.degree().unwrap_or(0) == 0 {
            return p;
        }
        p = p.exact_div(&g.primitive_part()).expect("gcd divides");
    }
}

/// Parameters whose critical point has exact period `h` (centers).
pub fn gleason_poly(
    n: u32,
    h: u32,
    coord: Coordinate,
    limits: &Limits,
) -> Result<ParamPolynomial, DynError> {
    check_n(n)?;
    check_positive("h", h)?;
    limits.check_degree(
        format!("Gleason polynomial of period {h}, n = {n}"),
        n,
        h - 1,
    )?;
    let prov = Provenance::Gleason { h };
    if h == 1 {
        // the single center c = 0, in every coordinate
        return Ok(ParamPolynomial::new(
            IntPoly::x(coord.var()),
            coord,
            n,
            prov,
        ));
    }
    let mut g = (*critical_orbit(n, h)).clone();
    for d in divisors(h as u64) {
        let d = d as u32;
        if d > 1 && d < h {
            g = remove_shared(g, &critical_orbit(n, d));
        }
    }
    let g = squarefree_part(&g);
    let p = transform_poly(&g, Coordinate::Chat, coord, n)?;
    Ok(ParamPolynomial::new(p, coord, n, prov))
}

/// `P_t^phi(tau) * Psi_tau(P_{t+h} / P_t)` before any factor removal.
pub fn misiurewicz_raw(n: u32, t: u32, h: u32, tau: u32) -> Result<IntPoly, DynError> {
    check_misiurewicz_args(n, t, h, tau)?;
    let r: Result<_, DynError> = MISIUREWICZ_RAW.get_or_try((n, t, h, tau), || {
        let x = critical_orbit(n, t + h);
        let y = critical_orbit(n, t);
        let psi = cyclotomic(tau as u64);
        let phi = euler_phi(tau as u64) as u32;
        let mut acc = IntPoly::zero("chat");
        for (i, coef) in psi.coeffs().iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let term = &x.pow(i as u32) * &y.pow(phi - i as u32);
            acc = &acc + &term.scale(coef);
        }
        Ok(acc)
    });
    Ok((*r?).clone())
}

fn check_misiurewicz_args(n: u32, t: u32, h: u32, tau: u32) -> Result<(), DynError> {
    check_n(n)?;
    check_positive("t", t)?;
    check_positive("h", h)?;
    if tau <= 1 || !n.is_multiple_of(tau) {
        return Err(DynError::InvalidArgument(format!(
            "tau = {tau} must divide n = {n} and exceed 1"
        )));
    }
    Ok(())
}

/// Parameters whose critical orbit is strictly preperiodic with transient `t`, period `h`,
/// and the two preimages of the first periodic point differing by a primitive `tau`-th
/// root of unity.
pub fn misiurewicz_poly(
    n: u32,
    t: u32,
    h: u32,
    tau: u32,
    coord: Coordinate,
    limits: &Limits,
) -> Result<ParamPolynomial, DynError> {
    check_misiurewicz_args(n, t, h, tau)?;
    limits.check_degree(
        format!("Misiurewicz polynomial ({t}, {h}), n = {n}"),
        n,
        t + h - 1,
    )?;
    let mut s = misiurewicz_raw(n, t, h, tau)?;
    for t2 in 1..=t {
        for h2 in divisors(h as u64) {
            let h2 = h2 as u32;
            if (t2, h2) != (t, h) {
                s = remove_shared(s, &misiurewicz_raw(n, t2, h2, tau)?);
            }
        }
    }
    // centers where both orbit points vanish satisfy the cleared equation trivially
    s = remove_shared(s, &critical_orbit(n, t));
    let s = squarefree_part(&s);
    let p = transform_poly(&s, Coordinate::Chat, coord, n)?;
    Ok(ParamPolynomial::new(
        p,
        coord,
        n,
        Provenance::Misiurewicz { t, h, tau },
    ))
}

/// Parameters with a period-`h` orbit whose multiplier is a primitive `m`-th root of unity.
pub fn parabolic_param_poly(
    n: u32,
    h: u32,
    m: u32,
    coord: Coordinate,
    limits: &Limits,
) -> Result<ParamPolynomial, DynError> {
    let r = parabolic_resultant(n, h, m, limits)?;
    let r = squarefree_part(&r);
    let p = transform_poly(&r, Coordinate::Chat, coord, n)?;
    Ok(ParamPolynomial::new(
        p,
        coord,
        n,
        Provenance::Parabolic { h, m },
    ))
}

pub fn coord_transform(
    p: &ParamPolynomial,
    target: Coordinate,
) -> Result<ParamPolynomial, DynError> {
    let out = transform_poly(&p.poly, p.coordinate, target, p.n)?;
    Ok(ParamPolynomial::new(out, target, p.n, p.provenance))
}

fn n_pow_n(n: u32) -> BigInt {
    BigInt::from(n).pow(n)
}

/// Keeps every `k`-th coefficient if all others vanish: `p(x) = q(x^k)`.
fn extract_power(p: &IntPoly, k: usize) -> Option<IntPoly> {
    if p.coeffs()
        .iter()
        .enumerate()
        .any(|(i, c)| i % k != 0 && !c.is_zero())
    {
        return None;
    }
    Some(IntPoly::new(
        p.var(),
        p.coeffs().iter().step_by(k).cloned().collect(),
    ))
}

fn one_step(p: &IntPoly, from: Coordinate, to: Coordinate, n: u32) -> Result<IntPoly, DynError> {
    use Coordinate::*;
    let k = (n - 1) as usize;
    let out = match (from, to) {
        (C, Chat) | (B, Bhat) => {
            // strip the root at zero, then use the power symmetry when present
            let z = p.trailing_zeros();
            let q = p.shift_down(z);
            let mut r = match extract_power(&q, k) {
                Some(r) => r,
                None => root_power_transform(&q, k as u32),
            };
            if z > 0 {
                r = r.shift_up(1);
            }
            r
        }
        (Chat, C) | (Bhat, B) => p.substitute_power(k),
        (Chat, Bhat) => root_scale_transform(p, &BigRational::from_integer(n_pow_n(n)))?,
        (Bhat, Chat) => root_scale_transform(p, &BigRational::new(BigInt::one(), n_pow_n(n)))?,
        (C, B) if n == 2 => root_scale_transform(p, &BigRational::from_integer(4.into()))?,
        (B, C) if n == 2 => root_scale_transform(p, &BigRational::new(1.into(), 4.into()))?,
        _ => {
            return Err(DynError::InvalidArgument(format!(
                "no direct transform {from} -> {to} for n = {n}"
            )))
        }
    };
    if out.is_zero() {
        return Ok(out);
    }
    Ok(squarefree_part(&out).with_var(to.var()))
}

/// Polynomial satisfied by the image of every root of `p` under the coordinate change.
pub(crate) fn transform_poly(
    p: &IntPoly,
    from: Coordinate,
    to: Coordinate,
    n: u32,
) -> Result<IntPoly, DynError> {
    use Coordinate::*;
    if from == to {
        return Ok(p.clone().with_var(to.var()));
    }
    if matches!((from, to), (C, B) | (B, C)) {
        if n == 2 {
            return one_step(p, from, to, n);
        }
        return Err(DynError::InvalidArgument(format!(
            "c and b differ by the irrational factor n^(n/(n-1)) for n = {n}; go through chat or bhat"
        )));
    }
    let chain = [C, Chat, Bhat, B];
    let pos = |c: Coordinate| chain.iter().position(|&x| x == c).unwrap();
    let (i, j) = (pos(from), pos(to));
    let mut cur = p.clone();
    let mut at = i;
    while at != j {
        let next = if j > at { at + 1 } else { at - 1 };
        cur = one_step(&cur, chain[at], chain[next], n)?;
        at = next;
    }
    Ok(cur.with_var(to.var()))
}
