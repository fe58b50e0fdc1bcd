use num_bigint::BigInt;
use rayon::prelude::*;

use super::modp::{large_primes, Crt, PolyP, Zp};
use super::{BiPoly, IntPoly, PolyError};

/// `Res_eliminate(A, B)` as a polynomial in the remaining variable.
///
/// Computed by evaluation at many points modulo word-sized primes, interpolation,
/// and Chinese remaindering up to a proven coefficient bound.
pub fn resultant(a: &BiPoly, b: &BiPoly, eliminate: &str) -> Result<IntPoly, PolyError> {
    let (xa, xb, other) = oriented(a, b, eliminate)?;
    let da = xa.len() - 1;
    let db = xb.len() - 1;
    let deg_other = |rows: &[IntPoly]| rows.iter().filter_map(|r| r.degree()).max().unwrap_or(0);
    let ea = deg_other(&xa);
    let eb = deg_other(&xb);
    let out_deg = da * eb + db * ea;

    let norm1 = |rows: &[IntPoly]| rows.iter().map(|r| r.norm1()).sum::<BigInt>();
    let bound_bits = norm1(&xa).bits() * db as u64 + norm1(&xb).bits() * da as u64 + 2;
    let needed = (bound_bits / 61 + 1) as usize;

    let primes: Vec<u64> = large_primes().take(needed).collect();
    let images: Vec<(u64, PolyP)> = primes
        .par_iter()
        .map(|&p| (p, image_mod_p(&xa, &xb, out_deg, p)))
        .collect();
    let mut crt = Crt::new();
    for (p, img) in &images {
        crt.add(img, *p);
    }
    Ok(IntPoly::new(other, crt.symmetric()))
}

/// Puts the eliminated variable first: returns coefficient lists in that variable.
fn oriented(
    a: &BiPoly,
    b: &BiPoly,
    eliminate: &str,
) -> Result<(Vec<IntPoly>, Vec<IntPoly>, String), PolyError> {
    let xa = a.coefficients_in(eliminate)?;
    let xb = b.coefficients_in(eliminate)?;
    if xa.len() < 2 || xb.len() < 2 {
        return Err(PolyError::Degenerate(format!(
            "input constant in {eliminate:?}"
        )));
    }
    let other = a.other_var(eliminate);
    if other != b.other_var(eliminate) {
        return Err(PolyError::UnknownVariable(b.other_var(eliminate)));
    }
    let xa = xa.into_iter().map(|r| r.with_var(other.clone())).collect();
    let xb = xb.into_iter().map(|r| r.with_var(other.clone())).collect();
    Ok((xa, xb, other))
}

fn image_mod_p(xa: &[IntPoly], xb: &[IntPoly], out_deg: usize, p: u64) -> PolyP {
    let f = Zp::new(p);
    let ra: Vec<PolyP> = xa.iter().map(|r| f.reduce_poly(r)).collect();
    let rb: Vec<PolyP> = xb.iter().map(|r| f.reduce_poly(r)).collect();
    let mut xs = Vec::with_capacity(out_deg + 1);
    let mut ys = Vec::with_capacity(out_deg + 1);
    let mut y = 0u64;
    while xs.len() <= out_deg {
        let ua: PolyP = ra.iter().map(|c| f.eval(c, y)).collect();
        let ub: PolyP = rb.iter().map(|c| f.eval(c, y)).collect();
        // Skip points where a leading coefficient vanishes: the specialization would
        // then not commute with the resultant.
        if *ua.last().unwrap() != 0 && *ub.last().unwrap() != 0 {
            let mut ua = ua;
            let mut ub = ub;
            super::modp::trim(&mut ua);
            super::modp::trim(&mut ub);
            xs.push(y);
            ys.push(f.resultant(&ua, &ub));
        }
        y += 1;
    }
    f.interpolate(&xs, &ys)
}

/// Same contract as [`resultant`], via the subresultant pseudo-remainder sequence
/// over Z[other]. Slower; kept as an independent cross-check.
pub fn resultant_prs(a: &BiPoly, b: &BiPoly, eliminate: &str) -> Result<IntPoly, PolyError> {
    let (xa, xb, other) = oriented(a, b, eliminate)?;
    Ok(subresultant(xa, xb, &other))
}

/// Resultant of two univariate polynomials, as an integer.
pub fn resultant_univariate(a: &IntPoly, b: &IntPoly) -> Result<BigInt, PolyError> {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Err(PolyError::Degenerate("zero input".into()));
    };
    if da == 0 || db == 0 {
        return Err(PolyError::Degenerate(
            "input constant in eliminated variable".into(),
        ));
    }
    let lift = |p: &IntPoly| -> Vec<IntPoly> {
        p.coeffs()
            .iter()
            .map(|c| IntPoly::constant("_", c.clone()))
            .collect()
    };
    Ok(subresultant(lift(a), lift(b), "_").constant_term())
}

fn degree(rows: &[IntPoly]) -> usize {
    rows.len() - 1
}

/// Pseudo-remainder of `a` by `b` with coefficients in Z[y].
fn prem(a: &[IntPoly], b: &[IntPoly]) -> Vec<IntPoly> {
    let db = degree(b);
    let lc = &b[db];
    let mut rem = a.to_vec();
    let mut steps = degree(a) + 1 - db;
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let top = rem.pop().unwrap();
        for c in rem.iter_mut() {
            *c = &*c * lc;
        }
        if !top.is_zero() {
            for (j, bc) in b.iter().enumerate().take(db) {
                rem[k + j] = &rem[k + j] - &(&top * bc);
            }
        }
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
        steps -= 1;
    }
    if steps > 0 && !rem.is_empty() {
        let f = lc.pow(steps as u32);
        for c in rem.iter_mut() {
            *c = &*c * &f;
        }
    }
    rem
}

fn subresultant(mut a: Vec<IntPoly>, mut b: Vec<IntPoly>, var: &str) -> IntPoly {
    let one = IntPoly::one(var);
    let mut sign = false;
    if degree(&a) < degree(&b) {
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            sign = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let (da, db) = (degree(&a), degree(&b));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return IntPoly::zero(var);
        }
        let div = &g * &h.pow(delta as u32);
        a = b;
        b = r
            .iter()
            .map(|c| c.exact_div(&div).expect("subresultant division is exact"))
            .collect();
        g = a[degree(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32)
                .exact_div(&h.pow(delta as u32 - 1))
                .expect("subresultant division is exact")
        };
        if degree(&b) == 0 {
            let da = degree(&a) as u32;
            let lb = &b[0];
            let res = if da == 0 {
                one.clone()
            } else {
                lb.pow(da)
                    .exact_div(&h.pow(da - 1))
                    .expect("subresultant division is exact")
            };
            return if sign { -res } else { res };
        }
    }
}
