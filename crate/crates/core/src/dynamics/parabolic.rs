use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::iterate::{dynatomic, period_count};
use super::memo::Memo;
use super::{
    check_n, check_positive, Coordinate, DynError, Limits, NormalForm, ParamPolynomial, Provenance,
};
use crate::poly::modp::{primes_below, trim, Crt, PolyP, Zp};
use crate::poly::{
    cyclotomic, divisors, euler_phi, moebius, resultant, squarefree_part, BiPoly, IntPoly,
};

static PARABOLIC: Memo<(u32, u32, u32), IntPoly> = Memo::new();

fn check_elimination(what: String, n: u32, h: u32, limits: &Limits) -> Result<u64, DynError> {
    limits.check_degree(what.clone(), n, h)?;
    let size = period_count(n, h);
    if size > limits.elimination_cap {
        return Err(DynError::EliminationCap {
            what,
            size,
            cap: limits.elimination_cap,
        });
    }
    Ok(size)
}

/// `Res_z(Phi_h(c, z), Psi_m(multiplier(z)))` written as a polynomial in `chat = c^(n-1)`.
///
/// Every parameter carrying a period-`h` cycle whose multiplier is a primitive `m`-th
/// root of unity is a root; each such cycle contributes its factor `h` times, so callers
/// take the radical. Computed by evaluation modulo 31-bit primes at integer `c`, using
/// proven bounds on degree and coefficient size.
pub fn parabolic_resultant(n: u32, h: u32, m: u32, limits: &Limits) -> Result<IntPoly, DynError> {
    check_n(n)?;
    check_positive("h", h)?;
    check_positive("m", m)?;
    let count = check_elimination(format!("period-{h} multipliers for n = {n}"), n, h, limits)?;
    let r = PARABOLIC.get_or_try((n, h, m), || eliminate(n, h, m, count))?;
    Ok((*r).clone())
}

fn eliminate(n: u32, h: u32, m: u32, count: u64) -> Result<IntPoly, DynError> {
    let psi = cyclotomic(m as u64);
    let phi = euler_phi(m as u64);
    // periodic points escape the disk of radius 2|c|^(1/n) for large c
    let deg = (count * phi * h as u64 / n as u64) as usize;
    // on |c| = 1 every periodic point has |z| <= 2, hence |multiplier| <= (2^(n-1) n)^h
    let per_root =
        (psi.norm1().bits() as f64) + phi as f64 * h as f64 * ((n as f64).log2() + (n - 1) as f64);
    let bound_bits = (count as f64 * per_root).ceil() as u64 + 4;

    let points = deg + 3;
    let mut crt = Crt::new();
    let mut primes = primes_below(1 << 31);
    while crt.bits() <= bound_bits + 1 {
        let batch: Vec<u64> = primes
            .by_ref()
            .take(rayon::current_num_threads().max(1))
            .collect();
        let images: Vec<(u64, PolyP)> = batch
            .par_iter()
            .map(|&p| (p, image_mod_p(n, h, &psi, points, p)))
            .collect();
        for (p, img) in images {
            if img.len() > deg + 1 {
                return Err(DynError::Inconsistent(format!(
                    "multiplier elimination ({n}, {h}, {m}) exceeded its degree bound {deg}"
                )));
            }
            crt.add(&img, p);
        }
    }
    Ok(IntPoly::new("chat", crt.symmetric()))
}

/// Image of the eliminant modulo `p`, interpolated through `points` values of `chat`.
fn image_mod_p(n: u32, h: u32, psi: &IntPoly, points: usize, p: u64) -> PolyP {
    let zp = Zp::new(p);
    let psi_p = zp.reduce_poly(psi);
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    let mut seen = HashSet::new();
    let mut c0 = 0u64;
    while xs.len() < points {
        let x0 = zp.pow(c0 % p, (n - 1) as u64);
        if seen.insert(x0) {
            xs.push(x0);
            ys.push(eval_at(&zp, n, h, &psi_p, c0 % p));
        }
        c0 += 1;
    }
    zp.interpolate(&xs, &ys)
}

/// `Phi_h(c0, z)` modulo `p`: the Möbius product of `f^d(z) - z`.
fn dynatomic_mod_p(zp: &Zp, n: u32, h: u32, c0: u64) -> PolyP {
    let mut iter_d: Vec<PolyP> = Vec::new();
    let mut cur: PolyP = vec![0, 1];
    for _ in 0..h {
        let mut next = vec![1u64];
        for _ in 0..n {
            next = zp.poly_mul(&next, &cur);
        }
        next[0] = zp.add(next[0], c0);
        iter_d.push(next.clone());
        cur = next;
    }
    let minus_z = |f: &PolyP| {
        let mut g = f.clone();
        g[1] = zp.sub(g[1], 1);
        trim(&mut g);
        g
    };
    let mut num = vec![1u64];
    let mut den = vec![1u64];
    for d in divisors(h as u64) {
        let g = minus_z(&iter_d[d as usize - 1]);
        match moebius(h as u64 / d) {
            1 => num = zp.poly_mul(&num, &g),
            -1 => den = zp.poly_mul(&den, &g),
            _ => {}
        }
    }
    zp.poly_divrem(&num, &den).0
}

fn eval_at(zp: &Zp, n: u32, h: u32, psi: &[u64], c0: u64) -> u64 {
    let phi = dynatomic_mod_p(zp, n, h, c0);
    let mulmod = |a: &PolyP, b: &PolyP| zp.poly_rem(&zp.poly_mul(a, b), &phi);
    let mut zj = zp.poly_rem(&[0, 1], &phi);
    let mut d = vec![zp.pow(n as u64 % zp.modulus(), h as u64)];
    for _ in 0..h {
        let mut t = vec![1u64];
        for _ in 0..n - 1 {
            t = mulmod(&t, &zj);
        }
        d = mulmod(&d, &t);
        let mut next = mulmod(&t, &zj);
        if next.is_empty() {
            next.push(0);
        }
        next[0] = zp.add(next[0], c0);
        trim(&mut next);
        zj = next;
    }
    // Horner for psi(d) modulo phi
    let mut acc: PolyP = Vec::new();
    for &coef in psi.iter().rev() {
        acc = mulmod(&acc, &d);
        if acc.is_empty() {
            acc.push(0);
        }
        acc[0] = zp.add(acc[0], coef);
        trim(&mut acc);
    }
    zp.resultant(&phi, &acc)
}

/// `q(c, mu) = Res_z(Phi_h(c, z), mu - (f^h)'(z))`, outer variable `mu`, inner `c`.
pub fn multiplier_resultant(n: u32, h: u32, limits: &Limits) -> Result<BiPoly, DynError> {
    check_n(n)?;
    check_positive("h", h)?;
    let count = check_elimination(
        format!("period-{h} multiplier polynomial for n = {n}"),
        n,
        h,
        limits,
    )? as usize;
    let phi = dynatomic(n, h, NormalForm::Unicritical, limits)?;
    let c = BiPoly::from_inner("z", &IntPoly::x("c"));
    let mut zj = BiPoly::from_outer(&IntPoly::x("z"), "c").rem_monic_outer(&phi);
    let mut d = BiPoly::from_inner("z", &IntPoly::constant("c", BigInt::from(n).pow(h)));
    for _ in 0..h {
        let t = zj.pow(n - 1).rem_monic_outer(&phi);
        d = (&d * &t).rem_monic_outer(&phi);
        zj = &(&t * &zj).rem_monic_outer(&phi) + &c;
    }

    // values q(c, k) for k = 0..=count, then Newton forward differences in mu
    let mut values = Vec::with_capacity(count + 1);
    for k in 0..=count {
        let mu0 = BiPoly::from_inner("z", &IntPoly::constant("c", BigInt::from(k)));
        let b = &mu0 - &d;
        let v = if b.deg_outer().unwrap_or(0) == 0 {
            b.rows()
                .first()
                .cloned()
                .unwrap_or_else(|| IntPoly::zero("c"))
                .pow(count as u32)
        } else {
            resultant(&phi, &b, "z")?
        };
        values.push(v.with_var("c"));
    }
    let mut diffs = Vec::with_capacity(count + 1);
    let mut layer = values;
    while !layer.is_empty() {
        diffs.push(layer[0].clone());
        layer = layer.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    let total = fact(count);
    let mut rows = vec![IntPoly::zero("c"); count + 1];
    let mut falling = vec![BigInt::one()];
    for (j, dj) in diffs.iter().enumerate() {
        let w = &total / fact(j);
        for (i, f) in falling.iter().enumerate() {
            if !f.is_zero() {
                rows[i] = &rows[i] + &dj.scale(&(f * &w));
            }
        }
        // falling *= (mu - j)
        let mut next = vec![BigInt::zero(); falling.len() + 1];
        for (i, f) in falling.iter().enumerate() {
            next[i + 1] += f;
            next[i] -= f * BigInt::from(j);
        }
        falling = next;
    }
    let rows = rows
        .into_iter()
        .map(|r| {
            r.div_scalar_exact(&total).ok_or_else(|| {
                DynError::Inconsistent("multiplier interpolation is not integral".into())
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BiPoly::new("mu", "c", rows))
}

/// Minimal polynomial of `bhat = mu (n - mu)^(n-1)` over primitive `m`-th roots of unity `mu`:
/// the parameters whose fixed point has multiplier `mu`.
pub fn fixed_point_parabolic(n: u32, m: u32) -> Result<ParamPolynomial, DynError> {
    check_n(n)?;
    check_positive("m", m)?;
    let mu = IntPoly::x("mu");
    let n_minus = &IntPoly::constant("mu", BigInt::from(n)) - &mu;
    let value = &mu * &n_minus.pow(n - 1);
    let g = &BiPoly::from_inner("mu", &IntPoly::x("bhat")) - &BiPoly::from_outer(&value, "bhat");
    let psi = BiPoly::from_outer(&cyclotomic(m as u64).with_var("mu"), "bhat");
    let r = resultant(&psi, &g, "mu")?;
    let r = squarefree_part(&r);
    Ok(ParamPolynomial::new(
        r,
        Coordinate::Bhat,
        n,
        Provenance::FixedPoint { m },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{parabolic_param_poly, Coordinate};
    use crate::factor::factor;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn multiplier_resultant_small() {
        let q = multiplier_resultant(2, 1, &lim()).unwrap();
        // mu^2 - 2 mu + 4c
        assert_eq!(
            q,
            BiPoly::new(
                "mu",
                "c",
                vec![p("4*c"), p("-2").with_var("c"), p("1").with_var("c")]
            )
        );
        let q = multiplier_resultant(2, 2, &lim()).unwrap();
        let lin =
            &BiPoly::from_outer(&IntPoly::x("mu"), "c") - &BiPoly::from_inner("mu", &p("4*c + 4"));
        assert_eq!(q, lin.pow(2));
    }

    #[test]
    fn parabolic_examples_n2() {
        let b = |h, m| {
            parabolic_param_poly(2, h, m, Coordinate::B, &lim())
                .unwrap()
                .poly
        };
        assert_eq!(b(1, 1), p("b - 1"));
        assert_eq!(b(1, 2), p("b + 3"));
        assert_eq!(b(1, 3), p("b^2 + b + 7"));
        assert_eq!(b(2, 2), p("b + 5"));
        let f = factor(&b(3, 1));
        let irr: Vec<_> = f.irreducibles().cloned().collect();
        assert!(irr.contains(&p("b + 7")));
        assert!(irr.contains(&p("b^2 + b + 7")));
    }

    #[test]
    fn raw_eliminant_is_an_hth_power() {
        let r = parabolic_resultant(2, 2, 1, &lim()).unwrap();
        assert_eq!(r, p("16*chat^2 + 24*chat + 9"));
    }

    #[test]
    fn fixed_point_identities() {
        for n in 2..=5u32 {
            let m1 = fixed_point_parabolic(n, 1).unwrap().poly;
            let expect =
                &IntPoly::x("bhat") - &IntPoly::constant("bhat", BigInt::from(n - 1).pow(n - 1));
            assert_eq!(m1, expect);
            let m2 = fixed_point_parabolic(n, 2).unwrap().poly;
            let expect =
                &IntPoly::x("bhat") + &IntPoly::constant("bhat", BigInt::from(n + 1).pow(n - 1));
            assert_eq!(m2, expect);
        }
        assert_eq!(
            fixed_point_parabolic(2, 3).unwrap().poly,
            p("bhat^2 + bhat + 7")
        );
    }

    #[test]
    fn elimination_cap_is_reported() {
        let tight = Limits {
            elimination_cap: 5,
            ..Limits::default()
        };
        let e = parabolic_resultant(2, 3, 1, &tight).unwrap_err();
        assert!(e.is_cap());
    }
}
