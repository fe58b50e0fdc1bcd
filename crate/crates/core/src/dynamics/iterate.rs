use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::memo::Memo;
use super::{check_n, check_positive, DynError, Limits, NormalForm};
use crate::poly::{divisors, moebius, BiPoly, IntPoly};

/// `P_k(b, w)` and `N_k` with `g_b^k(w) = P_k(b, w) / N_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratePair {
    pub n: u32,
    pub k: u32,
    pub p: BiPoly,
    #[serde(with = "crate::wire::bigint_string")]
    pub denom: BigInt,
}

/// `P_k(chat)`: the k-th point of the critical orbit of `chat*x^n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalOrbitPoly {
    pub n: u32,
    pub k: u32,
    pub poly: IntPoly,
}

static GB_ITERATES: Memo<(u32, u32), IteratePair> = Memo::new();
static FC_ITERATES: Memo<(u32, u32), BiPoly> = Memo::new();
static FCHAT_ITERATES: Memo<(u32, u32), BiPoly> = Memo::new();
static CRITICAL_ORBIT: Memo<(u32, u32), IntPoly> = Memo::new();

pub fn iterate_poly_gb(n: u32, k: u32, limits: &Limits) -> Result<IteratePair, DynError> {
    check_n(n)?;
    check_positive("k", k)?;
    limits.check_degree(format!("P_{k} for n = {n}"), n, k)?;
    gb_iterate(n, k).map(|p| (*p).clone())
}

fn gb_iterate(n: u32, k: u32) -> Result<std::sync::Arc<IteratePair>, DynError> {
    GB_ITERATES.get_or_try((n, k), || {
        let b = IntPoly::x("b");
        if k == 1 {
            let mut rows = vec![IntPoly::zero("b"); n as usize + 1];
            rows[0] = b;
            rows[n as usize] = IntPoly::one("b");
            return Ok(IteratePair {
                n,
                k,
                p: BiPoly::new("w", "b", rows),
                denom: BigInt::from(n),
            });
        }
        let prev = gb_iterate(n, k - 1)?;
        let nk = prev.denom.pow(n);
        let p = &prev.p.pow(n) + &BiPoly::from_inner("w", &b.scale(&nk));
        Ok(IteratePair {
            n,
            k,
            p,
            denom: nk * BigInt::from(n),
        })
    })
}

/// `P_h(b, w) - N_h w`, whose roots in `w` are the points of period dividing `h`.
pub fn periodicity_poly(n: u32, h: u32, limits: &Limits) -> Result<BiPoly, DynError> {
    let it = iterate_poly_gb(n, h, limits)?;
    let w = BiPoly::from_outer(&IntPoly::x("w").scale(&it.denom), "b");
    Ok(&it.p - &w)
}

pub fn critical_orbit_poly(n: u32, k: u32, limits: &Limits) -> Result<CriticalOrbitPoly, DynError> {
    check_n(n)?;
    check_positive("k", k)?;
    limits.check_degree(format!("P_{k}(chat) for n = {n}"), n, k - 1)?;
    Ok(CriticalOrbitPoly {
        n,
        k,
        poly: (*critical_orbit(n, k)).clone(),
    })
}

/// Memoized `P_k(chat)`, with `P_0 = 0`.
pub(crate) fn critical_orbit(n: u32, k: u32) -> std::sync::Arc<IntPoly> {
    let r: Result<_, DynError> = CRITICAL_ORBIT.get_or_try((n, k), || {
        Ok(match k {
            0 => IntPoly::zero("chat"),
            1 => IntPoly::one("chat"),
            _ => {
                let prev = critical_orbit(n, k - 1);
                &(&IntPoly::x("chat") * &prev.pow(n)) + &IntPoly::one("chat")
            }
        })
    });
    r.expect("infallible")
}

/// `f_c^k(z)` as a polynomial in `z` (outer) with coefficients in `c`.
pub fn unicritical_iterate(n: u32, k: u32, limits: &Limits) -> Result<BiPoly, DynError> {
    check_n(n)?;
    check_positive("k", k)?;
    limits.check_degree(format!("f^{k} for n = {n}"), n, k)?;
    fc_iterate(n, k).map(|p| (*p).clone())
}

fn fc_iterate(n: u32, k: u32) -> Result<std::sync::Arc<BiPoly>, DynError> {
    FC_ITERATES.get_or_try((n, k), || {
        let c = BiPoly::from_inner("z", &IntPoly::x("c"));
        if k == 1 {
            let zn = BiPoly::from_outer(&IntPoly::x("z").pow(n), "c");
            return Ok(&zn + &c);
        }
        Ok(&fc_iterate(n, k - 1)?.pow(n) + &c)
    })
}

fn fchat_iterate(n: u32, k: u32) -> Result<std::sync::Arc<BiPoly>, DynError> {
    FCHAT_ITERATES.get_or_try((n, k), || {
        let one = BiPoly::one("x", "chat");
        let chat = BiPoly::from_inner("x", &IntPoly::x("chat"));
        let base = if k == 1 {
            BiPoly::from_outer(&IntPoly::x("x"), "chat")
        } else {
            (*fchat_iterate(n, k - 1)?).clone()
        };
        Ok(&(&chat * &base.pow(n)) + &one)
    })
}

/// Dynatomic polynomial: the Möbius product of `iterate_d - var` over `d | h`.
/// Outer variable is the dynamical variable of `form`, inner is its parameter.
pub fn dynatomic(n: u32, h: u32, form: NormalForm, limits: &Limits) -> Result<BiPoly, DynError> {
    check_n(n)?;
    check_positive("h", h)?;
    limits.check_degree(format!("period-{h} points for n = {n}"), n, h)?;
    let (var, param) = form.vars();
    let base = |d: u32| -> Result<BiPoly, DynError> {
        let x = BiPoly::from_outer(&IntPoly::x(var), param);
        Ok(match form {
            NormalForm::Unicritical => &*fc_iterate(n, d)? - &x,
            NormalForm::Normalized => periodicity_poly(n, d, limits)?,
            NormalForm::CriticalValue => &*fchat_iterate(n, d)? - &x,
        })
    };
    let mut num = BiPoly::one(var, param);
    let mut den = BiPoly::one(var, param);
    for d in divisors(h as u64) {
        match moebius(h as u64 / d) {
            1 => num = &num * &base(d as u32)?,
            -1 => den = &den * &base(d as u32)?,
            _ => {}
        }
    }
    num.exact_div(&den).ok_or_else(|| {
        DynError::Inconsistent(format!(
            "Möbius division for period {h}, n = {n} left a remainder"
        ))
    })
}

/// Number of points of exact period `h` for a degree-`n` map (with multiplicity).
pub(crate) fn period_count(n: u32, h: u32) -> u64 {
    let mut total: i128 = 0;
    for d in divisors(h as u64) {
        total += moebius(h as u64 / d) as i128 * (n as i128).pow(d as u32);
    }
    total as u64
}
