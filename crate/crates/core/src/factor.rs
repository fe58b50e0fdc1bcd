//! Factorization of integer polynomials into irreducibles over Q, and norms of their roots.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::modp::{is_prime_u64, PolyP, Zp};
use crate::poly::{squarefree_decomposition, IntPoly};

const EDF_SEED: u64 = 0x5eed_f00d;
const PRIME_TRIALS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("polynomial must have positive degree")]
    Constant,
}

/// `content * prod factor^mult`, factors primitive, irreducible, with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

#[derive(Serialize, Deserialize)]
struct FactorizationRepr {
    content: String,
    factors: Vec<FactorRepr>,
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    poly: IntPoly,
    mult: u32,
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FactorizationRepr {
            content: self.content.to_string(),
            factors: self
                .factors
                .iter()
                .map(|(p, m)| FactorRepr {
                    poly: p.clone(),
                    mult: *m,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Factorization {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FactorizationRepr::deserialize(d)?;
        let content = r
            .content
            .parse()
            .map_err(|_| serde::de::Error::custom("bad content"))?;
        Ok(Factorization {
            content,
            factors: r.factors.into_iter().map(|f| (f.poly, f.mult)).collect(),
        })
    }
}

impl Factorization {
    pub fn reassemble(&self) -> IntPoly {
        let var = self
            .factors
            .first()
            .map(|f| f.0.var().to_string())
            .unwrap_or_else(|| "x".into());
        let mut acc = IntPoly::constant(var, self.content.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    /// Irreducible factors without multiplicity.
    pub fn irreducibles(&self) -> impl Iterator<Item = &IntPoly> {
        self.factors.iter().map(|f| &f.0)
    }
}

/// Complete factorization over Z. Factors are ordered by degree, then coefficients.
pub fn factor(p: &IntPoly) -> Factorization {
    assert!(!p.is_zero(), "factor of zero polynomial");
    let mut content = p.content();
    if p.leading_coeff().is_negative() {
        content = -content;
    }
    let mut factors = Vec::new();
    for (s, mult) in squarefree_decomposition(p) {
        for f in factor_squarefree(&s) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Factorization { content, factors }
}

pub fn is_irreducible(p: &IntPoly) -> bool {
    if p.degree().unwrap_or(0) == 0 {
        return false;
    }
    let f = factor(p);
    f.content.abs().is_one() && f.factors.len() == 1 && f.factors[0].1 == 1
}

/// Norm of a root of an irreducible polynomial: the product of its conjugates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormValue {
    #[serde(with = "crate::wire::rational_string")]
    pub value: BigRational,
    pub degree: usize,
}

impl NormValue {
    pub fn abs(&self) -> BigRational {
        self.value.abs()
    }

    /// The norm as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.value.is_integer().then(|| self.value.to_integer())
    }
}

/// `(-1)^d p(0)` for monic irreducible `p`.
pub fn norm_of_root(p: &IntPoly) -> Result<NormValue, FactorError> {
    if !p.is_monic() {
        return Err(FactorError::NotMonic(p.to_string()));
    }
    algebraic_norm(p)
}

/// Norm of a root of an irreducible, not necessarily monic, polynomial:
/// `(-1)^d p(0) / lc(p)`.
pub fn algebraic_norm(p: &IntPoly) -> Result<NormValue, FactorError> {
    let d = p.degree().ok_or(FactorError::Constant)?;
    if d == 0 {
        return Err(FactorError::Constant);
    }
    if !is_irreducible(&p.primitive_part()) {
        return Err(FactorError::Reducible(p.to_string()));
    }
    let mut v = BigRational::new(p.constant_term(), p.leading_coeff());
    if d % 2 == 1 {
        v = -v;
    }
    Ok(NormValue {
        value: v,
        degree: d,
    })
}

/// Number of irreducible factors of `p` modulo the prime `q` (with multiplicity one each),
/// for `p` squarefree modulo `q`. Returns `None` for bad reduction.
pub fn factor_count_mod(p: &IntPoly, q: u64) -> Option<usize> {
    let f = Zp::new(q);
    let fp = f.reduce_poly(p);
    if fp.len() != p.coeffs().len() {
        return None;
    }
    let fp = f.make_monic(&fp);
    if f.poly_gcd(&fp, &f.poly_deriv(&fp)).len() > 1 {
        return None;
    }
    Some(
        distinct_degree(&f, &fp)
            .iter()
            .map(|(g, d)| (g.len() - 1) / d)
            .sum(),
    )
}

/// Factors a primitive squarefree polynomial with positive leading coefficient.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let d = f.degree().unwrap_or(0);
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut f = f.clone();
    if f.constant_term().is_zero() {
        out.push(IntPoly::x(f.var()));
        f = f.shift_down(1);
    }
    match f.degree().unwrap() {
        0 => return out,
        1 => {
            out.push(f);
            return out;
        }
        _ => {}
    }
    let Some((p, modfactors)) = choose_prime(&f) else {
        unreachable!("no prime of good reduction found");
    };
    if modfactors.len() == 1 {
        out.push(f);
        return out;
    }
    out.extend(lift_and_recombine(&f, p, modfactors));
    out
}

/// Tries the first few primes of good reduction and keeps the one with fewest factors.
fn choose_prime(f: &IntPoly) -> Option<(u64, Vec<PolyP>)> {
    let mut best: Option<(u64, Vec<(PolyP, usize)>)> = None;
    let mut tried = 0;
    let mut q = 5u64;
    while tried < PRIME_TRIALS && q < 1 << 20 {
        if is_prime_u64(q) {
            let zp = Zp::new(q);
            let fp = zp.reduce_poly(f);
            if fp.len() == f.coeffs().len() {
                let fp = zp.make_monic(&fp);
                if zp.poly_gcd(&fp, &zp.poly_deriv(&fp)).len() == 1 {
                    tried += 1;
                    let ddf = distinct_degree(&zp, &fp);
                    let count: usize = ddf.iter().map(|(g, d)| (g.len() - 1) / d).sum();
                    let better = match &best {
                        None => true,
                        Some((_, b)) => count < b.iter().map(|(g, d)| (g.len() - 1) / d).sum(),
                    };
                    if better {
                        best = Some((q, ddf));
                    }
                    if count == 1 {
                        break;
                    }
                }
            }
        }
        q += 1;
    }
    let (q, ddf) = best?;
    let zp = Zp::new(q);
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    let mut factors = Vec::new();
    for (g, d) in ddf {
        equal_degree(&zp, &g, d, &mut rng, &mut factors);
    }
    factors.sort();
    Some((q, factors))
}

/// Distinct-degree factorization of a monic squarefree polynomial mod p.
fn distinct_degree(zp: &Zp, f: &[u64]) -> Vec<(PolyP, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x: PolyP = vec![0, 1];
    let mut h = x.clone();
    let mut i = 1;
    let p = BigUint::from(zp.modulus());
    while f.len() > 2 * i {
        h = zp.poly_powmod(&h, &p, &f);
        let g = zp.poly_gcd(&zp.poly_sub(&h, &x), &f);
        if g.len() > 1 {
            f = zp.poly_divrem(&f, &g).0;
            h = zp.poly_rem(&h, &f);
            out.push((g, i));
        }
        i += 1;
    }
    if f.len() > 1 {
        let d = f.len() - 1;
        out.push((f, d));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of degree-`d` irreducibles (odd p).
fn equal_degree(zp: &Zp, f: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyP>) {
    let n = f.len() - 1;
    if n == d {
        out.push(f.to_vec());
        return;
    }
    let p = zp.modulus();
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let mut a: PolyP = (0..n).map(|_| rng.gen_range(0..p)).collect();
        crate::poly::modp::trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let mut g = zp.poly_gcd(&a, f);
        if g.len() == 1 {
            let b = zp.poly_powmod(&a, &e, f);
            g = zp.poly_gcd(&zp.poly_sub(&b, &[1]), f);
        }
        if g.len() > 1 && g.len() < f.len() {
            let h = zp.poly_divrem(f, &g).0;
            equal_degree(zp, &g, d, rng, out);
            equal_degree(zp, &zp.make_monic(&h), d, rng, out);
            return;
        }
    }
}

fn reduce(a: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(a.var(), a.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m >> 1;
    IntPoly::new(
        a.var(),
        a.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn lift_poly(a: &[u64], var: &str) -> IntPoly {
    IntPoly::new(var, a.iter().map(|&c| BigInt::from(c)).collect())
}

/// One quadratic Hensel step: from `f = g h`, `s g + t h = 1` mod `m` to the same mod `m^2`.
/// `h` is monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m2: &BigInt,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let e = reduce(&(f - &(g * h)), m2);
    let (q, r) = reduce(&(s * &e), m2).div_rem_monic(h);
    let (q, r) = (reduce(&q, m2), reduce(&r, m2));
    let g2 = reduce(&(&(g + &(t * &e)) + &(&q * g)), m2);
    let h2 = reduce(&(h + &r), m2);
    let b = reduce(&(&(&(s * &g2) + &(t * &h2)) - &IntPoly::one(f.var())), m2);
    let (c, d) = reduce(&(s * &b), m2).div_rem_monic(&h2);
    let (c, d) = (reduce(&c, m2), reduce(&d, m2));
    let s2 = reduce(&(s - &d), m2);
    let t2 = reduce(&(&(t - &(t * &b)) - &(&c * &g2)), m2);
    (g2, h2, s2, t2)
}

/// Lifts `f = lc * prod u_i (mod p)` to monic factors modulo `p^k`.
fn multifactor_lift(f: &IntPoly, modfactors: &[PolyP], p: u64, k: u32) -> Vec<IntPoly> {
    let var = f.var().to_string();
    let pk = BigInt::from(p).pow(k);
    let zp = Zp::new(p);
    if modfactors.len() == 1 {
        let lc_inv = f
            .leading_coeff()
            .modinv(&pk)
            .expect("leading coefficient is a unit");
        return vec![reduce(&f.scale(&lc_inv), &pk)];
    }
    let mid = modfactors.len() / 2;
    let (left, right) = modfactors.split_at(mid);
    let prod = |fs: &[PolyP]| fs.iter().fold(vec![1u64], |acc, u| zp.poly_mul(&acc, u));
    let lc_p = zp.from_bigint(&f.leading_coeff());
    let g0 = zp.poly_scale(&prod(left), lc_p);
    let h0 = prod(right);
    let (one, s0, t0) = zp.poly_ext_gcd(&g0, &h0);
    debug_assert_eq!(one, vec![1]);
    let (mut g, mut h) = (lift_poly(&g0, &var), lift_poly(&h0, &var));
    let (mut s, mut t) = (lift_poly(&s0, &var), lift_poly(&t0, &var));
    let mut m = BigInt::from(p);
    let mut e = 1u32;
    while e < k {
        m = &m * &m;
        e *= 2;
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &m);
    }
    let g = reduce(&g, &pk);
    let h = reduce(&h, &pk);
    let mut out = multifactor_lift(&g, left, p, k);
    out.extend(multifactor_lift(&h, right, p, k));
    out
}

fn lift_and_recombine(f: &IntPoly, p: u64, modfactors: Vec<PolyP>) -> Vec<IntPoly> {
    let d = f.degree().unwrap() as u64;
    let lc = f.leading_coeff();
    let bound_bits = lc.bits() + d + f.norm2_bits() + 2;
    let k = ((bound_bits as f64) / (p as f64).log2()).ceil() as u32 + 1;
    let pk = BigInt::from(p).pow(k);
    let lifted = multifactor_lift(f, &modfactors, p, k);
    recombine(f, lifted, &pk)
}

/// Subset recombination with constant-term pretest and trial division.
fn recombine(f: &IntPoly, lifted: Vec<IntPoly>, pk: &BigInt) -> Vec<IntPoly> {
    let mut remaining: Vec<IntPoly> = lifted;
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let r = remaining.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = rest.leading_coeff();
            // constant-term pretest
            let mut c0 = lc.clone();
            for &i in &idx {
                c0 = (c0 * remaining[i].constant_term()).mod_floor(pk);
            }
            let c0 = {
                let half = pk >> 1;
                if c0 > half {
                    c0 - pk
                } else {
                    c0
                }
            };
            let rest0 = &lc * rest.constant_term();
            let plausible = if c0.is_zero() {
                rest0.is_zero()
            } else {
                (&rest0 % &c0).is_zero()
            };
            if plausible {
                let mut g = IntPoly::constant(f.var(), lc.clone());
                for &i in &idx {
                    g = reduce(&(&g * &remaining[i]), pk);
                }
                let g = symmetric(&g, pk).primitive_part();
                if let Some(q) = rest.exact_div(&g) {
                    found.push(g.with_positive_lead());
                    rest = q;
                    let mut keep = Vec::new();
                    for (i, u) in remaining.into_iter().enumerate() {
                        if !idx.contains(&i) {
                            keep.push(u);
                        }
                    }
                    remaining = keep;
                    continue 'outer;
                }
            }
            if !next_combination(&mut idx, r) {
                break;
            }
        }
        size += 1;
    }
    found.push(rest.primitive_part().with_positive_lead());
    found
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Factor counts modulo the first few primes of good reduction; each bounds the
/// number of irreducible factors over Q from above.
pub fn small_prime_factor_counts(p: &IntPoly, primes: usize) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    let mut q = 5u64;
    while out.len() < primes {
        if is_prime_u64(q) {
            if let Some(c) = factor_count_mod(p, q) {
                out.push((q, c));
            }
        }
        q += 1;
    }
    out
}
