//! Word-sized prime fields and dense polynomials over them.
//!
//! Everything here is an internal accelerator for the exact integer routines
//! (multi-modular gcd and resultants, factorization mod p). Polynomials are
//! plain `Vec<u64>` in ascending order with no trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    p: u64,
}

pub type PolyP = Vec<u64>;

impl Zp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2);
        Zp { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p < 1 << 63 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p <= 1 << 32 {
            return a * b % self.p;
        }
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        x.mod_floor(&m).to_u64().unwrap()
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.p as i128) as u64
    }

    pub fn reduce_poly(&self, p: &IntPoly) -> PolyP {
        let mut v: PolyP = p.coeffs().iter().map(|c| self.from_bigint(c)).collect();
        trim(&mut v);
        v
    }

    pub fn eval(&self, f: &[u64], x: u64) -> u64 {
        let mut acc = 0;
        for &c in f.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    pub fn poly_add(&self, a: &[u64], b: &[u64]) -> PolyP {
        let n = a.len().max(b.len());
        let mut out: PolyP = (0..n)
            .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        trim(&mut out);
        out
    }

    pub fn poly_sub(&self, a: &[u64], b: &[u64]) -> PolyP {
        let n = a.len().max(b.len());
        let mut out: PolyP = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        trim(&mut out);
        out
    }

    pub fn poly_scale(&self, a: &[u64], k: u64) -> PolyP {
        let mut out: PolyP = a.iter().map(|&c| self.mul(c, k)).collect();
        trim(&mut out);
        out
    }

    pub fn poly_mul(&self, a: &[u64], b: &[u64]) -> PolyP {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        // Accumulate in u128 and reduce lazily; each product is < 2^126 for p < 2^63.
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        let p = self.p as u128;
        let lazy = self.p < (1 << 31);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let t = x as u128 * y as u128;
                if lazy {
                    acc[i + j] += t;
                } else {
                    acc[i + j] = (acc[i + j] + t % p) % p;
                }
            }
        }
        let mut out: PolyP = acc.into_iter().map(|v| (v % p) as u64).collect();
        trim(&mut out);
        out
    }

    pub fn make_monic(&self, a: &[u64]) -> PolyP {
        match a.last() {
            None => Vec::new(),
            Some(&1) => a.to_vec(),
            Some(&l) => self.poly_scale(a, self.inv(l)),
        }
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn poly_divrem(&self, a: &[u64], b: &[u64]) -> (PolyP, PolyP) {
        assert!(!b.is_empty(), "polynomial division by zero mod {}", self.p);
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        let mut r = a.to_vec();
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let top = r[k + db];
            if top == 0 {
                continue;
            }
            let qk = self.mul(top, inv);
            q[k] = qk;
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    r[k + j] = self.sub(r[k + j], self.mul(qk, bj));
                }
            }
        }
        r.truncate(db);
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    pub fn poly_rem(&self, a: &[u64], b: &[u64]) -> PolyP {
        self.poly_divrem(a, b).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn poly_gcd(&self, a: &[u64], b: &[u64]) -> PolyP {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        while !y.is_empty() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.make_monic(&x)
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn poly_ext_gcd(&self, a: &[u64], b: &[u64]) -> (PolyP, PolyP, PolyP) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1): (PolyP, PolyP) = (vec![1], Vec::new());
        let (mut t0, mut t1): (PolyP, PolyP) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.last() {
            None => (r0, s0, t0),
            Some(&l) => {
                let il = self.inv(l);
                (
                    self.poly_scale(&r0, il),
                    self.poly_scale(&s0, il),
                    self.poly_scale(&t0, il),
                )
            }
        }
    }

    /// `base^e mod m` for a big exponent given as little-endian u64 digits.
    pub fn poly_powmod(&self, base: &[u64], e: &num_bigint::BigUint, m: &[u64]) -> PolyP {
        let mut result: PolyP = self.poly_rem(&[1], m);
        let b = self.poly_rem(base, m);
        let bits = e.bits();
        for i in (0..bits).rev() {
            result = self.poly_rem(&self.poly_mul(&result, &result), m);
            if e.bit(i) {
                result = self.poly_rem(&self.poly_mul(&result, &b), m);
            }
        }
        result
    }

    pub fn poly_deriv(&self, a: &[u64]) -> PolyP {
        let mut out: PolyP = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, (i as u64) % self.p))
            .collect();
        trim(&mut out);
        out
    }

    /// Resultant in the Sylvester convention `lc(a)^deg(b) * prod b(alpha)`.
    /// Both inputs must be nonzero with their nominal degrees.
    pub fn resultant(&self, a: &[u64], b: &[u64]) -> u64 {
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        let mut acc = 1u64;
        loop {
            let da = a.len() - 1;
            let db = b.len() - 1;
            if db == 0 {
                return self.mul(acc, self.pow(b[0], da as u64));
            }
            if da == 0 {
                return self.mul(acc, self.pow(a[0], db as u64));
            }
            if da < db {
                if da % 2 == 1 && db % 2 == 1 {
                    acc = self.neg(acc);
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = self.poly_rem(&a, &b);
            if r.is_empty() {
                return 0;
            }
            let dr = r.len() - 1;
            if da % 2 == 1 && db % 2 == 1 {
                acc = self.neg(acc);
            }
            acc = self.mul(acc, self.pow(b[db], (da - dr) as u64));
            a = b;
            b = r;
        }
    }

    /// Newton interpolation through `(xs[i], ys[i])`, returned in the monomial basis.
    pub fn interpolate(&self, xs: &[u64], ys: &[u64]) -> PolyP {
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = self.sub(dd[i], dd[i - 1]);
                let den = self.sub(xs[i], xs[i - j]);
                dd[i] = self.mul(num, self.inv(den));
            }
        }
        let mut poly: PolyP = Vec::new();
        for i in (0..n).rev() {
            // poly = poly * (x - xs[i]) + dd[i]
            let mut next = vec![0u64; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] = self.add(next[k + 1], c);
                next[k] = self.sub(next[k], self.mul(c, xs[i]));
            }
            next[0] = self.add(next[0], dd[i]);
            trim(&mut next);
            poly = next;
        }
        poly
    }
}

pub fn trim(v: &mut PolyP) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn mul_mod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod64(r, a, m);
        }
        a = mul_mod64(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, descending. Used for multi-modular reconstruction.
pub fn large_primes() -> impl Iterator<Item = u64> {
    primes_below(1u64 << 62)
}

/// Primes below `bound` (odd, at least 4), descending.
pub fn primes_below(bound: u64) -> impl Iterator<Item = u64> {
    let mut n = (bound - 1) | 1;
    std::iter::from_fn(move || {
        while n > 3 {
            let c = n;
            n -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    })
}

/// Primes >= `from` in increasing order.
pub fn primes_from(from: u64) -> impl Iterator<Item = u64> {
    let mut n = from.max(2);
    std::iter::from_fn(move || {
        while !is_prime_u64(n) {
            n += 1;
        }
        n += 1;
        Some(n - 1)
    })
}

/// Incremental Chinese remaindering of coefficient vectors.
pub struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Crt {
    pub fn new() -> Self {
        Crt {
            modulus: BigInt::one(),
            values: Vec::new(),
        }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn bits(&self) -> u64 {
        self.modulus.bits()
    }

    /// Folds in residues modulo the prime `p`.
    pub fn add(&mut self, residues: &[u64], p: u64) {
        let zp = Zp::new(p);
        if self.values.len() < residues.len() {
            self.values.resize(residues.len(), BigInt::zero());
        }
        let m_mod_p = zp.from_bigint(&self.modulus);
        let inv = zp.inv(m_mod_p);
        for (i, v) in self.values.iter_mut().enumerate() {
            let r = *residues.get(i).unwrap_or(&0);
            let cur = zp.from_bigint(v);
            let t = zp.mul(zp.sub(r, cur), inv);
            if t != 0 {
                *v += &self.modulus * BigInt::from(t);
            }
        }
        self.modulus *= BigInt::from(p);
    }

    /// Current values in the symmetric range `(-M/2, M/2]`.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values
            .iter()
            .map(|v| {
                if v > &half {
                    v - &self.modulus
                } else {
                    v.clone()
                }
            })
            .collect()
    }
}

impl Default for Crt {
    fn default() -> Self {
        Self::new()
    }
}

/// Symmetric representative of `x` modulo `m`.
pub fn symmetric_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if (&r << 1) > *m {
        r - m
    } else {
        r
    }
}

/// Bit length of the absolute value; 0 for zero.
pub fn abs_bits(x: &BigInt) -> u64 {
    x.abs().bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_sources() {
        let ps: Vec<u64> = primes_from(5).take(5).collect();
        assert_eq!(ps, vec![5, 7, 11, 13, 17]);
        let big: Vec<u64> = large_primes().take(3).collect();
        assert!(big.iter().all(|&p| is_prime_u64(p) && p < (1 << 62)));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn resultant_matches_hand_values() {
        let f = Zp::new(1_000_003);
        // Res(x - 2, x^2 - 5) = 4 - 5 = -1
        let r = f.resultant(&[f.from_i64(-2), 1], &[f.from_i64(-5), 0, 1]);
        assert_eq!(r, f.from_i64(-1));
        // Res(x^2 + 1, x^2 + x + 1) = 1
        assert_eq!(f.resultant(&[1, 0, 1], &[1, 1, 1]), 1);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = Zp::new(101);
        let poly = vec![3, 0, 7, 1];
        let xs: Vec<u64> = (0..4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| f.eval(&poly, x)).collect();
        assert_eq!(f.interpolate(&xs, &ys), poly);
    }

    #[test]
    fn ext_gcd_identity() {
        let f = Zp::new(97);
        let a = vec![1, 0, 1];
        let b = vec![2, 1];
        let (g, s, t) = f.poly_ext_gcd(&a, &b);
        assert_eq!(g, vec![1]);
        let lhs = f.poly_add(&f.poly_mul(&s, &a), &f.poly_mul(&t, &b));
        assert_eq!(lhs, vec![1]);
    }

    #[test]
    fn crt_reconstructs_negative_values() {
        let mut crt = Crt::new();
        let vals = [BigInt::from(-123456789i64), BigInt::from(42)];
        for p in [1_000_003u64, 1_000_033] {
            let zp = Zp::new(p);
            let r: Vec<u64> = vals.iter().map(|v| zp.from_bigint(v)).collect();
            crt.add(&r, p);
        }
        assert_eq!(crt.symmetric(), vals.to_vec());
    }
}
