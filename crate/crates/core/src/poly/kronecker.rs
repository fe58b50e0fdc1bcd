//! Polynomial products through a single big-integer product (Kronecker substitution).

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

/// Products with both operands at least this long go through packing.
pub(crate) const THRESHOLD: usize = 12;

fn pack<'a>(
    coeffs: impl Iterator<Item = Option<&'a BigUint>>,
    len: usize,
    words: usize,
) -> BigUint {
    let mut digits = vec![0u32; len * words];
    for (i, c) in coeffs.enumerate() {
        if let Some(c) = c {
            let d = c.to_u32_digits();
            digits[i * words..i * words + d.len()].copy_from_slice(&d);
        }
    }
    BigUint::new(digits)
}

fn unpack(v: &BigUint, words: usize, len: usize) -> Vec<BigUint> {
    let d = v.to_u32_digits();
    (0..len)
        .map(|i| {
            let lo = (i * words).min(d.len());
            let hi = ((i + 1) * words).min(d.len());
            BigUint::new(d[lo..hi].to_vec())
        })
        .collect()
}

/// Splits signed coefficients into magnitudes of the positive and negative parts.
fn split(a: &[BigInt]) -> (Vec<Option<BigUint>>, Vec<Option<BigUint>>, bool) {
    let mut pos = Vec::with_capacity(a.len());
    let mut neg = Vec::with_capacity(a.len());
    let mut any_neg = false;
    for c in a {
        match c.sign() {
            Sign::Minus => {
                any_neg = true;
                pos.push(None);
                neg.push(Some(c.magnitude().clone()));
            }
            _ => {
                pos.push(Some(c.magnitude().clone()));
                neg.push(None);
            }
        }
    }
    (pos, neg, any_neg)
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let out_len = a.len() + b.len() - 1;
    let bits = |v: &[BigInt]| v.iter().map(|c| c.bits()).max().unwrap_or(0);
    let guard = (a.len().min(b.len()) as u64).ilog2() as u64 + 3;
    let slot_bits = bits(a) + bits(b) + guard;
    let words = slot_bits.div_ceil(32) as usize;
    let (ap, an, a_neg) = split(a);
    let (bp, bn, b_neg) = split(b);
    let packed = |v: &[Option<BigUint>]| pack(v.iter().map(|c| c.as_ref()), v.len(), words);
    let pa = packed(&ap);
    let pb = packed(&bp);
    // positive part: ap*bp + an*bn; negative part: ap*bn + an*bp
    let mut plus = &pa * &pb;
    let mut minus = BigUint::zero();
    if a_neg {
        let na = packed(&an);
        if b_neg {
            plus += &na * packed(&bn);
        }
        minus += &na * &pb;
    }
    if b_neg {
        minus += &pa * packed(&bn);
    }
    let plus = unpack(&plus, words, out_len);
    if minus.is_zero() {
        return plus.into_iter().map(BigInt::from).collect();
    }
    let minus = unpack(&minus, words, out_len);
    plus.into_iter()
        .zip(minus)
        .map(|(p, m)| BigInt::from(p) - BigInt::from(m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn matches_schoolbook() {
        let a: Vec<BigInt> = (0..40)
            .map(|i| BigInt::from((i * 7919 % 23) as i64 - 11) << (i % 5 * 20))
            .collect();
        let b: Vec<BigInt> = (0..33)
            .map(|i| BigInt::from((i * 104729 % 31) as i64 - 15))
            .collect();
        assert_eq!(mul(&a, &b), schoolbook(&a, &b));
        let c: Vec<BigInt> = (0..20).map(|i| BigInt::from(i as i64 + 1)).collect();
        assert_eq!(mul(&c, &c), schoolbook(&c, &c));
        assert_eq!(mul(&a, &c), schoolbook(&a, &c));
    }
}
