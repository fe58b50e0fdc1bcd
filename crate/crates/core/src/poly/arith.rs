use super::IntPoly;

/// Positive divisors of `m` in increasing order.
pub fn divisors(m: u64) -> Vec<u64> {
    assert!(m >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn prime_factors(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn moebius(k: u64) -> i32 {
    assert!(k >= 1);
    let f = prime_factors(k);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1);
    prime_factors(m)
        .into_iter()
        .fold(m, |acc, (p, _)| acc / p * (p - 1))
}

/// The m-th cyclotomic polynomial in `x`, as the Möbius product of `x^d - 1`.
pub fn cyclotomic(m: u64) -> IntPoly {
    cyclotomic_in(m, "x")
}

pub(crate) fn cyclotomic_in(m: u64, var: &str) -> IntPoly {
    assert!(m >= 1);
    let binom = |d: u64| {
        let mut c = vec![0i64; d as usize + 1];
        c[0] = -1;
        c[d as usize] = 1;
        IntPoly::from_i64s(var, &c)
    };
    let mut num = IntPoly::one(var);
    let mut den = IntPoly::one(var);
    for d in divisors(m) {
        match moebius(m / d) {
            1 => num = &num * &binom(d),
            -1 => den = &den * &binom(d),
            _ => {}
        }
    }
    num.exact_div(&den).expect("Möbius product is exact")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(cyclotomic(1), IntPoly::from_i64s("x", &[-1, 1]));
        assert_eq!(cyclotomic(3), IntPoly::from_i64s("x", &[1, 1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64s("x", &[1, -1, 1]));
    }

    #[test]
    fn degree_is_phi() {
        for m in 1..=40 {
            assert_eq!(cyclotomic(m).degree(), Some(euler_phi(m) as usize));
            assert!(cyclotomic(m).is_monic());
        }
        // first cyclotomic with a coefficient outside {-1,0,1}
        assert_eq!(cyclotomic(105).height(), 2.into());
    }
}
