use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::modp::{large_primes, Crt, Zp};
use super::IntPoly;

/// Primitive gcd with positive leading coefficient, via the subresultant sequence.
pub fn gcd_subresultant(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return b.primitive_part().with_positive_lead().scale(&b.content());
    }
    if b.is_zero() {
        return a.primitive_part().with_positive_lead().scale(&a.content());
    }
    let d = a.content().gcd(&b.content());
    let (mut x, mut y) = (a.primitive_part(), b.primitive_part());
    if x.degree() < y.degree() {
        std::mem::swap(&mut x, &mut y);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = x.degree().unwrap() - y.degree().unwrap();
        let r = x.pseudo_rem(&y);
        if r.is_zero() {
            break;
        }
        if r.degree() == Some(0) {
            return IntPoly::constant(a.var(), d);
        }
        x = y;
        let div = &g * num_traits::pow(h.clone(), delta);
        y = r
            .div_scalar_exact(&div)
            .expect("subresultant division is exact");
        g = x.leading_coeff();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
    }
    y.primitive_part().with_positive_lead().scale(&d)
}

/// Same contract as [`gcd_subresultant`], computed by multi-modular reconstruction
/// with a trial-division certificate.
pub fn gcd_modular(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() || b.is_zero() || a.is_constant() || b.is_constant() {
        return gcd_subresultant(a, b);
    }
    let d = a.content().gcd(&b.content());
    let (x, y) = (a.primitive_part(), b.primitive_part());
    let lc_gcd = x.leading_coeff().gcd(&y.leading_coeff());
    let var = a.var().to_string();
    let mut crt = Crt::new();
    let mut best_deg = usize::MAX;
    let mut last: Option<IntPoly> = None;
    for p in large_primes() {
        let f = Zp::new(p);
        if f.from_bigint(&x.leading_coeff()) == 0 || f.from_bigint(&y.leading_coeff()) == 0 {
            continue;
        }
        let gp = f.poly_gcd(&f.reduce_poly(&x), &f.reduce_poly(&y));
        let deg = gp.len() - 1;
        if deg == 0 {
            return IntPoly::constant(var, d);
        }
        if deg > best_deg {
            continue;
        }
        if deg < best_deg {
            best_deg = deg;
            crt = Crt::new();
            last = None;
        }
        let scaled = f.poly_scale(&gp, f.from_bigint(&lc_gcd));
        crt.add(&scaled, p);
        let cand = IntPoly::new(var.clone(), crt.symmetric()).primitive_part();
        if (last.as_ref() == Some(&cand) || crt.bits() > 4 * 62)
            && x.exact_div(&cand).is_some()
            && y.exact_div(&cand).is_some()
        {
            return cand.with_positive_lead().scale(&d);
        }
        last = Some(cand);
    }
    unreachable!("prime supply exhausted")
}

/// Greatest common divisor: primitive, positive leading coefficient, times the gcd of contents.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    gcd_modular(a, b)
}

/// Product of the distinct irreducible factors, primitive with positive leading coefficient.
pub fn squarefree_part(a: &IntPoly) -> IntPoly {
    assert!(!a.is_zero(), "squarefree part of zero");
    let p = a.primitive_part();
    if p.is_constant() {
        return IntPoly::one(a.var());
    }
    let g = gcd(&p, &p.derivative());
    if g.is_constant() {
        return p.with_positive_lead();
    }
    p.exact_div(&g.primitive_part())
        .expect("gcd divides")
        .primitive_part()
        .with_positive_lead()
}

/// Squarefree decomposition of the primitive part: pairs `(s_i, i)` with
/// `pp(a) = ± prod s_i^i`, each `s_i` squarefree and pairwise coprime.
pub fn squarefree_decomposition(a: &IntPoly) -> Vec<(IntPoly, u32)> {
    assert!(!a.is_zero(), "squarefree decomposition of zero");
    let p = a.primitive_part();
    if p.is_constant() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut c = gcd(&p, &p.derivative()).primitive_part();
    let mut w = p.exact_div(&c).expect("gcd divides").primitive_part();
    let mut i = 1u32;
    while !w.is_constant() {
        let y = gcd(&w, &c).primitive_part();
        let z = w.exact_div(&y).expect("gcd divides").primitive_part();
        if !z.is_constant() {
            out.push((z.with_positive_lead(), i));
        }
        w = y;
        c = c.exact_div(&w).expect("gcd divides").primitive_part();
        i += 1;
    }
    out
}

pub fn is_squarefree(a: &IntPoly) -> bool {
    gcd(a, &a.derivative()).is_constant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_gcds() {
        for g in [gcd_subresultant, gcd_modular] {
            assert_eq!(g(&p("x^2 - 1"), &p("x - 1")), p("x - 1"));
            assert_eq!(g(&p("c^3 + 2*c^2 + c + 2"), &p("c + 2")), p("c + 2"));
            assert_eq!(g(&p("x^2 + 1"), &p("x^2 + x + 1")), p("1").with_var("x"));
            assert_eq!(g(&p("6*x^2 - 6"), &p("4*x + 4")), p("2*x + 2"));
        }
        assert!(gcd(&IntPoly::zero("x"), &IntPoly::zero("x")).is_zero());
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_part(&IntPoly::x("x").pow(3)), p("x"));
        let f = &p("x - 1").pow(2) * &p("x + 2");
        assert_eq!(squarefree_part(&f), &p("x - 1") * &p("x + 2"));
        let g = p("x^2 + x + 7");
        assert_eq!(squarefree_part(&g.scale(&BigInt::from(-3))), g);
    }

    #[test]
    fn decomposition_reassembles() {
        let f = &(&p("x - 1").pow(3) * &p("x^2 + 1").pow(2)) * &p("x + 5");
        let dec = squarefree_decomposition(&f);
        assert_eq!(dec.iter().map(|d| d.1).collect::<Vec<_>>(), vec![1, 2, 3]);
        let mut prod = IntPoly::one("x");
        for (s, i) in &dec {
            prod = &prod * &s.pow(*i);
        }
        assert_eq!(prod, f);
    }
}
