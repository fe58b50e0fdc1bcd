//! Frozen values for the polynomial families, checked through the public API.

use num_bigint::BigInt;
use unicrit_core::dynamics::{
    coord_transform, dynatomic, fixed_point_parabolic, gleason_poly, misiurewicz_poly,
    parabolic_param_poly, unicritical_iterate, Coordinate, Limits, NormalForm, ParamPolynomial,
};
use unicrit_core::factor::{algebraic_norm, factor, norm_of_root};
use unicrit_core::poly::{divisors, moebius, BiPoly, BigRational, IntPoly};

fn p(s: &str) -> IntPoly {
    s.parse().unwrap()
}

fn lim() -> Limits {
    Limits::default()
}

#[test]
fn quadratic_preperiodic_polynomials() {
    let cases = [
        (1, 1, "c + 2"),
        (1, 2, "c^2 + 1"),
        (2, 1, "c^3 + 2*c^2 + 2*c + 2"),
        (3, 1, "c^7 + 4*c^6 + 6*c^5 + 6*c^4 + 6*c^3 + 4*c^2 + 2*c + 2"),
        (1, 4, "c^12 + 6*c^11 + 15*c^10 + 22*c^9 + 23*c^8 + 18*c^7 + 11*c^6 + 8*c^5 + 6*c^4 + 2*c^3 + 1"),
    ];
    for (t, h, expected) in cases {
        assert_eq!(
            misiurewicz_poly(2, t, h, 2, Coordinate::C, &lim())
                .unwrap()
                .poly,
            p(expected),
            "t={t} h={h}"
        );
    }
}

#[test]
fn quadratic_centers() {
    let g = |h| gleason_poly(2, h, Coordinate::C, &lim()).unwrap().poly;
    assert_eq!(g(2), p("c + 1"));
    assert_eq!(g(3), p("c^3 + 2*c^2 + c + 1"));
    // 2^(h-1) minus the lower periods
    assert_eq!(g(4).degree(), Some(6));
    assert_eq!(g(5).degree(), Some(15));
    for h in 2..=5 {
        let n = algebraic_norm(&g(h)).unwrap();
        assert_eq!(n.abs(), BigRational::from_integer(1.into()), "h={h}");
    }
}

#[test]
fn parabolic_norms_divide_the_ray_period_base() {
    for (h, m, norm) in [(1u32, 2u32, -3i64), (2, 2, -5), (1, 3, 7)] {
        let f = parabolic_param_poly(2, h, m, Coordinate::B, &lim())
            .unwrap()
            .poly;
        let n = norm_of_root(&f).unwrap().as_integer().unwrap();
        assert_eq!(n, BigInt::from(norm));
        let r = h * m;
        let base: BigInt = BigInt::from(2).pow(r) - 1;
        assert_eq!(base.pow(f.degree().unwrap() as u32) % &n, BigInt::from(0));
    }
    let f = parabolic_param_poly(2, 4, 1, Coordinate::B, &lim())
        .unwrap()
        .poly;
    assert!(factor(&f)
        .irreducibles()
        .any(|g| *g == p("b^3 + 9*b^2 + 27*b + 135")));
}

#[test]
fn fixed_point_family() {
    for n in 2..=6u32 {
        let m1 = fixed_point_parabolic(n, 1).unwrap();
        assert_eq!(m1.coordinate, Coordinate::Bhat);
        assert_eq!(m1.poly.coeff(0), -BigInt::from(n - 1).pow(n - 1));
        assert_eq!(
            fixed_point_parabolic(n, 2).unwrap().poly.coeff(0),
            BigInt::from(n + 1).pow(n - 1)
        );
    }
}

#[test]
fn dynatomic_degrees_follow_the_moebius_count() {
    for n in 2..=3u32 {
        for h in 1..=5u32 {
            let phi = dynatomic(n, h, NormalForm::Unicritical, &lim()).unwrap();
            let expected: i64 = divisors(h as u64)
                .into_iter()
                .map(|d| moebius(h as u64 / d) as i64 * (n as i64).pow(d as u32))
                .sum();
            assert_eq!(phi.degree_in("z"), Some(expected as usize), "n={n} h={h}");
            assert!(phi.is_monic_in("z"));
        }
    }
}

#[test]
fn dynatomic_product_identity() {
    for n in 2..=3u32 {
        for h in 1..=6u32 {
            let mut product = BiPoly::one("z", "c");
            for d in divisors(h as u64) {
                product =
                    &product * &dynatomic(n, d as u32, NormalForm::Unicritical, &lim()).unwrap();
            }
            let iterate = unicritical_iterate(n, h, &lim()).unwrap();
            assert_eq!(
                product,
                &iterate - &BiPoly::from_outer(&IntPoly::x("z"), "c"),
                "n={n} h={h}"
            );
        }
    }
}

#[test]
fn coordinates_of_a_quadratic_family_agree() {
    let c = misiurewicz_poly(2, 2, 1, 2, Coordinate::C, &lim()).unwrap();
    let b = coord_transform(&c, Coordinate::B).unwrap();
    // b = 4c
    assert_eq!(b.poly, p("b^3 + 8*b^2 + 32*b + 128"));
    assert_eq!(coord_transform(&b, Coordinate::C).unwrap(), c);
    let direct = misiurewicz_poly(2, 2, 1, 2, Coordinate::B, &lim()).unwrap();
    assert_eq!(direct, b);
}

#[test]
fn caps_are_errors_not_panics() {
    let tight = Limits {
        degree_cap: 8,
        ..Limits::default()
    };
    assert!(gleason_poly(2, 6, Coordinate::C, &tight)
        .unwrap_err()
        .is_cap());
    assert!(gleason_poly(1, 2, Coordinate::C, &lim()).is_err());
}

#[test]
fn wire_form_round_trips() {
    let q = misiurewicz_poly(3, 1, 2, 3, Coordinate::Chat, &lim()).unwrap();
    let text = serde_json::to_string(&q).unwrap();
    let back: ParamPolynomial = serde_json::from_str(&text).unwrap();
    assert_eq!(back, q);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c.is_string()));
    assert_eq!(v["provenance"]["kind"], "misiurewicz");
}
