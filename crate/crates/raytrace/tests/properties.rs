use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use unicrit_core::poly::IntPoly;
use unicrit_raytrace::{angle_orbit, complex_roots, trace_param_ray, Angle, Complex};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn periodic_angles_divide_power_minus_one(q in 2u64..2000, p in 1u64..2000, n in 2u64..6) {
        let p = p % q;
        let a = Angle::new(p, q).unwrap();
        let o = angle_orbit(a, n);
        prop_assert_eq!(a.times_power(n, o.preperiod + o.period), a.times_power(n, o.preperiod));
        if o.preperiod == 0 {
            let modulus = BigInt::from(n).pow(o.period) - 1u32;
            prop_assert!((modulus % a.q()).is_zero());
        } else {
            prop_assert_ne!(a.times_power(n, o.preperiod - 1), a.times_power(n, o.preperiod - 1 + o.period));
        }
        // the period is minimal
        for r in 1..o.period {
            prop_assert_ne!(a.times_power(n, o.preperiod + r), a.times_power(n, o.preperiod));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn root_sums_and_products(coeffs in prop::collection::vec(-20i64..=20, 1..9), lead in 1i64..5) {
        let mut c = coeffs;
        c.push(lead);
        let p = IntPoly::from_i64s("x", &c);
        let sf = unicrit_core::poly::squarefree_part(&p);
        prop_assume!(sf.degree().unwrap_or(0) >= 1 && !sf.constant_term().is_zero());
        let bits = 192;
        let roots = complex_roots(&sf, bits).unwrap();
        let d = sf.degree().unwrap();
        prop_assert_eq!(roots.len(), d);
        let lc = sf.leading_coeff();
        let sum = roots.iter().fold(Complex::zero(bits), |a, r| a.add(r, bits));
        let lc_c = Complex::from_f64(f64_of(&lc), 0.0, bits);
        let expected_sum = Complex::from_f64(-f64_of(&sf.coeff(d - 1)), 0.0, bits).div(&lc_c, bits);
        prop_assert!(sum.dist(&expected_sum, bits) < 1e-30);
        let prod = roots.iter().fold(Complex::one(bits), |a, r| a.mul(r, bits));
        let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
        let expected_prod = Complex::from_f64(sign * f64_of(&sf.constant_term()), 0.0, bits).div(&lc_c, bits);
        let scale = expected_prod.abs_f64().max(1.0);
        prop_assert!(prod.dist(&expected_prod, bits) < 1e-30 * scale);
    }
}

fn f64_of(x: &BigInt) -> f64 {
    x.to_string().parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn conjugate_rays_are_mirror_images(q in 3u64..40, p in 1u64..40) {
        let p = p % q;
        prop_assume!(p != 0 && 2 * p != q);
        let a = Angle::new(p, q).unwrap();
        let up = trace_param_ray(2, a, 16.0, 1e-3, 6, 128).unwrap();
        let down = trace_param_ray(2, a.conjugate(), 16.0, 1e-3, 6, 128).unwrap();
        prop_assert_eq!(up.points.len(), down.points.len());
        for (u, d) in up.points.iter().zip(&down.points) {
            prop_assert!(u.c.conj().dist(&d.c, 128) < 1e-25);
        }
    }

    #[test]
    fn rays_are_continuous(q in 3u64..40, p in 1u64..40) {
        let p = p % q;
        prop_assume!(p != 0);
        let a = Angle::new(p, q).unwrap();
        let path = trace_param_ray(2, a, 16.0, 1e-3, 8, 128).unwrap();
        let steps: Vec<f64> = path.points.windows(2).map(|w| w[0].c.dist(&w[1].c, 128)).collect();
        for w in steps.windows(2) {
            prop_assert!(w[1] <= 10.0 * w[0]);
        }
        prop_assert!(path.points.windows(2).all(|w| w[0].potential > w[1].potential));
    }
}
