use unicrit_core::dynamics::{
    coord_transform, misiurewicz_poly, parabolic_param_poly, Coordinate, Limits, ParamPolynomial,
};
use unicrit_raytrace::{
    default_candidates, land, land_and_match, trace_param_ray, Angle, Complex, LandingConfig,
    RayError,
};

const BITS: usize = 256;

fn angle(s: &str) -> Angle {
    s.parse().unwrap()
}

fn c_poly(p: ParamPolynomial) -> ParamPolynomial {
    coord_transform(&p, Coordinate::C).unwrap()
}

fn parabolic(n: u32, h: u32, m: u32) -> ParamPolynomial {
    parabolic_param_poly(n, h, m, Coordinate::C, &Limits::default()).unwrap()
}

fn near(z: &Complex, re: f64, im: f64, tol: f64) -> bool {
    z.dist(&Complex::from_f64(re, im, BITS), BITS) < tol
}

#[test]
fn one_third_lands_at_minus_three_quarters() {
    let r = land_and_match(
        2,
        angle("1/3"),
        &[parabolic(2, 1, 2)],
        &LandingConfig::default(),
    )
    .unwrap();
    assert_eq!(r.candidate.poly.to_string(), "4*c + 3");
    assert!(near(&r.landing.value, -0.75, 0.0, 1e-60));
    assert!(r.distance < 1e-6 && r.margin >= 10.0);
}

#[test]
fn one_seventh_lands_on_the_upper_root() {
    let cands = [parabolic(2, 1, 3), parabolic(2, 3, 1)];
    let r = land_and_match(2, angle("1/7"), &cands, &LandingConfig::default()).unwrap();
    // b^2 + b + 7 in the c coordinate (b = 4c)
    assert_eq!(r.candidate.poly.to_string(), "16*c^2 + 4*c + 7");
    let im = 3.0 * 3f64.sqrt() / 8.0;
    assert!(near(&r.root, -0.125, im, 1e-12));
    assert!(r.root.to_c64().1 > 0.0);
}

#[test]
fn one_fifth_lands_on_the_cubic() {
    let r = land_and_match(
        2,
        angle("1/5"),
        &[parabolic(2, 4, 1)],
        &LandingConfig::default(),
    )
    .unwrap();
    // b^3 + 9 b^2 + 27 b + 135 with b = 4c; root computed independently
    assert_eq!(
        r.candidate.poly.to_string(),
        "64*c^3 + 144*c^2 + 108*c + 135"
    );
    assert!(near(&r.root, -0.15472461, 1.03104723, 1e-7));
}

#[test]
fn preperiodic_landings() {
    let limits = Limits::default();
    let quarter = [misiurewicz_poly(2, 2, 1, 2, Coordinate::C, &limits).unwrap()];
    let r = land_and_match(2, angle("1/4"), &quarter, &LandingConfig::default()).unwrap();
    assert_eq!(r.candidate.poly.to_string(), "c^3 + 2*c^2 + 2*c + 2");
    assert!(near(&r.root, -0.22815549, 1.11514251, 1e-7));

    let half = default_candidates(2, angle("1/2"), &limits).unwrap();
    let r = land_and_match(2, angle("1/2"), &half, &LandingConfig::default()).unwrap();
    assert_eq!(r.candidate.poly.to_string(), "c + 2");

    let sixth = default_candidates(2, angle("1/6"), &limits).unwrap();
    let r = land_and_match(2, angle("1/6"), &sixth, &LandingConfig::default()).unwrap();
    assert!(near(&r.root, 0.0, 1.0, 1e-60));
}

#[test]
fn raw_ray_approaches_parabolic_point_slowly() {
    // rays to parabolic parameters converge only logarithmically in the potential;
    // the snapped landing is what reaches the root
    let path = trace_param_ray(2, angle("1/3"), 32.0, 1e-6, 12, BITS).unwrap();
    let target = Complex::from_f64(-0.75, 0.0, BITS);
    let d: Vec<f64> = path
        .points
        .iter()
        .map(|p| p.c.dist(&target, BITS))
        .collect();
    let tail = &d[d.len() - 60..];
    assert!(tail.windows(2).all(|w| w[1] < w[0]));
    assert!(*d.last().unwrap() < 0.2);
    let config = LandingConfig {
        trace: unicrit_raytrace::TraceConfig {
            potential_end: 1e-6,
            ..Default::default()
        },
        ..Default::default()
    };
    let l = land(2, angle("1/3"), &config).unwrap();
    assert!(near(&l.value, -0.75, 0.0, 1e-3));
}

#[test]
fn conjugate_angles_land_on_conjugate_roots() {
    let cands = [parabolic(2, 1, 3), parabolic(2, 3, 1)];
    let config = LandingConfig::default();
    let a = land_and_match(2, angle("1/7"), &cands, &config).unwrap();
    let b = land_and_match(2, angle("6/7"), &cands, &config).unwrap();
    assert!(a.root.conj().dist(&b.root, BITS) < 1e-60);
    // 1/7 and 2/7 bound the same satellite and share its root
    let c = land_and_match(2, angle("2/7"), &cands, &config).unwrap();
    assert!(a.root.dist(&c.root, BITS) < 1e-60);
}

#[test]
fn misiurewicz_candidates_do_not_match_a_parabolic_ray() {
    let limits = Limits::default();
    let wrong = [misiurewicz_poly(2, 1, 1, 2, Coordinate::C, &limits).unwrap()];
    let err = land_and_match(2, angle("1/3"), &wrong, &LandingConfig::default()).unwrap_err();
    assert!(matches!(err, RayError::NoCandidate { .. }), "{err:?}");
}

#[test]
fn candidates_must_use_the_c_coordinate() {
    let limits = Limits::default();
    let chat = parabolic_param_poly(2, 1, 2, Coordinate::Chat, &limits).unwrap();
    assert!(matches!(
        land_and_match(
            2,
            angle("1/3"),
            std::slice::from_ref(&chat),
            &LandingConfig::default()
        ),
        Err(RayError::InvalidArgument(_))
    ));
    assert_eq!(c_poly(chat).poly.to_string(), "4*c + 3");
}

#[test]
fn higher_degree_rays() {
    let limits = Limits::default();
    let config = LandingConfig::default();
    // z^3 + c: the 1/2 ray lands at the cusp -2/(3 sqrt 3)
    let r = land_and_match(
        3,
        angle("1/2"),
        &default_candidates(3, angle("1/2"), &limits).unwrap(),
        &config,
    )
    .unwrap();
    assert_eq!(r.candidate.poly.to_string(), "27*c^2 - 4");
    assert!(near(&r.root, -2.0 / 27f64.sqrt(), 0.0, 1e-12));
    let r = land_and_match(
        4,
        angle("1/4"),
        &default_candidates(4, angle("1/4"), &limits).unwrap(),
        &config,
    )
    .unwrap();
    assert_eq!(r.candidate.poly.to_string(), "c^6 + 2*c^3 + 2");
}

#[test]
fn landing_report_wire_form() {
    let r = land_and_match(
        2,
        angle("1/2"),
        &[parabolic(2, 1, 1)],
        &LandingConfig::default(),
    );
    assert!(r.is_err());
    let r = land_and_match(
        2,
        angle("1/2"),
        &default_candidates(2, angle("1/2"), &Limits::default()).unwrap(),
        &LandingConfig::default(),
    )
    .unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["angle"]["p"], 1);
    assert_eq!(v["candidate"]["coordinate"], "c");
    assert_eq!(v["root"]["bits"], 256);
    assert!(v["root"]["re"].as_str().unwrap().starts_with("-2"));
}
