//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unicrit_core::dynamics::{
    dynatomic, fixed_point_parabolic, misiurewicz_poly, parabolic_param_poly, unicritical_iterate,
    Coordinate, Limits, NormalForm,
};
use unicrit_core::factor::{algebraic_norm, factor, is_irreducible, norm_of_root};
use unicrit_core::numfield::{FieldElement, MapParameter, NumberField};
use unicrit_core::poly::{divisors, resultant_univariate, BiPoly, BigRational, IntPoly};
use unicrit_core::verify::{
    sweep_thm14, sweep_thm31, verify_congruences, verify_dynamical_units, SweepBounds, Verdict,
    VerifyConfig,
};
use unicrit_raytrace::{default_candidates, land_and_match, Angle, Complex, LandingConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(s: &str) -> IntPoly {
    s.parse().expect("valid polynomial text")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, secs: u64, what: &str) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(secs), || {
        format!("{what} took {elapsed:.1?}, budget {secs} s")
    })
}

/// The five critically preperiodic cells of the quadratic family, with their expected data.
const PREPERIODIC: [(u32, u32, &str, usize, i64); 5] = [
    (1, 1, "c + 2", 1, 2),
    (1, 2, "c^2 + 1", 2, 1),
    (2, 1, "c^3 + 2*c^2 + 2*c + 2", 3, 2),
    (
        3,
        1,
        "c^7 + 4*c^6 + 6*c^5 + 6*c^4 + 6*c^3 + 4*c^2 + 2*c + 2",
        7,
        2,
    ),
    (
        1,
        4,
        "c^12 + 6*c^11 + 15*c^10 + 22*c^9 + 23*c^8 + 18*c^7 + 11*c^6 + 8*c^5 + 6*c^4 + 2*c^3 + 1",
        12,
        1,
    ),
];

fn misiurewicz_table() -> Outcome {
    let start = Instant::now();
    for (t, h, expected, _, _) in PREPERIODIC {
        let got = misiurewicz_poly(2, t, h, 2, Coordinate::C, &Limits::default())
            .map_err(|e| e.to_string())?;
        ensure(got.poly == p(expected), || {
            format!("(t,h)=({t},{h}): got {}", got.poly)
        })?;
    }
    within(start.elapsed(), 10, "five polynomials")?;
    Ok(format!("5 polynomials exact in {:.2?}", start.elapsed()))
}

fn degree_norm_table() -> Outcome {
    let mut row = Vec::new();
    for (t, h, _, degree, norm) in PREPERIODIC {
        let got = misiurewicz_poly(2, t, h, 2, Coordinate::C, &Limits::default())
            .map_err(|e| e.to_string())?;
        let nv = algebraic_norm(&got.poly).map_err(|e| e.to_string())?;
        ensure(got.degree() == degree, || {
            format!("(t,h)=({t},{h}): degree {}", got.degree())
        })?;
        ensure(nv.abs() == BigRational::from_integer(norm.into()), || {
            format!("(t,h)=({t},{h}): |Norm| = {}", nv.abs())
        })?;
        row.push(format!("{degree}/{norm}"));
    }
    Ok(format!("degree/|Norm| = {}", row.join(" ")))
}

fn parabolic_examples() -> Outcome {
    let start = Instant::now();
    let b = |h, m| {
        parabolic_param_poly(2, h, m, Coordinate::B, &Limits::default())
            .map(|q| q.poly)
            .map_err(|e| e.to_string())
    };
    let cases: [(u32, u32, &str, i64); 5] = [
        (1, 2, "b + 3", -3),
        (2, 2, "b + 5", -5),
        (3, 1, "b + 7", -7),
        (3, 1, "b^2 + b + 7", 7),
        (4, 1, "b^3 + 9*b^2 + 27*b + 135", -135),
    ];
    for (h, m, f, norm) in cases {
        let whole = b(h, m)?;
        let factors: Vec<IntPoly> = factor(&whole).irreducibles().cloned().collect();
        ensure(factors.contains(&p(f)), || {
            format!("{f} is not a factor of the (h={h}, m={m}) polynomial {whole}")
        })?;
        let nv = norm_of_root(&p(f)).map_err(|e| e.to_string())?;
        ensure(nv.as_integer() == Some(norm.into()), || {
            format!("Norm of a root of {f} is {}", nv.value)
        })?;
    }
    within(start.elapsed(), 30, "parabolic examples")?;
    Ok(format!(
        "b+3, b+5, (b+7)(b^2+b+7), b^3+9b^2+27b+135 with norms -3 -5 -7 7 -135 in {:.2?}",
        start.elapsed()
    ))
}

/// Expected landing polynomial (in c) and an independently computed root.
const RAYS: [(&str, &str, f64, f64); 8] = [
    ("1/3", "4*c + 3", -0.75, 0.0),
    ("2/5", "4*c + 5", -1.25, 0.0),
    ("3/7", "4*c + 7", -1.75, 0.0),
    ("1/7", "16*c^2 + 4*c + 7", -0.125, 0.649_519_052_838_329),
    (
        "1/5",
        "64*c^3 + 144*c^2 + 108*c + 135",
        -0.154_724_61,
        1.031_047_23,
    ),
    ("1/2", "c + 2", -2.0, 0.0),
    ("1/4", "c^3 + 2*c^2 + 2*c + 2", -0.228_155_49, 1.115_142_51),
    ("1/6", "c^2 + 1", 0.0, 1.0),
];

fn ray_concordance() -> Outcome {
    let config = LandingConfig::default();
    let bits = config.trace.precision_bits;
    let mut worst_distance = 0f64;
    let mut least_margin = f64::INFINITY;
    let mut slowest = Duration::ZERO;
    for (a, poly, re, im) in RAYS {
        let start = Instant::now();
        let angle: Angle = a.parse().map_err(|e| format!("{e}"))?;
        let candidates =
            default_candidates(2, angle, &Limits::default()).map_err(|e| e.to_string())?;
        let r = land_and_match(2, angle, &candidates, &config).map_err(|e| format!("{a}: {e}"))?;
        let elapsed = start.elapsed();
        ensure(r.candidate.poly == p(poly), || {
            format!("{a}: matched {}", r.candidate.poly)
        })?;
        let root_error = r.root.dist(&Complex::from_f64(re, im, bits), bits);
        ensure(root_error < 1e-7, || {
            format!("{a}: root {} is {root_error:e} from the reference", r.root)
        })?;
        ensure(r.distance < 1e-6, || {
            format!("{a}: distance {:e}", r.distance)
        })?;
        ensure(r.margin >= 10.0, || format!("{a}: margin {}", r.margin))?;
        within(elapsed, 10, a)?;
        worst_distance = worst_distance.max(r.distance);
        least_margin = least_margin.min(r.margin);
        slowest = slowest.max(elapsed);
    }
    Ok(format!(
        "8 angles at {bits} bits; max distance {worst_distance:.1e}, min margin {least_margin:.1e}, slowest ray {slowest:.2?}"
    ))
}

fn thm14_sweep() -> Outcome {
    let start = Instant::now();
    let s = sweep_thm14(&SweepBounds::default(), &VerifyConfig::default());
    let capped: Vec<String> = s
        .reports
        .iter()
        .filter(|r| r.verdict == Verdict::Incomplete)
        .map(|r| {
            format!(
                "(n={},h={},m={})",
                r.cell.n,
                r.cell.h.unwrap_or(0),
                r.cell.m.unwrap_or(0)
            )
        })
        .collect();
    let failed: Vec<String> = s
        .reports
        .iter()
        .filter(|r| r.failed())
        .map(|r| format!("{:?}", r.cell))
        .collect();
    ensure(failed.is_empty(), || {
        format!("violations at {}", failed.join(", "))
    })?;
    Ok(format!(
        "{} cells, {} pass, 0 violations, {} capped {} in {:.1?}",
        s.cells,
        s.passed,
        s.incomplete,
        capped.join(" "),
        start.elapsed()
    ))
}

fn thm31_sweep() -> Outcome {
    let start = Instant::now();
    let s = sweep_thm31(&SweepBounds::default(), &VerifyConfig::default());
    ensure(
        s.failed == 0 && s.incomplete == 0 && s.passed == s.cells,
        || {
            let bad: Vec<String> = s
                .reports
                .iter()
                .filter(|r| !r.passed())
                .map(|r| format!("{:?}: {:?}", r.cell, r.verdict))
                .collect();
            bad.join("; ")
        },
    )?;
    Ok(format!(
        "{} cells all pass in {:.1?}",
        s.cells,
        start.elapsed()
    ))
}

fn fixed_point_identities() -> Outcome {
    for n in 2..=6u32 {
        let power = |base: u32| BigInt::from(base).pow(n - 1);
        let bhat = IntPoly::x("bhat");
        let m1 = fixed_point_parabolic(n, 1).map_err(|e| e.to_string())?.poly;
        ensure(
            m1 == &bhat - &IntPoly::constant("bhat", power(n - 1)),
            || format!("n={n}, m=1: {m1}"),
        )?;
        let m2 = fixed_point_parabolic(n, 2).map_err(|e| e.to_string())?.poly;
        ensure(
            m2 == &bhat + &IntPoly::constant("bhat", power(n + 1)),
            || format!("n={n}, m=2: {m2}"),
        )?;
        let norm = -power(n + 1);
        ensure((power(n * n - 1) % &norm).is_zero(), || {
            format!("n={n}: {norm} does not divide")
        })?;
    }
    Ok("n = 2..6 exact; -(n+1)^(n-1) | (n^2-1)^(n-1)".into())
}

fn units_and_congruences() -> Outcome {
    let config = VerifyConfig::default();
    let mut checked = 0;
    for c in [-1i64, -2] {
        let cr = BigRational::from_integer(c.into());
        for h in 1..=4u32 {
            if h >= 2 {
                let r = verify_dynamical_units(2, &cr, h, &config);
                ensure(r.passed(), || format!("units c={c} h={h}: {:?}", r.verdict))?;
                checked += 1;
            }
            for param in [
                MapParameter::C(cr.clone()),
                MapParameter::B(BigRational::from_integer((4 * c).into())),
            ] {
                for r in verify_congruences(2, &param, h, &config) {
                    ensure(r.passed(), || {
                        format!("{:?} at {param:?} h={h}: {:?}", r.claim, r.verdict)
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checked} reports pass for c in {{-1,-2}} (b = 4c), periods 1..4"
    ))
}

fn dynatomic_product_identity() -> Result<usize, String> {
    let limits = Limits::default();
    let mut cells = 0;
    for n in 2..=3u32 {
        for h in 1..=6u32 {
            let mut product = BiPoly::one("z", "c");
            for d in divisors(h as u64) {
                let phi = dynatomic(n, d as u32, NormalForm::Unicritical, &limits)
                    .map_err(|e| e.to_string())?;
                product = &product * &phi;
            }
            let iterate = unicritical_iterate(n, h, &limits).map_err(|e| e.to_string())?;
            let expected = &iterate - &BiPoly::from_outer(&IntPoly::x("z"), "c");
            ensure(product == expected, || {
                format!("n={n}, h={h}: product differs")
            })?;
            cells += 1;
        }
    }
    Ok(cells)
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize, bound: i64) -> IntPoly {
    loop {
        let d = rng.gen_range(1..=max_degree);
        let coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-bound..=bound)).collect();
        let q = IntPoly::from_i64s("x", &coeffs);
        if q.degree().unwrap_or(0) >= 1 {
            return q;
        }
    }
}

fn resultant_multiplicativity(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for i in 0..100 {
        let f = random_poly(rng, 6, 9);
        let g = random_poly(rng, 6, 9);
        let h = random_poly(rng, 6, 9);
        let lhs = resultant_univariate(&(&f * &g), &h).map_err(|e| e.to_string())?;
        let rhs = resultant_univariate(&f, &h).map_err(|e| e.to_string())?
            * resultant_univariate(&g, &h).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || {
            format!("triple {i}: Res(fg,h) != Res(f,h)Res(g,h) for {f}; {g}; {h}")
        })?;
    }
    Ok(100)
}

fn factorization_reassembly(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for i in 0..200 {
        // half the samples are built as products so that factoring has real work to do
        let q = if i % 2 == 0 {
            random_poly(rng, 20, 50)
        } else {
            let mut acc = IntPoly::constant("x", BigInt::from(rng.gen_range(1..=6)));
            while acc.degree().unwrap_or(0) < 12 {
                let f = random_poly(rng, 5, 5);
                let times = rng.gen_range(1..=2);
                if acc.degree().unwrap_or(0) + times * f.degree().unwrap() > 20 {
                    break;
                }
                acc = &acc * &f.pow(times as u32);
            }
            acc
        };
        let f = factor(&q);
        ensure(f.reassemble() == q, || {
            format!("sample {i}: {q} does not reassemble")
        })?;
        for (g, _) in &f.factors {
            ensure(is_irreducible(g) && g.leading_coeff().is_positive(), || {
                format!("sample {i}: factor {g} of {q} is not a normalized irreducible")
            })?;
        }
    }
    Ok(200)
}

fn norm_multiplicativity(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut fields = 0;
    while fields < 40 {
        let d = rng.gen_range(1..=8usize);
        let mut coeffs: Vec<i64> = (0..d).map(|_| rng.gen_range(-7..=7)).collect();
        coeffs.push(1);
        let modulus = IntPoly::from_i64s("x", &coeffs);
        let Ok(field) = NumberField::new(&modulus) else {
            continue;
        };
        let element = |rng: &mut ChaCha8Rng| {
            let coords = (0..d)
                .map(|_| {
                    BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into())
                })
                .collect();
            FieldElement::new(&field, coords).expect("length matches degree")
        };
        for _ in 0..3 {
            let a = element(rng);
            let b = element(rng);
            ensure((&a * &b).norm() == a.norm() * b.norm(), || {
                format!("N(ab) != N(a)N(b) in Q[x]/({modulus})")
            })?;
        }
        ensure(FieldElement::from_int(&field, 1).norm().is_one(), || {
            format!("N(1) != 1 in Q[x]/({modulus})")
        })?;
        fields += 1;
    }
    Ok(fields)
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x756e_6963);
    let cells = dynatomic_product_identity()?;
    let triples = resultant_multiplicativity(&mut rng)?;
    let polys = factorization_reassembly(&mut rng)?;
    let fields = norm_multiplicativity(&mut rng)?;
    Ok(format!(
        "dynatomic products {cells} cells, resultants {triples} triples, factorizations {polys} polys, norms {fields} fields"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "preperiodic polynomials of the quadratic family",
            misiurewicz_table,
        ),
        (
            "degrees and norms of preperiodic landing points",
            degree_norm_table,
        ),
        (
            "quadratic parabolic parameters and their norms",
            parabolic_examples,
        ),
        (
            "parameter rays land on their exact candidates",
            ray_concordance,
        ),
        ("parabolic norm divisibility sweep", thm14_sweep),
        ("critically finite norm sweep", thm31_sweep),
        ("fixed-point parabolic identities", fixed_point_identities),
        (
            "dynamical units and multiplier congruences",
            units_and_congruences,
        ),
        ("exact property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {}: {name} [{detail}] ({elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {}: {name} [{why}] ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
