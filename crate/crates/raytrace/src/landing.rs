//! Landing points: extrapolate the traced ray, snap to the nearby parameter of the
//! angle's combinatorial type, and match against roots of exact candidate polynomials.

use serde::{Deserialize, Serialize};
use unicrit_core::dynamics::{
    misiurewicz_poly, parabolic_param_poly, Coordinate, Limits, ParamPolynomial,
};
use unicrit_core::factor::factor;
use unicrit_core::poly::{divisors, IntPoly};

use crate::angle::{angle_orbit, Angle, AngleOrbit};
use crate::complex::{to_f64, Complex};
use crate::roots::{complex_roots, polynomial_roots, sort_roots};
use crate::trace::{critical_iterate, trace_with, RayPath, TraceConfig};
use crate::RayError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandingConfig {
    pub trace: TraceConfig,
    /// Largest accepted distance between landing value and matched root.
    pub tolerance: f64,
    /// Required ratio of second-closest to closest candidate-root distance.
    pub margin: f64,
    /// Snap the extrapolated value to the nearest parameter of the angle's type.
    pub refine: bool,
    /// The snapped point must lie within this multiple of the extrapolation's own
    /// distance estimate.
    pub acceptance_factor: f64,
}

impl Default for LandingConfig {
    fn default() -> Self {
        LandingConfig {
            trace: TraceConfig::default(),
            tolerance: 1e-6,
            margin: 10.0,
            refine: true,
            acceptance_factor: 10.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SnapType {
    /// A period-`h` cycle with multiplier `exp(2 pi i k / m)`.
    Parabolic { h: u32, m: u32, k: u32 },
    /// The critical value has the given preperiod and a cycle length dividing `period`.
    Misiurewicz { preperiod: u32, period: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Refinement {
    #[serde(rename = "type")]
    pub snap: SnapType,
    pub point: Complex,
    /// `|point - extrapolated|`
    pub shift: f64,
    pub radius: f64,
    /// Distance from the extrapolated value to the next solution of the same type.
    pub next_solution: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Landing {
    pub n: u32,
    pub angle: Angle,
    pub orbit: AngleOrbit,
    pub potential_end: f64,
    pub ray_end: Complex,
    pub extrapolated: Complex,
    /// Disagreement of two extrapolations over different spans of the last decade.
    pub extrapolation_spread: f64,
    pub refinement: Option<Refinement>,
    /// The snapped point when accepted, otherwise the extrapolated value.
    pub value: Complex,
}

#[derive(Clone, Debug, Serialize)]
pub struct LandingReport {
    pub n: u32,
    pub angle: Angle,
    pub landing: Landing,
    pub candidate: ParamPolynomial,
    /// Index among the candidate's roots ordered by real part, then imaginary part.
    pub root_index: usize,
    pub root: Complex,
    pub distance: f64,
    pub margin: f64,
}

/// Trace the ray and estimate its landing point.
pub fn land(n: u32, angle: Angle, config: &LandingConfig) -> Result<Landing, RayError> {
    let path = trace_with(n, angle, &config.trace)?;
    let orbit = angle_orbit(angle, n as u64);
    let bits = config.trace.precision_bits;
    let ray_end = path.last().c.clone();
    let (extrapolated, spread) =
        extrapolate(&path).unwrap_or_else(|| (ray_end.clone(), f64::INFINITY));
    let mut refinement = None;
    let mut value = extrapolated.clone();
    if config.refine {
        let estimate = extrapolated
            .dist(&ray_end, bits)
            .max(if spread.is_finite() { spread } else { 0.0 });
        let radius = config.acceptance_factor * estimate;
        let mut found = snap(n, orbit, &extrapolated, bits);
        found.sort_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((snap_type, shift, point)) =
            found.first().map(|(t, d, p)| (t.clone(), *d, p.clone()))
        {
            if shift <= radius {
                value = point.clone();
            }
            refinement = Some(Refinement {
                snap: snap_type,
                point,
                shift,
                radius,
                next_solution: found.get(1).map(|s| s.1),
            });
        }
    }
    Ok(Landing {
        n,
        angle,
        orbit,
        potential_end: path.last().potential,
        ray_end,
        extrapolated,
        extrapolation_spread: spread,
        refinement,
        value,
    })
}

/// Aitken extrapolation `c(t) ~ c* + a t^beta` on the last decade of grid potentials,
/// over the full decade and over its second half; the spread is their disagreement.
fn extrapolate(path: &RayPath) -> Option<(Complex, f64)> {
    let p = path.precision_bits;
    let last = path.last_grid_index()?;
    let decade = (path.steps_per_halving as f64 * 10f64.log2()).round() as u32;
    let aitken = |span: u32| -> Option<Complex> {
        let half = span / 2;
        let k0 = last.checked_sub(2 * half)?;
        let c0 = &path.grid_point(k0)?.c;
        let c1 = &path.grid_point(k0 + half)?.c;
        let c2 = &path.grid_point(last)?.c;
        let d1 = c1.sub(c0, p);
        let d2 = c2.sub(c1, p);
        let denom = d2.sub(&d1, p);
        let est = c2.sub(&d2.sqr(p).div(&denom, p), p);
        est.is_finite().then_some(est)
    };
    let full = aitken(decade.max(2))?;
    let spread = aitken((decade / 2).max(2)).map_or(f64::INFINITY, |e| e.dist(&full, p));
    Some((full, spread))
}

/// Parameters of the angle's combinatorial type near `seed`, with their distances to it.
fn snap(n: u32, orbit: AngleOrbit, seed: &Complex, bits: usize) -> Vec<(SnapType, f64, Complex)> {
    let mut out: Vec<(SnapType, f64, Complex)> = Vec::new();
    let mut push = |t: SnapType, c: Complex| {
        let d = c.dist(seed, bits);
        if out.iter().all(|(_, _, o)| o.dist(&c, bits) > 1e-30) {
            out.push((t, d, c));
        }
    };
    if orbit.is_periodic() {
        for h in divisors(orbit.period as u64) {
            let h = h as u32;
            let m = orbit.period / h;
            for (k, c) in parabolic_near(n, h, m, seed, bits) {
                push(SnapType::Parabolic { h, m, k }, c);
            }
        }
    } else if let Some(c) = misiurewicz_near(n, orbit.preperiod, orbit.period, seed, bits) {
        push(
            SnapType::Misiurewicz {
                preperiod: orbit.preperiod,
                period: orbit.period,
            },
            c,
        );
    }
    out
}

const SEED_BITS: usize = 128;
/// Largest `n^h` for which period-`h` points are isolated as seeds.
const MAX_CYCLE_DEGREE: u64 = 1024;

/// Coefficients of `f_c^h(z) - z`, lowest degree first.
fn periodic_point_poly(n: u32, c: &Complex, h: u32, p: usize) -> Vec<Complex> {
    let mut poly = vec![Complex::zero(p), Complex::one(p)];
    for _ in 0..h {
        let mut acc = vec![Complex::one(p)];
        for _ in 0..n {
            acc = poly_mul(&acc, &poly, p);
        }
        acc[0] = acc[0].add(c, p);
        poly = acc;
    }
    poly[1] = poly[1].sub(&Complex::one(p), p);
    poly
}

fn poly_mul(a: &[Complex], b: &[Complex], p: usize) -> Vec<Complex> {
    let mut out = vec![Complex::zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.re.is_zero() && x.im.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y, p), p);
        }
    }
    out
}

/// Solutions `(k, c)` of `f_c^h(z) = z`, `(f_c^h)'(z) = exp(2 pi i k / m)` reached by Newton
/// from the period-`h` points of `f_seed` whose multiplier is near that root of unity.
fn parabolic_near(n: u32, h: u32, m: u32, seed: &Complex, bits: usize) -> Vec<(u32, Complex)> {
    if (n as u64)
        .checked_pow(h)
        .is_none_or(|d| d > MAX_CYCLE_DEGREE)
    {
        return Vec::new();
    }
    let sp = SEED_BITS;
    let seed_lo = seed.with_precision(sp);
    let Ok(points) = polynomial_roots(&periodic_point_poly(n, &seed_lo, h, sp), sp - 32) else {
        return Vec::new();
    };
    let mut cc = crate::complex::consts();
    let mut out = Vec::new();
    for k in (0..m).filter(|&k| num_integer::Integer::gcd(&k, &m) == 1) {
        let zeta = Complex::unit_root(k as u64, m as u64, bits + 32, &mut cc);
        for z in &points {
            let (_, _, lambda, _, _) = cycle_jet(n, &seed_lo, z, h, sp);
            if lambda.dist(&zeta.with_precision(sp), sp) > 0.5 {
                continue;
            }
            if let Some(c) = newton_cycle(n, h, &zeta, seed, z, bits) {
                out.push((k, c));
            }
        }
    }
    out
}

/// `(z_h, dz_h/dc, (f^h)'(z), d/dz (f^h)'(z), d/dc (f^h)'(z))` along the orbit of `z`.
fn cycle_jet(
    n: u32,
    c: &Complex,
    z0: &Complex,
    h: u32,
    p: usize,
) -> (Complex, Complex, Complex, Complex, Complex) {
    let nn = n as u64;
    let mut z = z0.clone();
    let (mut a, mut b) = (Complex::one(p), Complex::zero(p));
    let (mut aa, mut bb) = (Complex::zero(p), Complex::zero(p));
    let one = Complex::one(p);
    for _ in 0..h {
        let zn2 = z.powu(n - 2, p);
        let zn1 = zn2.mul(&z, p);
        let d1 = zn1.scale_u64(nn, p);
        let d2 = zn2.scale_u64(nn * (nn - 1), p);
        let new_aa = d2.mul(&a.sqr(p), p).add(&d1.mul(&aa, p), p);
        let new_bb = d2.mul(&a.mul(&b, p), p).add(&d1.mul(&bb, p), p);
        a = d1.mul(&a, p);
        b = d1.mul(&b, p).add(&one, p);
        aa = new_aa;
        bb = new_bb;
        z = zn1.mul(&z, p).add(c, p);
    }
    (z, b, a, aa, bb)
}

fn newton_cycle(
    n: u32,
    h: u32,
    zeta: &Complex,
    c0: &Complex,
    z0: &Complex,
    bits: usize,
) -> Option<Complex> {
    let p = bits + 32;
    let zeta = zeta.with_precision(p);
    let (mut c, mut z) = (c0.with_precision(p), z0.with_precision(p));
    let one = Complex::one(p);
    for _ in 0..100 {
        let (zh, b, a, aa, bb) = cycle_jet(n, &c, &z, h, p);
        let f1 = zh.sub(&z, p);
        let f2 = a.sub(&zeta, p);
        let j11 = a.sub(&one, p);
        let det = j11.mul(&bb, p).sub(&b.mul(&aa, p), p);
        let dz = f1.mul(&bb, p).sub(&b.mul(&f2, p), p).div(&det, p);
        let dc = j11.mul(&f2, p).sub(&aa.mul(&f1, p), p).div(&det, p);
        if !dz.is_finite() || !dc.is_finite() {
            return None;
        }
        z = z.sub(&dz, p);
        c = c.sub(&dc, p);
        let size = to_f64(&dc.abs(64)).log2();
        if size < -(bits as f64) + 4.0 || dc.re.is_zero() && dc.im.is_zero() {
            return Some(c.with_precision(bits));
        }
        if size > 4.0 {
            return None;
        }
    }
    None
}

/// Newton on `f_c^(a+r)(c) = f_c^a(c)` from `seed`.
fn misiurewicz_near(n: u32, a: u32, r: u32, seed: &Complex, bits: usize) -> Option<Complex> {
    let p = bits + 32;
    let mut c = seed.with_precision(p);
    for _ in 0..200 {
        let (ua, dua) = critical_iterate(n, &c, a, p);
        let (ur, dur) = critical_iterate(n, &c, a + r, p);
        let step = ur.sub(&ua, p).div(&dur.sub(&dua, p), p);
        if !step.is_finite() {
            return None;
        }
        c = c.sub(&step, p);
        let size = to_f64(&step.abs(64)).log2();
        if size < -(bits as f64) + 4.0 || step.re.is_zero() && step.im.is_zero() {
            return Some(c.with_precision(bits));
        }
        if size > 4.0 {
            return None;
        }
    }
    None
}

/// Exact candidates for the angle's type, in the `c` coordinate: parabolic polynomials for
/// `h m = r` when periodic, Misiurewicz polynomials with preperiod `a` and `h | r` otherwise.
pub fn default_candidates(
    n: u32,
    angle: Angle,
    limits: &Limits,
) -> Result<Vec<ParamPolynomial>, RayError> {
    let orbit = angle_orbit(angle, n as u64);
    let mut out = Vec::new();
    for h in divisors(orbit.period as u64) {
        let h = h as u32;
        if orbit.is_periodic() {
            out.push(parabolic_param_poly(
                n,
                h,
                orbit.period / h,
                Coordinate::C,
                limits,
            )?);
        } else {
            for tau in (2..=n).filter(|tau| n.is_multiple_of(*tau)) {
                out.push(misiurewicz_poly(
                    n,
                    orbit.preperiod,
                    h,
                    tau,
                    Coordinate::C,
                    limits,
                )?);
            }
        }
    }
    Ok(out)
}

/// Closest root among the irreducible factors of the candidates. Factors shared by several
/// candidates are considered once, under the first candidate's provenance.
pub fn match_landing(
    landing: &Landing,
    candidates: &[ParamPolynomial],
    config: &LandingConfig,
) -> Result<LandingReport, RayError> {
    let bits = config.trace.precision_bits;
    let mut factors: Vec<ParamPolynomial> = Vec::new();
    for cand in candidates {
        if cand.coordinate != Coordinate::C {
            return Err(RayError::InvalidArgument(format!(
                "candidates must be in the c coordinate, got {}",
                cand.coordinate
            )));
        }
        if cand.n != landing.n {
            return Err(RayError::InvalidArgument(format!(
                "candidate for degree {} offered to a degree-{} ray",
                cand.n, landing.n
            )));
        }
        for f in factor(&cand.poly).irreducibles() {
            let f: IntPoly = f.clone();
            if f.degree().unwrap_or(0) > 0 && factors.iter().all(|g| g.poly != f) {
                factors.push(ParamPolynomial::new(
                    f,
                    Coordinate::C,
                    cand.n,
                    cand.provenance,
                ));
            }
        }
    }
    let mut best: Vec<(f64, usize, usize, Complex)> = Vec::new();
    for (fi, f) in factors.iter().enumerate() {
        let mut roots = complex_roots(&f.poly, bits)?;
        sort_roots(&mut roots);
        for (ri, r) in roots.into_iter().enumerate() {
            best.push((r.dist(&landing.value, bits), fi, ri, r));
        }
    }
    best.sort_by(|a, b| a.0.total_cmp(&b.0));
    let Some((distance, fi, root_index, root)) = best.first().cloned() else {
        return Err(RayError::NoCandidate {
            distance: f64::INFINITY,
            tolerance: config.tolerance,
        });
    };
    if distance >= config.tolerance {
        return Err(RayError::NoCandidate {
            distance,
            tolerance: config.tolerance,
        });
    }
    // distances below the working precision are indistinguishable from zero
    let resolution = 2f64.powi(-(bits as i32)).max(f64::MIN_POSITIVE);
    let margin = match best.get(1) {
        Some(second) => second.0 / distance.max(resolution),
        None => f64::MAX,
    };
    if margin < config.margin {
        return Err(RayError::Ambiguous {
            distance,
            margin,
            required: config.margin,
        });
    }
    Ok(LandingReport {
        n: landing.n,
        angle: landing.angle,
        landing: landing.clone(),
        candidate: factors[fi].clone(),
        root_index,
        root,
        distance,
        margin,
    })
}

pub fn land_and_match(
    n: u32,
    angle: Angle,
    candidates: &[ParamPolynomial],
    config: &LandingConfig,
) -> Result<LandingReport, RayError> {
    let landing = land(n, angle, config)?;
    match_landing(&landing, candidates, config)
}
