//! The `unicrit` command line, as a library so that it can be driven from tests.

pub mod args;
pub mod cache;
pub mod table;

use std::ffi::OsString;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use unicrit_core::dynamics::{
    coord_transform, critical_orbit_poly, dynatomic, gleason_poly, iterate_poly_gb,
    misiurewicz_poly, parabolic_param_poly, unicritical_iterate, Coordinate, DynError, Limits,
    NormalForm, ParamPolynomial, Provenance,
};
use unicrit_core::numfield::MapParameter;
use unicrit_core::poly::{BigRational, IntPoly};
use unicrit_core::verify::{
    galois_experiment, sweep_thm14, sweep_thm31, verify_congruences, verify_dynamical_units,
    verify_monic_structure, verify_thm_1_4, verify_thm_3_1, GaloisKind, PcfCase, SweepBounds,
    VerifyConfig, VerifyError,
};
use unicrit_raytrace::{
    angle_orbit, default_candidates, land, match_landing, trace_with, Angle, LandingConfig,
    RayError, TraceConfig,
};

use args::*;
use cache::{Cache, ARTIFACT_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Exit code and the document written to standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug)]
struct CliError {
    kind: &'static str,
    detail: String,
    code: i32,
}

impl CliError {
    fn usage(detail: impl Into<String>) -> Self {
        CliError {
            kind: "usage",
            detail: detail.into(),
            code: EXIT_USAGE,
        }
    }

    fn doc(&self) -> Value {
        json!({ "error": { "kind": self.kind, "detail": self.detail } })
    }
}

impl From<DynError> for CliError {
    fn from(e: DynError) -> Self {
        let (kind, code) = match &e {
            e if e.is_cap() => ("resource_cap", EXIT_CAP),
            DynError::InvalidArgument(_) => ("invalid_argument", EXIT_USAGE),
            _ => ("internal", EXIT_FAIL),
        };
        CliError {
            kind,
            detail: e.to_string(),
            code,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError {
            kind: "invalid_argument",
            detail: e.to_string(),
            code: EXIT_USAGE,
        }
    }
}

impl From<RayError> for CliError {
    fn from(e: RayError) -> Self {
        let (kind, code) = match &e {
            RayError::InvalidAngle(_) | RayError::InvalidArgument(_) => {
                ("invalid_argument", EXIT_USAGE)
            }
            RayError::Ambiguous { .. } => ("ambiguous", EXIT_FAIL),
            RayError::NoCandidate { .. } => ("no_candidate", EXIT_FAIL),
            RayError::NewtonDivergence { .. } => ("newton_divergence", EXIT_FAIL),
            RayError::PrecisionExhausted { .. } => ("precision_exhausted", EXIT_FAIL),
            RayError::NonConvergence { .. } => ("nonconvergence", EXIT_FAIL),
            RayError::Dyn(d) => return CliError::from(d.clone()),
        };
        CliError {
            kind,
            detail: e.to_string(),
            code,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            kind: "io",
            detail: e.to_string(),
            code: EXIT_FAIL,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("documents serialize")
}

fn emit(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("documents serialize") + "\n",
        Format::Table => table::render(v),
    }
}

/// Parse and execute one command line.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                },
                _ => {
                    let err = CliError::usage(e.to_string().trim_end());
                    Outcome {
                        code: err.code,
                        stdout: emit(&err.doc(), Format::Json),
                    }
                }
            };
        }
    };
    match execute(&cli) {
        Ok((v, code)) => Outcome {
            code,
            stdout: emit(&v, cli.format),
        },
        Err(err) => Outcome {
            code: err.code,
            stdout: emit(&err.doc(), cli.format),
        },
    }
}

fn limits(l: &LimitArgs) -> Limits {
    let d = Limits::default();
    Limits {
        degree_cap: l.degree_cap.unwrap_or(d.degree_cap),
        elimination_cap: l.elimination_cap.unwrap_or(d.elimination_cap),
    }
}

fn timing_requested(cmd: &Command) -> bool {
    match cmd {
        Command::Verify(v) => match v {
            VerifyCmd::Thm14 { opts, .. }
            | VerifyCmd::Thm31 { opts, .. }
            | VerifyCmd::Monic { opts, .. }
            | VerifyCmd::Congruences { opts, .. }
            | VerifyCmd::Units { opts, .. }
            | VerifyCmd::Sweep { opts, .. } => opts.timing,
        },
        Command::Galois(g) => g.opts.timing,
        _ => false,
    }
}

fn execute(cli: &Cli) -> Result<(Value, i32), CliError> {
    let open_cache = || -> Result<Option<Cache>, CliError> {
        match &cli.cache_dir {
            Some(dir) => Ok(Some(Cache::open(dir)?)),
            None => Ok(None),
        }
    };
    if let Command::Cache(cmd) = &cli.command {
        let cache = open_cache()?
            .ok_or_else(|| CliError::usage("cache commands need --cache-dir or UNICRIT_CACHE"))?;
        let v = match cmd {
            CacheCmd::Gc { max_bytes } => to_value(&cache.gc(*max_bytes)?),
            CacheCmd::Stat => to_value(&cache.stat()?),
        };
        return Ok((v, EXIT_OK));
    }
    let limits = limits(&cli.limits);
    let cache = if timing_requested(&cli.command) {
        None
    } else {
        open_cache()?
    };
    let key = format!(
        "{ARTIFACT_VERSION}|{}",
        serde_json::to_string(&(&cli.command, &limits)).expect("requests serialize")
    );
    let cached = cache
        .as_ref()
        .and_then(|c| c.get(&key))
        .and_then(|text| serde_json::from_str::<Value>(&text).ok());
    let value = match cached {
        Some(v) => v,
        None => {
            let v = compute(&cli.command, &limits)?;
            if let Some(c) = &cache {
                // a failed write only costs a recomputation later
                let _ = c.put(
                    &key,
                    &serde_json::to_string(&v).expect("documents serialize"),
                );
            }
            v
        }
    };
    let code = exit_code(&value);
    Ok((value, code))
}

fn verdict_code(v: &str) -> i32 {
    match v {
        "pass" => EXIT_OK,
        "incomplete" => EXIT_CAP,
        _ => EXIT_FAIL,
    }
}

/// Worst outcome in a document: any failure, then any cap, then success.
fn exit_code(v: &Value) -> i32 {
    let codes: Vec<i32> = match v {
        Value::Object(o) if o.contains_key("failed") && o.contains_key("reports") => {
            // a sweep fails only on a failed cell; capped cells are reported, not fatal
            return if o["failed"].as_u64().unwrap_or(0) > 0 {
                EXIT_FAIL
            } else {
                EXIT_OK
            };
        }
        Value::Object(o) => match o.get("verdict").and_then(Value::as_str) {
            Some(verdict) => vec![verdict_code(verdict)],
            None => vec![if o.contains_key("error") {
                EXIT_FAIL
            } else {
                EXIT_OK
            }],
        },
        Value::Array(items) => items.iter().map(exit_code).collect(),
        _ => vec![EXIT_OK],
    };
    if codes.contains(&EXIT_FAIL) {
        EXIT_FAIL
    } else if codes.contains(&EXIT_CAP) {
        EXIT_CAP
    } else {
        EXIT_OK
    }
}

fn coordinate(c: CoordArg) -> Coordinate {
    match c {
        CoordArg::C => Coordinate::C,
        CoordArg::Chat => Coordinate::Chat,
        CoordArg::B => Coordinate::B,
        CoordArg::Bhat => Coordinate::Bhat,
    }
}

fn form(f: FormArg) -> NormalForm {
    match f {
        FormArg::Unicritical => NormalForm::Unicritical,
        FormArg::Normalized => NormalForm::Normalized,
        FormArg::CriticalValue => NormalForm::CriticalValue,
    }
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s.trim())
        .map_err(|_| CliError::usage(format!("not a rational number: {s:?}")))
}

fn angle(s: &str) -> Result<Angle, CliError> {
    s.parse::<Angle>().map_err(CliError::from)
}

fn verify_config(limits: &Limits, opts: &VerifyOpts) -> VerifyConfig {
    VerifyConfig {
        limits: *limits,
        factor_degree_cap: opts.factor_degree_cap,
        record_timing: opts.timing,
    }
}

fn trace_config(t: &TraceOpts) -> TraceConfig {
    TraceConfig {
        potential_start: t.potential_start,
        potential_end: t.potential_end,
        steps_per_halving: t.steps_per_halving,
        precision_bits: t.precision_bits,
        ..TraceConfig::default()
    }
}

fn compute(cmd: &Command, limits: &Limits) -> Result<Value, CliError> {
    match cmd {
        Command::Poly(p) => poly(p, limits),
        Command::Verify(v) => verify(v, limits),
        Command::Ray(r) => ray(r, limits),
        Command::Galois(g) => galois(g, limits),
        Command::Cache(_) => unreachable!("handled before dispatch"),
    }
}

fn poly(cmd: &PolyCmd, limits: &Limits) -> Result<Value, CliError> {
    Ok(match cmd {
        PolyCmd::Iterate { n, h, form: f } => match f {
            FormArg::Normalized => to_value(&iterate_poly_gb(*n, *h, limits)?),
            FormArg::Unicritical => {
                json!({ "n": n, "k": h, "poly": to_value(&unicritical_iterate(*n, *h, limits)?) })
            }
            FormArg::CriticalValue => to_value(&critical_orbit_poly(*n, *h, limits)?),
        },
        PolyCmd::Dynatomic { n, h, form: f } => {
            json!({ "n": n, "h": h, "form": to_value(&form(*f)), "poly": to_value(&dynatomic(*n, *h, form(*f), limits)?) })
        }
        PolyCmd::Gleason { n, h, coord } => {
            to_value(&gleason_poly(*n, *h, coordinate(*coord), limits)?)
        }
        PolyCmd::Misiurewicz {
            n,
            t,
            h,
            tau,
            coord,
        } => to_value(&misiurewicz_poly(
            *n,
            *t,
            *h,
            tau.unwrap_or(*n),
            coordinate(*coord),
            limits,
        )?),
        PolyCmd::Parabolic { n, h, m, coord } => to_value(&parabolic_param_poly(
            *n,
            *h,
            *m,
            coordinate(*coord),
            limits,
        )?),
        PolyCmd::Transform {
            n,
            poly,
            from,
            coord,
        } => {
            let p = IntPoly::from_str(poly).map_err(|e| CliError::usage(e.to_string()))?;
            let from = coordinate(*from);
            if p.degree().unwrap_or(0) > 0 && p.var() != from.var() {
                return Err(CliError::usage(format!(
                    "polynomial variable {:?} does not match coordinate {from}",
                    p.var()
                )));
            }
            let src = ParamPolynomial::new(p, from, *n, Provenance::Other);
            to_value(&coord_transform(&src, coordinate(*coord))?)
        }
    })
}

fn verify(cmd: &VerifyCmd, limits: &Limits) -> Result<Value, CliError> {
    Ok(match cmd {
        VerifyCmd::Thm14 { n, h, m, opts } => {
            check_family(*n, &[("h", *h), ("m", *m)])?;
            to_value(&verify_thm_1_4(*n, *h, *m, &verify_config(limits, opts)))
        }
        VerifyCmd::Thm31 { n, t, h, tau, opts } => {
            let case = match t {
                Some(t) => PcfCase::Misiurewicz {
                    t: *t,
                    h: *h,
                    tau: tau.unwrap_or(*n),
                },
                None if tau.is_some() => {
                    return Err(CliError::usage("--tau applies only with --t"))
                }
                None => PcfCase::Gleason { h: *h },
            };
            to_value(&verify_thm_3_1(*n, case, &verify_config(limits, opts))?)
        }
        VerifyCmd::Monic { n, h, opts } => {
            check_family(*n, &[("h", *h)])?;
            to_value(&verify_monic_structure(
                *n,
                *h,
                &verify_config(limits, opts),
            ))
        }
        VerifyCmd::Congruences { n, c, b, h, opts } => {
            check_family(*n, &[("h", *h)])?;
            let param = match (c, b) {
                (Some(c), None) => MapParameter::C(rational(c)?),
                (None, Some(b)) => MapParameter::B(rational(b)?),
                _ => return Err(CliError::usage("give exactly one of --c and --b")),
            };
            to_value(&verify_congruences(
                *n,
                &param,
                *h,
                &verify_config(limits, opts),
            ))
        }
        VerifyCmd::Units { n, c, h, opts } => {
            check_family(*n, &[("h", *h)])?;
            if *h < 2 {
                return Err(CliError::usage("the unit check needs period h >= 2"));
            }
            to_value(&verify_dynamical_units(
                *n,
                &rational(c)?,
                *h,
                &verify_config(limits, opts),
            ))
        }
        VerifyCmd::Sweep {
            claim,
            degrees,
            max_ray_period,
            max_orbit_length,
            max_center_period,
            opts,
        } => {
            if degrees.iter().any(|&n| n < 2) {
                return Err(CliError::usage("degrees must be at least 2"));
            }
            let bounds = SweepBounds {
                degrees: degrees.clone(),
                max_ray_period: *max_ray_period,
                max_orbit_length: *max_orbit_length,
                max_center_period: *max_center_period,
            };
            let config = verify_config(limits, opts);
            match claim {
                SweepClaim::Thm14 => to_value(&sweep_thm14(&bounds, &config)),
                SweepClaim::Thm31 => to_value(&sweep_thm31(&bounds, &config)),
            }
        }
    })
}

fn check_family(n: u32, positive: &[(&str, u32)]) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::usage(format!(
            "degree n = {n} must be at least 2"
        )));
    }
    for (name, v) in positive {
        if *v == 0 {
            return Err(CliError::usage(format!("{name} must be at least 1")));
        }
    }
    Ok(())
}

fn parse_ints(spec: &str, s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::usage(format!("bad candidate spec {spec:?}")))
}

fn candidate(n: u32, spec: &str, limits: &Limits) -> Result<ParamPolynomial, CliError> {
    let bad = || CliError::usage(format!("bad candidate spec {spec:?}"));
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    let c = Coordinate::C;
    Ok(match kind.trim() {
        "parabolic" => match parse_ints(spec, rest)?[..] {
            [h, m] => parabolic_param_poly(n, h, m, c, limits)?,
            _ => return Err(bad()),
        },
        "misiurewicz" => match parse_ints(spec, rest)?[..] {
            [t, h] => misiurewicz_poly(n, t, h, n, c, limits)?,
            [t, h, tau] => misiurewicz_poly(n, t, h, tau, c, limits)?,
            _ => return Err(bad()),
        },
        "gleason" => match parse_ints(spec, rest)?[..] {
            [h] => gleason_poly(n, h, c, limits)?,
            _ => return Err(bad()),
        },
        "poly" => {
            let p = IntPoly::from_str(rest).map_err(|e| CliError::usage(e.to_string()))?;
            ParamPolynomial::new(p, c, n, Provenance::Other)
        }
        _ => return Err(bad()),
    })
}

/// Largest `n^r - 1` enumerated by `ray angles`.
const MAX_ANGLE_DENOMINATOR: u64 = 1 << 20;

fn ray(cmd: &RayCmd, limits: &Limits) -> Result<Value, CliError> {
    Ok(match cmd {
        RayCmd::Trace { n, angle: a, trace } => {
            to_value(&trace_with(*n, angle(a)?, &trace_config(trace))?)
        }
        RayCmd::Land {
            n,
            angle: a,
            candidates,
            tolerance,
            margin,
            no_refine,
            trace,
        } => {
            let a = angle(a)?;
            check_family(*n, &[])?;
            let cands = if candidates.is_empty() {
                default_candidates(*n, a, limits)?
            } else {
                candidates
                    .iter()
                    .map(|s| candidate(*n, s, limits))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let config = LandingConfig {
                trace: trace_config(trace),
                tolerance: *tolerance,
                margin: *margin,
                refine: !no_refine,
                ..LandingConfig::default()
            };
            let landing = land(*n, a, &config)?;
            to_value(&match_landing(&landing, &cands, &config)?)
        }
        RayCmd::Angles {
            n,
            max_period,
            land: do_land,
            trace,
        } => {
            check_family(*n, &[("max-period", *max_period)])?;
            let too_big =
                || CliError::usage(format!("n^max_period exceeds {MAX_ANGLE_DENOMINATOR}"));
            let top = (*n as u64).checked_pow(*max_period).ok_or_else(too_big)?;
            if top > MAX_ANGLE_DENOMINATOR {
                return Err(too_big());
            }
            let mut angles: Vec<(Angle, u32)> = Vec::new();
            for r in 1..=*max_period {
                let q = (*n as u64).pow(r) - 1;
                for p in 0..q {
                    let a = Angle::new(p, q).expect("p < q");
                    let o = angle_orbit(a, *n as u64);
                    // the upper half plane: angles in [0, 1/2]
                    if o.period == r && 2 * a.p() <= a.q() && !angles.iter().any(|(b, _)| *b == a) {
                        angles.push((a, r));
                    }
                }
            }
            angles.sort_by(|x, y| {
                (x.1, x.0.to_f64())
                    .partial_cmp(&(y.1, y.0.to_f64()))
                    .expect("finite")
            });
            let config = LandingConfig {
                trace: trace_config(trace),
                ..LandingConfig::default()
            };
            let rows: Vec<Value> = angles
                .iter()
                .map(|(a, r)| {
                    let mut row = json!({ "angle": a.to_string(), "period": r });
                    if *do_land {
                        let result = default_candidates(*n, *a, limits)
                            .and_then(|c| match_landing(&land(*n, *a, &config)?, &c, &config));
                        match result {
                            Ok(rep) => {
                                row["candidate"] = to_value(&rep.candidate.poly);
                                row["provenance"] = to_value(&rep.candidate.provenance);
                                row["root"] = Value::String(rep.root.to_string());
                                row["distance"] = json!(rep.distance);
                            }
                            Err(e) => row["error"] = CliError::from(e).doc()["error"].clone(),
                        }
                    }
                    row
                })
                .collect();
            Value::Array(rows)
        }
    })
}

fn galois(g: &GaloisArgs, limits: &Limits) -> Result<Value, CliError> {
    check_family(g.n, &[("h", g.h)])?;
    let kind = match g.kind {
        GaloisFamily::Gleason => GaloisKind::Gleason { h: g.h },
        GaloisFamily::Misiurewicz => GaloisKind::Misiurewicz {
            t: g.t
                .ok_or_else(|| CliError::usage("misiurewicz needs --t"))?,
            h: g.h,
            tau: g.tau.unwrap_or(g.n),
        },
        GaloisFamily::Parabolic => GaloisKind::Parabolic {
            h: g.h,
            m: g.m.ok_or_else(|| CliError::usage("parabolic needs --m"))?,
        },
    };
    Ok(to_value(&galois_experiment(
        g.n,
        kind,
        &verify_config(limits, &g.opts),
    )))
}
