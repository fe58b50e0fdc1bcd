//! Parameter rays by Newton continuation in the potential.
//!
//! At potential `t` the point `c` on the ray of angle `theta` satisfies, to Böttcher accuracy,
//! `f_c^K(c) = exp((t + 2 pi i theta) n^K)`, where `K` is chosen so that `t n^K` stays in
//! `[L, nL)` and the neglected Böttcher factor is below the working precision.

use astro_float::BigFloat;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::complex::{consts, real, to_f64, Complex, RM};
use crate::RayError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub potential_start: f64,
    pub potential_end: f64,
    pub steps_per_halving: u32,
    pub precision_bits: usize,
    /// Step halvings allowed at one level before the trace is abandoned.
    pub max_retries: u32,
    pub max_newton: u32,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            potential_start: 32.0,
            potential_end: 1e-8,
            steps_per_halving: 12,
            precision_bits: 256,
            max_retries: 20,
            max_newton: 64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RayPoint {
    pub potential: f64,
    /// Iteration depth `K` used at this level.
    pub depth: u32,
    pub c: Complex,
    /// Index `k` when `potential = start * 2^(-k / steps_per_halving)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RayPath {
    pub n: u32,
    pub angle: Angle,
    pub precision_bits: usize,
    pub steps_per_halving: u32,
    pub points: Vec<RayPoint>,
}

impl RayPath {
    pub fn last(&self) -> &RayPoint {
        self.points.last().expect("a traced path has points")
    }

    pub(crate) fn grid_point(&self, k: u32) -> Option<&RayPoint> {
        self.points.iter().find(|p| p.grid == Some(k))
    }

    pub(crate) fn last_grid_index(&self) -> Option<u32> {
        self.points.iter().rev().find_map(|p| p.grid)
    }
}

/// Trace with the default retry and Newton limits.
pub fn trace_param_ray(
    n: u32,
    angle: Angle,
    potential_start: f64,
    potential_end: f64,
    steps_per_halving: u32,
    precision_bits: usize,
) -> Result<RayPath, RayError> {
    trace_with(
        n,
        angle,
        &TraceConfig {
            potential_start,
            potential_end,
            steps_per_halving,
            precision_bits,
            ..TraceConfig::default()
        },
    )
}

struct Level<'a> {
    n: u32,
    angle: Angle,
    bits: usize,
    escape_log: f64,
    config: &'a TraceConfig,
    cc: astro_float::Consts,
}

enum Solve {
    Converged(Complex),
    Diverged,
    Stalled,
}

impl Level<'_> {
    fn depth(&self, t: f64) -> u32 {
        let n = self.n as f64;
        let mut k = 0u32;
        while t * n.powi(k as i32) < self.escape_log {
            k += 1;
        }
        k
    }

    /// `exp((t + 2 pi i theta) n^K)`.
    fn target(&mut self, t: f64, k: u32) -> Complex {
        let p = self.bits;
        let nk = BigFloat::from_u64((self.n as u64).pow(k), p);
        let modulus = real(t, p).mul(&nk, p, RM).exp(p, RM, &mut self.cc);
        let phase = self.angle.times_power(self.n as u64, k);
        Complex::unit_root(phase.p(), phase.q(), p, &mut self.cc).scale(&modulus, p)
    }

    /// Newton on `f_c^K(c) - target` from `seed`.
    fn solve(&self, seed: &Complex, k: u32, target: &Complex) -> Solve {
        let p = self.bits;
        let tol = -(p as f64) + 12.0;
        let mut c = seed.clone();
        let mut last = f64::INFINITY;
        for _ in 0..self.config.max_newton {
            let (u, du) = critical_iterate(self.n, &c, k, p);
            let step = u.sub(target, p).div(&du, p);
            if !step.is_finite() {
                return Solve::Diverged;
            }
            c = c.sub(&step, p);
            let size = to_f64(&step.abs(64)).log2();
            let scale = to_f64(&c.abs(64)).max(1.0).log2();
            if size - scale < tol || step.re.is_zero() && step.im.is_zero() {
                return Solve::Converged(c);
            }
            last = size - scale;
        }
        if last < -(p as f64) / 2.0 {
            Solve::Stalled
        } else {
            Solve::Diverged
        }
    }
}

/// `u = f_c^K(c)` and `du/dc`, starting from `u_0 = c`.
pub(crate) fn critical_iterate(n: u32, c: &Complex, k: u32, p: usize) -> (Complex, Complex) {
    let mut u = c.clone();
    let mut du = Complex::one(p);
    let one = Complex::one(p);
    for _ in 0..k {
        let pw = u.powu(n - 1, p);
        du = pw.mul(&du, p).scale_u64(n as u64, p).add(&one, p);
        u = pw.mul(&u, p).add(c, p);
    }
    (u, du)
}

pub fn trace_with(n: u32, angle: Angle, config: &TraceConfig) -> Result<RayPath, RayError> {
    if n < 2 {
        return Err(RayError::InvalidArgument(format!(
            "degree n = {n} must be at least 2"
        )));
    }
    let (t0, t_end) = (config.potential_start, config.potential_end);
    if !(t0 > t_end && t_end > 0.0) {
        return Err(RayError::InvalidArgument(format!(
            "need potential_start > potential_end > 0, got {t0} and {t_end}"
        )));
    }
    if config.steps_per_halving == 0 || config.precision_bits < 64 {
        return Err(RayError::InvalidArgument(
            "steps_per_halving must be positive and precision at least 64 bits".into(),
        ));
    }
    let bits = config.precision_bits;
    let mut level = Level {
        n,
        angle,
        bits,
        // the neglected Böttcher factor is about |c| / exp(n L)
        escape_log: (bits as f64 * std::f64::consts::LN_2 + 2.0 * t0) / n as f64 + 4.0,
        config,
        cc: consts(),
    };
    let s = config.steps_per_halving as f64;
    let grid_t = |k: u32| t0 * 2f64.powf(-(k as f64) / s);

    // far out the ray is nearly the straight line of the angle
    let k0 = level.depth(t0);
    let w0 = level.target(t0, k0);
    let seed = {
        let mut cc = consts();
        Complex::unit_root(angle.p(), angle.q(), bits, &mut cc)
            .scale(&real(t0, bits).exp(bits, RM, &mut cc), bits)
    };
    let c0 = match level.solve(&seed, k0, &w0) {
        Solve::Converged(c) => c,
        Solve::Stalled => {
            return Err(RayError::PrecisionExhausted {
                bits,
                potential: t0,
            })
        }
        Solve::Diverged => return Err(RayError::NewtonDivergence { potential: t0 }),
    };
    let mut points = vec![RayPoint {
        potential: t0,
        depth: k0,
        c: c0,
        grid: Some(0),
    }];
    // (|dc|, |d log t|) of the last accepted step
    let mut last_step: Option<(f64, f64)> = None;
    let mut k = 1u32;
    loop {
        let goal_grid = grid_t(k);
        let (goal, grid) = if goal_grid > t_end * (1.0 + 1e-12) {
            (goal_grid, Some(k))
        } else {
            (t_end, None)
        };
        let mut t = points.last().expect("nonempty").potential;
        // advance from t to goal, halving the log step on rejection
        while t > goal {
            let mut t_try = goal;
            let mut retries = 0;
            loop {
                let prev = points.last().expect("nonempty");
                let depth = level.depth(t_try);
                let w = level.target(t_try, depth);
                let accepted = match level.solve(&prev.c, depth, &w) {
                    Solve::Converged(c) => {
                        let dc = c.dist(&prev.c, bits);
                        let dlog = (t / t_try).ln();
                        let continuous = match last_step {
                            Some((last_dc, last_dlog)) => {
                                dc <= 10.0 * last_dc * (dlog / last_dlog).max(1.0)
                            }
                            None => true,
                        };
                        continuous.then_some((c, dc, dlog, depth))
                    }
                    Solve::Stalled => {
                        return Err(RayError::PrecisionExhausted {
                            bits,
                            potential: t_try,
                        })
                    }
                    Solve::Diverged => None,
                };
                if let Some((c, dc, dlog, depth)) = accepted {
                    last_step = Some((dc, dlog));
                    let on_goal = t_try == goal;
                    points.push(RayPoint {
                        potential: t_try,
                        depth,
                        c,
                        grid: if on_goal { grid } else { None },
                    });
                    t = t_try;
                    break;
                }
                retries += 1;
                if retries > config.max_retries {
                    return Err(RayError::NewtonDivergence { potential: t_try });
                }
                t_try = (t * t_try).sqrt();
            }
        }
        if grid.is_none() {
            break;
        }
        k += 1;
    }
    Ok(RayPath {
        n,
        angle,
        precision_bits: bits,
        steps_per_halving: config.steps_per_halving,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn zero_ray_is_real_and_monotone() {
        let path = trace_param_ray(2, a("0/1"), 8.0, 1e-3, 6, 128).unwrap();
        let mut prev = f64::INFINITY;
        for pt in &path.points {
            let (re, im) = pt.c.to_c64();
            assert!(im.abs() < 1e-25 * re.abs().max(1.0), "{re} {im}");
            assert!(re > 0.25 && re < prev);
            prev = re;
        }
    }

    #[test]
    fn potentials_decrease() {
        let path = trace_param_ray(2, a("1/3"), 4.0, 1e-2, 4, 128).unwrap();
        assert!(path
            .points
            .windows(2)
            .all(|w| w[0].potential > w[1].potential));
        assert_eq!(path.last().potential, 1e-2);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(trace_param_ray(2, a("1/3"), 1.0, 2.0, 4, 128).is_err());
        assert!(trace_param_ray(1, a("1/3"), 2.0, 1.0, 4, 128).is_err());
    }
}
