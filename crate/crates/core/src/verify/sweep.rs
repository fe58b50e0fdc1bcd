use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    verify_thm_1_4, verify_thm_3_1, Claim, PcfCase, Verdict, VerificationReport, VerifyConfig,
};

/// Ranges covered by a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepBounds {
    pub degrees: Vec<u32>,
    /// Largest `h * m` for the parabolic sweep.
    pub max_ray_period: u32,
    /// Largest `t + h` for Misiurewicz cells.
    pub max_orbit_length: u32,
    /// Largest period for centers.
    pub max_center_period: u32,
}

impl Default for SweepBounds {
    fn default() -> Self {
        SweepBounds {
            degrees: vec![2, 3, 4],
            max_ray_period: 6,
            max_orbit_length: 6,
            max_center_period: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub claim: Claim,
    pub cells: usize,
    pub passed: usize,
    pub failed: usize,
    pub incomplete: usize,
    pub reports: Vec<VerificationReport>,
}

impl SweepSummary {
    fn from_reports(claim: Claim, mut reports: Vec<VerificationReport>) -> Self {
        // completion order is irrelevant: merge by cell key
        reports.sort_by(|a, b| a.cell.cmp(&b.cell));
        let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
        SweepSummary {
            claim,
            cells: reports.len(),
            passed: count(Verdict::Pass),
            failed: count(Verdict::Fail),
            incomplete: count(Verdict::Incomplete),
            reports,
        }
    }

    pub fn any_failed(&self) -> bool {
        self.failed > 0
    }
}

/// Every `(n, h, m)` with `h * m <= max_ray_period`.
pub fn sweep_thm14(bounds: &SweepBounds, config: &VerifyConfig) -> SweepSummary {
    let mut cells = Vec::new();
    for &n in &bounds.degrees {
        for h in 1..=bounds.max_ray_period {
            for m in 1..=bounds.max_ray_period / h {
                cells.push((n, h, m));
            }
        }
    }
    let reports = cells
        .into_par_iter()
        .map(|(n, h, m)| verify_thm_1_4(n, h, m, config))
        .collect();
    SweepSummary::from_reports(Claim::Thm14, reports)
}

/// Misiurewicz cells with `t + h <= max_orbit_length` and every `tau | n`, `tau > 1`;
/// centers of period `2..=max_center_period`.
pub fn sweep_thm31(bounds: &SweepBounds, config: &VerifyConfig) -> SweepSummary {
    let mut cases = Vec::new();
    for &n in &bounds.degrees {
        for t in 1..bounds.max_orbit_length {
            for h in 1..=bounds.max_orbit_length - t {
                for tau in (2..=n).filter(|tau| n % tau == 0) {
                    cases.push((n, PcfCase::Misiurewicz { t, h, tau }));
                }
            }
        }
        for h in 2..=bounds.max_center_period {
            cases.push((n, PcfCase::Gleason { h }));
        }
    }
    let reports = cases
        .into_par_iter()
        .map(|(n, case)| verify_thm_3_1(n, case, config).expect("sweep cells are valid"))
        .collect();
    SweepSummary::from_reports(Claim::Thm31, reports)
}
