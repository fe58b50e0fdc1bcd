use unicrit_core::numfield::MapParameter;
use unicrit_core::poly::BigRational;
use unicrit_core::verify::{
    sweep_thm14, sweep_thm31, verify_congruences, verify_thm_1_4, verify_thm_3_1, Claim, PcfCase,
    SweepBounds, Verdict, VerifyConfig,
};

fn small() -> SweepBounds {
    SweepBounds {
        degrees: vec![2, 3],
        max_ray_period: 3,
        max_orbit_length: 3,
        max_center_period: 3,
    }
}

#[test]
fn small_sweeps_pass_and_are_ordered() {
    let cfg = VerifyConfig::default();
    let s = sweep_thm14(&small(), &cfg);
    assert_eq!(s.claim, Claim::Thm14);
    // (h, m) with h*m <= 3: (1,1) (1,2) (1,3) (2,1) (3,1), for two degrees
    assert_eq!(s.cells, 10);
    assert_eq!(s.passed, 10, "{:?}", s.reports);
    assert!(s.reports.windows(2).all(|w| w[0].cell <= w[1].cell));
    let s = sweep_thm31(&small(), &cfg);
    assert!(!s.any_failed() && s.incomplete == 0 && s.cells > 0);
}

#[test]
fn reports_serialize_with_the_documented_fields() {
    let r = verify_thm_1_4(2, 1, 3, &VerifyConfig::default());
    let v = serde_json::to_value(&r).unwrap();
    for key in ["claim", "cell", "witnesses", "verdict", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["elapsed_ms"], 0);
    assert_eq!(
        serde_json::to_string(&r).unwrap(),
        serde_json::to_string(&verify_thm_1_4(2, 1, 3, &VerifyConfig::default())).unwrap()
    );
}

#[test]
fn centers_need_period_two() {
    assert!(verify_thm_3_1(2, PcfCase::Gleason { h: 1 }, &VerifyConfig::default()).is_err());
    let r = verify_thm_3_1(3, PcfCase::Gleason { h: 2 }, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn normalized_parameter_congruences() {
    let b = MapParameter::B(BigRational::from_integer((-8).into()));
    let rs = verify_congruences(2, &b, 3, &VerifyConfig::default());
    assert_eq!(rs.len(), 3);
    assert!(rs.iter().all(|r| r.passed()), "{rs:?}");
}
