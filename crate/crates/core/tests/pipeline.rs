use expsum::expsum::{approximate, cdf_from_laplace, eval_expsum, sweep, ApproxConfig, ExpSum, Objective};
use expsum::targets::{gaussian, gompertz_makeham, hockey_stick, unit_step, GompertzMakeham};
use expsum::{Error, PipelineStep};
use rug::{Complex, Float};

#[test]
fn hockey_m5_peaks_at_the_kink() {
    let (s, r) = approximate(&hockey_stick(), &ApproxConfig::new(5, 2, 0.5, 8.5)).unwrap();
    assert_eq!(s.len(), 5);
    assert!(s.is_conjugate_closed());
    assert!((r.linf_location - 1.0).abs() < 0.3, "peak at {}", r.linf_location);
    assert!(r.linf > 1e-3 && r.linf < 0.5, "linf {:e}", r.linf);
}

#[test]
fn gaussian_m24() {
    let (s, r) = approximate(&gaussian(), &ApproxConfig::new(24, 2, 6.5, 16.0)).unwrap();
    assert_eq!(s.len(), 24);
    assert!(r.l1 > 6.4e-23 / 5.0 && r.l1 < 6.4e-23 * 5.0, "l1 {:e}", r.l1);
    assert!(r.linf > 5.0e-23 / 5.0 && r.linf < 5.0e-23 * 5.0, "linf {:e}", r.linf);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
}

#[test]
fn gompertz_m14() {
    let t = gompertz_makeham(GompertzMakeham::default()).unwrap();
    let (_, r) = approximate(&t, &ApproxConfig::new(14, 2, 0.1, 0.9)).unwrap();
    assert!(r.linf > 1.5e-7 / 5.0 && r.linf < 1.5e-7 * 5.0, "linf {:e}", r.linf);
}

#[test]
fn bad_config_is_labelled() {
    let err = approximate(&gaussian(), &ApproxConfig::new(3, 6, 1.0, 2.0)).unwrap_err();
    assert!(
        matches!(
            err,
            Error::Step {
                step: PipelineStep::Config,
                ..
            }
        ),
        "{err}"
    );
    let err = approximate(&gaussian(), &ApproxConfig::new(3, 2, 2.0, 0.0)).unwrap_err();
    assert!(
        matches!(
            err,
            Error::Step {
                step: PipelineStep::Config,
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn single_point_sweep_is_approximate() {
    let t = hockey_stick();
    let cfg = ApproxConfig::new(5, 2, 0.5, 8.5);
    let out = sweep(&t, &cfg, &[0.5], &[8.5], Objective::L1).unwrap();
    assert_eq!(out.rows.len(), 1);
    assert_eq!(out.best, 0);
    let (s, r) = approximate(&t, &cfg).unwrap();
    let (bs, br) = out.best_run();
    assert_eq!(bs.to_json(None).unwrap(), s.to_json(None).unwrap());
    assert_eq!(br.l1, r.l1);
    assert_eq!(out.best_config(), cfg);
}

#[test]
fn gaussian_sweep_finds_the_reference_neighbourhood() {
    let t = gaussian();
    let base = ApproxConfig::new(12, 2, 3.5, 10.5);
    let out = sweep(&t, &base, &[3.0, 3.5, 4.0], &[10.0, 10.5, 11.0], Objective::L1).unwrap();
    assert_eq!(out.rows.len(), 9);
    let reference = out
        .rows
        .iter()
        .find(|r| r.a == 3.5 && r.b == 10.5)
        .and_then(|r| r.outcome.as_ref().ok())
        .map(|(_, r)| r.l1)
        .unwrap();
    let (_, best) = out.best_run();
    assert!(best.l1 <= reference);
    assert!(
        reference <= 3.0 * best.l1,
        "best {:e}, reference {reference:e}",
        best.l1
    );
}

#[test]
fn coefficient_cap_rejects_b78() {
    let t = hockey_stick();
    let base = ApproxConfig::new(30, 4, 0.0, 83.0);
    let out = sweep(&t, &base, &[0.0], &[78.0, 83.0], Objective::MaxCoef(100.0)).unwrap();
    assert_eq!(out.best_row().b, 83.0);
    let b78 = out.rows[0].outcome.as_ref().unwrap();
    assert!(b78.1.max_abs_c > 100.0);
}

#[test]
fn sweep_with_no_admissible_run_fails() {
    let t = hockey_stick();
    let base = ApproxConfig::new(5, 2, 0.5, 8.5);
    let err = sweep(&t, &base, &[0.5], &[8.5], Objective::MaxCoef(1e-9)).unwrap_err();
    assert!(matches!(err, Error::AllFailed));
    assert!(sweep(&t, &base, &[], &[8.5], Objective::L1).is_err());
}

fn step_sum() -> (ExpSum, f64) {
    let (s, r) = approximate(&unit_step(), &ApproxConfig::new(15, 2, 0.0, 39.0)).unwrap();
    (s, r.l1)
}

fn exp1(z: &Complex) -> expsum::Result<Complex> {
    Ok(Complex::with_val(z.prec(), z + 1u32).recip())
}

#[test]
fn cdf_of_exp1() {
    let (s, l1) = step_sum();
    // X/u has density u e^{-ux} <= u, so the error is at most u·L1.
    let u = std::f64::consts::LN_2;
    let v = cdf_from_laplace(&s, exp1, u).unwrap();
    assert!((v.raw.to_f64() - 0.5).abs() <= u * l1, "{} vs 1/2, l1 {l1:e}", v.raw);

    let v = cdf_from_laplace(&s, exp1, 200.0).unwrap();
    assert!((v.value.to_f64() - 1.0).abs() < 0.01, "{}", v.raw);
    assert!(v.value <= 1 && v.value >= 0);

    let v = cdf_from_laplace(&s, |z| Ok(Complex::with_val(z.prec(), 1)), 0.7).unwrap();
    let sum = s.coefficient_sum();
    assert_eq!(&v.raw, sum.real());
    assert!((v.raw.to_f64() - 1.0).abs() < 1e-40);
}

#[test]
fn json_round_trip_is_exact() {
    let (s, _) = approximate(&hockey_stick(), &ApproxConfig::new(6, 2, 0.5, 10.0)).unwrap();
    let manifest = serde_json::json!({"note": "x"});
    let text = s.to_json(Some(&manifest)).unwrap();
    let (back, m) = ExpSum::from_json(&text).unwrap();
    assert_eq!(m.unwrap(), manifest);
    assert_eq!(back.config(), s.config());
    assert_eq!(back.digits(), s.digits());
    for (a, b) in s.terms().iter().zip(back.terms()) {
        assert_eq!(a.c, b.c);
        assert_eq!(a.lambda, b.lambda);
    }
    let x = Float::with_val(s.bits(), 0.37);
    assert_eq!(eval_expsum(&s, &x).unwrap(), eval_expsum(&back, &x).unwrap());
}
