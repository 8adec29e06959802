//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities. Tolerances are pinned in code.

use std::time::Instant;

use qbd_core::complex::Cx;
use qbd_core::harness::{
    convergence_experiment, identity_suite, lower_bound_experiment, parse_series_spec,
    saturation_diagnostic, voronovskaja_experiment, ExperimentConfig, IdentityGrid,
};
use qbd_core::operator::{u_monomial_recurrence, DirectApplied};
use qbd_core::qcore::{q_integer, QContext};
use qbd_core::scalar::{Rat, Scalar};
use qbd_core::series::DiskSpec;
use qbd_core::voronovskaja::lq_continuity_scan;

fn rat(n: i64, d: i64) -> Rat {
    Rat::from_ratio(n, d)
}

/// Exact-identity suite over the full grid: three-path moment equality,
/// normalization, the moment recurrence, the Theta recurrences with the
/// closed-form remainder, the Stirling defining product, endpoint
/// interpolation, and the degree cap — all with exact equality.
#[test]
fn criterion_1_exact_identity_suite() {
    let start = Instant::now();
    let grid = IdentityGrid::default(); // n <= 8, m <= 8, q in {1/2,2/3,1,3/2,2}
    let report = identity_suite(&grid).expect("suite runs");
    assert!(report.passed(), "identity failures:\n{}", report.to_text());
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "identity suite took {elapsed:?}, budget 30 s"
    );
    println!(
        "criterion 1 (exact identity suite): PASS ({} checks, {:.1} s)",
        report.checks.iter().map(|c| c.cases).sum::<usize>(),
        elapsed.as_secs_f64()
    );
}

/// Closed-form anchors: the e_2 moment identity for n <= 10 and the exact
/// rescaled error 6 = 2(1+q) for f = e_2, q = 2, r = 1.
#[test]
fn criterion_2_closed_form_anchors() {
    // rational: exact equality of U(e_2) with its closed form
    for (qn, qd) in [(1i64, 2i64), (2, 3), (1, 1), (3, 2), (2, 1)] {
        let ctx = QContext::new(rat(qn, qd)).unwrap();
        for n in 1..=10usize {
            let table = u_monomial_recurrence(n, 2, &ctx).unwrap();
            let row = table.row(2).unwrap();
            let c = (Rat::from_int(1) + ctx.q().clone()) / q_integer(n + 1, &ctx);
            let expect = qbd_core::ComplexPoly::monomial(2).add(
                &qbd_core::ComplexPoly::monomial(1)
                    .sub(&qbd_core::ComplexPoly::monomial(2))
                    .scale(&c),
            );
            assert_eq!(row, expect, "q={qn}/{qd} n={n}");
        }
    }
    // float: coefficients within 1e-12 relative
    for q in [1.2f64, 1.5, 2.0] {
        let ctx = QContext::new(q).unwrap();
        for n in 1..=10usize {
            let table = u_monomial_recurrence(n, 2, &ctx).unwrap();
            let row = table.row(2).unwrap();
            let c = (1.0 + q) / q_integer(n + 1, &ctx);
            let expect = [0.0, c, 1.0 - c];
            for (j, e) in expect.iter().enumerate() {
                let got = row.coeff(j).re;
                let scale = e.abs().max(1e-30);
                assert!(
                    (got - e).abs() / scale <= 1e-12,
                    "q={q} n={n} coeff {j}: {got} vs {e}"
                );
            }
        }
    }
    // sup_err * [n+1]_q = 6 for f = e_2, q = 2, r = 1 — exact in rational
    let cfg = ExperimentConfig::new("monomial:2", Rat::from_int(2), Rat::from_int(1))
        .with_n_range(1, 16)
        .with_samples(64)
        .with_truncation(4);
    let report = convergence_experiment(&cfg).unwrap();
    for row in &report.rows {
        assert_eq!(row.err_times_qn, Rat::from_int(6), "rational n={}", row.n);
    }
    // and within 1e-12 relative in float
    let cfg = ExperimentConfig::new("monomial:2", 2.0f64, 1.0f64)
        .with_n_range(1, 16)
        .with_samples(64)
        .with_truncation(4);
    let report = convergence_experiment(&cfg).unwrap();
    for row in &report.rows {
        assert!(
            (row.err_times_qn - 6.0).abs() / 6.0 <= 1e-12,
            "float n={}: {}",
            row.n,
            row.err_times_qn
        );
    }
    println!("criterion 2 (closed-form anchors): PASS");
}

fn exp_convergence_report() -> qbd_core::report::Report<f64> {
    let cfg = ExperimentConfig::new("exp", 1.5f64, 1.0f64)
        .with_n_range(2, 16)
        .with_samples(256)
        .with_truncation(64);
    convergence_experiment(&cfg).unwrap()
}

/// Theorem 1 soundness: f = exp, q = 1.5, r = 1, n = 2..16 — the sampled
/// sup error stays below the bound row-wise with relative slack 1e-9 plus
/// the carried truncation budget, at 256 samples in under 10 s.
#[test]
fn criterion_3_theorem1_bound_soundness() {
    let start = Instant::now();
    let report = exp_convergence_report();
    let budget: f64 = report.meta("truncation_budget").unwrap().parse().unwrap();
    for row in &report.rows {
        assert!(
            row.sup_err <= row.bound * (1.0 + 1e-9) + budget,
            "n={}: sup_err {} > bound {}",
            row.n,
            row.sup_err,
            row.bound
        );
    }
    assert!(report.passing());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!(
        "criterion 3 (Theorem 1 soundness): PASS ({} rows, {:.2} s)",
        report.rows.len(),
        elapsed.as_secs_f64()
    );
}

/// Rate q^-n: geometric-mean successive-error ratio over n = 8..16 within
/// 10% of q = 1.5.
#[test]
fn criterion_4_decay_rate_q() {
    let report = exp_convergence_report();
    let err = |n: usize| -> f64 {
        report.rows.iter().find(|r| r.n == n).unwrap().sup_err
    };
    let gm = (err(8) / err(16)).powf(1.0 / 8.0);
    assert!(
        (gm - 1.5).abs() / 1.5 <= 0.10,
        "geometric-mean ratio {gm} not within 10% of 1.5"
    );
    println!("criterion 4 (decay rate): PASS (geometric-mean ratio {gm:.4})");
}

/// Theorem 2 soundness: f = exp, q = 1.2, r = 1, n = 2..16 — residual below
/// the bound row-wise, and residual * [n+1]_q^2 varies by < 25% over
/// n = 10..16.
#[test]
fn criterion_5_theorem2_soundness() {
    let cfg = ExperimentConfig::new("exp", 1.2f64, 1.0f64)
        .with_n_range(2, 16)
        .with_samples(256)
        .with_truncation(64);
    let report = voronovskaja_experiment(&cfg).unwrap();
    let budget: f64 = report.meta("truncation_budget").unwrap().parse().unwrap();
    for row in &report.rows {
        assert!(
            row.sup_err <= row.bound * (1.0 + 1e-9) + budget,
            "n={}: residual {} > bound {}",
            row.n,
            row.sup_err,
            row.bound
        );
    }
    assert!(report.passing());
    let ctx = QContext::new(1.2f64).unwrap();
    let scaled: Vec<f64> = report
        .rows
        .iter()
        .filter(|r| r.n >= 10)
        .map(|r| r.sup_err * q_integer(r.n + 1, &ctx).powu(2))
        .collect();
    let (lo, hi) = scaled
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    assert!(
        (hi - lo) / lo < 0.25,
        "residual*[n+1]^2 varies by {:.1}% over n=10..16",
        100.0 * (hi - lo) / lo
    );
    println!(
        "criterion 5 (Theorem 2 soundness): PASS (scaled residual varies {:.2}%)",
        100.0 * (hi - lo) / lo
    );
}

/// Theorem 3 floor: f = exp, q = 1.2, r = 1 — err * [n+1]_q within 5% of
/// ||L_q(exp)||_1 by n = 16 and above half that norm from the reported n_1.
#[test]
fn criterion_6_lower_bound_floor() {
    let cfg = ExperimentConfig::new("exp", 1.2f64, 1.0f64)
        .with_n_range(2, 16)
        .with_samples(256)
        .with_truncation(64);
    let report = lower_bound_experiment(&cfg).unwrap();
    assert!(report.passing(), "floor not established");
    let lq_norm: f64 = report.meta("lq_norm").unwrap().parse().unwrap();
    let n1: usize = report.meta("n1").unwrap().parse().expect("n1 reported");
    let last = report.rows.last().unwrap();
    assert_eq!(last.n, 16);
    assert!(
        (last.err_times_qn - lq_norm).abs() / lq_norm <= 0.05,
        "err*[n+1] at n=16 is {} vs ||L_q|| = {}",
        last.err_times_qn,
        lq_norm
    );
    for row in report.rows.iter().filter(|r| r.n >= n1) {
        assert!(row.err_times_qn >= lq_norm / 2.0, "floor breach at n={}", row.n);
        assert!(row.err_times_qn > 0.0);
    }
    println!(
        "criterion 6 (Theorem 3 floor): PASS (n1={n1}, err*[n+1] at n=16 within {:.2}% of ||L_q||)",
        100.0 * (last.err_times_qn - lq_norm).abs() / lq_norm
    );
}

/// Theorem 5 continuity: sup |L_q - L_1| strictly decreasing for
/// q = 1 + 10^-k, k = 3..6, with successive ratios in [5, 20]; for f = e_2
/// the distance equals 2(q-1) within 1e-10 absolute.
#[test]
fn criterion_7_lq_continuity() {
    let f = parse_series_spec::<f64>("exp", 64).unwrap();
    let disk = DiskSpec::<f64>::unit(256).unwrap();
    let qs: Vec<f64> = (3..=6).map(|k| 1.0 + 10f64.powi(-k)).collect();
    let rows = lq_continuity_scan(&f, &disk, &qs).unwrap();
    let vals: Vec<f64> = rows
        .iter()
        .map(|r| r.sup_distance.expect("hypothesis holds"))
        .collect();
    for w in vals.windows(2) {
        assert!(w[0] > w[1], "not strictly decreasing: {:?}", vals);
        let ratio = w[0] / w[1];
        assert!((5.0..=20.0).contains(&ratio), "ratio {ratio} outside [5, 20]");
    }
    let e2 = parse_series_spec::<f64>("monomial:2", 4).unwrap();
    let rows = lq_continuity_scan(&e2, &disk, &qs).unwrap();
    for (row, q) in rows.iter().zip(&qs) {
        let expect = 2.0 * (q - 1.0);
        let got = row.sup_distance.unwrap();
        assert!(
            (got - expect).abs() <= 1e-10,
            "e_2 anchor at q={q}: {got} vs {expect}"
        );
    }
    println!(
        "criterion 7 (L_q continuity): PASS (sup distances {:?})",
        vals.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()
    );
}

/// The Jackson-sum definition agrees with the moment-recurrence path to
/// 1e-10 relative for f in {e_2, e_3, exp}, n <= 8, q in {3/2, 2}, at 16
/// unit-circle points. Run in exact rational arithmetic with
/// jackson_tol = 1e-24, so truncation is the only deviation.
#[test]
fn criterion_8_direct_vs_series_oracle() {
    let tol24 = Rat::from_ratio(1, 10i64.pow(18)) * Rat::from_ratio(1, 10i64.pow(6));
    let rel = rat(1, 10_000_000_000); // 1e-10
    let rel_sq = rel.clone() * rel;
    let mut comparisons = 0usize;
    for (qn, qd) in [(3i64, 2i64), (2, 1)] {
        let ctx = QContext::new(rat(qn, qd))
            .unwrap()
            .with_jackson_tol(tol24.clone())
            .unwrap();
        for spec in ["monomial:2", "monomial:3", "exp"] {
            let trunc = if spec == "exp" { 16 } else { 4 };
            let f = parse_series_spec::<Rat>(spec, trunc).unwrap();
            for n in 1..=8usize {
                let table = u_monomial_recurrence(n, f.truncation(), &ctx).unwrap();
                let direct = DirectApplied::prepare(n, &ctx, &f).unwrap();
                for j in 0..16usize {
                    let (c, s) = <Rat as Scalar>::circle_point(j, 16, ctx.q());
                    let z = Cx::new(c, s);
                    let d = direct.eval(&z).unwrap();
                    let series = table.apply_series(&f, &z).unwrap();
                    let diff_sq = (d - series.clone()).modulus_sq();
                    let gate = rel_sq.clone() * series.modulus_sq();
                    assert!(
                        diff_sq <= gate,
                        "q={qn}/{qd} f={spec} n={n} j={j}: relative gap exceeds 1e-10"
                    );
                    comparisons += 1;
                }
            }
        }
    }
    println!(
        "criterion 8 (direct vs series oracle): PASS ({comparisons} comparisons at 1e-10 relative)"
    );
}

/// Saturation, forward direction: a linear function is reproduced with
/// identically zero error for all n <= 16 in rational mode.
#[test]
fn criterion_9_linear_reproduction() {
    let cfg = ExperimentConfig::new("poly:3,-2", Rat::from_int(2), Rat::from_int(1))
        .with_n_range(1, 16)
        .with_samples(32)
        .with_truncation(4);
    let report = saturation_diagnostic(&cfg).unwrap();
    assert!(report.passing());
    assert_eq!(report.meta("flag"), Some("linear: exact reproduction"));
    for row in &report.rows {
        assert!(row.sup_err.is_zero(), "nonzero error at n={}", row.n);
    }
    // converse diagnostic: a non-linear function keeps a positive floor
    let cfg = ExperimentConfig::new("exp", Rat::from_ratio(3, 2), Rat::from_int(1))
        .with_n_range(2, 6)
        .with_samples(32)
        .with_truncation(24);
    let report = saturation_diagnostic(&cfg).unwrap();
    assert_eq!(
        report.meta("flag"),
        Some("not linear: saturation floor detected")
    );
    println!("criterion 9 (saturation forward direction): PASS");
}
