use leakregion::gaussian::{
    gaussian_coefficients, gaussian_rate_region, sweep_region, GaussianParams, SweepGrid,
};
use leakregion::gaussverify::{build_covariance, sample_params, verify_batch, verify_gaussian_point, GVar, SampleRanges};

#[allow(clippy::too_many_arguments)]
fn gp(p: f64, n1: f64, n2: f64, q1: f64, q2: f64, gamma: f64, rho1: f64, rho2: f64) -> GaussianParams {
    GaussianParams::new(p, n1, n2, q1, q2, gamma, rho1, rho2).unwrap()
}

fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

#[test]
fn coefficients_worked_example() {
    let c = gaussian_coefficients(&gp(1.0, 1.0, 2.0, 1.0, 1.0, 0.5, 0.5, 0.5)).unwrap();
    // P' = 0.5, β = 0.5, γP' = 0.25, (1-γ)P' = 0.25
    let expect = [0.5, 0.5, 0.25 / 1.25, 1.5 * 0.25 / 1.25, 0.5 * 0.25 / 1.25, 0.5 * 0.25 / 2.5, 1.5 * 0.25 / 2.5];
    let got = [c.beta1, c.beta2, c.alpha10, c.alpha11, c.alpha12, c.alpha21, c.alpha22];
    for (g, e) in got.iter().zip(expect) {
        assert!((g - e).abs() < 1e-15, "{got:?}");
    }
    assert!((c.alpha10 - 0.2).abs() < 1e-15 && (c.alpha22 - 0.15).abs() < 1e-15);
}

#[test]
fn costa_and_silent_user() {
    let c = gaussian_coefficients(&gp(3.0, 1.0, 2.0, 4.0, 1.0, 1.0, 0.0, 0.0)).unwrap();
    assert!((c.alpha10 - 0.75).abs() < 1e-15);
    let c = gaussian_coefficients(&gp(3.0, 1.0, 2.0, 4.0, 1.0, 0.0, 0.3, 0.2)).unwrap();
    assert_eq!([c.alpha10, c.alpha11, c.alpha12], [0.0; 3]);
}

#[test]
fn closed_form_example() {
    let q = gaussian_rate_region(&gp(1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 0.0, 0.0)).unwrap();
    assert!((q.r1 - 0.5).abs() < 1e-15);
    assert_eq!(q.r2, 0.0);
    assert!((q.e1 - half_log2(1.5)).abs() < 1e-15);
    assert!((q.e2 - half_log2(4.0 / 3.0)).abs() < 1e-15);
}

#[test]
fn covariance_entries_by_hand() {
    for i in 0..50 {
        let g = sample_params(11, i, &SampleRanges::default());
        let cm = build_covariance(&g, &gaussian_coefficients(&g).unwrap()).unwrap();
        // X = X'1 + X'2 + β1 S1 + β2 S2, Y1 = X + S1 + Z1
        let (b1, b2) = (g.rho1 * (g.p / g.q1).sqrt(), g.rho2 * (g.p / g.q2).sqrt());
        let pp = (1.0 - g.rho1 * g.rho1 - g.rho2 * g.rho2) * g.p;
        let var_y1 = pp + (b1 + 1.0).powi(2) * g.q1 + b2 * b2 * g.q2 + g.n1;
        let var_y1_closed = g.p + 2.0 * g.rho1 * (g.p * g.q1).sqrt() + g.q1 + g.n1;
        assert!((var_y1 - var_y1_closed).abs() < 1e-9);
        assert!((cm.var(GVar::Y1) - var_y1_closed).abs() < 1e-9, "sample {i}");
        assert!((cm.cov(GVar::X, GVar::S1) - g.rho1 * (g.p * g.q1).sqrt()).abs() < 1e-9);
        assert!((cm.var(GVar::X) - g.p).abs() < 1e-9);
        let m = &cm.full_cov;
        assert!((m - m.transpose()).amax() == 0.0);
        assert!(m.symmetric_eigenvalues().min() >= -1e-9);
    }
}

#[test]
fn single_branch_reduction() {
    let g = gp(2.0, 1.0, 3.0, 0.0, 0.0, 1.0, 0.0, 0.0);
    let cm = build_covariance(&g, &gaussian_coefficients(&g).unwrap()).unwrap();
    assert!((cm.var(GVar::U) - 2.0).abs() < 1e-12);
}

#[test]
fn stateless_reduction_is_bergmans() {
    let (p, n1, n2) = (2.0, 0.5, 1.5);
    for i in 0..=100 {
        let gamma = i as f64 / 100.0;
        let q = gaussian_rate_region(&gp(p, n1, n2, 0.0, 0.0, gamma, 0.0, 0.0)).unwrap();
        assert!((q.r1 - half_log2(1.0 + gamma * p / n1)).abs() <= 1e-12);
        assert!((q.r2 - half_log2(1.0 + (1.0 - gamma) * p / (gamma * p + n2))).abs() <= 1e-12);
        assert_eq!((q.e1, q.e2), (0.0, 0.0));
    }
    let front = sweep_region(&gp(p, n1, n2, 0.0, 0.0, 0.5, 0.0, 0.0), SweepGrid { gamma_steps: 11, rho_steps: 5 }).unwrap();
    assert!(front.iter().all(|pt| pt.rho1 == 0.0 && pt.rho2 == 0.0 && pt.value.e1 == 0.0));
    assert_eq!(front.len(), 11);
}

#[test]
fn dirty_paper_invariance() {
    let r: Vec<f64> = [0.0, 0.5, 1.0, 10.0]
        .iter()
        .map(|&q1| gaussian_rate_region(&gp(1.5, 0.7, 2.0, q1, 3.0, 1.0, 0.0, 0.0)).unwrap().r1)
        .collect();
    let spread = r.iter().cloned().fold(f64::MIN, f64::max) - r.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread <= 1e-12);
    assert!((r[0] - half_log2(1.0 + 1.5 / 0.7)).abs() <= 1e-12);
}

#[test]
fn rates_monotone_and_leakage_flat_in_gamma() {
    let (rho1, rho2) = (0.3, -0.4);
    let pts: Vec<_> = (0..=20)
        .map(|i| gaussian_rate_region(&gp(1.0, 1.0, 2.0, 1.0, 2.0, i as f64 / 20.0, rho1, rho2)).unwrap())
        .collect();
    for w in pts.windows(2) {
        assert!(w[1].r1 > w[0].r1 && w[1].r2 < w[0].r2);
        assert!((w[1].e1 - w[0].e1).abs() <= 1e-12 && (w[1].e2 - w[0].e2).abs() <= 1e-12);
    }
    let zero = gaussian_rate_region(&gp(1.0, 1.0, 2.0, 1.0, 2.0, 0.5, 0.0, 0.0)).unwrap();
    assert!((zero.e1 - half_log2(3.0 / 2.0)).abs() < 1e-12 && zero.e1 > 0.0);
}

#[test]
fn boundary_correlation_is_finite() {
    let rho2: f64 = 0.6;
    let q = gaussian_rate_region(&gp(1.0, 1.0, 2.0, 1.0, 1.0, 0.5, (1.0 - rho2 * rho2).sqrt(), rho2)).unwrap();
    assert!(q.e1.is_finite() && q.e2.is_finite());
    assert_eq!((q.r1, q.r2), (0.0, 0.0));
}

#[test]
fn sweep_has_no_dominated_points() {
    let base = gp(1.0, 1.0, 2.0, 1.0, 1.0, 0.5, 0.0, 0.0);
    let front = sweep_region(&base, SweepGrid { gamma_steps: 33, rho_steps: 33 }).unwrap();
    assert!(!front.is_empty());
    for (i, a) in front.iter().enumerate() {
        for (j, b) in front.iter().enumerate() {
            if i != j {
                let (x, y) = (a.value.as_array(), b.value.as_array());
                let covers = x[0] >= y[0] - 1e-12 && x[1] >= y[1] - 1e-12 && x[2] <= y[2] + 1e-12 && x[3] <= y[3] + 1e-12;
                assert!(!covers, "{a:?} covers {b:?}");
            }
        }
    }
    let single = sweep_region(&base, SweepGrid { gamma_steps: 1, rho_steps: 1 }).unwrap();
    assert_eq!(single.len(), 1);
}

#[test]
fn seeded_batch_passes() {
    let reports = verify_batch(2024, 100, &SampleRanges::default()).unwrap();
    assert_eq!(reports.len(), 100);
    for r in &reports {
        assert!(r.passed(), "{r:?}");
        assert!(r.masking1 <= 1e-9 && r.masking2 <= 1e-9);
        assert!(r.power_residual <= 1e-9);
        assert!(r.state_entropy_residual.unwrap() <= 1e-9);
    }
}

#[test]
fn degenerate_points_verify() {
    let r = verify_gaussian_point(&gp(2.0, 1.0, 3.0, 0.0, 0.0, 1.0, 0.0, 0.0)).unwrap();
    assert!(r.passed());
    assert!((r.closed_form.r1 - half_log2(3.0)).abs() < 1e-12);
    let r = verify_gaussian_point(&gp(2.0, 1.0, 3.0, 1.0, 2.0, 0.0, 0.2, 0.1)).unwrap();
    assert!(r.passed() && r.closed_form.r1 == 0.0);
    // reversed noise order goes through relabelling
    let r = verify_gaussian_point(&gp(2.0, 3.0, 1.0, 1.0, 2.0, 0.3, 0.2, 0.1)).unwrap();
    assert!(r.passed(), "{r:?}");
}
