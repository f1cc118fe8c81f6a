mod common;

use selectica::selection::select_v1;
use selectica::stats::{trunc_cdf, RealInterval, RngStream, TruncatedGaussian};
use selectica::winners_curse::{
    bias_lower_bound, classical_interval_v1, fission_interval_v1, gauss_thin_interval_v1, iw_interval_v1,
    iw_tuning_v1,
};
use selectica::IwOutcome;

const Z975: f64 = 1.959963984540054;

#[test]
fn tuning_examples() {
    let t = iw_tuning_v1(0.05, 100, 10.0).unwrap();
    let t = t.tuning().expect("finite at c = 10");
    assert!(t.adjusted_level > 0.0 && t.adjusted_level < 0.05);
    assert!(t.critical_value().unwrap().is_finite());
    assert!(iw_tuning_v1(0.05, 100, 0.05).unwrap().is_infinite());
}

#[test]
fn tuning_beats_a_brute_force_scan() {
    // the reported level is at least as good as any feasible nu on a fine grid
    let (alpha, n, c) = (0.05, 100usize, 2.0);
    let t = *iw_tuning_v1(alpha, n, c).unwrap().tuning().unwrap();
    for k in 1..2000 {
        let nu = alpha * k as f64 / 2000.0;
        let z = common::quantile_oracle(1.0 - alpha * (alpha - nu) / (2.0 * n as f64));
        let level = alpha * (1.0 - alpha + nu) * (-2.0 * z / c).exp();
        assert!(level <= t.adjusted_level * (1.0 + 1e-6), "nu = {nu}");
    }
}

#[test]
fn iw_interval_shape() {
    let y = [0.3, -1.0, 2.2, 0.9];
    let out = select_v1(&y, 3.0, &mut RngStream::new(1, 0, "t")).unwrap();
    let iv = iw_interval_v1(&y, &out, 0.05, 3.0, 1.0).unwrap();
    assert_eq!(iv.midpoint, Some(y[out.index()]));
    assert!(iv.width() >= 2.0 * Z975);
    let tiny = iw_interval_v1(&y, &out, 0.05, 1e-3, 1.0).unwrap();
    assert!(tiny.is_infinite());
}

#[test]
fn fission_round_trip() {
    let c = 0.9;
    for r in 0..200 {
        let mut s = RngStream::new(2, r, "t");
        let y: Vec<f64> = (0..10).map(|_| s.standard_normal()).collect();
        let out = select_v1(&y, c, &mut s).unwrap();
        let i = out.index();
        let iv = fission_interval_v1(&y, &out, 0.05, c, 1.0).unwrap();
        assert!(iv.lo < iv.hi);
        let delta = out.zeta[i].signum();
        let cut = y[i] + out.zeta[i];
        let support = if delta > 0.0 { RealInterval::at_most(cut) } else { RealInterval::at_least(cut) };
        let f = |a: f64| trunc_cdf(&TruncatedGaussian::new(a + delta / c, 1.0, support).unwrap(), y[i]);
        assert!((f(iv.lo) - 0.975).abs() < 1e-8);
        assert!((f(iv.hi) - 0.025).abs() < 1e-8);
    }
}

#[test]
fn fission_conditional_coverage() {
    let c = 1.5f64.sqrt();
    let (mut hit, mut total) = (0, 0);
    for r in 0..2000 {
        let mut s = RngStream::new(3, r, "t");
        let y: Vec<f64> = (0..100).map(|_| s.standard_normal()).collect();
        let out = select_v1(&y, c, &mut s).unwrap();
        if let Ok(iv) = fission_interval_v1(&y, &out, 0.05, c, 1.0) {
            total += 1;
            hit += usize::from(iv.contains(0.0));
        }
    }
    let cov = hit as f64 / total as f64;
    assert!(total >= 1990 && (0.936..=0.964).contains(&cov), "{cov} over {total}");
}

#[test]
fn fission_under_weak_selection_is_nearly_classical() {
    let mut widths = Vec::new();
    for r in 0..501 {
        let mut s = RngStream::new(4, r, "t");
        let y: Vec<f64> = (0..10).map(|_| s.standard_normal()).collect();
        let out = select_v1(&y, 100.0, &mut s).unwrap();
        widths.push(fission_interval_v1(&y, &out, 0.05, 100.0, 1.0).unwrap().width());
    }
    widths.sort_by(f64::total_cmp);
    let median = widths[250];
    assert!((median / (2.0 * Z975) - 1.0).abs() < 0.05, "median {median}");
}

#[test]
fn gauss_thin_width_and_unbiased_midpoint() {
    let reps = 100_000;
    let mut errs = Vec::with_capacity(reps);
    for r in 0..reps as u64 {
        let mut s = RngStream::new(5, r, "t");
        let y: Vec<f64> = (0..10).map(|_| s.standard_normal()).collect();
        let (_, iv) = gauss_thin_interval_v1(&y, 1.0, 1.0, 0.05, &mut s).unwrap();
        if r == 0 {
            assert!((iv.width() - 5.5437).abs() < 1e-3);
        }
        errs.push(iv.midpoint.unwrap());
    }
    let se = (common::variance(&errs) / reps as f64).sqrt();
    assert!(common::mean(&errs).abs() < 3.0 * se);
}

#[test]
fn gauss_thin_coverage() {
    let mut hit = 0;
    for r in 0..2000 {
        let mut s = RngStream::new(6, r, "t");
        let y: Vec<f64> = (0..100).map(|_| s.standard_normal()).collect();
        let (_, iv) = gauss_thin_interval_v1(&y, 0.5, 1.0, 0.05, &mut s).unwrap();
        hit += usize::from(iv.contains(0.0));
    }
    let cov = hit as f64 / 2000.0;
    assert!((0.936..=0.964).contains(&cov), "{cov}");
}

#[test]
fn bias_bound_examples() {
    assert_eq!(bias_lower_bound(1, 0.5, 1.0), 0.0);
    assert!((bias_lower_bound(100, 0.0, 1.0) - 1.0730).abs() < 1e-4);
    assert!(bias_lower_bound(100, 1e6, 1.0) < 1e-5);
}

#[test]
fn unconditional_coverage_on_a_grid_subsample() {
    for (n, c) in [(10usize, 0.5f64), (10, 2.0), (100, 1.0)] {
        let reps = 2000;
        let (mut iw, mut fi, mut gt, mut fi_total) = (0, 0, 0, 0);
        for r in 0..reps {
            let mut s = RngStream::new(7, r, &format!("n{n}c{c}"));
            let y: Vec<f64> = (0..n).map(|_| s.standard_normal()).collect();
            let out = select_v1(&y, c, &mut s).unwrap();
            iw += usize::from(iw_interval_v1(&y, &out, 0.05, c, 1.0).unwrap().contains(0.0));
            if let Ok(iv) = fission_interval_v1(&y, &out, 0.05, c, 1.0) {
                fi_total += 1;
                fi += usize::from(iv.contains(0.0));
            }
            gt += usize::from(gauss_thin_interval_v1(&y, c, 1.0, 0.05, &mut s).unwrap().1.contains(0.0));
        }
        let floor = 0.95 - 3.0 * (0.95f64 * 0.05 / reps as f64).sqrt();
        for (name, cov) in [
            ("iw", iw as f64 / reps as f64),
            ("fission", fi as f64 / fi_total as f64),
            ("gauss_thin", gt as f64 / reps as f64),
        ] {
            assert!(cov >= floor, "{name} at n = {n}, c = {c}: {cov}");
        }
    }
}

#[test]
fn classical_undercovers_at_vanishing_noise() {
    let mut hit = 0;
    for r in 0..500 {
        let mut s = RngStream::new(8, r, "t");
        let y: Vec<f64> = (0..100).map(|_| s.standard_normal()).collect();
        let out = select_v1(&y, 0.01, &mut s).unwrap();
        hit += usize::from(classical_interval_v1(&y, &out, 0.05, 1.0).unwrap().contains(0.0));
    }
    assert!(hit < 450, "{hit}");
}

#[test]
fn infinite_tuning_reports_its_log_level() {
    match iw_tuning_v1(0.05, 1000, 0.02).unwrap() {
        IwOutcome::InfiniteWidth { ln_level, .. } => assert!(ln_level < (f64::EPSILON / 2.0).ln()),
        other => panic!("expected infinite width, got {other:?}"),
    }
}
