mod common;

use nalgebra::DMatrix;
use selectica::lasso_dt::{lambda_max, ols_on_support};
use selectica::selection::{argmax_select, contrasts, select_v1, select_v2, select_v3, LambdaRule};
use selectica::stats::RngStream;
use selectica::Error;

#[test]
fn argmax_examples() {
    assert_eq!(argmax_select(&[1.0, 3.0, 2.0]).unwrap(), 1);
    assert_eq!(argmax_select(&[5.0, 5.0, 1.0]).unwrap(), 0);
    let mut s = RngStream::new(1, 0, "argmax");
    let v: Vec<f64> = (0..100).map(|_| s.standard_normal()).collect();
    assert_eq!(argmax_select(&v).unwrap(), common::scan_argmax(&v));
}

#[test]
fn v1_null_selection_is_uniform() {
    let y = [0.0; 4];
    let mut counts = [0usize; 4];
    for r in 0..100_000 {
        let out = select_v1(&y, 1.0, &mut RngStream::new(2, r, "uniform")).unwrap();
        counts[out.index()] += 1;
    }
    for c in counts {
        assert!((c as f64 / 1e5 - 0.25).abs() < 0.01, "{counts:?}");
    }
}

#[test]
fn v1_vanishing_noise_is_plain_argmax() {
    let y = [0.1, -2.0, 3.5, 3.4, 0.0];
    let out = select_v1(&y, 1e-9, &mut RngStream::new(3, 0, "t")).unwrap();
    assert_eq!(out.index(), 2);
}

#[test]
fn v2_identity_example() {
    let x = DMatrix::<f64>::identity(3, 3);
    let out = select_v2(&[0.0, 2.0, -3.0], &x, 1e-9, &mut RngStream::new(4, 0, "t")).unwrap();
    assert_eq!(out.index(), 2);
    assert_eq!(out.sign(), Some(-1.0));
}

#[test]
fn v2_matches_brute_force() {
    for inst in 0..100 {
        let mut s = RngStream::new(5, inst, "brute");
        let n = 3 + (inst as usize % 7);
        let p = 1 + (inst as usize % 9);
        let x = common::unit_design(n, p, &mut s);
        let y: Vec<f64> = (0..n).map(|_| s.standard_normal()).collect();
        let out = select_v2(&y, &x, 0.6, &mut s).unwrap();
        let mut best = (0, f64::NEG_INFINITY);
        for j in 0..p {
            let dot: f64 = (0..n).map(|i| x[(i, j)] * y[i]).sum();
            let v = (dot + out.zeta[j]).abs();
            if v > best.1 {
                best = (j, v);
            }
        }
        assert_eq!(out.index(), best.0, "instance {inst}");
        let dot: f64 = (0..n).map(|i| x[(i, best.0)] * y[i]).sum();
        assert_eq!(out.sign(), Some((dot + out.zeta[best.0]).signum()));
    }
}

#[test]
fn v2_requires_unit_columns() {
    let x = DMatrix::from_element(3, 2, 1.0);
    let err = select_v2(&[1.0, 2.0, 3.0], &x, 1.0, &mut RngStream::new(6, 0, "t")).unwrap_err();
    assert!(matches!(err, Error::NotNormalized { column: 0, .. }));
}

#[test]
fn v3_huge_penalty_selects_nothing() {
    let mut s = RngStream::new(7, 0, "v3");
    let x = common::unit_design(30, 10, &mut s);
    let y: Vec<f64> = (0..30).map(|_| s.standard_normal()).collect();
    // y_train = y + c zeta is not known before the draw, so bound it generously
    let lambda = 2.0 * lambda_max(&x, &y) + 1e3;
    let err = select_v3(&y, &x, 1.0, 1.0, &mut s, LambdaRule::Fixed(lambda)).unwrap_err();
    assert_eq!(err, Error::EmptySelection);
}

#[test]
fn v3_zero_penalty_is_least_squares() {
    let mut s = RngStream::new(8, 0, "v3");
    let x = common::unit_design(40, 5, &mut s);
    let y: Vec<f64> = (0..40).map(|_| s.standard_normal()).collect();
    let mut replay = RngStream::new(8, 1, "sel");
    let out = select_v3(&y, &x, 0.5, 1.0, &mut replay, LambdaRule::Fixed(0.0)).unwrap();
    let y_train: Vec<f64> = y.iter().zip(&out.zeta).map(|(a, z)| a + 0.5 * z).collect();
    let ols = ols_on_support(&x, &[0, 1, 2, 3, 4], &y_train).unwrap();
    let mut want: Vec<usize> = (0..5).collect();
    want.sort_by(|&a, &b| ols.coef[b].abs().total_cmp(&ols.coef[a].abs()));
    assert_eq!(out.selected, want);
    assert_eq!(out.zeta.len(), 40);
}

#[test]
fn v3_support_is_strictly_ordered() {
    let mut s = RngStream::new(9, 0, "v3");
    let x = common::unit_design(60, 20, &mut s);
    let mu = contrasts(&x.transpose(), &(0..20).map(|j| if j < 5 { 4.0 } else { 0.0 }).collect::<Vec<_>>());
    let y: Vec<f64> = mu.iter().map(|m| m + s.standard_normal()).collect();
    let out = select_v3(&y, &x, 1.0, 1.0, &mut s, LambdaRule::cv(3)).unwrap();
    let fit = selectica::lasso_dt::lasso_fit(
        &x,
        &y.iter().zip(&out.zeta).map(|(a, z)| a + z).collect::<Vec<_>>(),
        out.lambda.unwrap(),
    )
    .unwrap();
    for w in out.selected.windows(2) {
        assert!(fit.beta[w[0]].abs() > fit.beta[w[1]].abs());
    }
}
