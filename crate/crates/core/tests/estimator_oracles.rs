use nalgebra::{DMatrix, DVector};
use optibandit::estimators::{
    median_of_means, truncated_mean, truncation_threshold, GpPosteriorState, MeanVarState, RidgeState, SampleBuffer,
};
use optibandit::KernelSpec;
use proptest::prelude::*;

fn two_pass(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n } else { 0.0 };
    (mean, var)
}

// full n x n posterior over individual observations
fn naive_gp(kernel: &KernelSpec, points: &[Vec<f64>], noise: f64, obs: &[(usize, f64)]) -> (Vec<f64>, Vec<f64>) {
    let n = obs.len();
    let k = points.len();
    let kmat = DMatrix::from_fn(n, n, |i, j| {
        kernel.eval(&points[obs[i].0], &points[obs[j].0]) + if i == j { noise } else { 0.0 }
    });
    let y = DVector::from_iterator(n, obs.iter().map(|o| o.1));
    let inv = kmat.try_inverse().unwrap();
    let mut mean = Vec::new();
    let mut std = Vec::new();
    for x in 0..k {
        let kx = DVector::from_iterator(n, obs.iter().map(|o| kernel.eval(&points[x], &points[o.0])));
        mean.push((kx.transpose() * &inv * &y)[0]);
        let var = kernel.eval(&points[x], &points[x]) - (kx.transpose() * &inv * &kx)[0];
        std.push(var.max(0.0).sqrt());
    }
    (mean, std)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn welford_matches_two_pass(xs in prop::collection::vec(-1e3f64..1e3, 1..300)) {
        let mut st = MeanVarState::default();
        for &x in &xs {
            st.update(x).unwrap();
        }
        let (m, v) = two_pass(&xs);
        prop_assert!((st.mean - m).abs() <= 1e-9 * (1.0 + m.abs()));
        prop_assert!((st.variance() - v).abs() <= 1e-9 * (1.0 + v));
        prop_assert_eq!(st.count, xs.len() as u64);
    }

    #[test]
    fn prefix_median_of_means_matches_direct(
        xs in prop::collection::vec(-50.0f64..50.0, 1..200),
        k in 1usize..40,
        cut in 0.0f64..1.0,
    ) {
        let mut buf = SampleBuffer::new();
        for &x in &xs {
            buf.push(x).unwrap();
        }
        let len = ((xs.len() as f64 * cut) as usize).max(1);
        let k = k.min(len);
        let fast = buf.median_of_means_prefix(len, k).unwrap();
        let direct = median_of_means(&xs[..len], k).unwrap();
        prop_assert!((fast - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn median_of_means_is_bracketed(xs in prop::collection::vec(-50.0f64..50.0, 1..200), k in 1usize..40) {
        let k = k.min(xs.len());
        let m = median_of_means(&xs, k).unwrap();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(m >= lo - 1e-12 && m <= hi + 1e-12);
    }

    #[test]
    fn truncation_is_monotone_in_threshold(xs in prop::collection::vec(0.0f64..100.0, 1..100), a in 0.1f64..50.0, b in 0.1f64..50.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let plain = xs.iter().sum::<f64>() / xs.len() as f64;
        let t_lo = truncated_mean(&xs, lo).unwrap();
        let t_hi = truncated_mean(&xs, hi).unwrap();
        prop_assert!(t_lo <= t_hi + 1e-12);
        prop_assert!(t_hi <= plain + 1e-12);
        prop_assert!(t_lo <= lo + 1e-12);
        let flipped: Vec<f64> = xs.iter().map(|x| -x).collect();
        prop_assert!((truncated_mean(&flipped, lo).unwrap() + t_lo).abs() <= 1e-12);
        prop_assert!((truncated_mean(&xs, 1e6).unwrap() - plain).abs() <= 1e-9);
    }

    #[test]
    fn truncation_threshold_grows_with_samples(scale in 0.01f64..10.0, delta in 1e-6f64..0.5, m in 1usize..10_000) {
        prop_assert!(truncation_threshold(scale, delta, m + 1) > truncation_threshold(scale, delta, m));
    }

    #[test]
    fn ridge_matches_dense_solve(
        d in 1usize..8,
        lambda in 0.05f64..5.0,
        rows in prop::collection::vec((prop::collection::vec(-2.0f64..2.0, 8), -3.0f64..3.0), 1..400),
    ) {
        let mut ridge = RidgeState::new(d, lambda).unwrap();
        let mut v = DMatrix::<f64>::identity(d, d) * lambda;
        let mut b = DVector::<f64>::zeros(d);
        for (x, y) in &rows {
            let x = &x[..d];
            ridge.update(x, *y).unwrap();
            let xv = DVector::from_column_slice(x);
            v += &xv * xv.transpose();
            b += &xv * *y;
        }
        let theta = v.clone().lu().solve(&b).unwrap();
        prop_assert!((ridge.theta_hat() - &theta).amax() <= 1e-8);
        prop_assert!((ridge.v_inverse() - v.try_inverse().unwrap()).amax() <= 1e-8);
    }

    #[test]
    fn gp_sufficient_statistics_match_full_posterior(
        ls in 0.2f64..2.0,
        noise in 0.01f64..1.0,
        obs in prop::collection::vec((0usize..5, -2.0f64..2.0), 1..40),
    ) {
        let points: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64 * 0.3, (i as f64).sin()]).collect();
        let kernel = KernelSpec::rbf(ls, 1.0).unwrap();
        let mut gp = GpPosteriorState::new(kernel, &points, noise).unwrap();
        for &(a, y) in &obs {
            gp.update(a, y).unwrap();
        }
        let (mean, std) = naive_gp(&kernel, &points, noise, &obs);
        for x in 0..5 {
            prop_assert!((gp.posterior_mean(x) - mean[x]).abs() <= 1e-7, "mean at {}", x);
            prop_assert!((gp.posterior_std(x) - std[x]).abs() <= 1e-6, "std at {}", x);
        }
    }
}

#[test]
fn ridge_survives_many_refactorizations() {
    let d = 16;
    let mut ridge = RidgeState::new(d, 1.0).unwrap();
    let mut v = DMatrix::<f64>::identity(d, d);
    let mut b = DVector::<f64>::zeros(d);
    for step in 0..3000 {
        let x: Vec<f64> = (0..d).map(|j| ((step * 31 + j * 7) as f64 * 0.37).sin()).collect();
        let y = (step as f64 * 0.01).cos();
        ridge.update(&x, y).unwrap();
        let xv = DVector::from_column_slice(&x);
        v += &xv * xv.transpose();
        b += &xv * y;
    }
    let theta = v.lu().solve(&b).unwrap();
    assert!((ridge.theta_hat() - theta).amax() <= 1e-8);
}
