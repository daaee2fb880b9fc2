use latentgeom::geometry::{
    angle_between, lerp, path_profile, slerp, Path, PathKind, EPS_ANGLE,
};
use latentgeom::numerics::RngStream;
use latentgeom::priors::{LatentPrior, LatentVector};
use latentgeom::verify::mean_and_std_error;
use proptest::prelude::*;

fn vec_strategy(d: usize) -> impl Strategy<Value = LatentVector> {
    prop::collection::vec(-10.0f64..10.0, d).prop_filter_map("non-zero", |v| {
        let z = LatentVector::new(v).ok()?;
        (z.norm() > 1e-3).then_some(z)
    })
}

fn pair_strategy() -> impl Strategy<Value = (LatentVector, LatentVector)> {
    (1usize..12).prop_flat_map(|d| (vec_strategy(d), vec_strategy(d)))
}

fn not_degenerate(a: &LatentVector, b: &LatentVector) -> bool {
    angle_between(a, b).map(|(th, s)| s >= 1e-3 && th < 3.0).unwrap_or(false)
}

proptest! {
    #[test]
    fn lerp_is_symmetric((a, b) in pair_strategy(), t in 0.0f64..=1.0) {
        let x = lerp(&a, &b, t).unwrap();
        let y = lerp(&b, &a, t).unwrap();
        for i in 0..a.dim() {
            let scale = a[i].abs() + b[i].abs() + 1.0;
            prop_assert!((x[i] + y[i] - a[i] - b[i]).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn slerp_hits_endpoints((a, b) in pair_strategy()) {
        prop_assume!(not_degenerate(&a, &b));
        let h0 = slerp(&a, &b, 0.0).unwrap();
        let h1 = slerp(&a, &b, 1.0).unwrap();
        for i in 0..a.dim() {
            prop_assert!((h0[i] - a[i]).abs() < 1e-10);
            prop_assert!((h1[i] - b[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn slerp_norm_is_bounded_within_a_right_angle((a, b) in pair_strategy(), t in 0.0f64..=1.0) {
        prop_assume!(not_degenerate(&a, &b));
        prop_assume!(a.dot(&b) >= 0.0);
        let n = slerp(&a, &b, t).unwrap().norm();
        let (lo, hi) = (a.norm().min(b.norm()), a.norm().max(b.norm()));
        prop_assert!(n >= lo * (1.0 - 1e-12) && n <= hi * (1.0 + 1e-12), "{lo} ≤ {n} ≤ {hi}");
    }

    #[test]
    fn slerp_follows_the_great_circle(
        (a, b) in pair_strategy(), t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0,
    ) {
        prop_assume!(not_degenerate(&a, &b));
        let unit = |v: &LatentVector| {
            let n = v.norm();
            LatentVector::new(v.as_slice().iter().map(|x| x / n).collect()).unwrap()
        };
        let (ua, ub) = (unit(&a), unit(&b));
        let (theta, _) = angle_between(&ua, &ub).unwrap();
        let h1 = slerp(&ua, &ub, t1).unwrap();
        let h2 = slerp(&ua, &ub, t2).unwrap();
        let (between, _) = angle_between(&h1, &h2).unwrap_or((0.0, 0.0));
        prop_assert!((between - (t1 - t2).abs() * theta).abs() < 1e-8);
    }

    #[test]
    fn slerp_approaches_lerp_near_collinear(
        a in vec_strategy(6), dir in vec_strategy(6), t in 0.0f64..=1.0, eps in 1e-9f64..1e-6,
    ) {
        let b: Vec<f64> = a.as_slice().iter().zip(dir.as_slice())
            .map(|(x, y)| 1.5 * x + eps * y / dir.norm() * a.norm())
            .collect();
        let b = LatentVector::new(b).unwrap();
        let s = slerp(&a, &b, t).unwrap();
        let l = lerp(&a, &b, t).unwrap();
        for i in 0..6 {
            prop_assert!((s[i] - l[i]).abs() < 1e-6 * (1.0 + a.norm()));
        }
    }
}

#[test]
fn fallback_boundary_is_continuous() {
    let a = LatentVector::new(vec![1.0, 0.0, 0.0]).unwrap();
    for k in [0.5, 0.9, 1.0, 1.1, 2.0] {
        let tilt = k * EPS_ANGLE;
        let b = LatentVector::new(vec![2.0, 2.0 * tilt, 0.0]).unwrap();
        let s = slerp(&a, &b, 0.3).unwrap();
        let l = lerp(&a, &b, 0.3).unwrap();
        for i in 0..3 {
            assert!((s[i] - l[i]).abs() < 1e-6, "k={k}");
        }
    }
}

#[test]
fn linear_midpoint_ratio_matches_expectation() {
    let prior = LatentPrior::normal(100, 1.0).unwrap();
    let mut rng = RngStream::new(31, 0);
    let ratios: Vec<f64> = (0..10_000)
        .map(|_| {
            let p = Path::new(PathKind::Linear, prior.sample(&mut rng), prior.sample(&mut rng));
            path_profile(&p.unwrap(), 2).unwrap().midpoint_norm_ratio
        })
        .collect();
    let (m, se) = mean_and_std_error(&ratios);
    let target = std::f64::consts::FRAC_1_SQRT_2;
    assert!((m - target).abs() < 3.0 * se, "{m} ± {se}");
}
