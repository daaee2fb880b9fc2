use latentgeom::numerics::{sample_standard_normal, GammaParams, RngStream};
use latentgeom::priors::{LatentPrior, LawStatus};
use latentgeom::verify::{
    ks_critical_value_1pct, ks_two_sample, ks_two_sample_critical_value_1pct, ks_statistic, ks_statistic_gamma, mc_endpoint_check,
    mc_midpoint_check, Verdict,
};
use statrs::distribution::{Beta, ContinuousCDF};

/// Random orthogonal matrix by Gram–Schmidt on Gaussian columns, row-major.
fn random_rotation(d: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(d);
    while q.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| sample_standard_normal(rng)).collect();
        for u in &q {
            let p: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= p * b);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            q.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    q.concat()
}

/// CDF of one coordinate of a uniform direction in ℝ^d: u² ~ Beta(½, (d−1)/2).
fn sphere_coordinate_cdf(d: usize) -> impl Fn(f64) -> f64 {
    let beta = Beta::new(0.5, (d as f64 - 1.0) / 2.0).unwrap();
    move |u| {
        let half = 0.5 * beta.cdf((u * u).min(1.0));
        if u >= 0.0 {
            0.5 + half
        } else {
            0.5 - half
        }
    }
}

#[test]
fn rotated_first_coordinate_matches_unrotated() {
    let n = 100_000;
    for family in ["normal", "gamma"] {
        for &d in &[2usize, 8, 64] {
            let prior = LatentPrior::new(family.parse().unwrap(), d, 1.0).unwrap();
            let mut rng = RngStream::new(3, d as u64);
            let rot = random_rotation(d, &mut rng);
            let plain: Vec<f64> = (0..n).map(|_| prior.sample(&mut rng)[0]).collect();
            let rotated: Vec<f64> = (0..n)
                .map(|_| {
                    let z = prior.sample(&mut rng);
                    rot[..d].iter().zip(z.as_slice()).map(|(a, b)| a * b).sum()
                })
                .collect();
            let ks = ks_two_sample(&plain, &rotated).unwrap();
            assert!(ks < ks_two_sample_critical_value_1pct(n, n), "{family} d={d}: {ks}");
        }
    }
}

#[test]
fn gamma_radius_direction_is_uniform() {
    // the first coordinate of z/‖z‖ follows the uniform-direction coordinate law
    let d = 50;
    let prior = LatentPrior::gamma_radius(d, 1.0).unwrap();
    let mut rng = RngStream::new(4, 0);
    let n = 20_000;
    let u: Vec<f64> = (0..n)
        .map(|_| {
            let z = prior.sample(&mut rng);
            z[0] / z.norm()
        })
        .collect();
    let ks = ks_statistic(&u, sphere_coordinate_cdf(d)).unwrap();
    assert!(ks < ks_critical_value_1pct(n), "ks = {ks}");
}

#[test]
fn endpoint_squared_norm_follows_claimed_gamma() {
    // eight KS tests: Bonferroni-corrected 1% level, c(α) = √(−½ ln(α/2))
    let alpha = 0.01 / 8.0;
    let coeff = (-0.5 * (alpha / 2.0f64).ln()).sqrt();
    for family in ["normal", "gamma"] {
        for &d in &[1usize, 2, 10, 100] {
            let prior = LatentPrior::new(family.parse().unwrap(), d, 1.5).unwrap();
            let law = prior.squared_norm_distribution();
            let mut rng = RngStream::new(17, d as u64);
            let n = 100_000;
            let sq: Vec<f64> = (0..n).map(|_| prior.sample(&mut rng).norm_sq()).collect();
            let ks = ks_statistic_gamma(&sq, law).unwrap();
            assert!(ks < coeff / (n as f64).sqrt(), "{family} d={d}: {ks}");
        }
    }
}

#[test]
fn gamma_radius_law_does_not_depend_on_dimension() {
    let a = LatentPrior::gamma_radius(3, 2.0).unwrap().squared_norm_distribution();
    let b = LatentPrior::gamma_radius(3000, 2.0).unwrap().squared_norm_distribution();
    assert_eq!(a, b);
    assert_eq!(a, GammaParams::new(0.5, 2.0).unwrap());
}

#[test]
fn normal_midpoint_law_is_exact() {
    for &d in &[2usize, 10, 100] {
        let prior = LatentPrior::normal(d, 1.0).unwrap();
        let law = prior.midpoint_squared_norm_distribution();
        assert_eq!(law.status, LawStatus::Exact);
        assert_eq!(law.params, GammaParams::new(d as f64 / 2.0, 1.0).unwrap());
        let r = mc_midpoint_check(&prior, 20_000, &RngStream::new(23, d as u64)).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!(r.ks_statistic.unwrap() < ks_critical_value_1pct(20_000));
    }
}

#[test]
fn endpoint_check_is_consistent_for_both_families() {
    for prior in [
        LatentPrior::normal(20, 0.5).unwrap(),
        LatentPrior::gamma_radius(20, 3.0).unwrap(),
    ] {
        let r = mc_endpoint_check(&prior, 50_000, &RngStream::new(29, 0)).unwrap();
        for rep in r.reports() {
            assert_eq!(rep.verdict, Verdict::Consistent, "{rep:?}");
        }
    }
}
