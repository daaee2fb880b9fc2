use rand::Rng;
use rand_distr::StandardNormal;

use super::{GammaParams, RngStream};
use crate::error::{Error, Result};

pub fn sample_standard_normal(rng: &mut RngStream) -> f64 {
    rng.sample(StandardNormal)
}

/// One `Γ(shape, scale)` variate.
///
/// `shape = ½` takes the chi-square route `(scale/2)·X²`; every other shape
/// goes through [`sample_gamma_marsaglia_tsang`].
pub fn sample_gamma(p: GammaParams, rng: &mut RngStream) -> f64 {
    if p.shape() == 0.5 {
        let x = sample_standard_normal(rng);
        return 0.5 * p.scale() * x * x;
    }
    sample_gamma_marsaglia_tsang(p, rng)
}

/// Marsaglia–Tsang squeeze sampler. Shapes below one are boosted: draw
/// `Γ(shape + 1)` and multiply by `U^{1/shape}`.
pub fn sample_gamma_marsaglia_tsang(p: GammaParams, rng: &mut RngStream) -> f64 {
    let shape = p.shape();
    if shape < 1.0 {
        let boosted = standard_gamma_at_least_one(shape + 1.0, rng);
        let u = rng.uniform_open01();
        return p.scale() * boosted * u.powf(1.0 / shape);
    }
    p.scale() * standard_gamma_at_least_one(shape, rng)
}

fn standard_gamma_at_least_one(shape: f64, rng: &mut RngStream) -> f64 {
    debug_assert!(shape >= 1.0);
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = sample_standard_normal(rng);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = rng.uniform_open01();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Uniform direction on `S^{d−1}` from a normalized Gaussian draw.
pub fn sample_unit_sphere(d: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "sphere dimension must be at least 1".into(),
        ));
    }
    let mut v = vec![0.0; d];
    loop {
        for x in v.iter_mut() {
            *x = sample_standard_normal(rng);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        return Ok(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn normal_moments() {
        let mut rng = RngStream::new(11, 0);
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_standard_normal(&mut rng)).collect();
        let (mean, var) = moments(&xs);
        assert!(mean.abs() < 0.004, "mean {mean}");
        assert!((var - 1.0).abs() < 0.005, "var {var}");
    }

    #[test]
    fn gamma_half_moments() {
        let p = GammaParams::new(0.5, 2.0).unwrap();
        let mut rng = RngStream::new(12, 0);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_gamma(p, &mut rng)).collect();
        let (mean, var) = moments(&xs);
        // SE of the sample variance from the empirical fourth central moment.
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
        let se_mean = (var / n as f64).sqrt();
        let se_var = ((m4 - var * var) / n as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se_mean, "mean {mean} se {se_mean}");
        assert!((var - 2.0).abs() < 3.0 * se_var, "var {var} se {se_var}");
    }

    #[test]
    fn general_path_moments_across_shapes() {
        for (i, &(shape, scale)) in [(0.3, 1.0), (1.0, 2.0), (2.5, 0.5), (50.0, 2.0)]
            .iter()
            .enumerate()
        {
            let p = GammaParams::new(shape, scale).unwrap();
            let mut rng = RngStream::new(13, i as u64);
            let n = 200_000;
            let xs: Vec<f64> = (0..n).map(|_| sample_gamma_marsaglia_tsang(p, &mut rng)).collect();
            let (mean, _) = moments(&xs);
            let se = (p.variance() / n as f64).sqrt();
            assert!((mean - p.mean()).abs() < 4.0 * se, "shape {shape}: {mean}");
            assert!(xs.iter().all(|&x| x >= 0.0 && x.is_finite()));
        }
    }

    #[test]
    fn unit_sphere_norm_and_moments() {
        let mut rng = RngStream::new(14, 0);
        let n = 1_000_000;
        let mut first = Vec::with_capacity(n);
        for _ in 0..n {
            let v = sample_unit_sphere(8, &mut rng).unwrap();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            first.push(v[0]);
        }
        let (mean, var) = moments(&first);
        let se = (var / n as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean}");
        let sq: Vec<f64> = first.iter().map(|x| x * x).collect();
        let (msq, vsq) = moments(&sq);
        let se_sq = (vsq / n as f64).sqrt();
        assert!((msq - 0.125).abs() < 3.0 * se_sq, "E[v1²] {msq}");
    }

    #[test]
    fn unit_sphere_dimension_one_is_a_sign() {
        let mut rng = RngStream::new(15, 0);
        let mut pos = 0;
        for _ in 0..10_000 {
            let v = sample_unit_sphere(1, &mut rng).unwrap();
            assert!(v[0] == 1.0 || v[0] == -1.0);
            pos += (v[0] > 0.0) as usize;
        }
        assert!((4_700..5_300).contains(&pos));
        assert!(sample_unit_sphere(0, &mut rng).is_err());
    }

    #[test]
    fn samplers_are_deterministic() {
        let p = GammaParams::new(0.7, 3.0).unwrap();
        let run = || {
            let mut rng = RngStream::new(99, 5);
            (0..1000).map(|_| sample_gamma(p, &mut rng).to_bits()).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }
}
