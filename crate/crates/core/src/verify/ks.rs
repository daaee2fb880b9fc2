use crate::error::{Error, Result};
use crate::numerics::{gamma_cdf, GammaParams};

/// Asymptotic one-sample Kolmogorov coefficient at the 1% level.
pub const KS_COEFF_1PCT: f64 = 1.63;

pub fn ks_critical_value_1pct(n: usize) -> f64 {
    KS_COEFF_1PCT / (n as f64).sqrt()
}

pub fn ks_two_sample_critical_value_1pct(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    KS_COEFF_1PCT * ((n + m) / (n * m)).sqrt()
}

fn sorted_finite(samples: &[f64]) -> Result<std::borrow::Cow<'_, [f64]>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("KS samples"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput("KS sample"));
    }
    if samples.is_sorted() {
        Ok(std::borrow::Cow::Borrowed(samples))
    } else {
        let mut v = samples.to_vec();
        v.sort_by(f64::total_cmp);
        Ok(std::borrow::Cow::Owned(v))
    }
}

fn ks_from_cdf_values(cdf_values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = cdf_values.len() as f64;
    let mut d: f64 = 0.0;
    for (i, f) in cdf_values.enumerate() {
        let i = i as f64;
        d = d.max((i + 1.0) / n - f).max(f - i / n);
    }
    d.clamp(0.0, 1.0)
}

/// One-sample KS distance `max_i max(i/n − F(xᵢ), F(xᵢ) − (i−1)/n)`.
///
/// Unsorted input is sorted on a private copy.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let sorted = sorted_finite(samples)?;
    Ok(ks_from_cdf_values(sorted.iter().map(|&x| cdf(x))))
}

/// KS distance against a Gamma law.
pub fn ks_statistic_gamma(samples: &[f64], law: GammaParams) -> Result<f64> {
    let sorted = sorted_finite(samples)?;
    let cdfs = sorted
        .iter()
        .map(|&x| gamma_cdf(x.max(0.0), law))
        .collect::<Result<Vec<_>>>()?;
    Ok(ks_from_cdf_values(cdfs.into_iter()))
}

/// Two-sample KS distance `sup |F_a − F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted_finite(a)?;
    let b = sorted_finite(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sample_gamma, RngStream};

    // closed-form quantiles make exact placement easy
    fn logistic_cdf(x: f64) -> f64 {
        1.0 / (1.0 + (-x).exp())
    }

    #[test]
    fn midpoint_quantiles_give_half_over_n() {
        let n = 10;
        let xs: Vec<f64> = (1..=n)
            .map(|i| {
                let p = (i as f64 - 0.5) / n as f64;
                (p / (1.0 - p)).ln()
            })
            .collect();
        let d = ks_statistic(&xs, logistic_cdf).unwrap();
        assert!((d - 0.05).abs() < 1e-12, "{d}");
    }

    #[test]
    fn samples_below_support_give_one() {
        let law = GammaParams::new(2.0, 1.0).unwrap();
        let d = ks_statistic(&[-3.0, -2.0, -1.0], |x| {
            if x <= 0.0 {
                0.0
            } else {
                crate::numerics::gamma_cdf(x, law).unwrap()
            }
        })
        .unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn empty_and_nan_rejected() {
        assert!(matches!(ks_statistic(&[], |x| x), Err(Error::EmptyInput(_))));
        assert!(matches!(
            ks_statistic(&[f64::NAN], |x| x),
            Err(Error::NonFiniteInput(_))
        ));
    }

    #[test]
    fn unsorted_input_matches_sorted() {
        let xs = [0.9, 0.1, 0.5, 0.3];
        let mut s = xs.to_vec();
        s.sort_by(f64::total_cmp);
        let cdf = |x: f64| x.clamp(0.0, 1.0);
        assert_eq!(ks_statistic(&xs, cdf).unwrap(), ks_statistic(&s, cdf).unwrap());
    }

    #[test]
    fn gamma_half_self_fit() {
        let law = GammaParams::new(0.5, 2.0).unwrap();
        let mut rng = RngStream::new(21, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_gamma(law, &mut rng)).collect();
        let d = ks_statistic_gamma(&xs, law).unwrap();
        assert!(d < ks_critical_value_1pct(n), "{d}");
    }

    #[test]
    fn two_sample_basics() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 1.0);
        let d = ks_two_sample(&[1.0, 2.0, 3.0, 4.0], &[2.5]).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }
}
