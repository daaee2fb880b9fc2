use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ks::ks_statistic_gamma;
use super::report::McReport;
use super::stats::{mean_and_std_error, variance_with_std_error};
use crate::error::{Error, Result};
use crate::numerics::{gamma_kl_same_shape, gamma_log_density_ratio, sample_gamma, GammaParams, RngStream};
use crate::priors::{LatentPrior, LawStatus, PriorFamily};

/// Draws per independent substream.
pub const MC_CHUNK: usize = 8192;

/// `n` draws of `f`, split into fixed-size chunks that each own a derived
/// substream. The output order, and hence every downstream reduction, is
/// independent of the number of worker threads.
pub fn draw_parallel<F>(n: usize, rng: &RngStream, f: F) -> Vec<f64>
where
    F: Fn(&mut RngStream) -> f64 + Sync,
{
    let n_chunks = n.div_ceil(MC_CHUNK);
    let chunks: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut sub = rng.derive(c as u64);
            let len = MC_CHUNK.min(n - c * MC_CHUNK);
            (0..len).map(|_| f(&mut sub)).collect()
        })
        .collect();
    chunks.concat()
}

fn require_at_least(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!(
            "{what} needs at least {min} samples, got {n}"
        )));
    }
    Ok(())
}

/// Endpoint squared-norm check: mean of `‖z‖²` (with KS against the analytic
/// law) and variance of `‖z‖²/d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointReport {
    pub mean: McReport,
    pub scaled_variance: McReport,
}

impl EndpointReport {
    pub fn reports(&self) -> [&McReport; 2] {
        [&self.mean, &self.scaled_variance]
    }
}

fn label(prior: &LatentPrior, what: &str) -> String {
    format!("{what}[{},d={},s={}]", prior.family().name(), prior.dim(), prior.scale())
}

pub fn mc_endpoint_check(prior: &LatentPrior, n: usize, rng: &RngStream) -> Result<EndpointReport> {
    require_at_least(n, 1_000, "endpoint check")?;
    let law = prior.squared_norm_distribution();
    let sq = draw_parallel(n, rng, |r| prior.sample(r).norm_sq());
    let (mean, se) = mean_and_std_error(&sq);
    let ks = ks_statistic_gamma(&sq, law)?;
    let d = prior.dim() as f64;
    let scaled: Vec<f64> = sq.iter().map(|x| x / d).collect();
    let (var, var_se) = variance_with_std_error(&scaled);
    Ok(EndpointReport {
        mean: McReport::gated(
            label(prior, "endpoint_sqnorm_mean"),
            mean,
            se,
            n as u64,
            rng.seed(),
            Some(ks),
            law.mean(),
        ),
        scaled_variance: McReport::gated(
            label(prior, "endpoint_sqnorm_over_d_var"),
            var,
            var_se,
            n as u64,
            rng.seed(),
            None,
            law.variance() / (d * d),
        ),
    })
}

/// Midpoint squared-norm check against the prior's midpoint law.
///
/// Exact laws are gated on the mean; the gamma-radius law is reported as
/// informational, with its KS distance as the measurement of interest.
pub fn mc_midpoint_check(prior: &LatentPrior, n_pairs: usize, rng: &RngStream) -> Result<McReport> {
    require_at_least(n_pairs, 1_000, "midpoint check")?;
    let law = prior.midpoint_squared_norm_distribution();
    let sq = draw_parallel(n_pairs, rng, |r| {
        let z0 = prior.sample(r);
        let z1 = prior.sample(r);
        z0.as_slice()
            .iter()
            .zip(z1.as_slice())
            .map(|(a, b)| {
                let m = 0.5 * (a + b);
                m * m
            })
            .sum()
    });
    let (mean, se) = mean_and_std_error(&sq);
    let ks = ks_statistic_gamma(&sq, law.params)?;
    let quantity = label(prior, "midpoint_sqnorm_mean");
    let report = match (prior.family(), law.status) {
        (PriorFamily::Normal, LawStatus::Exact) => McReport::gated(
            quantity,
            mean,
            se,
            n_pairs as u64,
            rng.seed(),
            Some(ks),
            law.params.mean(),
        ),
        _ => McReport::informational(
            quantity,
            mean,
            se,
            n_pairs as u64,
            rng.seed(),
            Some(ks),
            Some(law.params.mean()),
        ),
    };
    Ok(report)
}

/// Monte-Carlo `E_p[ln p(x) − ln q(x)]`, gated against the closed form when
/// the shapes agree.
pub fn mc_kl_estimate(p: GammaParams, q: GammaParams, n: usize, rng: &RngStream) -> Result<McReport> {
    require_at_least(n, 10_000, "KL estimate")?;
    let xs = draw_parallel(n, rng, |r| sample_gamma(p, r));
    let terms = xs
        .iter()
        .map(|&x| gamma_log_density_ratio(x, p, q))
        .collect::<Result<Vec<_>>>()?;
    let (est, se) = mean_and_std_error(&terms);
    let quantity = format!(
        "kl[G({},{})||G({},{})]",
        p.shape(),
        p.scale(),
        q.shape(),
        q.scale()
    );
    if p.shape() == q.shape() {
        let closed = gamma_kl_same_shape(p.shape(), p.scale(), q.scale())?;
        Ok(McReport::gated(quantity, est, se, n as u64, rng.seed(), None, closed))
    } else {
        Ok(McReport::informational(quantity, est, se, n as u64, rng.seed(), None, None))
    }
}
