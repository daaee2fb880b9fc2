use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::train::ToyGan;
use crate::error::{Error, Result};
use crate::geometry::{t_grid, Path, PathKind};
use crate::numerics::{NeumaierSum, RngStream};
use crate::priors::LatentPrior;

/// Mean and standard deviation of `D(G(h(t)))` over sampled trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryProfile {
    pub scheme: PathKind,
    pub n_trajectories: usize,
    pub ts: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl TrajectoryProfile {
    fn mid_index(&self) -> usize {
        (self.ts.len() - 1) / 2
    }

    /// Average of the mean activation at `t = 0` and `t = 1`.
    pub fn endpoint_mean(&self) -> f64 {
        0.5 * (self.mean[0] + self.mean[self.mean.len() - 1])
    }

    pub fn midpoint_mean(&self) -> f64 {
        self.mean[self.mid_index()]
    }

    /// Endpoint mean activation minus mean activation at `t = ½`.
    pub fn dip_depth(&self) -> f64 {
        self.endpoint_mean() - self.midpoint_mean()
    }

    /// `max_t |mean(t) − endpoint mean|`.
    pub fn max_deviation(&self) -> f64 {
        let e = self.endpoint_mean();
        self.mean.iter().map(|m| (m - e).abs()).fold(0.0, f64::max)
    }

    /// Per-trajectory spread averaged over the grid.
    pub fn mean_std(&self) -> f64 {
        self.std.iter().sum::<f64>() / self.std.len() as f64
    }

    /// Flat when the mean never strays from its endpoint value by more than
    /// twice the typical trajectory spread.
    pub fn is_flat(&self) -> bool {
        self.max_deviation() < 2.0 * self.mean_std()
    }

    pub fn to_csv(&self) -> String {
        use crate::verify::fmt_sig6;
        let mut s = String::from("t,mean,std\n");
        for ((t, m), sd) in self.ts.iter().zip(&self.mean).zip(&self.std) {
            s.push_str(&format!("{},{},{}\n", fmt_sig6(*t), fmt_sig6(*m), fmt_sig6(*sd)));
        }
        s
    }
}

fn sample_path(prior: &LatentPrior, scheme: PathKind, rng: &mut RngStream) -> Path {
    loop {
        let z0 = prior.sample(rng);
        let z1 = prior.sample(rng);
        // antipodal or zero draws have no unique great circle; redraw
        match Path::new(scheme, z0, z1) {
            Ok(p) => return p,
            Err(Error::DegenerateAngle { .. }) => continue,
            Err(e) => unreachable!("prior draws share a dimension: {e}"),
        }
    }
}

/// Discriminator activation along `n_trajectories` paths between independent
/// prior draws, on a grid of `n_steps + 1` points. `n_steps` must be even so
/// that `t = ½` is on the grid.
pub fn discriminator_profile(
    gan: &ToyGan,
    prior: &LatentPrior,
    scheme: PathKind,
    n_trajectories: usize,
    n_steps: usize,
    rng: &RngStream,
) -> Result<TrajectoryProfile> {
    if n_trajectories < 100 {
        return Err(Error::InvalidParameter(format!(
            "profiles average at least 100 trajectories, got {n_trajectories}"
        )));
    }
    if n_steps < 2 || n_steps % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "profile grid needs an even number of steps ≥ 2, got {n_steps}"
        )));
    }
    if prior.dim() != gan.generator.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: gan.generator.input_dim(),
            actual: prior.dim(),
        });
    }
    let ts = t_grid(n_steps);
    let rows: Vec<Vec<f64>> = (0..n_trajectories)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let mut r = rng.derive(i as u64);
            let path = sample_path(prior, scheme, &mut r);
            let mut zs = Vec::with_capacity(ts.len() * prior.dim());
            for &t in &ts {
                zs.extend_from_slice(path.eval(t)?.as_slice());
            }
            gan.score_latents(&zs, ts.len())
        })
        .collect::<Result<_>>()?;

    let n = n_trajectories as f64;
    let mut mean = Vec::with_capacity(ts.len());
    let mut std = Vec::with_capacity(ts.len());
    for j in 0..ts.len() {
        let m = rows.iter().map(|r| r[j]).collect::<NeumaierSum>().value() / n;
        let ss = rows
            .iter()
            .map(|r| (r[j] - m) * (r[j] - m))
            .collect::<NeumaierSum>()
            .value();
        mean.push(m);
        std.push((ss / (n - 1.0)).sqrt());
    }
    Ok(TrajectoryProfile {
        scheme,
        n_trajectories,
        ts,
        mean,
        std,
    })
}
