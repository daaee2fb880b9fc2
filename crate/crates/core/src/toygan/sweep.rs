use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::{discriminator_profile, TrajectoryProfile};
use super::train::{train_toy_gan, GanConfig};
use crate::error::{Error, Result};
use crate::geometry::PathKind;
use crate::numerics::RngStream;
use crate::priors::{LatentPrior, PriorFamily};
use crate::verify::fmt_sig6;

/// Evaluation settings for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub n_trajectories: usize,
    pub n_steps: usize,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            n_trajectories: 1000,
            n_steps: 20,
        }
    }
}

/// One trained model's traversal measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub dim: usize,
    pub family: PriorFamily,
    pub seed: u64,
    pub linear: TrajectoryProfile,
    pub spherical: Option<TrajectoryProfile>,
}

impl SweepRow {
    pub fn dip_depth(&self) -> f64 {
        self.linear.dip_depth()
    }
}

pub const SWEEP_CSV_HEADER: &str =
    "dim,prior,seed,dip_depth,endpoint_mean,midpoint_mean,slerp_max_dev,slerp_mean_std";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = format!("{SWEEP_CSV_HEADER}\n");
    for r in rows {
        let (dev, sd) = r
            .spherical
            .as_ref()
            .map(|p| (fmt_sig6(p.max_deviation()), fmt_sig6(p.mean_std())))
            .unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.dim,
            r.family.name(),
            r.seed,
            fmt_sig6(r.dip_depth()),
            fmt_sig6(r.linear.endpoint_mean()),
            fmt_sig6(r.linear.midpoint_mean()),
            dev,
            sd
        ));
    }
    s
}

/// Trains one model per `(dim, family, seed)` and profiles it. The base
/// config's prior scale is reused for every family; only dimension, family
/// and seed change. Rows come back in `dims × families × seeds` order.
pub fn dimension_sweep(
    base: &GanConfig,
    dims: &[usize],
    families: &[PriorFamily],
    seeds: &[u64],
    schemes: &[PathKind],
    settings: SweepSettings,
) -> Result<Vec<SweepRow>> {
    if dims.is_empty() || families.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidConfig(
            "sweep needs at least one dimension, family and seed".into(),
        ));
    }
    let jobs: Vec<(usize, PriorFamily, u64)> = dims
        .iter()
        .flat_map(|&d| {
            families
                .iter()
                .flat_map(move |&f| seeds.iter().map(move |&s| (d, f, s)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(dim, family, seed)| {
            let prior = LatentPrior::new(family, dim, base.prior.scale())?;
            let cfg = GanConfig {
                prior,
                seed,
                ..base.clone()
            };
            let (gan, _) = train_toy_gan(&cfg)?;
            let eval_rng = RngStream::new(seed, 1_000 + dim as u64);
            let linear = discriminator_profile(
                &gan,
                &prior,
                PathKind::Linear,
                settings.n_trajectories,
                settings.n_steps,
                &eval_rng,
            )?;
            let spherical = if schemes.contains(&PathKind::Spherical) {
                Some(discriminator_profile(
                    &gan,
                    &prior,
                    PathKind::Spherical,
                    settings.n_trajectories,
                    settings.n_steps,
                    &eval_rng.derive(u64::MAX),
                )?)
            } else {
                None
            };
            Ok(SweepRow {
                dim,
                family,
                seed,
                linear,
                spherical,
            })
        })
        .collect()
}

/// Median over values; the mean of the middle pair for even counts.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median dip depth per dimension for one family, in `dims` order.
pub fn median_dip_by_dim(rows: &[SweepRow], family: PriorFamily, dims: &[usize]) -> Vec<f64> {
    dims.iter()
        .map(|&d| {
            let v: Vec<f64> = rows
                .iter()
                .filter(|r| r.family == family && r.dim == d)
                .map(SweepRow::dip_depth)
                .collect();
            median(&v)
        })
        .collect()
}
