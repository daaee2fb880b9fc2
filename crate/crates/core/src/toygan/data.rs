use serde::{Deserialize, Serialize};

use crate::numerics::{sample_standard_normal, RngStream};

/// Synthetic 2-D training data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dataset {
    /// `modes` isotropic Gaussians evenly spaced on a circle.
    Ring {
        modes: usize,
        radius: f64,
        sigma: f64,
    },
}

impl Default for Dataset {
    fn default() -> Self {
        Dataset::Ring {
            modes: 8,
            radius: 2.0,
            sigma: 0.05,
        }
    }
}

impl Dataset {
    pub fn id(&self) -> String {
        match self {
            Dataset::Ring { modes, radius, sigma } => format!("ring{modes}-r{radius}-s{sigma}"),
        }
    }

    /// One point, written into `out[0..2]`.
    pub fn sample_into(&self, rng: &mut RngStream, out: &mut [f64]) {
        match *self {
            Dataset::Ring { modes, radius, sigma } => {
                let k = (rng.uniform_open01() * modes as f64) as usize % modes;
                let angle = std::f64::consts::TAU * k as f64 / modes as f64;
                out[0] = radius * angle.cos() + sigma * sample_standard_normal(rng);
                out[1] = radius * angle.sin() + sigma * sample_standard_normal(rng);
            }
        }
    }

    /// `n` points, row-major `n × 2`.
    pub fn sample_batch(&self, n: usize, rng: &mut RngStream) -> Vec<f64> {
        let mut out = vec![0.0; 2 * n];
        for row in out.chunks_exact_mut(2) {
            self.sample_into(rng, row);
        }
        out
    }

    /// Centroid of the data distribution.
    pub fn center(&self) -> [f64; 2] {
        match self {
            Dataset::Ring { .. } => [0.0, 0.0],
        }
    }
}
