//! The isotropic normal prior and the gamma-radius prior, with their analytic
//! radial laws at endpoints and at interpolation midpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    gamma_kl_same_shape, sample_gamma, sample_standard_normal, sample_unit_sphere, GammaParams,
    RngStream,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorFamily {
    /// `z ~ N(0, σ² I)`
    Normal,
    /// `z = √r · v`, `r ~ Γ(½, θ)`, `v` uniform on the unit sphere
    GammaRadius,
}

impl PriorFamily {
    pub fn name(&self) -> &'static str {
        match self {
            PriorFamily::Normal => "normal",
            PriorFamily::GammaRadius => "gamma",
        }
    }
}

impl std::str::FromStr for PriorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(PriorFamily::Normal),
            "gamma" | "gamma_radius" => Ok(PriorFamily::GammaRadius),
            other => Err(Error::InvalidConfig(format!(
                "unknown prior family {other:?}; expected normal or gamma"
            ))),
        }
    }
}

/// A latent prior: family, dimension, and its scale parameter (σ for
/// `Normal`, θ for `GammaRadius`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatentPrior {
    family: PriorFamily,
    dim: usize,
    scale: f64,
}

/// Whether a radial law is exact or only asserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawStatus {
    Exact,
    Claimed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialLaw {
    pub params: GammaParams,
    pub status: LawStatus,
}

impl LatentPrior {
    pub fn new(family: PriorFamily, dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "latent dimension must be at least 1".into(),
            ));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "prior scale must be positive and finite, got {scale}"
            )));
        }
        Ok(Self { family, dim, scale })
    }

    pub fn normal(dim: usize, sigma: f64) -> Result<Self> {
        Self::new(PriorFamily::Normal, dim, sigma)
    }

    pub fn gamma_radius(dim: usize, theta: f64) -> Result<Self> {
        Self::new(PriorFamily::GammaRadius, dim, theta)
    }

    pub fn family(&self) -> PriorFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// σ for `Normal`, θ for `GammaRadius`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.family, dim, self.scale)
    }

    pub fn sample(&self, rng: &mut RngStream) -> LatentVector {
        match self.family {
            PriorFamily::Normal => LatentVector(
                (0..self.dim)
                    .map(|_| self.scale * sample_standard_normal(rng))
                    .collect(),
            ),
            PriorFamily::GammaRadius => {
                let r = sample_gamma(self.squared_norm_distribution(), rng);
                let mut v = sample_unit_sphere(self.dim, rng).expect("dim validated at construction");
                let radius = r.sqrt();
                for x in v.iter_mut() {
                    *x *= radius;
                }
                LatentVector(v)
            }
        }
    }

    /// Law of `‖z‖²`: `Γ(d/2, 2σ²)` or `Γ(½, θ)`.
    pub fn squared_norm_distribution(&self) -> GammaParams {
        let (shape, scale) = match self.family {
            PriorFamily::Normal => (self.dim as f64 / 2.0, 2.0 * self.scale * self.scale),
            PriorFamily::GammaRadius => (0.5, self.scale),
        };
        GammaParams::new(shape, scale).expect("prior parameters validated at construction")
    }

    /// Law of `‖(z₀ + z₁)/2‖²` for independent draws.
    ///
    /// Exact `Γ(d/2, σ²)` for `Normal`. For `GammaRadius` the returned
    /// `Γ(½, θ/2)` is only claimed; it is exact at `d = 1` and is measured
    /// rather than trusted for larger `d`.
    pub fn midpoint_squared_norm_distribution(&self) -> RadialLaw {
        match self.family {
            PriorFamily::Normal => RadialLaw {
                params: GammaParams::new(self.dim as f64 / 2.0, self.scale * self.scale)
                    .expect("validated"),
                status: LawStatus::Exact,
            },
            PriorFamily::GammaRadius => RadialLaw {
                params: GammaParams::new(0.5, self.scale / 2.0).expect("validated"),
                status: if self.dim == 1 {
                    LawStatus::Exact
                } else {
                    LawStatus::Claimed
                },
            },
        }
    }

    /// `KL(endpoint law ‖ midpoint law)` in nats.
    pub fn midpoint_kl(&self) -> f64 {
        let end = self.squared_norm_distribution();
        let mid = self.midpoint_squared_norm_distribution().params;
        debug_assert_eq!(end.shape(), mid.shape());
        gamma_kl_same_shape(end.shape(), end.scale(), mid.scale()).expect("validated")
    }
}

/// Free-function form of [`LatentPrior::midpoint_kl`].
pub fn prior_midpoint_kl(prior: &LatentPrior) -> f64 {
    prior.midpoint_kl()
}

/// A latent code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatentVector(Vec<f64>);

impl LatentVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput("latent vector"));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput("latent vector coordinate"));
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &LatentVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Self(coords)
    }
}

impl std::ops::Index<usize> for LatentVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
